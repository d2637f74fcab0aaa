#!/usr/bin/env python3
"""Derive the stage-by-stage recursions for the symmetric-composition order
polynomials up to ninth order.

The composition S(m+1) = S2(w) S(m) S2(w) is expanded as exp(C) exp(D) exp(C)
in the free associative algebra generated by the odd-degree symmetric-BCH
terms a1, a3, a5, a7, a9 (graded by their index).  The log is projected onto
the commutator basis used by the library, which gives the new polynomial
values as closed-form expressions in w and the previous values.

Run:  python3 tools/gen_order_recursions.py > core/include/prodform/detail/order_recursions.inc
"""

import sys
import sympy as sp

MAXDEG = 9
LETTERS = (1, 3, 5, 7, 9)


def weight(word):
    return sum(word)


def add(a, b, s=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = sp.expand(out.get(k, 0) + s * v)
        if out[k] == 0:
            del out[k]
    return out


def scale(a, s):
    return {k: sp.expand(v * s) for k, v in a.items() if sp.expand(v * s) != 0}


def mul(a, b):
    out = {}
    for u, cu in a.items():
        for v, cv in b.items():
            if weight(u) + weight(v) <= MAXDEG:
                key = u + v
                out[key] = out.get(key, 0) + cu * cv
    return {k: sp.expand(v) for k, v in out.items() if sp.expand(v) != 0}


def comm(a, b):
    return add(mul(a, b), mul(b, a), -1)


def letter(j):
    return {(j,): sp.Integer(1)}


def nested(*ops):
    """[x1, [x2, [..., xn]]]"""
    acc = ops[-1]
    for op in reversed(ops[:-1]):
        acc = comm(op, acc)
    return acc


def exp_(x):
    out = {(): sp.Integer(1)}
    term = {(): sp.Integer(1)}
    for n in range(1, MAXDEG + 1):
        term = scale(mul(term, x), sp.Rational(1, n))
        if not term:
            break
        out = add(out, term)
    return out


def log_(y):
    u = dict(y)
    u.pop((), None)
    out = {}
    power = {(): sp.Integer(1)}
    for n in range(1, MAXDEG + 1):
        power = mul(power, u)
        if not power:
            break
        out = add(out, scale(power, sp.Rational((-1) ** (n + 1), n)))
    return out


a = {j: letter(j) for j in LETTERS}

basis = {
    "A1": a[1],
    "A3": a[3],
    "A5": a[5],
    "B5": nested(a[1], a[1], a[3]),
    "A7": a[7],
    "B7": nested(a[1], a[1], a[5]),
    "C7": nested(a[3], a[3], a[1]),
    "D7": nested(a[1], a[1], a[1], a[1], a[3]),
    "A9": a[9],
    "B9": nested(a[1], a[1], a[7]),
    "C9_1": nested(a[1], a[3], a[5]),
    "C9_2": nested(a[3], a[1], a[5]),
    "C9_3": nested(a[5], a[1], a[3]),
    "D9_1": nested(a[1], a[1], a[1], a[1], a[5]),
    "D9_2": nested(a[3], a[1], a[1], a[1], a[3]),
    "D9_3": nested(a[1], a[3], a[1], a[1], a[3]),
    "E9": nested(a[1], a[1], a[1], a[1], a[1], a[1], a[3]),
}
degree_of = {name: weight(next(iter(el))) for name, el in basis.items()}

w = sp.Symbol("w")
old = {name: sp.Symbol(name) for name in basis}

C = {}
for j in LETTERS:
    C = add(C, scale(a[j], w ** j))
D = {}
for name, el in basis.items():
    coeff = old["C9_1"] + old["C9_3"] if name == "C9_2" else old[name]
    D = add(D, scale(el, coeff))

E = exp_(C)
Z = log_(mul(mul(E, exp_(D)), E))


def project(deg, names):
    words = sorted({wd for wd in Z if weight(wd) == deg}
                   | {wd for n in names for wd in basis[n]})
    M = sp.Matrix([[basis[n].get(wd, 0) for n in names] for wd in words])
    rhs = sp.Matrix([Z.get(wd, 0) for wd in words])
    sol = M.solve_least_squares(rhs) if M.rows > M.cols else M.solve(rhs)
    sol = [sp.expand(s) for s in sol]
    resid = sp.expand(M * sp.Matrix(sol) - rhs)
    assert all(r == 0 for r in resid), f"basis does not span degree {deg}"
    return dict(zip(names, sol))


for deg in (2, 4, 6, 8):
    assert not any(weight(wd) == deg for wd in Z), f"even degree {deg} present"

new = {}
new.update(project(1, ["A1"]))
new.update(project(3, ["A3"]))
new.update(project(5, ["A5", "B5"]))
new.update(project(7, ["A7", "B7", "C7", "D7"]))
# gamma_9^(2) = gamma_9^(1) + gamma_9^(3) by the Jacobi identity; project on the
# independent pair and split with the convention C9_2 = C9_1 + C9_3.
ninth = project(9, ["A9", "B9", "C9_1", "C9_3", "D9_1", "D9_2", "D9_3", "E9"])
ca = ninth.pop("C9_1")
cb = ninth.pop("C9_3")
new.update(ninth)
new["C9_1"] = sp.expand((2 * ca - cb) / 3)
new["C9_3"] = sp.expand((2 * cb - ca) / 3)
new["C9_2"] = sp.expand((ca + cb) / 3)

# The increments vanish at w = 0 (S2(0) is the identity).
for name, expr in new.items():
    base = old["C9_1"] + old["C9_3"] if name == "C9_2" else old[name]
    assert sp.expand((expr - base).subs(w, 0)) == 0, name

order = list(basis)


def term_cxx(coeff, monom, gens):
    p, q = coeff.p, coeff.q
    factors = []
    for g, e in zip(gens, monom):
        if e == 0:
            continue
        ref = "w" if g == w else f"s.{g.name}"
        factors.append(ref if e == 1 else f"ipow({ref}, {e})")
    num = f"T({abs(p)})" if q == 1 else f"T({abs(p)}) / T({q})"
    body = " * ".join(([num] if (abs(p), q) != (1, 1) or not factors else []) + factors)
    return ("-" if p < 0 else "+"), body


out = sys.stdout
out.write("// Generated by tools/gen_order_recursions.py. Do not edit.\n")
out.write("// Stage update S <- S2(w) S S2(w); s holds the previous values.\n")
gens = [w] + [old[n] for n in order]
for name in order:
    if name == "C9_2":
        continue
    inc = sp.expand(new[name] - old[name])
    poly = sp.Poly(inc, *gens)
    pieces = []
    for monom, coeff in sorted(poly.terms(), key=lambda t: (-sum(t[0][1:]), t[0])):
        sign, body = term_cxx(sp.Rational(coeff), monom, gens)
        pieces.append((sign, body))
    expr = ""
    for i, (sign, body) in enumerate(pieces):
        if i == 0:
            expr += ("-" if sign == "-" else "") + body
        else:
            expr += f"\n        {sign} {body}"
    out.write(f"n.{name} = s.{name} + ({expr});\n")
out.write("n.C9_2 = n.C9_1 + n.C9_3;\n")
