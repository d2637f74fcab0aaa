#include "prodform/formulas.hpp"
#include "prodform/word_series.hpp"

// Explicit instantiations of the heavier templates for the three scalar types.

namespace prodform {

#define PRODFORM_INSTANTIATE(T)                                                              \
  template class WordPoly<T>;                                                                \
  template class ExponentialSequence<T>;                                                     \
  template class KernelProjector<T>;                                                         \
  template WordPoly<T> multiply<T>(const WordPoly<T>&, const WordPoly<T>&);                  \
  template WordPoly<T> formula_series<T>(const ExponentialSequence<T>&, int);                \
  template WordPoly<T> log_series<T>(const WordPoly<T>&);                                    \
  template WordPoly<T> exp_series<T>(const WordPoly<T>&);                                    \
  template std::vector<T> suzuki_first_stages<T>(int);                                       \
  template std::vector<T> suzuki_second_stages<T>(int);

PRODFORM_INSTANTIATE(double)
PRODFORM_INSTANTIATE(Quad)
PRODFORM_INSTANTIATE(MpReal)

#undef PRODFORM_INSTANTIATE

}  // namespace prodform
