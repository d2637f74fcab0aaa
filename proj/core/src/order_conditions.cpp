#include "prodform/order_conditions.hpp"

#include <stdexcept>

namespace prodform {

int plain_condition_count(int k) {
  switch (k) {
    case 2:
      return 0;
    case 4:
      return 1;
    case 6:
      return 3;
    case 8:
      return 7;
    case 10:
      return 15;
    default:
      throw std::invalid_argument("plain_condition_count: unsupported order");
  }
}

template RecursionState<double> run_recursion<double>(const std::vector<double>&);
template RecursionState<Quad> run_recursion<Quad>(const std::vector<Quad>&);
template RecursionState<MpReal> run_recursion<MpReal>(const std::vector<MpReal>&);

}  // namespace prodform
