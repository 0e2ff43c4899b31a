#include "qfusion/real.hpp"

#include <boost/multiprecision/detail/digits.hpp>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qfusion {

namespace {

// The mpfr backend is configured in decimal digits; pick the smallest digit
// count whose binary precision reaches the request.
unsigned digits10_for_bits(unsigned bits) {
  unsigned d10 = 1;
  while (boost::multiprecision::detail::digits10_2_2(d10) < bits) ++d10;
  return d10;
}

}  // namespace

unsigned set_precision_bits(unsigned bits) {
  if (bits < 2) throw std::invalid_argument("precision must be at least 2 bits");
  Real::default_precision(digits10_for_bits(bits));
  return precision_bits();
}

unsigned precision_bits() {
  return static_cast<unsigned>(boost::multiprecision::detail::digits10_2_2(Real::default_precision()));
}

std::string format(const Real& x, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits - 1) << x;
  return os.str();
}

std::string format(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return buf;
}

}  // namespace qfusion
