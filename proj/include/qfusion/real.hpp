#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/mpfr.hpp>
#include <limits>
#include <string>

namespace qfusion {

/// Radix-2 arbitrary-precision float; precision is set process-wide with
/// set_precision_bits before values are created.
using Real = boost::multiprecision::mpfr_float;

constexpr unsigned kDefaultPrecisionBits = 128;

/// Sets the working precision of newly created Real values to at least
/// `bits` significand bits. Returns the effective bit count.
unsigned set_precision_bits(unsigned bits);

/// Effective significand bits of newly created Real values.
unsigned precision_bits();

/// RAII precision change, restored on scope exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits) : saved_(Real::default_precision()) {
    set_precision_bits(bits);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/// Scientific notation with `digits` significant digits.
std::string format(const Real& x, int digits = 20);
std::string format(double x, int digits = 20);

/// |a - b| / max(|a|, |b|), 0 when both vanish.
template <class Scalar>
Scalar relative_error(const Scalar& a, const Scalar& b) {
  using std::abs;
  const Scalar aa = abs(a);
  const Scalar bb = abs(b);
  const Scalar scale = aa > bb ? aa : bb;
  if (scale == 0) return Scalar(0);
  return Scalar(abs(a - b) / scale);
}

}  // namespace qfusion

namespace Eigen {

template <>
struct NumTraits<qfusion::Real> : GenericNumTraits<qfusion::Real> {
  using Real = qfusion::Real;
  using NonInteger = qfusion::Real;
  using Literal = qfusion::Real;
  using Nested = qfusion::Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return 1000 * epsilon(); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static int digits10() { return static_cast<int>(Real::default_precision()); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
};

}  // namespace Eigen
