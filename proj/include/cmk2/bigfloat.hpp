#pragma once

// Working-precision real type: MPFR with run-time precision. Every value that
// takes part in one computation must be created under the same PrecisionScope.

#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "cmk2/complex.hpp"

namespace cmk2 {

namespace mp = boost::multiprecision;

using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using BigComplex = Complex<Real>;

unsigned bits_to_digits10(unsigned bits);

/// Sets the default MPFR precision for its lifetime, restoring the previous one.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const { return bits_; }

 private:
  unsigned bits_;
  unsigned saved_digits10_;
};

/// Current working precision in bits.
unsigned working_bits();

/// Scientific notation with `digits` significant digits.
std::string decimal(const Real& x, int digits = 12);
std::string decimal(const BigComplex& z, int digits = 12);

Real parse_real(const std::string& text);

}  // namespace cmk2
