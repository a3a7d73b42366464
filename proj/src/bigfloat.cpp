#include "cmk2/bigfloat.hpp"

#include <cmath>
#include <ios>

namespace cmk2 {

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits)
    : bits_(bits), saved_digits10_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned working_bits() {
  Real x;
  return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

std::string decimal(const Real& x, int digits) { return x.str(digits, std::ios_base::scientific); }

std::string decimal(const BigComplex& z, int digits) {
  std::string im = decimal(z.im, digits);
  if (im.front() != '-') im = "+" + im;
  return decimal(z.re, digits) + im + "i";
}

Real parse_real(const std::string& text) { return Real(text); }

}  // namespace cmk2
