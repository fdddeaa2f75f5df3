#include "waring/scalar.hpp"

#include <algorithm>
#include <cstdio>

namespace waring {

std::string BigFloat::str(int digits) const {
  if (digits <= 0) digits = std::max(6L, static_cast<long>(prec() * 0.30103) - 2);
  char* out = nullptr;
  mpfr_asprintf(&out, "%.*Re", digits, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

BigComplex BigComplex::sqrt() const {
  mpfr_prec_t p = prec();
  if (re_.is_exact_zero() && im_.is_exact_zero()) return BigComplex(p);
  // w = sqrt((|z| + |re|)/2); the other part is |im| / (2w).
  BigFloat mag = abs();
  BigFloat two(2, p);
  BigFloat w = ((mag + re_.abs()) / two).sqrt();
  if (w.is_exact_zero()) {
    // re < 0 and im == 0: pure imaginary square root.
    BigFloat r = (-re_).sqrt();
    return BigComplex(BigFloat(p), r);
  }
  BigFloat other = im_.abs() / (two * w);
  if (!re_.sign_negative()) {
    return BigComplex(w, im_.sign_negative() ? -other : other);
  }
  return BigComplex(other, im_.sign_negative() ? -w : w);
}

std::string Scalar::str(const TolerancePolicy* policy) const {
  (void)policy;
  if (is_rational()) {
    const mpq_class& q = rat();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
  }
  const BigComplex& z = cpx();
  std::string re = z.re().str();
  std::string im = z.im().str();
  if (!im.empty() && im[0] == '-') {
    return re + im + "i";
  }
  return re + "+" + im + "i";
}

}  // namespace waring
