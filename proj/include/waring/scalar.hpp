#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "waring/error.hpp"

namespace waring {

// Numerical policy for everything that is not exact rational arithmetic.
// zero_threshold is kept as a power of two: 2^zero_exp.
struct TolerancePolicy {
  long precision_bits;
  long zero_exp;

  explicit TolerancePolicy(long bits = 256) : precision_bits(bits) {
    if (bits < 64) fail(Err::DegenerateInput, "precision must be at least 64 bits");
    zero_exp = -(bits / 2);
    if (zero_exp >= -32) zero_exp = -33;  // keep the threshold strictly below 2^-32
  }
};

// Value-semantic wrapper around mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(long n, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, n, MPFR_RNDN);
  }
  BigFloat(const mpq_class& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, 64);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.prec());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool sign_negative() const { return mpfr_sgn(v_) < 0; }
  bool is_exact_zero() const { return mpfr_zero_p(v_) != 0; }
  int cmp(const BigFloat& o) const { return mpfr_cmp(v_, o.v_); }
  // |*this| <= 2^e
  bool abs_leq_2exp(long e) const {
    if (mpfr_zero_p(v_)) return true;
    return mpfr_get_exp(v_) <= e;
  }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string str(int digits = 0) const;

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::min(a.prec(), b.prec()));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::min(a.prec(), b.prec()));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::min(a.prec(), b.prec()));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::min(a.prec(), b.prec()));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator-() const {
    BigFloat r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  BigFloat abs() const {
    BigFloat r(prec());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
  }
  BigFloat sqrt() const {
    BigFloat r(prec());
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

// Complex number with a fixed working precision for both parts.
class BigComplex {
 public:
  explicit BigComplex(mpfr_prec_t prec = 64) : re_(prec), im_(prec) {}
  BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}
  BigComplex(long n, mpfr_prec_t prec) : re_(n, prec), im_(prec) {}
  BigComplex(const mpq_class& q, mpfr_prec_t prec) : re_(q, prec), im_(prec) {}

  const BigFloat& re() const { return re_; }
  const BigFloat& im() const { return im_; }
  BigFloat& re() { return re_; }
  BigFloat& im() { return im_; }
  mpfr_prec_t prec() const { return std::min(re_.prec(), im_.prec()); }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n = b.norm2();
    return BigComplex((a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n);
  }
  BigComplex operator-() const { return BigComplex(-re_, -im_); }
  BigComplex conj() const { return BigComplex(re_, -im_); }
  BigFloat norm2() const { return re_ * re_ + im_ * im_; }  // |z|^2
  BigFloat abs() const {
    BigFloat r(prec());
    mpfr_hypot(r.raw(), re_.raw(), im_.raw(), MPFR_RNDN);
    return r;
  }
  BigComplex sqrt() const;
  bool abs_leq_2exp(long e) const { return abs().abs_leq_2exp(e); }

 private:
  BigFloat re_, im_;
};

// Field scalar: exact rational, or complex float at a working precision.
// Arithmetic between rationals stays rational; anything touching a complex
// produces a complex at the minimum of the operand precisions.
class Scalar {
 public:
  Scalar() : v_(mpq_class(0)) {}
  Scalar(long n) : v_(mpq_class(n)) {}
  Scalar(long num, long den) {
    if (den == 0) fail(Err::DegenerateInput, "zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    v_ = std::move(q);
  }
  explicit Scalar(mpq_class q) {
    q.canonicalize();
    v_ = std::move(q);
  }
  explicit Scalar(BigComplex z) : v_(std::move(z)) {}

  bool is_rational() const { return std::holds_alternative<mpq_class>(v_); }
  const mpq_class& rat() const { return std::get<mpq_class>(v_); }
  const BigComplex& cpx() const { return std::get<BigComplex>(v_); }
  BigComplex to_complex(mpfr_prec_t prec) const {
    if (is_rational()) return BigComplex(rat(), prec);
    return cpx();
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(mpq_class(a.rat() + b.rat()));
    mpfr_prec_t p = join_prec(a, b);
    return Scalar(a.to_complex(p) + b.to_complex(p));
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(mpq_class(a.rat() - b.rat()));
    mpfr_prec_t p = join_prec(a, b);
    return Scalar(a.to_complex(p) - b.to_complex(p));
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(mpq_class(a.rat() * b.rat()));
    mpfr_prec_t p = join_prec(a, b);
    return Scalar(a.to_complex(p) * b.to_complex(p));
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) {
      if (b.rat() == 0) fail(Err::DegenerateInput, "rational division by zero");
      return Scalar(mpq_class(a.rat() / b.rat()));
    }
    mpfr_prec_t p = join_prec(a, b);
    return Scalar(a.to_complex(p) / b.to_complex(p));
  }
  Scalar operator-() const {
    if (is_rational()) return Scalar(mpq_class(-rat()));
    return Scalar(-cpx());
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  // Exact structural equality (used only on the rational path).
  bool exact_eq(const Scalar& o) const {
    if (is_rational() != o.is_rational()) return false;
    if (is_rational()) return rat() == o.rat();
    return cpx().re().cmp(o.cpx().re()) == 0 && cpx().im().cmp(o.cpx().im()) == 0;
  }

  // |x| as a float at the given precision (exact magnitude for rationals).
  BigFloat abs_approx(mpfr_prec_t prec) const {
    if (is_rational()) {
      BigFloat r(rat(), prec);
      return r.abs();
    }
    return cpx().abs();
  }

  std::string str(const TolerancePolicy* policy = nullptr) const;

 private:
  static mpfr_prec_t join_prec(const Scalar& a, const Scalar& b) {
    mpfr_prec_t pa = a.is_rational() ? 0 : a.cpx().prec();
    mpfr_prec_t pb = b.is_rational() ? 0 : b.cpx().prec();
    if (pa == 0) return pb;
    if (pb == 0) return pa;
    return std::min(pa, pb);
  }

  std::variant<mpq_class, BigComplex> v_;
};

// Exact test for rationals, |x| <= 2^zero_exp for complex values.
inline bool is_zero(const Scalar& x, const TolerancePolicy& policy) {
  if (x.is_rational()) return x.rat() == 0;
  return x.cpx().abs_leq_2exp(policy.zero_exp);
}

// Binary exponent of a magnitude, clamped to >= 0, for scaling thresholds.
inline long scale_exp_of(const BigFloat& x) {
  if (x.is_exact_zero()) return 0;
  return std::max(0L, static_cast<long>(mpfr_get_exp(x.raw())));
}

// Zero test relative to a surrounding magnitude 2^scale_exp.
inline bool is_zero_rel(const Scalar& x, const TolerancePolicy& policy, long scale_exp) {
  if (x.is_rational()) return x.rat() == 0;
  return x.cpx().abs_leq_2exp(policy.zero_exp + scale_exp);
}

inline Scalar scalar_from(const mpq_class& q) { return Scalar(q); }

// Roots of sum coeffs[i] * t^i with multiplicity, Aberth-Ehrlich iteration
// followed by per-cluster Newton polish on the appropriate derivative.
std::vector<std::pair<BigComplex, int>> univariate_roots(const std::vector<Scalar>& coeffs,
                                                         const TolerancePolicy& policy);

// Deterministic stream of pseudo-random values (splitmix64).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform integer in [lo, hi], inclusive.
  long uniform(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  // Nonzero small rational with numerator in [-bound, bound].
  Scalar small_rational(long bound = 10) {
    long n = 0;
    while (n == 0) n = uniform(-bound, bound);
    return Scalar(n);
  }
  Rng fork(std::uint64_t salt) {
    return Rng(state_ ^ (0x517cc1b727220a95ULL * (salt + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace waring
