#pragma once

#include <array>
#include <string>
#include <vector>

#include "waring/scalar.hpp"

namespace waring {

// Monomials of total degree d are ordered descending-lex on (e0, e1); for
// two variables that is [x0^d, x0^{d-1}x1, ..., x1^d].
inline int form_dim(int nvars, int degree) {
  return nvars == 2 ? degree + 1 : (degree + 1) * (degree + 2) / 2;
}
inline int monomial_index(int nvars, int degree, int e0, int e1) {
  if (nvars == 2) return degree - e0;
  int lead = degree - e0;
  return lead * (lead + 1) / 2 + lead - e1;
}
inline std::array<int, 3> monomial_exponents(int nvars, int degree, int idx) {
  if (nvars == 2) return {degree - idx, idx, 0};
  int lead = 0;
  while ((lead + 1) * (lead + 2) / 2 <= idx) ++lead;
  int e0 = degree - lead;
  int e1 = lead - (idx - lead * (lead + 1) / 2);
  return {e0, e1, degree - e0 - e1};
}

// Dense homogeneous form. The ring tag separates the polynomial ring S_*
// from its dual S^*; contraction maps (dual, poly) pairs to poly.
enum class Ring { lower, upper };

template <Ring R>
class Form {
 public:
  Form() : nvars_(2), degree_(0), c_(1, Scalar(0)) {}
  Form(int nvars, int degree)
      : nvars_(nvars), degree_(degree), c_(form_dim(nvars, degree), Scalar(0)) {
    if (nvars != 2 && nvars != 3) fail(Err::DegenerateInput, "nvars must be 2 or 3");
    if (degree < 0) fail(Err::DegenerateInput, "negative degree");
  }
  Form(int nvars, int degree, std::vector<Scalar> coeffs)
      : nvars_(nvars), degree_(degree), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != form_dim(nvars, degree))
      fail(Err::DegenerateInput, "coefficient vector has wrong length");
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(c_.size()); }
  const Scalar& operator[](int i) const { return c_[i]; }
  Scalar& operator[](int i) { return c_[i]; }
  const Scalar& at(int e0, int e1) const { return c_[monomial_index(nvars_, degree_, e0, e1)]; }
  Scalar& at(int e0, int e1) { return c_[monomial_index(nvars_, degree_, e0, e1)]; }
  const std::vector<Scalar>& coeffs() const { return c_; }

  // Degree-0 forms are scalars.
  const Scalar& value() const { return c_[0]; }

 private:
  int nvars_;
  int degree_;
  std::vector<Scalar> c_;
};

using HomogeneousForm = Form<Ring::lower>;
using DualForm = Form<Ring::upper>;

template <Ring R>
Form<R> operator+(const Form<R>& a, const Form<R>& b) {
  if (a.nvars() != b.nvars() || a.degree() != b.degree())
    fail(Err::DegreeMismatch, "form addition shape mismatch");
  Form<R> r(a.nvars(), a.degree());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}
template <Ring R>
Form<R> operator-(const Form<R>& a, const Form<R>& b) {
  if (a.nvars() != b.nvars() || a.degree() != b.degree())
    fail(Err::DegreeMismatch, "form subtraction shape mismatch");
  Form<R> r(a.nvars(), a.degree());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}
template <Ring R>
Form<R> operator*(const Scalar& s, const Form<R>& a) {
  Form<R> r(a.nvars(), a.degree());
  for (int i = 0; i < a.dim(); ++i) r[i] = s * a[i];
  return r;
}
template <Ring R>
Form<R> operator-(const Form<R>& a) {
  return Scalar(-1) * a;
}

template <Ring R>
Form<R> multiply(const Form<R>& a, const Form<R>& b);

template <Ring R>
bool form_is_zero(const Form<R>& a, const TolerancePolicy& policy) {
  for (int i = 0; i < a.dim(); ++i)
    if (!is_zero(a[i], policy)) return false;
  return true;
}

template <Ring R>
bool form_is_rational(const Form<R>& a) {
  for (int i = 0; i < a.dim(); ++i)
    if (!a[i].is_rational()) return false;
  return true;
}

// Largest coefficient magnitude, used to scale tolerance checks.
template <Ring R>
BigFloat form_max_abs(const Form<R>& a, mpfr_prec_t prec = 64) {
  BigFloat m(prec);
  for (int i = 0; i < a.dim(); ++i) {
    BigFloat c = a[i].abs_approx(prec);
    if (c.cmp(m) > 0) m = c;
  }
  return m;
}

// Iterated constant-coefficient partial derivation p -| f.
HomogeneousForm contract(const DualForm& p, const HomogeneousForm& f);

// p(v) = (1/d!) p -| v^d, i.e. p as a polynomial function at v's coordinates.
Scalar evaluate_dual(const DualForm& p, const HomogeneousForm& v);

// Multinomial expansion of v^d for a linear form v.
template <Ring R>
Form<R> power(const Form<R>& v, int d);

// Formal partial derivative in the form's own variables (ring preserving).
template <Ring R>
Form<R> partial_derivative(const Form<R>& a, int var);

template <Ring R>
Form<R> linear_form(int nvars, std::vector<Scalar> coeffs) {
  if (static_cast<int>(coeffs.size()) != nvars) fail(Err::DegenerateInput, "bad linear form");
  return Form<R>(nvars, 1, std::move(coeffs));
}

// Pairing of a dual linear form against a linear form: l(v) = l -| v.
Scalar pair_linear(const DualForm& l, const HomogeneousForm& v);

// true when the two forms span the same point of the projective space
// (all 2x2 minors of the coefficient matrix vanish).
template <Ring R>
bool proportional(const Form<R>& a, const Form<R>& b, const TolerancePolicy& policy);

template <Ring R>
Form<R> promote_form(const Form<R>& a, mpfr_prec_t prec) {
  Form<R> r(a.nvars(), a.degree());
  for (int i = 0; i < a.dim(); ++i) r[i] = Scalar(a[i].to_complex(prec));
  return r;
}

// ---------------------------------------------------------------------------
// Binary forms in the parameter variables (t0, t1): c[i] * t0^(deg-i) t1^i.

class ParamScalar {
 public:
  ParamScalar() : c_(1, Scalar(0)) {}
  explicit ParamScalar(int degree) : c_(degree + 1, Scalar(0)) {}
  explicit ParamScalar(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) fail(Err::DegenerateInput, "empty ParamScalar");
  }
  static ParamScalar constant(Scalar s) { return ParamScalar(std::vector<Scalar>{std::move(s)}); }
  // a*t0 + b*t1
  static ParamScalar linear(Scalar a, Scalar b) {
    return ParamScalar(std::vector<Scalar>{std::move(a), std::move(b)});
  }
  static ParamScalar t0() { return linear(Scalar(1), Scalar(0)); }
  static ParamScalar t1() { return linear(Scalar(0), Scalar(1)); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Scalar& operator[](int i) const { return c_[i]; }
  Scalar& operator[](int i) { return c_[i]; }

  Scalar evaluate(const Scalar& lam, const Scalar& mu) const;
  bool is_zero_poly(const TolerancePolicy& policy) const {
    for (const Scalar& s : c_)
      if (!is_zero(s, policy)) return false;
    return true;
  }

 private:
  std::vector<Scalar> c_;
};

ParamScalar operator+(const ParamScalar& a, const ParamScalar& b);
ParamScalar operator-(const ParamScalar& a, const ParamScalar& b);
ParamScalar operator*(const ParamScalar& a, const ParamScalar& b);
ParamScalar operator*(const Scalar& s, const ParamScalar& a);
ParamScalar ps_power(const ParamScalar& a, int d);
// Substitution t -> M t with rows s0 = M00 t0 + M01 t1, s1 = M10 t0 + M11 t1.
ParamScalar ps_substitute(const ParamScalar& a, const std::array<Scalar, 4>& m);
// Exact division of binary coefficient vectors; nullopt when not divisible.
bool binary_divide(const std::vector<Scalar>& num, const std::vector<Scalar>& den,
                   std::vector<Scalar>& quotient, const TolerancePolicy& policy);

// Element of K[t0,t1]_delta tensor S_d: one form per t-monomial, row j holding
// the coefficient of t0^(delta-j) t1^j.
class ParamForm {
 public:
  ParamForm() = default;
  ParamForm(int t_degree, int nvars, int s_degree)
      : rows_(t_degree + 1, HomogeneousForm(nvars, s_degree)) {}
  explicit ParamForm(std::vector<HomogeneousForm> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) fail(Err::DegenerateInput, "empty ParamForm");
  }

  int t_degree() const { return static_cast<int>(rows_.size()) - 1; }
  int s_degree() const { return rows_[0].degree(); }
  int nvars() const { return rows_[0].nvars(); }
  const HomogeneousForm& row(int j) const { return rows_[j]; }
  HomogeneousForm& row(int j) { return rows_[j]; }

  bool is_zero_poly(const TolerancePolicy& policy) const {
    for (const auto& r : rows_)
      if (!form_is_zero(r, policy)) return false;
    return true;
  }

 private:
  std::vector<HomogeneousForm> rows_;
};

ParamForm operator+(const ParamForm& a, const ParamForm& b);
ParamForm operator-(const ParamForm& a, const ParamForm& b);
ParamForm operator*(const Scalar& s, const ParamForm& a);
ParamForm operator*(const ParamScalar& a, const ParamForm& f);
ParamForm pf_multiply(const ParamForm& a, const ParamForm& b);
ParamForm pf_from_form(const HomogeneousForm& f);  // t-degree 0

ParamForm param_contract(const DualForm& p, const ParamForm& f);
HomogeneousForm param_evaluate(const ParamForm& f, const Scalar& lam, const Scalar& mu);
ParamForm param_substitute(const ParamForm& f, const std::array<Scalar, 4>& m,
                           const TolerancePolicy& policy);
ParamForm param_exact_divide(const ParamForm& f, const ParamScalar& a,
                             const TolerancePolicy& policy);

// Max coefficient magnitude over the whole grid.
BigFloat pf_max_abs(const ParamForm& f, mpfr_prec_t prec = 64);

// ---------------------------------------------------------------------------
// Restriction to the annihilator line of a dual linear form.

// Deterministic basis (u, w) of <l>^perp in S_1, plus the bookkeeping needed
// to restrict, embed and reduce dual forms modulo l.
struct LineBasis {
  DualForm l;            // the dual line (3 variables)
  int pivot, j1, j2;     // pivot coordinate and the two complement indices
  HomogeneousForm u, w;  // basis of <l>^perp

  // Complement vector x with l -| x = 1 (supported on the pivot coordinate).
  HomogeneousForm complement() const;
  // Binary coefficients of a ternary form lying in Sym <l>^perp.
  HomogeneousForm restrict_form(const HomogeneousForm& f, const TolerancePolicy& policy,
                                bool check = true) const;
  // sum b_k u^{d-k} w^k back in three variables.
  HomogeneousForm embed_form(const HomogeneousForm& g) const;
  ParamForm embed_param(const ParamForm& g) const;
  ParamForm restrict_param(const ParamForm& f, const TolerancePolicy& policy,
                           bool check = true) const;
  // Class of a ternary dual form modulo (l), as a binary dual form acting on
  // the (u, w) model. Implemented for degrees 1 and 2.
  DualForm reduce_dual(const DualForm& y) const;
  // Natural lift of a binary dual form: coefficients on x^{j1}, x^{j2}.
  DualForm lift_dual(const DualForm& g) const;
};

LineBasis line_basis(const DualForm& l, const TolerancePolicy& policy);

inline std::pair<HomogeneousForm, LineBasis> restrict_to_line(const HomogeneousForm& f,
                                                              const DualForm& l,
                                                              const TolerancePolicy& policy) {
  LineBasis basis = line_basis(l, policy);
  return {basis.restrict_form(f, policy), basis};
}

// Binary evaluation of a binary form at ParamScalar coordinates: the result
// of substituting (V0(t), V1(t)) for the two variables.
template <Ring R>
ParamScalar evaluate_binary_at_param(const Form<R>& p, const ParamScalar& v0, const ParamScalar& v1);

}  // namespace waring
