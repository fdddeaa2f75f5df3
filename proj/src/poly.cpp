#include "waring/poly.hpp"

#include <algorithm>

namespace waring {

namespace {

long falling(int a, int b) {
  long r = 1;
  for (int i = 0; i < b; ++i) r *= (a - i);
  return r;
}

long factorial(int n) {
  long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

template <Ring R>
Form<R> multiply(const Form<R>& a, const Form<R>& b) {
  if (a.nvars() != b.nvars()) fail(Err::DegreeMismatch, "form product nvars mismatch");
  Form<R> r(a.nvars(), a.degree() + b.degree());
  for (int i = 0; i < a.dim(); ++i) {
    auto ea = monomial_exponents(a.nvars(), a.degree(), i);
    for (int j = 0; j < b.dim(); ++j) {
      auto eb = monomial_exponents(b.nvars(), b.degree(), j);
      int idx = monomial_index(r.nvars(), r.degree(), ea[0] + eb[0], ea[1] + eb[1]);
      r[idx] = r[idx] + a[i] * b[j];
    }
  }
  return r;
}

template HomogeneousForm multiply(const HomogeneousForm&, const HomogeneousForm&);
template DualForm multiply(const DualForm&, const DualForm&);

HomogeneousForm contract(const DualForm& p, const HomogeneousForm& f) {
  if (p.nvars() != f.nvars()) fail(Err::DegreeMismatch, "contraction nvars mismatch");
  if (p.degree() > f.degree()) fail(Err::DegreeMismatch, "contraction degree exceeds form degree");
  HomogeneousForm r(f.nvars(), f.degree() - p.degree());
  for (int m = 0; m < r.dim(); ++m) {
    auto em = monomial_exponents(r.nvars(), r.degree(), m);
    Scalar acc(0);
    for (int k = 0; k < p.dim(); ++k) {
      auto mu = monomial_exponents(p.nvars(), p.degree(), k);
      int src = monomial_index(f.nvars(), f.degree(), em[0] + mu[0], em[1] + mu[1]);
      long factor = falling(em[0] + mu[0], mu[0]) * falling(em[1] + mu[1], mu[1]) *
                    falling(em[2] + mu[2], mu[2]);
      acc += Scalar(factor) * p[k] * f[src];
    }
    r[m] = acc;
  }
  return r;
}

Scalar evaluate_dual(const DualForm& p, const HomogeneousForm& v) {
  if (v.degree() != 1) fail(Err::DegreeMismatch, "evaluate_dual needs a linear form");
  HomogeneousForm vd = power(v, p.degree());
  HomogeneousForm c = contract(p, vd);
  return Scalar(1, factorial(p.degree())) * c.value();
}

template <Ring R>
Form<R> power(const Form<R>& v, int d) {
  if (v.degree() != 1) fail(Err::DegreeMismatch, "power needs a linear form");
  Form<R> r(v.nvars(), 0);
  r[0] = Scalar(1);
  // Small degrees only; repeated multiplication is plenty.
  for (int i = 0; i < d; ++i) r = multiply(r, v);
  return r;
}

template HomogeneousForm power(const HomogeneousForm&, int);
template DualForm power(const DualForm&, int);

template <Ring R>
Form<R> partial_derivative(const Form<R>& a, int var) {
  if (a.degree() == 0) fail(Err::DegreeMismatch, "derivative of a constant form");
  Form<R> r(a.nvars(), a.degree() - 1);
  for (int i = 0; i < a.dim(); ++i) {
    auto e = monomial_exponents(a.nvars(), a.degree(), i);
    if (e[var] == 0) continue;
    std::array<int, 3> em = e;
    em[var] -= 1;
    int idx = monomial_index(r.nvars(), r.degree(), em[0], em[1]);
    r[idx] = r[idx] + Scalar(static_cast<long>(e[var])) * a[i];
  }
  return r;
}

template HomogeneousForm partial_derivative(const HomogeneousForm&, int);
template DualForm partial_derivative(const DualForm&, int);

Scalar pair_linear(const DualForm& l, const HomogeneousForm& v) {
  if (l.degree() != 1 || v.degree() != 1) fail(Err::DegreeMismatch, "pair_linear needs linear forms");
  Scalar acc(0);
  for (int i = 0; i < l.dim(); ++i) acc += l[i] * v[i];
  return acc;
}

template <Ring R>
bool proportional(const Form<R>& a, const Form<R>& b, const TolerancePolicy& policy) {
  if (a.degree() != b.degree() || a.nvars() != b.nvars())
    fail(Err::DegreeMismatch, "proportional needs matching forms");
  long sc = scale_exp_of(form_max_abs(a)) + scale_exp_of(form_max_abs(b));
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j)
      if (!is_zero_rel(a[i] * b[j] - a[j] * b[i], policy, sc)) return false;
  return true;
}

template bool proportional(const HomogeneousForm&, const HomogeneousForm&, const TolerancePolicy&);
template bool proportional(const DualForm&, const DualForm&, const TolerancePolicy&);

// ---------------------------------------------------------------------------
// ParamScalar

Scalar ParamScalar::evaluate(const Scalar& lam, const Scalar& mu) const {
  // Horner in two stages: sum c[i] lam^(deg-i) mu^i.
  Scalar acc(0);
  Scalar lam_pow(1);
  std::vector<Scalar> mu_pows(degree() + 1, Scalar(1));
  for (int i = 1; i <= degree(); ++i) mu_pows[i] = mu_pows[i - 1] * mu;
  for (int i = degree(); i >= 0; --i) {
    acc += c_[i] * lam_pow * mu_pows[i];
    lam_pow = lam_pow * lam;
  }
  return acc;
}

ParamScalar operator+(const ParamScalar& a, const ParamScalar& b) {
  if (a.degree() != b.degree()) fail(Err::DegreeMismatch, "ParamScalar addition degree mismatch");
  ParamScalar r(a.degree());
  for (int i = 0; i <= a.degree(); ++i) r[i] = a[i] + b[i];
  return r;
}

ParamScalar operator-(const ParamScalar& a, const ParamScalar& b) {
  if (a.degree() != b.degree()) fail(Err::DegreeMismatch, "ParamScalar subtraction degree mismatch");
  ParamScalar r(a.degree());
  for (int i = 0; i <= a.degree(); ++i) r[i] = a[i] - b[i];
  return r;
}

ParamScalar operator*(const ParamScalar& a, const ParamScalar& b) {
  ParamScalar r(a.degree() + b.degree());
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

ParamScalar operator*(const Scalar& s, const ParamScalar& a) {
  ParamScalar r(a.degree());
  for (int i = 0; i <= a.degree(); ++i) r[i] = s * a[i];
  return r;
}

ParamScalar ps_power(const ParamScalar& a, int d) {
  ParamScalar r = ParamScalar::constant(Scalar(1));
  for (int i = 0; i < d; ++i) r = r * a;
  return r;
}

ParamScalar ps_substitute(const ParamScalar& a, const std::array<Scalar, 4>& m) {
  ParamScalar s0 = ParamScalar::linear(m[0], m[1]);
  ParamScalar s1 = ParamScalar::linear(m[2], m[3]);
  ParamScalar acc(a.degree());
  for (int i = 0; i <= a.degree(); ++i) {
    ParamScalar term = a[i] * (ps_power(s0, a.degree() - i) * ps_power(s1, i));
    acc = acc + term;
  }
  return acc;
}

bool binary_divide(const std::vector<Scalar>& num, const std::vector<Scalar>& den,
                   std::vector<Scalar>& quotient, const TolerancePolicy& policy) {
  int nd = static_cast<int>(num.size()) - 1;
  int dd = static_cast<int>(den.size()) - 1;
  if (dd > nd) return false;

  // Strip t1 factors (leading zero coefficients) and t0 factors (trailing).
  int den_lo = 0;
  while (den_lo <= dd && is_zero(den[den_lo], policy)) ++den_lo;
  int den_hi = dd;
  while (den_hi >= den_lo && is_zero(den[den_hi], policy)) --den_hi;
  if (den_lo > den_hi) return false;  // dividing by (numerically) zero

  // den = t1^den_lo * t0^(dd-den_hi) * core. The numerator must carry the
  // same monomial factors on its boundary coefficients.
  BigFloat num_scale(64);
  for (const Scalar& s : num) {
    BigFloat c = s.abs_approx(64);
    if (c.cmp(num_scale) > 0) num_scale = c;
  }
  long scale_exp = num_scale.is_exact_zero() ? 0 : std::max(0L, static_cast<long>(mpfr_get_exp(num_scale.raw())));
  auto negligible = [&](const Scalar& s) {
    if (s.is_rational()) return s.rat() == 0;
    return s.cpx().abs_leq_2exp(policy.zero_exp + scale_exp);
  };

  for (int i = 0; i < den_lo; ++i)
    if (!negligible(num[i])) return false;
  for (int i = 0; i < dd - den_hi; ++i)
    if (!negligible(num[nd - i])) return false;

  std::vector<Scalar> core(den.begin() + den_lo, den.begin() + den_hi + 1);
  std::vector<Scalar> work(num.begin() + den_lo, num.end() - (dd - den_hi));
  int cd = static_cast<int>(core.size()) - 1;
  int wd = static_cast<int>(work.size()) - 1;
  int qd = wd - cd;
  if (qd < 0) return false;

  // Long division on descending t0 powers; core[0] is the leading coefficient.
  std::vector<Scalar> q(qd + 1, Scalar(0));
  for (int i = 0; i <= qd; ++i) {
    Scalar coef = work[i] / core[0];
    q[i] = coef;
    for (int j = 0; j <= cd; ++j) work[i + j] -= coef * core[j];
  }
  for (int i = qd + 1; i <= wd; ++i)
    if (!negligible(work[i])) return false;
  quotient = std::move(q);
  return true;
}

// ---------------------------------------------------------------------------
// ParamForm

ParamForm operator+(const ParamForm& a, const ParamForm& b) {
  if (a.t_degree() != b.t_degree()) fail(Err::DegreeMismatch, "ParamForm addition t-degree mismatch");
  std::vector<HomogeneousForm> rows;
  for (int j = 0; j <= a.t_degree(); ++j) rows.push_back(a.row(j) + b.row(j));
  return ParamForm(std::move(rows));
}

ParamForm operator-(const ParamForm& a, const ParamForm& b) {
  if (a.t_degree() != b.t_degree()) fail(Err::DegreeMismatch, "ParamForm subtraction t-degree mismatch");
  std::vector<HomogeneousForm> rows;
  for (int j = 0; j <= a.t_degree(); ++j) rows.push_back(a.row(j) - b.row(j));
  return ParamForm(std::move(rows));
}

ParamForm operator*(const Scalar& s, const ParamForm& a) {
  std::vector<HomogeneousForm> rows;
  for (int j = 0; j <= a.t_degree(); ++j) rows.push_back(s * a.row(j));
  return ParamForm(std::move(rows));
}

ParamForm operator*(const ParamScalar& a, const ParamForm& f) {
  ParamForm r(a.degree() + f.t_degree(), f.nvars(), f.s_degree());
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= f.t_degree(); ++j) r.row(i + j) = r.row(i + j) + a[i] * f.row(j);
  return r;
}

ParamForm pf_multiply(const ParamForm& a, const ParamForm& b) {
  ParamForm r(a.t_degree() + b.t_degree(), a.nvars(), a.s_degree() + b.s_degree());
  for (int i = 0; i <= a.t_degree(); ++i)
    for (int j = 0; j <= b.t_degree(); ++j)
      r.row(i + j) = r.row(i + j) + multiply(a.row(i), b.row(j));
  return r;
}

ParamForm pf_from_form(const HomogeneousForm& f) { return ParamForm({f}); }

ParamForm param_contract(const DualForm& p, const ParamForm& f) {
  std::vector<HomogeneousForm> rows;
  for (int j = 0; j <= f.t_degree(); ++j) rows.push_back(contract(p, f.row(j)));
  return ParamForm(std::move(rows));
}

HomogeneousForm param_evaluate(const ParamForm& f, const Scalar& lam, const Scalar& mu) {
  int d = f.t_degree();
  HomogeneousForm acc(f.nvars(), f.s_degree());
  std::vector<Scalar> mu_pows(d + 1, Scalar(1));
  for (int i = 1; i <= d; ++i) mu_pows[i] = mu_pows[i - 1] * mu;
  Scalar lam_pow(1);
  for (int j = d; j >= 0; --j) {
    acc = acc + (lam_pow * mu_pows[j]) * f.row(j);
    lam_pow = lam_pow * lam;
  }
  return acc;
}

ParamForm param_substitute(const ParamForm& f, const std::array<Scalar, 4>& m,
                           const TolerancePolicy& policy) {
  Scalar det = m[0] * m[3] - m[1] * m[2];
  if (is_zero(det, policy)) fail(Err::SingularChange, "parameter substitution is singular");
  int d = f.t_degree();
  ParamScalar s0 = ParamScalar::linear(m[0], m[1]);
  ParamScalar s1 = ParamScalar::linear(m[2], m[3]);
  std::vector<ParamScalar> weights;
  for (int j = 0; j <= d; ++j) weights.push_back(ps_power(s0, d - j) * ps_power(s1, j));
  ParamForm r(d, f.nvars(), f.s_degree());
  for (int j = 0; j <= d; ++j)
    for (int i = 0; i <= d; ++i) r.row(i) = r.row(i) + weights[j][i] * f.row(j);
  return r;
}

ParamForm param_exact_divide(const ParamForm& f, const ParamScalar& a,
                             const TolerancePolicy& policy) {
  int qd = f.t_degree() - a.degree();
  if (qd < 0) fail(Err::NotDivisible, "divisor t-degree exceeds dividend");
  std::vector<Scalar> den(a.degree() + 1);
  for (int i = 0; i <= a.degree(); ++i) den[i] = a[i];

  int dim = f.row(0).dim();
  ParamForm r(qd, f.nvars(), f.s_degree());
  for (int c = 0; c < dim; ++c) {
    std::vector<Scalar> num(f.t_degree() + 1);
    for (int j = 0; j <= f.t_degree(); ++j) num[j] = f.row(j)[c];
    bool all_zero = true;
    for (const Scalar& s : num)
      if (!is_zero(s, policy)) {
        all_zero = false;
        break;
      }
    if (all_zero) continue;
    std::vector<Scalar> q;
    if (!binary_divide(num, den, q, policy))
      fail(Err::NotDivisible, "ParamForm column not divisible by the given ParamScalar");
    for (int j = 0; j <= qd; ++j) r.row(j)[c] = q[j];
  }
  return r;
}

BigFloat pf_max_abs(const ParamForm& f, mpfr_prec_t prec) {
  BigFloat m(prec);
  for (int j = 0; j <= f.t_degree(); ++j) {
    BigFloat c = form_max_abs(f.row(j), prec);
    if (c.cmp(m) > 0) m = c;
  }
  return m;
}

// ---------------------------------------------------------------------------
// LineBasis

HomogeneousForm LineBasis::complement() const {
  std::vector<Scalar> c(3, Scalar(0));
  c[pivot] = Scalar(1) / l[pivot];
  return linear_form<Ring::lower>(3, std::move(c));
}

HomogeneousForm LineBasis::restrict_form(const HomogeneousForm& f, const TolerancePolicy& policy,
                                         bool check) const {
  if (f.nvars() != 3) fail(Err::DegreeMismatch, "restriction needs a ternary form");
  if (check) {
    HomogeneousForm lf = contract(l, f);
    BigFloat scale = form_max_abs(f);
    long se = scale.is_exact_zero() ? 0 : std::max(0L, static_cast<long>(mpfr_get_exp(scale.raw())));
    for (int i = 0; i < lf.dim(); ++i) {
      const Scalar& s = lf[i];
      bool ok = s.is_rational() ? s.rat() == 0 : s.cpx().abs_leq_2exp(policy.zero_exp + se);
      if (!ok) fail(Err::NotInKernel, "form is not annihilated by the line");
    }
  }
  int d = f.degree();
  HomogeneousForm g(2, d);
  // The coefficient of u^(d-k) w^k equals the coefficient of the monomial
  // x_{j1}^(d-k) x_{j2}^k in f (the pivot variable never appears there).
  for (int k = 0; k <= d; ++k) {
    std::array<int, 3> e = {0, 0, 0};
    e[j1] = d - k;
    e[j2] = k;
    g[k] = f[monomial_index(3, d, e[0], e[1])];
  }
  return g;
}

HomogeneousForm LineBasis::embed_form(const HomogeneousForm& g) const {
  if (g.nvars() != 2) fail(Err::DegreeMismatch, "embed needs a binary form");
  int d = g.degree();
  HomogeneousForm r(3, d);
  for (int k = 0; k <= d; ++k) {
    HomogeneousForm mono = multiply(power(u, d - k), power(w, k));
    r = r + g[k] * mono;
  }
  return r;
}

ParamForm LineBasis::embed_param(const ParamForm& g) const {
  std::vector<HomogeneousForm> rows;
  for (int j = 0; j <= g.t_degree(); ++j) rows.push_back(embed_form(g.row(j)));
  return ParamForm(std::move(rows));
}

ParamForm LineBasis::restrict_param(const ParamForm& f, const TolerancePolicy& policy,
                                    bool check) const {
  std::vector<HomogeneousForm> rows;
  for (int j = 0; j <= f.t_degree(); ++j) rows.push_back(restrict_form(f.row(j), policy, check));
  return ParamForm(std::move(rows));
}

DualForm LineBasis::reduce_dual(const DualForm& y) const {
  if (y.degree() == 1) {
    return linear_form<Ring::upper>(2, {evaluate_dual(y, u), evaluate_dual(y, w)});
  }
  if (y.degree() == 2) {
    // Quadratic class: values on u^2, uw, w^2 determine the binary quadratic.
    DualForm r(2, 2);
    HomogeneousForm uu = multiply(u, u), uw = multiply(u, w), ww = multiply(w, w);
    r[0] = Scalar(1, 2) * contract(y, uu).value();
    r[1] = contract(y, uw).value();
    r[2] = Scalar(1, 2) * contract(y, ww).value();
    return r;
  }
  fail(Err::DegreeMismatch, "reduce_dual implemented for degrees 1 and 2 only");
}

DualForm LineBasis::lift_dual(const DualForm& g) const {
  if (g.degree() != 1 || g.nvars() != 2) fail(Err::DegreeMismatch, "lift_dual needs a binary line");
  std::vector<Scalar> c(3, Scalar(0));
  c[j1] = g[0];
  c[j2] = g[1];
  return linear_form<Ring::upper>(3, std::move(c));
}

LineBasis line_basis(const DualForm& l, const TolerancePolicy& policy) {
  if (l.nvars() != 3 || l.degree() != 1) fail(Err::DegreeMismatch, "line_basis needs a ternary dual line");
  if (form_is_zero(l, policy)) fail(Err::DegenerateInput, "zero line");
  int pv = 0;
  BigFloat best = l[0].abs_approx(64);
  for (int i = 1; i < 3; ++i) {
    BigFloat c = l[i].abs_approx(64);
    if (c.cmp(best) > 0) {
      best = c;
      pv = i;
    }
  }
  int j1 = pv == 0 ? 1 : 0;
  int j2 = pv == 2 ? 1 : 2;
  auto basis_vec = [&](int j) {
    std::vector<Scalar> c(3, Scalar(0));
    c[j] = Scalar(1);
    c[pv] = -(l[j] / l[pv]);
    return linear_form<Ring::lower>(3, std::move(c));
  };
  return LineBasis{l, pv, j1, j2, basis_vec(j1), basis_vec(j2)};
}

template <Ring R>
ParamScalar evaluate_binary_at_param(const Form<R>& p, const ParamScalar& v0, const ParamScalar& v1) {
  if (p.nvars() != 2) fail(Err::DegreeMismatch, "binary evaluation needs a binary form");
  int d = p.degree();
  if (v0.degree() != v1.degree()) fail(Err::DegreeMismatch, "coordinate degrees differ");
  ParamScalar acc(d * v0.degree());
  for (int k = 0; k <= d; ++k) {
    ParamScalar term = p[k] * (ps_power(v0, d - k) * ps_power(v1, k));
    acc = acc + term;
  }
  return acc;
}

template ParamScalar evaluate_binary_at_param(const Form<Ring::lower>&, const ParamScalar&,
                                              const ParamScalar&);
template ParamScalar evaluate_binary_at_param(const Form<Ring::upper>&, const ParamScalar&,
                                              const ParamScalar&);

}  // namespace waring
