#include "waring/apolarity.hpp"

#include <algorithm>

namespace waring {

namespace {

bool mpq_sqrt_exact(const mpq_class& q, mpq_class& root) {
  if (q < 0) return false;
  if (!mpz_perfect_square_p(q.get_num().get_mpz_t()) ||
      !mpz_perfect_square_p(q.get_den().get_mpz_t())) {
    return false;
  }
  mpq_class r;
  mpz_sqrt(r.get_num().get_mpz_t(), q.get_num().get_mpz_t());
  mpz_sqrt(r.get_den().get_mpz_t(), q.get_den().get_mpz_t());
  r.canonicalize();
  root = r;
  return true;
}

// Exact univariate gcd over the rationals, coefficients ascending.
std::vector<mpq_class> gcd_uni(std::vector<mpq_class> a, std::vector<mpq_class> b) {
  auto trim = [](std::vector<mpq_class>& v) {
    while (v.size() > 1 && v.back() == 0) v.pop_back();
    if (v.size() == 1 && v[0] == 0) v.clear();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    mpq_class lead = b.back();
    for (int k = static_cast<int>(a.size()) - static_cast<int>(b.size()); k >= 0; --k) {
      mpq_class c = a[k + b.size() - 1] / lead;
      if (c == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= c * b[j];
    }
    trim(a);
    std::swap(a, b);
  }
  if (!a.empty()) {
    mpq_class lead = a.back();
    for (mpq_class& c : a) c /= lead;
  }
  return a;  // empty means gcd of (0, 0)
}

}  // namespace

template <Ring R>
std::vector<Scalar> binary_gcd(const Form<R>& a, const Form<R>& b, const TolerancePolicy& policy) {
  (void)policy;
  if (a.nvars() != 2 || b.nvars() != 2) fail(Err::DegreeMismatch, "binary_gcd needs binary forms");
  if (!form_is_rational(a) || !form_is_rational(b))
    fail(Err::DegenerateInput, "binary_gcd is exact-path only");
  // Split off the second-variable multiplicity, then work univariately.
  auto split = [](const auto& f, int& second_mult, std::vector<mpq_class>& uni) {
    int d = f.degree();
    int alpha = 0;
    while (alpha <= d && f[alpha].rat() == 0) ++alpha;
    second_mult = alpha > d ? -1 : alpha;  // -1 marks the zero form
    uni.clear();
    if (second_mult < 0) return;
    for (int k = 0; k <= d - alpha; ++k) uni.push_back(f[d - k].rat());  // coeff of z^k
  };
  int aa, ab;
  std::vector<mpq_class> ua, ub;
  split(a, aa, ua);
  split(b, ab, ub);
  if (aa < 0 && ab < 0) fail(Err::DegenerateInput, "gcd of zero forms");
  std::vector<mpq_class> g;
  int shared;
  if (aa < 0) {
    g = ub;
    shared = ab;
  } else if (ab < 0) {
    g = ua;
    shared = aa;
  } else {
    g = gcd_uni(ua, ub);
    shared = std::min(aa, ab);
  }
  int du = static_cast<int>(g.size()) - 1;
  int deg = du + shared;
  std::vector<Scalar> out(deg + 1, Scalar(0));
  for (int k = 0; k <= du; ++k) out[deg - k] = Scalar(g[k]);
  return out;
}

template std::vector<Scalar> binary_gcd(const Form<Ring::lower>&, const Form<Ring::lower>&,
                                        const TolerancePolicy&);
template std::vector<Scalar> binary_gcd(const Form<Ring::upper>&, const Form<Ring::upper>&,
                                        const TolerancePolicy&);

Catalecticant catalecticant(const HomogeneousForm& f, int delta) {
  if (delta < 0 || delta > f.degree()) fail(Err::DegreeMismatch, "catalecticant degree out of range");
  int nvars = f.nvars();
  int scol = form_dim(nvars, delta);
  int srow = form_dim(nvars, f.degree() - delta);
  Mat m(srow, scol);
  for (int col = 0; col < scol; ++col) {
    DualForm mono(nvars, delta);
    mono[col] = Scalar(1);
    HomogeneousForm image = contract(mono, f);
    for (int row = 0; row < srow; ++row) m.at(row, col) = image[row];
  }
  return Catalecticant{nvars, delta, f.degree() - delta, std::move(m)};
}

std::vector<DualForm> exact_kernel(const Catalecticant& c, const TolerancePolicy& policy) {
  std::vector<DualForm> out;
  for (auto& vec : kernel_basis(c.m, policy)) out.push_back(DualForm(c.nvars, c.source_degree, std::move(vec)));
  return out;
}

namespace {

// Columns spanning h * S^k inside S^(deg h + k).
Mat multiples_matrix(const DualForm& h, int k) {
  int d = h.degree() + k;
  int cols = form_dim(2, k);
  Mat m(form_dim(2, d), cols);
  for (int j = 0; j < cols; ++j) {
    DualForm mono(2, k);
    mono[j] = Scalar(1);
    DualForm prod = multiply(h, mono);
    for (int i = 0; i < prod.dim(); ++i) m.at(i, j) = prod[i];
  }
  return m;
}

bool in_span(const Mat& cols, const std::vector<Scalar>& v, const TolerancePolicy& policy) {
  return solve_consistent(cols, v, policy).has_value();
}

}  // namespace

BinaryApolarIdeal binary_apolar_generators(const HomogeneousForm& f, const TolerancePolicy& policy) {
  if (f.nvars() != 2) fail(Err::DegreeMismatch, "binary form expected");
  if (form_is_zero(f, policy)) fail(Err::ZeroForm, "zero form has no apolar generators");
  int d = f.degree();
  int s = -1;
  DualForm h;
  for (int delta = 1; delta <= d; ++delta) {
    auto ker = exact_kernel(catalecticant(f, delta), policy);
    if (!ker.empty()) {
      s = delta;
      h = ker.front();
      break;
    }
  }
  if (s < 0) fail(Err::ZeroForm, "no apolar generator found (degenerate form)");

  int d2 = d + 2 - s;
  Mat mult = multiples_matrix(h, d + 2 - 2 * s);
  DualForm h2;
  if (d2 > d) {
    // Contraction by degree > d kills everything; any form independent of
    // h*S^(d+2-2s) completes the ideal.
    bool found = false;
    for (int j = 0; j < form_dim(2, d2) && !found; ++j) {
      std::vector<Scalar> e(form_dim(2, d2), Scalar(0));
      e[j] = Scalar(1);
      if (!in_span(mult, e, policy)) {
        h2 = DualForm(2, d2, std::move(e));
        found = true;
      }
    }
    if (!found) fail(Err::ZeroForm, "could not complete the apolar ideal");
  } else {
    auto ker = exact_kernel(catalecticant(f, d2), policy);
    bool found = false;
    for (auto& k : ker) {
      if (!in_span(mult, k.coeffs(), policy)) {
        h2 = k;
        found = true;
        break;
      }
    }
    if (!found) fail(Err::ZeroForm, "apolar ideal is not generated in two degrees");
  }
  return BinaryApolarIdeal{s, std::move(h), std::move(h2)};
}

bool is_squarefree(const DualForm& p, const TolerancePolicy& policy) {
  if (p.nvars() != 2) fail(Err::DegreeMismatch, "binary dual form expected");
  if (form_is_zero(p, policy)) fail(Err::ZeroForm, "zero form");
  int d = p.degree();
  if (d <= 1) return true;
  if (form_is_rational(p)) {
    auto g = binary_gcd(partial_derivative(p, 0), partial_derivative(p, 1), policy);
    return g.size() == 1;
  }
  // Complex path: cluster the roots, including the one at infinity.
  std::vector<Scalar> asc(d + 1);
  for (int i = 0; i <= d; ++i) asc[i] = p[d - i];
  auto roots = univariate_roots(asc, policy);
  int finite = 0;
  for (auto& r : roots) {
    if (r.second > 1) return false;
    finite += r.second;
  }
  return d - finite <= 1;
}

int binary_rank(const HomogeneousForm& f, const TolerancePolicy& policy) {
  auto gens = binary_apolar_generators(f, policy);
  if (is_squarefree(gens.h, policy)) return gens.s;
  return f.degree() + 2 - gens.s;
}

PowerTest is_square(const HomogeneousForm& q, const TolerancePolicy& policy) {
  if (q.nvars() != 2 || q.degree() != 2) fail(Err::DegreeMismatch, "binary quadratic expected");
  bool zero = form_is_zero(q, policy);
  Scalar disc = q[1] * q[1] - Scalar(4) * q[0] * q[2];
  long sc = 2 * scale_exp_of(form_max_abs(q));
  return PowerTest{zero, !zero && is_zero_rel(disc, policy, sc)};
}

PowerTest is_cube(const HomogeneousForm& t, const TolerancePolicy& policy) {
  if (t.nvars() != 2 || t.degree() != 3) fail(Err::DegreeMismatch, "binary cubic expected");
  bool zero = form_is_zero(t, policy);
  // A binary cubic is a cube iff its Hessian vanishes identically.
  HomogeneousForm t00 = partial_derivative(partial_derivative(t, 0), 0);
  HomogeneousForm t01 = partial_derivative(partial_derivative(t, 0), 1);
  HomogeneousForm t11 = partial_derivative(partial_derivative(t, 1), 1);
  HomogeneousForm hess = multiply(t00, t11) - multiply(t01, t01);
  long sc = 2 * scale_exp_of(form_max_abs(t));
  bool flat = true;
  for (int i = 0; i < hess.dim(); ++i)
    if (!is_zero_rel(hess[i], policy, sc)) {
      flat = false;
      break;
    }
  return PowerTest{zero, !zero && flat};
}

std::optional<DualForm> find_kernel_line_in_pencil(const HomogeneousForm& f, const DualForm& y1,
                                                   const DualForm& y2,
                                                   const TolerancePolicy& policy) {
  HomogeneousForm c1 = contract(y1, f);
  HomogeneousForm c2 = contract(y2, f);
  Mat m(c1.dim(), 2);
  for (int i = 0; i < c1.dim(); ++i) {
    m.at(i, 0) = c1[i];
    m.at(i, 1) = c2[i];
  }
  auto ker = kernel_basis(m, policy);
  if (ker.empty()) return std::nullopt;
  DualForm l = ker[0][0] * y1 + ker[0][1] * y2;
  if (form_is_zero(l, policy)) return std::nullopt;
  return l;
}

std::optional<std::pair<HomogeneousForm, HomogeneousForm>> factor_quadratic_exact(
    const HomogeneousForm& q) {
  if (q.nvars() != 2 || q.degree() != 2 || !form_is_rational(q)) return std::nullopt;
  const mpq_class a = q[0].rat(), b = q[1].rat(), c = q[2].rat();
  if (a == 0) {
    if (b == 0 && c == 0) return std::nullopt;
    // q = x1 (b x0 + c x1)
    HomogeneousForm l1 = linear_form<Ring::lower>(2, {Scalar(0), Scalar(1)});
    HomogeneousForm l2 = linear_form<Ring::lower>(2, {Scalar(b), Scalar(c)});
    return std::make_pair(l1, l2);
  }
  mpq_class disc = b * b - 4 * a * c;
  mpq_class root;
  if (!mpq_sqrt_exact(disc, root)) return std::nullopt;
  mpq_class z1 = (-b + root) / (2 * a);
  mpq_class z2 = (-b - root) / (2 * a);
  // q = a (x0 - z1 x1)(x0 - z2 x1)
  HomogeneousForm l1 = linear_form<Ring::lower>(2, {Scalar(a), Scalar(mpq_class(-a * z1))});
  HomogeneousForm l2 = linear_form<Ring::lower>(2, {Scalar(1), Scalar(mpq_class(-z2))});
  return std::make_pair(l1, l2);
}

std::pair<HomogeneousForm, HomogeneousForm> factor_binary_quadratic(const HomogeneousForm& q,
                                                                    const TolerancePolicy& policy) {
  if (q.nvars() != 2 || q.degree() != 2) fail(Err::DegreeMismatch, "binary quadratic expected");
  if (form_is_zero(q, policy)) fail(Err::ZeroForm, "cannot factor the zero quadratic");
  if (auto exact = factor_quadratic_exact(q)) return *exact;

  long sc = scale_exp_of(form_max_abs(q));
  mpfr_prec_t prec = policy.precision_bits;
  Scalar a = q[0], b = q[1], c = q[2];
  if (is_zero_rel(a, policy, sc)) {
    // q = x1 (b x0 + c x1)
    HomogeneousForm l1 = linear_form<Ring::lower>(2, {Scalar(0), Scalar(1)});
    HomogeneousForm l2 = linear_form<Ring::lower>(2, {b, c});
    return {l1, l2};
  }
  BigComplex disc = (b * b - Scalar(4) * a * c).to_complex(prec);
  BigComplex root = disc.sqrt();
  BigComplex two_a = (Scalar(2) * a).to_complex(prec);
  Scalar z1 = Scalar((-b.to_complex(prec) + root) / two_a);
  Scalar z2 = Scalar((-b.to_complex(prec) - root) / two_a);
  HomogeneousForm l1 = linear_form<Ring::lower>(2, {a, -(a * z1)});
  HomogeneousForm l2 = linear_form<Ring::lower>(2, {Scalar(1), -z2});
  return {l1, l2};
}

std::vector<std::pair<std::pair<Scalar, Scalar>, int>> binary_roots(const HomogeneousForm& g,
                                                                    const TolerancePolicy& policy) {
  if (g.nvars() != 2) fail(Err::DegreeMismatch, "binary form expected");
  int d = g.degree();
  std::vector<std::pair<std::pair<Scalar, Scalar>, int>> out;
  int alpha = 0;  // multiplicity of the (1, 0) root: leading x0-coefficients vanishing
  long sc = scale_exp_of(form_max_abs(g));
  while (alpha <= d && is_zero_rel(g[alpha], policy, sc)) ++alpha;
  if (alpha > d) fail(Err::ZeroForm, "zero form has no roots");
  if (alpha > 0) out.push_back({{Scalar(1), Scalar(0)}, alpha});
  int dd = d - alpha;
  if (dd == 0) return out;

  bool rational = form_is_rational(g);
  if (dd == 1) {
    // Residual univariate factor is linear: z = -c1/c0.
    Scalar z = -(g[alpha + 1] / g[alpha]);
    out.push_back({{z, Scalar(1)}, 1});
    return out;
  }
  if (dd == 2 && rational) {
    mpq_class a = g[alpha].rat(), b = g[alpha + 1].rat(), c = g[alpha + 2].rat();
    mpq_class disc = b * b - 4 * a * c, root;
    if (mpq_sqrt_exact(disc, root)) {
      mpq_class z1 = (-b + root) / (2 * a);
      mpq_class z2 = (-b - root) / (2 * a);
      if (z1 == z2) {
        out.push_back({{Scalar(z1), Scalar(1)}, 2});
      } else {
        if (z1 > z2) std::swap(z1, z2);
        out.push_back({{Scalar(z1), Scalar(1)}, 1});
        out.push_back({{Scalar(z2), Scalar(1)}, 1});
      }
      return out;
    }
  }
  std::vector<Scalar> asc(dd + 1);
  for (int k = 0; k <= dd; ++k) asc[k] = g[d - k];  // coeff of z^k where z = x0/x1
  auto roots = univariate_roots(asc, policy);
  for (auto& r : roots) out.push_back({{Scalar(r.first), Scalar(1)}, r.second});
  return out;
}

std::vector<std::pair<HomogeneousForm, int>> dual_root_points(const DualForm& g,
                                                              const TolerancePolicy& policy) {
  // Roots of the polynomial function v -> g(v). Coefficients of g as a
  // function of (v0, v1) coincide with its coefficient vector.
  HomogeneousForm as_poly(2, g.degree(), g.coeffs());
  auto roots = binary_roots(as_poly, policy);
  std::vector<std::pair<HomogeneousForm, int>> out;
  for (auto& r : roots) {
    out.push_back({linear_form<Ring::lower>(2, {r.first.first, r.first.second}), r.second});
  }
  return out;
}

namespace {

// Canonical representative: pivot coordinate scaled to one, coefficient
// absorbing the d-th power of the scale.
void normalize_term(Scalar& c, HomogeneousForm& v, int d) {
  int pv = 0;
  BigFloat best = v[0].abs_approx(64);
  for (int i = 1; i < v.dim(); ++i) {
    BigFloat m = v[i].abs_approx(64);
    if (m.cmp(best) > 0) {
      best = m;
      pv = i;
    }
  }
  Scalar scale = v[pv];
  for (int i = 0; i < v.dim(); ++i) v[i] = v[i] / scale;
  Scalar sp(1);
  for (int i = 0; i < d; ++i) sp = sp * scale;
  c = c * sp;
}

}  // namespace

WaringDecomposition binary_decompose(const HomogeneousForm& f, const TolerancePolicy& policy,
                                     Rng& rng) {
  if (f.nvars() != 2) fail(Err::DegreeMismatch, "binary form expected");
  if (form_is_zero(f, policy)) fail(Err::ZeroForm, "cannot decompose the zero form");
  int d = f.degree();
  auto gens = binary_apolar_generators(f, policy);

  DualForm g;
  if (is_squarefree(gens.h, policy)) {
    g = gens.h;
  } else {
    int k = d + 2 - 2 * gens.s;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      DualForm m(2, k);
      for (int i = 0; i <= k; ++i) m[i] = rng.small_rational();
      DualForm cand = multiply(gens.h, m) + rng.small_rational() * gens.h2;
      if (!form_is_zero(cand, policy) && is_squarefree(cand, policy)) {
        g = cand;
        found = true;
      }
    }
    if (!found) fail(Err::SamplingExhausted, "no squarefree apolar form found in 64 draws");
  }

  auto points = dual_root_points(g, policy);
  std::vector<HomogeneousForm> lines;
  for (auto& p : points) {
    if (p.second != 1) fail(Err::SamplingExhausted, "apolar form has a multiple root");
    // Pivot-normalized representatives keep the power columns balanced.
    HomogeneousForm v = p.first;
    Scalar unit(1);
    normalize_term(unit, v, 0);
    lines.push_back(v);
  }

  int r = static_cast<int>(lines.size());
  Mat m(d + 1, r);
  std::vector<Scalar> rhs(d + 1);
  for (int j = 0; j < r; ++j) {
    HomogeneousForm pw = power(lines[j], d);
    for (int i = 0; i <= d; ++i) m.at(i, j) = pw[i];
  }
  for (int i = 0; i <= d; ++i) rhs[i] = f[i];

  std::vector<Scalar> coeff;
  bool exact = m.rational();
  for (const Scalar& s : rhs) exact = exact && s.is_rational();
  if (exact) {
    auto sol = solve_consistent(m, rhs, policy);
    if (!sol) fail(Err::IdentityFailure, "exact coefficient solve is inconsistent");
    coeff = *sol;
  } else {
    coeff = solve_least_squares(m, rhs, policy).first;
  }

  WaringDecomposition dec;
  dec.target_degree = d;
  long f_exp = scale_exp_of(form_max_abs(f));
  for (int j = 0; j < r; ++j) {
    // A term only matters if its contribution clears the threshold at the
    // scale of f; the normalized lines make |c| the right proxy.
    if (is_zero_rel(coeff[j], policy, f_exp - 6)) continue;
    dec.terms.push_back({coeff[j], lines[j]});
  }
  dec.residual = verify_decomposition(f, dec, policy);
  return dec;
}

BigFloat verify_decomposition(const HomogeneousForm& f, const WaringDecomposition& dec,
                              const TolerancePolicy& policy) {
  mpfr_prec_t prec = policy.precision_bits;
  HomogeneousForm acc(f.nvars(), f.degree());
  for (const auto& [c, v] : dec.terms) acc = acc + c * power(v, f.degree());
  HomogeneousForm diff = f - acc;
  BigFloat num = form_max_abs(diff, prec);
  BigFloat den = form_max_abs(f, prec);
  if (den.is_exact_zero()) return num;
  return num / den;
}

}  // namespace waring
