#include "waring/ranklocus.hpp"

namespace waring {

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// (t0 x0 + sign t1 x1)^d as a ParamForm.
ParamForm binomial_power(const HomogeneousForm& x0, const HomogeneousForm& x1, int d, int sign) {
  ParamForm out(d, x0.nvars(), d);
  for (int k = 0; k <= d; ++k) {
    Scalar c(binomial(d, k) * (sign < 0 && k % 2 == 1 ? -1 : 1));
    out.row(k) = c * multiply(power(x0, d - k), power(x1, k));
  }
  return out;
}

}  // namespace

ParamForm pf_square_substitute(const ParamForm& f) {
  int d = f.t_degree();
  ParamForm out(2 * d, f.nvars(), f.s_degree());
  for (int j = 0; j <= d; ++j) out.row(2 * j) = f.row(j);
  return out;
}

RankTwoPencil build_r(const std::vector<DualForm>& factors, const HomogeneousForm& x0,
                      const HomogeneousForm& x1, const TolerancePolicy& policy) {
  if (factors.empty()) fail(Err::DegenerateInput, "need at least one factor (d >= 3)");
  int d = static_cast<int>(factors.size()) + 2;
  for (const DualForm& l : factors)
    if (l.nvars() != 2 || l.degree() != 1 || form_is_zero(l, policy))
      fail(Err::DegenerateInput, "factors must be nonzero binary dual lines");
  if (x0.nvars() != 2 || x0.degree() != 1 || x1.nvars() != 2 || x1.degree() != 1)
    fail(Err::DegenerateInput, "x0, x1 must be binary linear forms");
  if (form_is_zero(x0, policy) || form_is_zero(x1, policy) || proportional(x0, x1, policy))
    fail(Err::SquareQ, "q = x0 x1 must not be a square");

  RankTwoPencil pencil;
  pencil.d = d;
  pencil.factors = factors;
  pencil.x0 = x0;
  pencil.x1 = x1;
  pencil.q = multiply(x0, x1);
  pencil.p = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) pencil.p = multiply(pencil.p, factors[i]);

  // Coordinates of t0 x0 +/- t1 x1 as parameter-valued linear forms.
  ParamScalar plus0 = ParamScalar::linear(x0[0], x1[0]);
  ParamScalar plus1 = ParamScalar::linear(x0[1], x1[1]);
  ParamScalar minus0 = ParamScalar::linear(x0[0], -x1[0]);
  ParamScalar minus1 = ParamScalar::linear(x0[1], -x1[1]);

  ParamScalar p_plus = evaluate_binary_at_param(pencil.p, plus0, plus1);
  ParamScalar p_minus = evaluate_binary_at_param(pencil.p, minus0, minus1);
  ParamForm pow_plus = binomial_power(x0, x1, d, +1);
  ParamForm pow_minus = binomial_power(x0, x1, d, -1);

  ParamForm g = p_minus * pow_plus - p_plus * pow_minus;

  ParamForm h;
  try {
    h = param_exact_divide(g, ParamScalar::t0() * ParamScalar::t1(), policy);
  } catch (const Error&) {
    fail(Err::InternalIdentityFailure, "g is not divisible by t0 t1");
  }
  // Only even t-powers survive; halving them defines r.
  ParamForm r(d - 2, 2, d);
  for (int j = 0; j <= h.t_degree(); ++j) {
    if (j % 2 == 1) {
      if (!form_is_zero(h.row(j), policy))
        fail(Err::InternalIdentityFailure, "odd t-power survived in g / (t0 t1)");
    } else {
      r.row(j / 2) = h.row(j);
    }
  }
  pencil.r = std::move(r);

  for (const DualForm& l : factors) {
    Scalar l_x0 = pair_linear(l, x0);
    Scalar l_x1 = pair_linear(l, x1);
    pencil.a.push_back(ParamScalar::linear(l_x0 * l_x0, -(l_x1 * l_x1)));
    pencil.roots.push_back({l_x1 * l_x1, l_x0 * l_x0});
    pencil.v.push_back(l_x1 * x0 - l_x0 * x1);
  }
  return pencil;
}

ParamForm r_quotient(const RankTwoPencil& pencil, const std::vector<int>& subset,
                     const TolerancePolicy& policy) {
  if (subset.empty()) return pencil.r;
  DualForm prod = pencil.factors[subset[0]];
  ParamScalar denom = pencil.a[subset[0]];
  for (std::size_t k = 1; k < subset.size(); ++k) {
    prod = multiply(prod, pencil.factors[subset[k]]);
    denom = denom * pencil.a[subset[k]];
  }
  ParamForm num = param_contract(prod, pencil.r);
  try {
    return param_exact_divide(num, denom, policy);
  } catch (const Error&) {
    fail(Err::NotDivisible, "a_I does not divide (prod l^i) -| r; arithmetic bug");
  }
}

bool exceptional_parameter(const RankTwoPencil& pencil, const Scalar& lam, const Scalar& mu,
                           const TolerancePolicy& policy) {
  if (is_zero(lam, policy) || is_zero(mu, policy)) return true;
  for (const auto& [li, mi] : pencil.roots) {
    if (is_zero(lam * mi - mu * li, policy)) return true;
  }
  return false;
}

HomogeneousForm sample_rank_two(const RankTwoPencil& pencil, const Scalar& lam, const Scalar& mu,
                                const TolerancePolicy& policy) {
  if (exceptional_parameter(pencil, lam, mu, policy))
    fail(Err::ExceptionalParameter, "parameter lies in the exceptional set X");
  return param_evaluate(pencil.r, lam, mu);
}

HomogeneousForm rank3_element(const DualForm& p, const HomogeneousForm& t,
                              const TolerancePolicy& policy, Rng& rng) {
  if (p.nvars() != 2 || p.degree() != 2) fail(Err::DegreeMismatch, "p must be a binary dual quadratic");
  if (t.nvars() != 2 || t.degree() != 3) fail(Err::DegreeMismatch, "t must be a binary cubic");
  PowerTest cube = is_cube(t, policy);
  if (cube.zero) fail(Err::ZeroForm, "t is zero");
  if (cube.yes) fail(Err::CubeInput, "t is a cube");

  auto annihilator = exact_kernel(catalecticant(t, 3), policy);  // Ker t_{3,0}, dim 3
  if (annihilator.size() != 3) fail(Err::InternalIdentityFailure, "Ker t_{3,0} should be 3-dimensional");
  auto q_kernel = exact_kernel(catalecticant(t, 2), policy);  // Ker t_{2,1} = <q>
  if (q_kernel.size() != 1) fail(Err::InternalIdentityFailure, "Ker t_{2,1} should be a line");
  const DualForm& q = q_kernel[0];

  for (int attempt = 0; attempt < 64; ++attempt) {
    DualForm cubic(2, 3);
    for (const DualForm& b : annihilator) {
      Scalar c(rng.uniform(-9, 9));
      cubic = cubic + c * b;
    }
    if (form_is_zero(cubic, policy)) continue;

    std::vector<std::pair<HomogeneousForm, int>> pts;
    try {
      pts = dual_root_points(cubic, policy);
    } catch (const Error&) {
      continue;
    }
    if (pts.size() != 3) continue;
    bool good = true;
    for (auto& [vi, mult] : pts) {
      if (mult != 1 || is_zero(evaluate_dual(p, vi), policy) ||
          is_zero(evaluate_dual(q, vi), policy)) {
        good = false;
        break;
      }
    }
    if (!good) continue;

    // W_{p,t} cap Ker(d_{x1x2x3}): three equations from the cubic contraction
    // and one per basis element u of Ker t_{3,0} via (u p) -| g = 0.
    Mat m(6, 6);
    for (int col = 0; col < 6; ++col) {
      HomogeneousForm basis(2, 5);
      basis[col] = Scalar(1);
      HomogeneousForm c1 = contract(cubic, basis);
      for (int row = 0; row < 3; ++row) m.at(row, col) = c1[row];
      for (int k = 0; k < 3; ++k) {
        DualForm up = multiply(annihilator[k], p);
        m.at(3 + k, col) = contract(up, basis).value();
      }
    }
    auto kernel = kernel_basis(m, policy);
    if (kernel.size() != 1) continue;
    HomogeneousForm g(2, 5, kernel[0]);

    HomogeneousForm pg = contract(p, g);
    if (form_is_zero(pg, policy) || !proportional(pg, t, policy)) continue;
    if (binary_rank(g, policy) != 3) continue;
    return g;
  }
  fail(Err::SearchExhausted, "no rank-3 element found in 64 seeded draws");
}

}  // namespace waring
