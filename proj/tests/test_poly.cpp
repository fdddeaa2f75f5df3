#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "waring/linalg.hpp"
#include "waring/poly.hpp"
#include "waring/textio.hpp"

using namespace waring;

namespace {

template <Ring R>
Form<R> random_form(Rng& rng, int nvars, int deg, long bound = 9) {
  Form<R> f(nvars, deg);
  for (int i = 0; i < f.dim(); ++i) f[i] = Scalar(rng.uniform(-bound, bound));
  return f;
}

// Substitution oracle for dual evaluation: sum of p_mu * prod v_i^mu_i.
Scalar substitution_oracle(const DualForm& p, const HomogeneousForm& v) {
  Scalar acc(0);
  for (int i = 0; i < p.dim(); ++i) {
    auto mu = monomial_exponents(p.nvars(), p.degree(), i);
    Scalar term = p[i];
    for (int var = 0; var < p.nvars(); ++var)
      for (int k = 0; k < mu[var]; ++k) term = term * v[var];
    acc += term;
  }
  return acc;
}

bool forms_equal(const HomogeneousForm& a, const HomogeneousForm& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (!a[i].exact_eq(b[i])) return false;
  return true;
}

bool pf_equal(const ParamForm& a, const ParamForm& b) {
  if (a.t_degree() != b.t_degree()) return false;
  for (int j = 0; j <= a.t_degree(); ++j)
    if (!forms_equal(a.row(j), b.row(j))) return false;
  return true;
}

ParamForm random_pf(Rng& rng, int tdeg, int nvars, int sdeg) {
  ParamForm f(tdeg, nvars, sdeg);
  for (int j = 0; j <= tdeg; ++j) f.row(j) = random_form<Ring::lower>(rng, nvars, sdeg);
  return f;
}

}  // namespace

TEST_CASE("single partial derivative") {
  // x^0 -| (x0^2 x1) = 2 x0 x1
  HomogeneousForm f(3, 3);
  f.at(2, 1) = Scalar(1);
  DualForm p = linear_form<Ring::upper>(3, {Scalar(1), Scalar(0), Scalar(0)});
  HomogeneousForm r = contract(p, f);
  HomogeneousForm expect(3, 2);
  expect.at(1, 1) = Scalar(2);
  CHECK(forms_equal(r, expect));
}

TEST_CASE("mixed partial") {
  // (x^0 x^1) -| (x0^2 x1^2) = 4 x0 x1
  HomogeneousForm f(2, 4);
  f.at(2, 2) = Scalar(1);
  DualForm p(2, 2);
  p.at(1, 1) = Scalar(1);
  HomogeneousForm r = contract(p, f);
  HomogeneousForm expect(2, 2);
  expect.at(1, 1) = Scalar(4);
  CHECK(forms_equal(r, expect));
}

TEST_CASE("contraction is multiplicative: contract(pq, f) = contract(p, contract(q, f))") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    for (int nvars : {2, 3}) {
      DualForm p = random_form<Ring::upper>(rng, nvars, 1 + static_cast<int>(rng.next() % 2));
      DualForm q = random_form<Ring::upper>(rng, nvars, 1 + static_cast<int>(rng.next() % 2));
      int d = p.degree() + q.degree() + 1 + static_cast<int>(rng.next() % 2);
      HomogeneousForm f = random_form<Ring::lower>(rng, nvars, d);
      CHECK(forms_equal(contract(multiply(p, q), f), contract(p, contract(q, f))));
    }
  }
}

TEST_CASE("contraction bilinearity") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    DualForm p = random_form<Ring::upper>(rng, 3, 2);
    DualForm q = random_form<Ring::upper>(rng, 3, 2);
    HomogeneousForm f = random_form<Ring::lower>(rng, 3, 5);
    HomogeneousForm g = random_form<Ring::lower>(rng, 3, 5);
    CHECK(forms_equal(contract(p + q, f), contract(p, f) + contract(q, f)));
    CHECK(forms_equal(contract(p, f + g), contract(p, f) + contract(p, g)));
  }
}

TEST_CASE("coordinate contractions commute") {
  Rng rng(13);
  HomogeneousForm f = random_form<Ring::lower>(rng, 3, 5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      DualForm xi(3, 1), xj(3, 1);
      xi[i] = Scalar(1);
      xj[j] = Scalar(1);
      CHECK(forms_equal(contract(xi, contract(xj, f)), contract(xj, contract(xi, f))));
    }
}

TEST_CASE("dual evaluation shortcut") {
  // p = x^0 x^1, v = 2x0 + 3x1 -> 6
  DualForm p(2, 2);
  p.at(1, 1) = Scalar(1);
  HomogeneousForm v = linear_form<Ring::lower>(2, {Scalar(2), Scalar(3)});
  CHECK(evaluate_dual(p, v).exact_eq(Scalar(6)));

  // (x^0)^d at x1 -> 0
  DualForm pd(2, 4);
  pd.at(4, 0) = Scalar(1);
  HomogeneousForm x1 = linear_form<Ring::lower>(2, {Scalar(0), Scalar(1)});
  CHECK(evaluate_dual(pd, x1).exact_eq(Scalar(0)));
}

TEST_CASE("dual evaluation equals substitution oracle") {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    for (int nvars : {2, 3}) {
      int d = 1 + static_cast<int>(rng.next() % 4);
      DualForm p = random_form<Ring::upper>(rng, nvars, d);
      HomogeneousForm v = random_form<Ring::lower>(rng, nvars, 1);
      CHECK(evaluate_dual(p, v).exact_eq(substitution_oracle(p, v)));
    }
  }
}

TEST_CASE("power duality: p -| v^d = d! p(v)") {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 1 + static_cast<int>(rng.next() % 4);
    DualForm p = random_form<Ring::upper>(rng, 3, d);
    HomogeneousForm v = random_form<Ring::lower>(rng, 3, 1);
    long fact = 1;
    for (int i = 2; i <= d; ++i) fact *= i;
    Scalar lhs = contract(p, power(v, d)).value();
    CHECK(lhs.exact_eq(Scalar(fact) * evaluate_dual(p, v)));
  }
}

TEST_CASE("power expansion basics") {
  HomogeneousForm x0 = linear_form<Ring::lower>(2, {Scalar(1), Scalar(0)});
  HomogeneousForm p5 = power(x0, 5);
  CHECK(p5.at(5, 0).exact_eq(Scalar(1)));
  HomogeneousForm s = linear_form<Ring::lower>(2, {Scalar(1), Scalar(1)});
  HomogeneousForm s2 = power(s, 2);
  CHECK(s2.at(2, 0).exact_eq(Scalar(1)));
  CHECK(s2.at(1, 1).exact_eq(Scalar(2)));
  CHECK(s2.at(0, 2).exact_eq(Scalar(1)));
}

TEST_CASE("d+1 powers of distinct binary lines are independent") {
  TolerancePolicy policy(256);
  for (int d : {2, 3, 4, 5}) {
    Mat m(d + 1, d + 1);
    for (int j = 0; j <= d; ++j) {
      // lines (1, j) are pairwise non-proportional
      HomogeneousForm v = linear_form<Ring::lower>(2, {Scalar(1), Scalar(j)});
      HomogeneousForm p = power(v, d);
      for (int i = 0; i <= d; ++i) m.at(i, j) = p[i];
    }
    CHECK(mat_rank(m, policy) == d + 1);
  }
}

TEST_CASE("param contraction is t-linear") {
  Rng rng(16);
  TolerancePolicy policy(256);
  HomogeneousForm f = random_form<Ring::lower>(rng, 3, 4);
  DualForm p = random_form<Ring::upper>(rng, 3, 2);
  // F = t0 * f
  ParamForm F(1, 3, 4);
  F.row(0) = f;
  ParamForm c = param_contract(p, F);
  CHECK(forms_equal(c.row(0), contract(p, f)));
  CHECK(form_is_zero(c.row(1), policy));
}

TEST_CASE("param contraction kills kernel-built grids") {
  TolerancePolicy policy(256);
  ParamForm F(2, 2, 3);
  for (int j = 0; j <= 2; ++j) F.row(j).at(0, 3) = Scalar(j + 1);
  DualForm x0 = linear_form<Ring::upper>(2, {Scalar(1), Scalar(0)});
  CHECK(param_contract(x0, F).is_zero_poly(policy));
}

TEST_CASE("param evaluation basics") {
  TolerancePolicy policy(256);
  ParamForm F(1, 2, 5);
  F.row(0).at(5, 0) = Scalar(1);  // t0 * x0^5
  F.row(1).at(0, 5) = Scalar(1);  // t1 * x1^5
  HomogeneousForm at10 = param_evaluate(F, Scalar(1), Scalar(0));
  CHECK(at10.at(5, 0).exact_eq(Scalar(1)));
  CHECK(at10.at(0, 5).exact_eq(Scalar(0)));
  CHECK(form_is_zero(param_evaluate(F, Scalar(0), Scalar(0)), policy));
}

TEST_CASE("evaluation commutes with param contraction") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    ParamForm F = random_pf(rng, 3, 3, 4);
    DualForm p = random_form<Ring::upper>(rng, 3, 2);
    Scalar lam = rng.small_rational(), mu = rng.small_rational();
    HomogeneousForm a = param_evaluate(param_contract(p, F), lam, mu);
    HomogeneousForm b = contract(p, param_evaluate(F, lam, mu));
    CHECK(forms_equal(a, b));
  }
}

TEST_CASE("param substitution: identity, inverse, multiplicativity") {
  Rng rng(18);
  TolerancePolicy policy(256);
  std::array<Scalar, 4> id = {Scalar(1), Scalar(0), Scalar(0), Scalar(1)};
  for (int trial = 0; trial < 15; ++trial) {
    ParamForm F = random_pf(rng, 3, 2, 3);
    CHECK(pf_equal(param_substitute(F, id, policy), F));

    Scalar a = rng.small_rational(), b = Scalar(rng.uniform(-9, 9));
    Scalar c = Scalar(rng.uniform(-9, 9)), d = rng.small_rational();
    Scalar det = a * d - b * c;
    if (is_zero(det, policy)) continue;
    std::array<Scalar, 4> m = {a, b, c, d};
    std::array<Scalar, 4> minv = {d / det, -(b / det), -(c / det), a / det};
    CHECK(pf_equal(param_substitute(param_substitute(F, m, policy), minv, policy), F));

    ParamForm G = random_pf(rng, 2, 2, 2);
    ParamForm lhs = param_substitute(pf_multiply(F, G), m, policy);
    ParamForm rhs = pf_multiply(param_substitute(F, m, policy), param_substitute(G, m, policy));
    CHECK(pf_equal(lhs, rhs));
  }
  std::array<Scalar, 4> sing = {Scalar(1), Scalar(2), Scalar(2), Scalar(4)};
  ParamForm F = random_pf(rng, 1, 2, 1);
  CHECK_THROWS_AS(param_substitute(F, sing, policy), Error);
}

TEST_CASE("param exact division") {
  Rng rng(19);
  TolerancePolicy policy(256);
  ParamForm G = random_pf(rng, 2, 3, 3);
  ParamScalar t0t1 = ParamScalar::t0() * ParamScalar::t1();
  ParamForm prod = t0t1 * G;
  CHECK(pf_equal(param_exact_divide(prod, t0t1, policy), G));

  // t0 * x0 is not divisible by t1
  ParamForm bad(1, 2, 1);
  bad.row(0) = linear_form<Ring::lower>(2, {Scalar(1), Scalar(0)});
  CHECK_THROWS_AS(param_exact_divide(bad, ParamScalar::t1(), policy), Error);
}

TEST_CASE("restriction to a line and back") {
  TolerancePolicy policy(256);
  // f = x0^5 lies in the kernel of x^2.
  HomogeneousForm f(3, 5);
  f.at(5, 0) = Scalar(1);
  DualForm l = linear_form<Ring::upper>(3, {Scalar(0), Scalar(0), Scalar(1)});
  auto [g, basis] = restrict_to_line(f, l, policy);
  CHECK(g.degree() == 5);
  CHECK(g.at(5, 0).exact_eq(Scalar(1)));
  CHECK(forms_equal(basis.embed_form(g), f));

  // f = x2^5 is not killed by x^2.
  HomogeneousForm h(3, 5);
  h[monomial_index(3, 5, 0, 0)] = Scalar(1);  // x2^5
  CHECK_THROWS_AS(restrict_to_line(h, l, policy), Error);
}

TEST_CASE("embed then restrict round-trips on seeded kernels") {
  Rng rng(20);
  TolerancePolicy policy(256);
  for (int trial = 0; trial < 50; ++trial) {
    DualForm l = random_form<Ring::upper>(rng, 3, 1);
    if (form_is_zero(l, policy)) continue;
    LineBasis basis = line_basis(l, policy);
    HomogeneousForm g = random_form<Ring::lower>(rng, 2, 5);
    HomogeneousForm f = basis.embed_form(g);
    CHECK(form_is_zero(contract(l, f), policy));
    CHECK(forms_equal(basis.restrict_form(f, policy), g));
  }
}

TEST_CASE("reduced duals act like restricted operators") {
  Rng rng(21);
  TolerancePolicy policy(256);
  for (int trial = 0; trial < 30; ++trial) {
    DualForm l = random_form<Ring::upper>(rng, 3, 1);
    if (form_is_zero(l, policy)) continue;
    LineBasis basis = line_basis(l, policy);
    HomogeneousForm g = random_form<Ring::lower>(rng, 2, 4 + static_cast<int>(rng.next() % 2));
    HomogeneousForm f = basis.embed_form(g);
    DualForm y = random_form<Ring::upper>(rng, 3, 1 + static_cast<int>(rng.next() % 2));
    HomogeneousForm direct = contract(y, f);
    HomogeneousForm via_binary = basis.embed_form(contract(basis.reduce_dual(y), g));
    CHECK(forms_equal(direct, via_binary));
  }
}

TEST_CASE("text round trip is bitwise on rational forms") {
  Rng rng(22);
  TolerancePolicy policy(256);
  for (int trial = 0; trial < 30; ++trial) {
    int nvars = trial % 2 == 0 ? 2 : 3;
    int deg = 1 + static_cast<int>(rng.next() % 5);
    HomogeneousForm f(nvars, deg);
    for (int i = 0; i < f.dim(); ++i) {
      long num = rng.uniform(-99, 99);
      long den = 1 + static_cast<long>(rng.next() % 9);
      f[i] = Scalar(num, den);
    }
    std::string text = emit_form(f);
    HomogeneousForm g = parse_form(text, policy);
    CHECK(forms_equal(f, g));
    CHECK(emit_form(g) == text);
  }
}

TEST_CASE("parse errors") {
  TolerancePolicy policy(256);
  CHECK_THROWS_AS(parse_form("vars=3 deg=5\n1 1 1 = 1\n", policy), Error);  // bad exponent sum
  CHECK_THROWS_AS(parse_form("vars=4 deg=2\n", policy), Error);
  CHECK_THROWS_AS(parse_form("5 0 0 = 1\n", policy), Error);
}
