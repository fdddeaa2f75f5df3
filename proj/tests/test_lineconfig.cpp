#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "waring/lineconfig.hpp"
#include "waring/linalg.hpp"

using namespace waring;

namespace {

DualForm dline(long a, long b, long c) {
  return linear_form<Ring::upper>(3, {Scalar(a), Scalar(b), Scalar(c)});
}

HomogeneousForm ternary_monomial(int a, int b, int c) {
  HomogeneousForm f(3, a + b + c);
  f[monomial_index(3, a + b + c, a, b)] = Scalar(1);
  return f;
}

HomogeneousForm random_quintic(Rng& rng) {
  HomogeneousForm f(3, 5);
  for (int i = 0; i < f.dim(); ++i) f[i] = Scalar(rng.uniform(-10, 10));
  return f;
}

// Rational quintic with a planted rational apolar quartic l1 l2 l3 l4.
HomogeneousForm planted_quintic(const std::vector<DualForm>& lines, Rng& rng,
                                const TolerancePolicy& policy) {
  DualForm prod = lines[0];
  for (std::size_t i = 1; i < lines.size(); ++i) prod = multiply(prod, lines[i]);
  Mat m(3, 21);
  for (int col = 0; col < 21; ++col) {
    HomogeneousForm mono(3, 5);
    mono[col] = Scalar(1);
    HomogeneousForm img = contract(prod, mono);
    for (int row = 0; row < 3; ++row) m.at(row, col) = img[row];
  }
  auto kernel = kernel_basis(m, policy);
  HomogeneousForm f(3, 5);
  for (auto& vec : kernel) f = f + Scalar(rng.uniform(-5, 5)) * HomogeneousForm(3, 5, vec);
  return f;
}

}  // namespace

TEST_CASE("ternary square recognition") {
  TolerancePolicy policy(256);
  HomogeneousForm v = linear_form<Ring::lower>(3, {Scalar(1), Scalar(-2), Scalar(3)});
  CHECK(ternary_quadratic_square(multiply(v, v), policy).yes);
  HomogeneousForm w = linear_form<Ring::lower>(3, {Scalar(0), Scalar(1), Scalar(1)});
  CHECK(!ternary_quadratic_square(multiply(v, w), policy).yes);
  CHECK(ternary_quadratic_square(HomogeneousForm(3, 2), policy).zero);
}

TEST_CASE("conic factoring") {
  TolerancePolicy policy(256);
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    DualForm l1 = dline(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9));
    DualForm l2 = dline(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9));
    if (form_is_zero(l1, policy) || form_is_zero(l2, policy)) continue;
    auto split = factor_conic(multiply(l1, l2), policy);
    REQUIRE(split.has_value());
    bool straight =
        proportional(split->first, l1, policy) && proportional(split->second, l2, policy);
    bool crossed =
        proportional(split->first, l2, policy) && proportional(split->second, l1, policy);
    CHECK((straight || crossed));
  }
  // Irreducible conic: (x^0)^2 + x^1 x^2 has full rank.
  DualForm irr(3, 2);
  irr[monomial_index(3, 2, 2, 0)] = Scalar(1);
  irr[monomial_index(3, 2, 0, 1)] = Scalar(1);
  CHECK(!factor_conic(irr, policy).has_value());
}

TEST_CASE("sum of three fifth powers gives a two-line configuration") {
  TolerancePolicy policy(256);
  Rng rng(62);
  HomogeneousForm f =
      ternary_monomial(5, 0, 0) + ternary_monomial(0, 5, 0) + ternary_monomial(0, 0, 5);
  QuarticSearch qs = find_apolar_split_quartic(f, policy, rng);
  CHECK(qs.outcome == QuarticSearch::Outcome::kind2);
  LineConfiguration cfg{2, qs.lines};
  CHECK(certify_configuration(f, cfg, policy));
}

TEST_CASE("single power exits early with a two-line configuration") {
  TolerancePolicy policy(256);
  Rng rng(63);
  HomogeneousForm f = ternary_monomial(0, 0, 5);  // x2^5
  QuarticSearch qs = find_apolar_split_quartic(f, policy, rng);
  CHECK(qs.outcome == QuarticSearch::Outcome::kind2);
  CHECK(certify_configuration(f, LineConfiguration{2, qs.lines}, policy));
}

TEST_CASE("random rational quintics get a genuine apolar quartic") {
  TolerancePolicy policy(256);
  Rng rng(64);
  for (int trial = 0; trial < 5; ++trial) {
    HomogeneousForm f = random_quintic(rng);
    QuarticSearch qs = find_apolar_split_quartic(f, policy, rng);
    REQUIRE(qs.outcome == QuarticSearch::Outcome::kind4);
    DualForm prod = qs.lines[0];
    for (int i = 1; i < 4; ++i) prod = multiply(prod, qs.lines[i]);
    HomogeneousForm check = contract(prod, f);
    long sc = scale_exp_of(form_max_abs(f)) + 8;
    for (int i = 0; i < check.dim(); ++i) CHECK(is_zero_rel(check[i], policy, sc));
  }
}

TEST_CASE("recap tangent lines on an engineered kernel form") {
  TolerancePolicy policy(256);
  Rng rng(65);
  DualForm x = dline(0, 0, 1);
  DualForm l1 = dline(1, 0, -1);
  DualForm l2 = dline(0, 1, 2);
  DualForm l3 = dline(1, 1, 0);
  DualForm p = multiply(multiply(l1, l2), l3);
  // Quartic f with x^2 -| f = 0 and p -| f = 0.
  Mat m(9, 15);
  for (int col = 0; col < 15; ++col) {
    HomogeneousForm mono(3, 4);
    mono[col] = Scalar(1);
    HomogeneousForm a = contract(multiply(x, x), mono);
    HomogeneousForm b = contract(p, mono);
    for (int row = 0; row < 6; ++row) m.at(row, col) = a[row];
    for (int row = 0; row < 3; ++row) m.at(6 + row, col) = b[row];
  }
  auto kernel = kernel_basis(m, policy);
  REQUIRE(!kernel.empty());
  HomogeneousForm f(3, 4);
  for (auto& vec : kernel) f = f + Scalar(rng.uniform(-5, 5)) * HomogeneousForm(3, 4, vec);
  REQUIRE(!form_is_zero(f, policy));

  auto tangents = recap_tangent_lines(f, x, p, policy);
  REQUIRE(tangents.size() == 3);
  DualForm prod = multiply(multiply(tangents[0], tangents[1]), tangents[2]);
  CHECK(form_is_zero(contract(prod, f), policy));
}

TEST_CASE("recap rejects multiple intersection points") {
  TolerancePolicy policy(256);
  DualForm x = dline(0, 0, 1);
  DualForm l1 = dline(1, 0, -1);
  DualForm p = multiply(l1, l1);  // double root on the line x = 0
  HomogeneousForm f(3, 2);        // zero form satisfies both kernel conditions
  CHECK_THROWS_AS(recap_tangent_lines(f, x, p, policy), Error);
}

TEST_CASE("refine_configuration certifies seeded random quintics") {
  TolerancePolicy policy(256);
  Rng rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    HomogeneousForm f = random_quintic(rng);
    if (form_is_zero(f, policy)) continue;
    RefineResult res = refine_configuration(f, policy, rng);
    CHECK(certify_configuration(f, res.config, policy));
    CHECK(res.retries <= 16);
  }
}

TEST_CASE("refine_configuration on degenerate monomials") {
  TolerancePolicy policy(256);
  struct CaseDef {
    int a, b, c;
  };
  for (CaseDef m : {CaseDef{5, 0, 0}, CaseDef{4, 1, 0}, CaseDef{3, 2, 0}, CaseDef{1, 2, 2},
                    CaseDef{2, 2, 1}, CaseDef{3, 1, 1}}) {
    Rng rng(67);
    HomogeneousForm f = ternary_monomial(m.a, m.b, m.c);
    RefineResult res = refine_configuration(f, policy, rng);
    CHECK(certify_configuration(f, res.config, policy));
  }
}

TEST_CASE("refine_configuration determinism") {
  TolerancePolicy policy(256);
  Rng rng1(123);
  HomogeneousForm f = planted_quintic(
      {dline(1, 0, 0), dline(0, 1, 0), dline(0, 0, 1), dline(1, 1, 1)}, rng1, policy);
  Rng s1(99), s2(99);
  RefineResult a = refine_configuration(f, policy, s1);
  RefineResult b = refine_configuration(f, policy, s2);
  REQUIRE(a.config.kind == b.config.kind);
  for (std::size_t i = 0; i < a.config.lines.size(); ++i)
    for (int j = 0; j < 3; ++j) CHECK(a.config.lines[i][j].exact_eq(b.config.lines[i][j]));
}

TEST_CASE("planted rational quartic is found and certified") {
  TolerancePolicy policy(256);
  Rng rng(68);
  std::vector<DualForm> planted = {dline(1, 0, 0), dline(0, 1, 0), dline(1, 1, 1),
                                   dline(1, -1, 2)};
  HomogeneousForm f = planted_quintic(planted, rng, policy);
  REQUIRE(!form_is_zero(f, policy));
  RefineResult res = refine_configuration(f, policy, rng);
  CHECK(certify_configuration(f, res.config, policy));
}

TEST_CASE("bad-set formulas satisfy the contraction relations") {
  TolerancePolicy policy(256);
  HomogeneousForm q(2, 2);
  q.at(1, 1) = Scalar(1);
  DualForm x1 = linear_form<Ring::upper>(2, {Scalar(2), Scalar(1)});
  DualForm x2 = linear_form<Ring::upper>(2, {Scalar(1), Scalar(-3)});
  DualForm x3 = linear_form<Ring::upper>(2, {Scalar(1), Scalar(1)});
  LrBadSet bad = compute_lr_bad_set(q, x1, x2, x3, policy);
  CHECK(!bad.q_is_square);
  CHECK(bad.bad.size() == 6);
  CHECK(proportional(contract(x1, bad.v1), q, policy));
  CHECK(proportional(contract(x2, bad.v2), q, policy));
  CHECK(proportional(contract(x1, bad.vhk[0]), q, policy));
  CHECK(proportional(contract(x1, bad.vhk[1]), q, policy));
  CHECK(proportional(contract(x2, bad.vhk[2]), q, policy));
  CHECK(proportional(contract(x2, bad.vhk[3]), q, policy));

  // Square q collapses the bad set to the cube of the root.
  HomogeneousForm qs = power(linear_form<Ring::lower>(2, {Scalar(1), Scalar(2)}), 2);
  LrBadSet bs = compute_lr_bad_set(qs, x1, x2, x3, policy);
  CHECK(bs.q_is_square);
  REQUIRE(bs.bad.size() == 1);
  CHECK(proportional(bs.bad[0], power(linear_form<Ring::lower>(2, {Scalar(1), Scalar(2)}), 3),
                     policy));

  // Degenerate pairing x^3(x_0) = 0 still evaluates.
  DualForm x3d = linear_form<Ring::upper>(2, {Scalar(0), Scalar(1)});
  LrBadSet bd = compute_lr_bad_set(q, x1, x2, x3d, policy);
  CHECK(proportional(bd.u0, bd.u1, policy));
}
