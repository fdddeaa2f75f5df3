#pragma once

// Acceptance suite shared by the ctest binary and the CLI selftest command.
// Each criterion prints a single PASS/FAIL line.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "waring/decompose.hpp"
#include "waring/textio.hpp"

namespace waring::acceptance {

struct Outcome {
  int passed = 0;
  int failed = 0;
};

inline void report(Outcome& out, std::ostream& os, int index, const std::string& name, bool ok,
                   const std::string& detail) {
  os << (ok ? "PASS" : "FAIL") << " criterion " << index << " (" << name << "): " << detail
     << "\n";
  (ok ? out.passed : out.failed) += 1;
}

inline HomogeneousForm random_quintic(Rng& rng) {
  HomogeneousForm f(3, 5);
  for (int i = 0; i < f.dim(); ++i) f[i] = Scalar(rng.uniform(-10, 10));
  return f;
}

// 1. 100 seeded random integer quintics: the ten-powers bound: <= 10 terms, residual <= 2^-128,
//    each run within ten seconds.
inline void criterion_ten_powers(Outcome& out, std::ostream& os, std::uint64_t seed) {
  TolerancePolicy policy(256);
  Rng gen(seed ^ 0xa11ce5);
  int ok = 0, runs = 0;
  double worst_seconds = 0;
  std::string failure;
  for (int trial = 0; trial < 100; ++trial) {
    HomogeneousForm f = random_quintic(gen);
    if (form_is_zero(f, policy)) continue;
    ++runs;
    auto t0 = std::chrono::steady_clock::now();
    try {
      WaringDecomposition dec = decompose_ternary_quintic(f, policy, seed + trial);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      worst_seconds = std::max(worst_seconds, secs);
      if (dec.terms.size() <= 10 && dec.residual.abs_leq_2exp(-128) && secs <= 10.0) {
        ++ok;
      } else if (failure.empty()) {
        failure = "trial " + std::to_string(trial) + ": terms " + std::to_string(dec.terms.size()) +
                  " residual " + dec.residual.str(6);
      }
    } catch (const Error& e) {
      if (failure.empty()) failure = "trial " + std::to_string(trial) + ": " + e.what();
    }
  }
  bool pass = ok == runs && runs >= 99;
  report(out, os, 1, "ten-powers bound on random quintics", pass,
         std::to_string(ok) + "/" + std::to_string(runs) + " runs, worst " +
             std::to_string(worst_seconds) + " s" + (failure.empty() ? "" : "; first failure: " + failure));
}

// 2. All 21 quintic monomials decompose within the same bound.
inline void criterion_monomials(Outcome& out, std::ostream& os, std::uint64_t seed) {
  TolerancePolicy policy(256);
  int ok = 0, total = 0;
  std::string failure;
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; a + b <= 5; ++b) {
      int c = 5 - a - b;
      ++total;
      HomogeneousForm f(3, 5);
      f[monomial_index(3, 5, a, b)] = Scalar(1);
      try {
        WaringDecomposition dec = decompose_ternary_quintic(f, policy, seed + 31 * a + b);
        if (dec.terms.size() <= 10 && dec.residual.abs_leq_2exp(-128)) {
          ++ok;
        } else if (failure.empty()) {
          failure = "x0^" + std::to_string(a) + " x1^" + std::to_string(b) + " x2^" +
                    std::to_string(c) + ": terms " + std::to_string(dec.terms.size()) +
                    " residual " + dec.residual.str(6);
        }
      } catch (const Error& e) {
        if (failure.empty())
          failure = "x0^" + std::to_string(a) + " x1^" + std::to_string(b) + " x2^" +
                    std::to_string(c) + ": " + e.what();
      }
    }
  }
  report(out, os, 2, "adversarial monomials", ok == total,
         std::to_string(ok) + "/" + std::to_string(total) +
             (failure.empty() ? "" : "; first failure: " + failure));
}

// 3. Binary Sylvester table and the generic rank statistic.
inline void criterion_sylvester(Outcome& out, std::ostream& os, std::uint64_t seed) {
  TolerancePolicy policy(256);
  auto monomial = [](int e1) {
    HomogeneousForm f(2, 5);
    f[e1] = Scalar(1);
    return f;
  };
  bool table = binary_rank(monomial(0), policy) == 1 && binary_rank(monomial(1), policy) == 5 &&
               binary_rank(monomial(2), policy) == 4 && binary_rank(monomial(3), policy) == 4 &&
               binary_rank(monomial(4), policy) == 5;
  Rng gen(seed ^ 0x5e5e5e);
  int rank3 = 0, total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    HomogeneousForm f(2, 5);
    for (int i = 0; i < f.dim(); ++i) f[i] = Scalar(gen.uniform(-10, 10));
    if (form_is_zero(f, policy)) continue;
    ++total;
    if (binary_rank(f, policy) == 3) ++rank3;
  }
  bool pass = table && rank3 * 100 >= total * 95;
  report(out, os, 3, "binary Sylvester suite", pass,
         std::string("monomial table ") + (table ? "ok" : "WRONG") + ", generic rank 3 in " +
             std::to_string(rank3) + "/" + std::to_string(total));
}

inline std::vector<DualForm> fixed_lines() {
  return {linear_form<Ring::upper>(3, {Scalar(1), Scalar(0), Scalar(0)}),
          linear_form<Ring::upper>(3, {Scalar(0), Scalar(1), Scalar(0)}),
          linear_form<Ring::upper>(3, {Scalar(0), Scalar(0), Scalar(1)}),
          linear_form<Ring::upper>(3, {Scalar(1), Scalar(1), Scalar(1)})};
}

// Rational quintic whose two triple contractions split rationally, keeping
// the whole pipeline exact.
inline HomogeneousForm planted_rational(const std::vector<DualForm>& lines, Rng& rng,
                                        const TolerancePolicy& policy) {
  LineBasis basis4 = line_basis(lines[3], policy);
  LineBasis basis3 = line_basis(lines[2], policy);
  auto embed_pair = [&](const LineBasis& basis, long a1, long b0, long b1) {
    HomogeneousForm u = basis.u + Scalar(a1) * basis.w;
    HomogeneousForm w = Scalar(b0) * basis.u + Scalar(b1) * basis.w;
    return multiply(u, w);
  };
  HomogeneousForm q4 = embed_pair(basis4, rng.uniform(1, 4), 1, -rng.uniform(1, 4));
  HomogeneousForm q3 = embed_pair(basis3, rng.uniform(1, 4), 2, -rng.uniform(1, 4));
  DualForm t123 = multiply(multiply(lines[0], lines[1]), lines[2]);
  DualForm t124 = multiply(multiply(lines[0], lines[1]), lines[3]);
  Mat m(12, 21);
  std::vector<Scalar> rhs(12);
  for (int col = 0; col < 21; ++col) {
    HomogeneousForm mono(3, 5);
    mono[col] = Scalar(1);
    HomogeneousForm c123 = contract(t123, mono);
    HomogeneousForm c124 = contract(t124, mono);
    for (int r = 0; r < 6; ++r) {
      m.at(r, col) = c123[r];
      m.at(6 + r, col) = c124[r];
    }
  }
  for (int r = 0; r < 6; ++r) {
    rhs[r] = q4[r];
    rhs[6 + r] = q3[r];
  }
  auto sol = solve_consistent(m, rhs, policy);
  HomogeneousForm f(3, 5, *sol);
  for (auto& vec : kernel_basis(m, policy))
    f = f + Scalar(rng.uniform(-3, 3)) * HomogeneousForm(3, 5, vec);
  return f;
}

// 4. Exact symbolic identity suite on the rational path.
inline void criterion_identities(Outcome& out, std::ostream& os, std::uint64_t seed) {
  TolerancePolicy policy(256);
  int pencil_ok = 0, pencil_runs = 0;
  Rng gen(seed ^ 0x1de47);
  while (pencil_runs < 25) {
    // Random rational pencil at d = 5.
    std::vector<DualForm> factors;
    for (int i = 0; i < 3; ++i) {
      DualForm l(2, 1);
      l[0] = Scalar(gen.uniform(-9, 9));
      l[1] = Scalar(gen.uniform(-9, 9));
      if (l[0].rat() == 0 && l[1].rat() == 0) l[0] = Scalar(1);
      factors.push_back(l);
    }
    HomogeneousForm x0 = linear_form<Ring::lower>(2, {gen.small_rational(), Scalar(gen.uniform(-9, 9))});
    HomogeneousForm x1 = linear_form<Ring::lower>(2, {Scalar(gen.uniform(-9, 9)), gen.small_rational()});
    if (proportional(x0, x1, policy)) continue;
    ++pencil_runs;
    try {
      RankTwoPencil pencil = build_r(factors, x0, x1, policy);
      // Divisibility for all subsets; the full quotient is 240 q.
      bool all = true;
      std::vector<std::vector<int>> subsets = {{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
      for (auto& subset : subsets) r_quotient(pencil, subset, policy);
      ParamForm full = r_quotient(pencil, {0, 1, 2}, policy);
      HomogeneousForm expect = Scalar(240) * pencil.q;
      for (int i = 0; i < expect.dim(); ++i)
        if (!full.row(0)[i].exact_eq(expect[i])) all = false;
      // Defining identity, both sides exact.
      ParamForm lhs = ParamScalar::t0() * ParamScalar::t1() * pf_square_substitute(pencil.r);
      ParamScalar p0 = ParamScalar::linear(x0[0], x1[0]);
      ParamScalar p1 = ParamScalar::linear(x0[1], x1[1]);
      ParamScalar m0 = ParamScalar::linear(x0[0], -x1[0]);
      ParamScalar m1 = ParamScalar::linear(x0[1], -x1[1]);
      ParamScalar pp = evaluate_binary_at_param(pencil.p, p0, p1);
      ParamScalar pm = evaluate_binary_at_param(pencil.p, m0, m1);
      ParamForm vp(1, 2, 1), vm(1, 2, 1);
      vp.row(0) = x0;
      vp.row(1) = x1;
      vm.row(0) = x0;
      vm.row(1) = Scalar(-1) * x1;
      ParamForm plus = vp, minus = vm;
      for (int i = 1; i < 5; ++i) {
        plus = pf_multiply(plus, vp);
        minus = pf_multiply(minus, vm);
      }
      ParamForm rhs = pm * plus - pp * minus;
      for (int j = 0; j <= lhs.t_degree() && all; ++j)
        for (int i = 0; i < lhs.row(j).dim() && all; ++i)
          if (!lhs.row(j)[i].exact_eq(rhs.row(j)[i])) all = false;
      if (all) ++pencil_ok;
    } catch (const Error&) {
    }
  }

  int pipeline_ok = 0, pipeline_runs = 0;
  auto lines = fixed_lines();
  for (int trial = 0; pipeline_runs < 25 && trial < 200; ++trial) {
    Rng rng(seed + 7000 + trial);
    HomogeneousForm f = planted_rational(lines, rng, policy);
    LineConfiguration config{4, lines};
    if (!certify_configuration(f, config, policy)) continue;
    ++pipeline_runs;
    try {
      DecompState state;
      state.f = f;
      state.config = config;
      build_f4(state, policy);
      build_f3_matched(state, policy);
      assemble(state, policy);
      bool rational = true;
      for (int j = 0; j <= state.f12.t_degree(); ++j)
        rational = rational && form_is_rational(state.f12.row(j));
      if (rational) ++pipeline_ok;
    } catch (const Error&) {
    }
  }
  bool pass = pencil_ok == 25 && pipeline_ok == 25;
  report(out, os, 4, "exact symbolic identity suite", pass,
         "pencil identities " + std::to_string(pencil_ok) + "/25, pipeline identities " +
             std::to_string(pipeline_ok) + "/25 (zero remainder)");
}

// 5. Rank-two locus sampling.
inline void criterion_rank_two_locus(Outcome& out, std::ostream& os, std::uint64_t seed) {
  TolerancePolicy policy(256);
  Rng gen(seed ^ 0xbead);
  int pencils = 0, good = 0;
  while (pencils < 10) {
    std::vector<DualForm> factors;
    for (int i = 0; i < 3; ++i) {
      DualForm l(2, 1);
      l[0] = Scalar(gen.uniform(-9, 9));
      l[1] = Scalar(gen.uniform(-9, 9));
      if (l[0].rat() == 0 && l[1].rat() == 0) l[0] = Scalar(1);
      factors.push_back(l);
    }
    HomogeneousForm x0 = linear_form<Ring::lower>(2, {gen.small_rational(), Scalar(gen.uniform(-9, 9))});
    HomogeneousForm x1 = linear_form<Ring::lower>(2, {Scalar(gen.uniform(-9, 9)), gen.small_rational()});
    if (proportional(x0, x1, policy)) continue;
    RankTwoPencil pencil = build_r(factors, x0, x1, policy);
    ++pencils;
    bool pencil_good = true;
    int samples = 0;
    while (samples < 20) {
      Scalar lam(gen.uniform(-50, 50)), mu(gen.uniform(-50, 50));
      if (exceptional_parameter(pencil, lam, mu, policy)) continue;
      ++samples;
      HomogeneousForm f = sample_rank_two(pencil, lam, mu, policy);
      if (binary_rank(f, policy) != 2) pencil_good = false;
    }
    for (std::size_t i = 0; i < pencil.factors.size(); ++i) {
      HomogeneousForm at =
          param_evaluate(pencil.r, pencil.roots[i].first, pencil.roots[i].second);
      if (form_is_zero(at, policy)) continue;
      if (!proportional(at, power(pencil.v[i], pencil.d), policy)) pencil_good = false;
    }
    if (pencil_good) ++good;
  }
  report(out, os, 5, "rank-two locus sampling", good == 10,
         std::to_string(good) + "/10 pencils, 20 samples each of rank exactly 2");
}

// 6. Configuration certification with bounded retries.
inline void criterion_configurations(Outcome& out, std::ostream& os, std::uint64_t seed) {
  TolerancePolicy policy(256);
  Rng gen(seed ^ 0xc0f1);
  int certified = 0, fast = 0, total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    HomogeneousForm f = random_quintic(gen);
    if (form_is_zero(f, policy)) continue;
    ++total;
    try {
      Rng rng(seed + 900 + trial);
      RefineResult res = refine_configuration(f, policy, rng);
      if (certify_configuration(f, res.config, policy)) ++certified;
      if (res.retries <= 16) ++fast;
    } catch (const Error&) {
    }
  }
  bool pass = certified == total && fast >= total - 2;
  report(out, os, 6, "configuration certification", pass,
         std::to_string(certified) + "/" + std::to_string(total) + " certified, " +
             std::to_string(fast) + " within 16 retries");
}

// 7. Byte-level determinism.
inline void criterion_determinism(Outcome& out, std::ostream& os, std::uint64_t seed) {
  TolerancePolicy policy(256);
  Rng gen(seed ^ 0xdead);
  bool pass = true;
  for (int trial = 0; trial < 3; ++trial) {
    HomogeneousForm f = random_quintic(gen);
    if (form_is_zero(f, policy)) continue;
    RunReport ra, rb;
    WaringDecomposition a = decompose_ternary_quintic(f, policy, seed + trial, &ra);
    WaringDecomposition b = decompose_ternary_quintic(f, policy, seed + trial, &rb);
    if (emit_decomposition(a) != emit_decomposition(b) || ra.text() != rb.text()) pass = false;
  }
  report(out, os, 7, "determinism", pass, "two runs compared byte-for-byte");
}

inline Outcome run_all(std::ostream& os, std::uint64_t seed = 0) {
  Outcome out;
  criterion_ten_powers(out, os, seed);
  criterion_monomials(out, os, seed);
  criterion_sylvester(out, os, seed);
  criterion_identities(out, os, seed);
  criterion_rank_two_locus(out, os, seed);
  criterion_configurations(out, os, seed);
  criterion_determinism(out, os, seed);
  os << "acceptance: " << out.passed << " passed, " << out.failed << " failed\n";
  return out;
}

}  // namespace waring::acceptance
