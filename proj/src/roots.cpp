#include <algorithm>
#include <vector>

#include "waring/scalar.hpp"

namespace waring {

namespace {

// Horner evaluation of a monic-coefficient vector a (a[i] multiplies t^i,
// a.back() is the leading coefficient).
BigComplex poly_eval(const std::vector<BigComplex>& a, const BigComplex& z) {
  BigComplex acc = a.back();
  for (int i = static_cast<int>(a.size()) - 2; i >= 0; --i) acc = acc * z + a[i];
  return acc;
}

std::vector<BigComplex> poly_derivative(const std::vector<BigComplex>& a, mpfr_prec_t prec) {
  std::vector<BigComplex> d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(BigComplex(static_cast<long>(i), prec) * a[i]);
  if (d.empty()) d.push_back(BigComplex(prec));
  return d;
}

// Newton iteration on the given polynomial, used both for polishing simple
// roots and for recovering a multiple root via the (m-1)-th derivative.
BigComplex newton_refine(const std::vector<BigComplex>& a, BigComplex z, mpfr_prec_t prec) {
  std::vector<BigComplex> d = poly_derivative(a, prec);
  for (int it = 0; it < 100; ++it) {
    BigComplex p = poly_eval(a, z);
    BigComplex dp = poly_eval(d, z);
    if (dp.abs_leq_2exp(-static_cast<long>(prec))) break;
    BigComplex step = p / dp;
    z = z - step;
    BigFloat scale = z.abs();
    long se = scale.is_exact_zero() ? 0 : mpfr_get_exp(scale.raw());
    if (step.abs_leq_2exp(se - static_cast<long>(prec) + 2)) break;
  }
  return z;
}

struct Cluster {
  BigComplex center;
  int mult;
};

}  // namespace

std::vector<std::pair<BigComplex, int>> univariate_roots(const std::vector<Scalar>& coeffs,
                                                         const TolerancePolicy& policy) {
  if (coeffs.empty()) fail(Err::DegenerateInput, "empty coefficient list");
  mpfr_prec_t prec = policy.precision_bits;

  int hi = static_cast<int>(coeffs.size()) - 1;
  while (hi >= 0 && is_zero(coeffs[hi], policy)) --hi;
  if (hi < 0) fail(Err::DegenerateInput, "all coefficients negligible");

  std::vector<std::pair<BigComplex, int>> out;
  int lo = 0;
  while (lo < hi && is_zero(coeffs[lo], policy)) ++lo;
  if (lo > 0) out.push_back({BigComplex(prec), lo});

  int m = hi - lo;
  if (m == 0) return out;

  // Monic coefficients of the deflated polynomial.
  std::vector<BigComplex> a(m + 1);
  BigComplex lead = coeffs[hi].to_complex(prec);
  for (int i = 0; i <= m; ++i) a[i] = coeffs[lo + i].to_complex(prec) / lead;

  if (m == 1) {
    out.push_back({newton_refine(a, -a[0], prec), 1});
  } else {
    // Cauchy-style radius.
    BigFloat radius(1, prec);
    for (int i = 0; i < m; ++i) {
      BigFloat c = a[i].abs();
      if (c.cmp(radius) > 0) radius = c;
    }
    radius = radius + BigFloat(1, prec);

    BigFloat two_pi(prec);
    mpfr_const_pi(two_pi.raw(), MPFR_RNDN);
    two_pi = two_pi * BigFloat(2, prec);

    std::vector<BigComplex> z(m, BigComplex(prec));
    for (int j = 0; j < m; ++j) {
      // Perturbed circle start keeps the configuration asymmetric.
      BigFloat theta = two_pi * (BigFloat(100 * j + 37, prec) / BigFloat(100 * m, prec)) +
                       BigFloat(j, prec) / BigFloat(1000, prec);
      BigFloat c(prec), s(prec);
      mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
      z[j] = BigComplex(radius * c, radius * s);
    }

    std::vector<BigComplex> d = poly_derivative(a, prec);
    const long step_exp = -static_cast<long>(prec) + 6;
    for (int sweep = 0; sweep < 160; ++sweep) {
      bool all_small = true;
      for (int j = 0; j < m; ++j) {
        BigComplex p = poly_eval(a, z[j]);
        BigComplex dp = poly_eval(d, z[j]);
        BigComplex n = dp.abs_leq_2exp(-static_cast<long>(prec)) ? p : p / dp;
        BigComplex s(prec);
        for (int k = 0; k < m; ++k) {
          if (k == j) continue;
          BigComplex diff = z[j] - z[k];
          if (diff.abs_leq_2exp(-2 * static_cast<long>(prec))) continue;
          s = s + BigComplex(1, prec) / diff;
        }
        BigComplex denom = BigComplex(1, prec) - n * s;
        BigComplex w = denom.abs_leq_2exp(-static_cast<long>(prec)) ? n : n / denom;
        z[j] = z[j] - w;
        BigFloat zscale = z[j].abs();
        long se = zscale.is_exact_zero() ? 0 : mpfr_get_exp(zscale.raw());
        if (!w.abs_leq_2exp(std::max(se, 0L) + step_exp)) all_small = false;
      }
      if (all_small) break;
    }

    // Agglomerative clustering; the merge radius widens with multiplicity
    // because a root of multiplicity m is only determined to prec/m bits.
    std::vector<Cluster> clusters;
    std::sort(z.begin(), z.end(), [](const BigComplex& x, const BigComplex& y) {
      int c = x.re().cmp(y.re());
      if (c != 0) return c < 0;
      return x.im().cmp(y.im()) < 0;
    });
    for (const BigComplex& root : z) clusters.push_back({root, 1});
    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
          int total = clusters[i].mult + clusters[j].mult;
          long radius_exp = policy.zero_exp / total;
          BigComplex diff = clusters[i].center - clusters[j].center;
          BigFloat scale = clusters[i].center.abs();
          long se = scale.is_exact_zero() ? 0 : std::max(0L, static_cast<long>(mpfr_get_exp(scale.raw())));
          if (diff.abs_leq_2exp(radius_exp + se)) {
            BigFloat wi(clusters[i].mult, prec), wj(clusters[j].mult, prec);
            BigFloat wt = wi + wj;
            clusters[i].center = BigComplex((clusters[i].center.re() * wi + clusters[j].center.re() * wj) / wt,
                                            (clusters[i].center.im() * wi + clusters[j].center.im() * wj) / wt);
            clusters[i].mult = total;
            clusters.erase(clusters.begin() + j);
            merged = true;
          }
        }
      }
    }

    for (Cluster& cl : clusters) {
      std::vector<BigComplex> target = a;
      for (int k = 1; k < cl.mult; ++k) target = poly_derivative(target, prec);
      out.push_back({newton_refine(target, cl.center, prec), cl.mult});
    }
  }

  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    int c = x.first.re().cmp(y.first.re());
    if (c != 0) return c < 0;
    return x.first.im().cmp(y.first.im()) < 0;
  });
  return out;
}

}  // namespace waring
