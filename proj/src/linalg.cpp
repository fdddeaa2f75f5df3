#include "waring/linalg.hpp"

#include <algorithm>
#include <climits>

namespace waring {

namespace {

Mat promote(const Mat& m, mpfr_prec_t prec) {
  Mat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r.at(i, j) = Scalar(m.at(i, j).to_complex(prec));
  return r;
}

// Exact reduced row echelon form; returns pivot column per row-echelon step.
std::vector<int> rref_rational(Mat& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pr = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m.at(r, col).rat() != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m.at(pr, c), m.at(row, c));
    Scalar inv = Scalar(1) / m.at(row, col);
    for (int c = 0; c < m.cols(); ++c) m.at(row, c) = inv * m.at(row, c);
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m.at(r, col).rat() == 0) continue;
      Scalar factor = m.at(r, col);
      for (int c = 0; c < m.cols(); ++c) m.at(r, c) -= factor * m.at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

struct Svd {
  std::vector<std::vector<BigComplex>> v;  // right singular vectors, column j = v[j]
  std::vector<BigFloat> sigma;
};

Svd jacobi_svd(const Mat& m, const TolerancePolicy& policy) {
  mpfr_prec_t prec = policy.precision_bits;
  int rows = m.rows(), cols = m.cols();
  std::vector<std::vector<BigComplex>> a(cols, std::vector<BigComplex>(rows, BigComplex(prec)));
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a[j][i] = m.at(i, j).to_complex(prec);
  std::vector<std::vector<BigComplex>> v(cols, std::vector<BigComplex>(cols, BigComplex(prec)));
  for (int j = 0; j < cols; ++j) v[j][j] = BigComplex(1, prec);

  const BigFloat one(1, prec), two(2, prec);
  const long eps_exp = -static_cast<long>(prec) + 16;

  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        BigFloat alpha(prec), beta(prec);
        BigComplex gamma(prec);
        for (int i = 0; i < rows; ++i) {
          alpha = alpha + a[p][i].norm2();
          beta = beta + a[q][i].norm2();
          gamma = gamma + a[p][i].conj() * a[q][i];
        }
        BigFloat g = gamma.abs();
        BigFloat bound = (alpha * beta).sqrt();
        if (g.is_exact_zero()) continue;
        // Relative convergence test: |gamma| <= 2^eps_exp * sqrt(alpha*beta).
        long bexp = bound.is_exact_zero() ? 0 : mpfr_get_exp(bound.raw());
        if (g.abs_leq_2exp(eps_exp + bexp)) continue;
        rotated = true;

        BigFloat tau = (beta - alpha) / (two * g);
        BigFloat t = one / (tau.abs() + (one + tau * tau).sqrt());
        if (tau.sign_negative()) t = -t;
        BigFloat c = one / (one + t * t).sqrt();
        BigFloat sigma = t * c;
        BigComplex phase = gamma / BigComplex(g, BigFloat(prec));
        BigComplex s = phase * BigComplex(sigma, BigFloat(prec));
        BigComplex cc(c, BigFloat(prec));

        for (int i = 0; i < rows; ++i) {
          BigComplex ap = a[p][i], aq = a[q][i];
          a[p][i] = cc * ap - s.conj() * aq;
          a[q][i] = s * ap + cc * aq;
        }
        for (int i = 0; i < cols; ++i) {
          BigComplex vp = v[p][i], vq = v[q][i];
          v[p][i] = cc * vp - s.conj() * vq;
          v[q][i] = s * vp + cc * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Svd out;
  out.v = std::move(v);
  for (int j = 0; j < cols; ++j) {
    BigFloat n2(prec);
    for (int i = 0; i < rows; ++i) n2 = n2 + a[j][i].norm2();
    out.sigma.push_back(n2.sqrt());
  }
  return out;
}

}  // namespace

std::vector<std::vector<Scalar>> kernel_basis(const Mat& m, const TolerancePolicy& policy) {
  std::vector<std::vector<Scalar>> basis;
  if (m.cols() == 0) return basis;
  if (m.rows() == 0) {
    for (int j = 0; j < m.cols(); ++j) {
      std::vector<Scalar> v(m.cols(), Scalar(0));
      v[j] = Scalar(1);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  if (m.rational()) {
    Mat r = m;
    std::vector<int> pivots = rref_rational(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    for (int free = 0; free < m.cols(); ++free) {
      if (is_pivot[free]) continue;
      std::vector<Scalar> v(m.cols(), Scalar(0));
      v[free] = Scalar(1);
      for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.at(static_cast<int>(i), free);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  Mat c = promote(m, policy.precision_bits);
  Svd svd = jacobi_svd(c, policy);
  BigFloat smax(policy.precision_bits);
  for (const BigFloat& s : svd.sigma)
    if (s.cmp(smax) > 0) smax = s;
  long sexp = smax.is_exact_zero() ? 0 : std::max(0L, static_cast<long>(mpfr_get_exp(smax.raw())));
  // Deterministic order: ascending singular value, ties by column index.
  std::vector<int> order(svd.sigma.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    int cm = svd.sigma[x].cmp(svd.sigma[y]);
    if (cm != 0) return cm < 0;
    return x < y;
  });
  for (int j : order) {
    if (!svd.sigma[j].abs_leq_2exp(policy.zero_exp + sexp)) continue;
    std::vector<Scalar> v;
    for (int i = 0; i < m.cols(); ++i) v.push_back(Scalar(svd.v[j][i]));
    basis.push_back(std::move(v));
  }
  return basis;
}

int mat_rank(const Mat& m, const TolerancePolicy& policy) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  return m.cols() - static_cast<int>(kernel_basis(m, policy).size());
}

std::optional<std::vector<Scalar>> solve_consistent(const Mat& a, const std::vector<Scalar>& b,
                                                    const TolerancePolicy& policy) {
  int rows = a.rows(), cols = a.cols();
  bool exact = a.rational();
  for (const Scalar& s : b) exact = exact && s.is_rational();

  Mat work(rows, cols + 1);
  std::vector<long> col_shift(cols, 0);
  if (exact) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) work.at(i, j) = a.at(i, j);
      work.at(i, cols) = b[i];
    }
  } else {
    mpfr_prec_t prec = policy.precision_bits;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) work.at(i, j) = Scalar(a.at(i, j).to_complex(prec));
      work.at(i, cols) = Scalar(b[i].to_complex(prec));
    }
    // Power-of-two column equilibration (exact in binary floating point)
    // keeps negligibility thresholds meaningful on badly scaled systems.
    auto shift_complex = [](const BigComplex& z, long e) {
      BigComplex r = z;
      mpfr_mul_2si(r.re().raw(), r.re().raw(), e, MPFR_RNDN);
      mpfr_mul_2si(r.im().raw(), r.im().raw(), e, MPFR_RNDN);
      return r;
    };
    for (int j = 0; j < cols; ++j) {
      long e = LONG_MIN;
      for (int i = 0; i < rows; ++i) {
        BigFloat mag = work.at(i, j).abs_approx(64);
        if (!mag.is_exact_zero()) e = std::max(e, static_cast<long>(mpfr_get_exp(mag.raw())));
      }
      if (e == LONG_MIN || e == 0) continue;
      col_shift[j] = e;
      for (int i = 0; i < rows; ++i) work.at(i, j) = Scalar(shift_complex(work.at(i, j).cpx(), -e));
    }
    for (int i = 0; i < rows; ++i) {
      long e = LONG_MIN;
      for (int j = 0; j <= cols; ++j) {
        BigFloat mag = work.at(i, j).abs_approx(64);
        if (!mag.is_exact_zero()) e = std::max(e, static_cast<long>(mpfr_get_exp(mag.raw())));
      }
      if (e == LONG_MIN || e == 0) continue;
      for (int j = 0; j <= cols; ++j) work.at(i, j) = Scalar(shift_complex(work.at(i, j).cpx(), -e));
    }
  }

  BigFloat scale(64);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j <= cols; ++j) {
      BigFloat c = work.at(i, j).abs_approx(64);
      if (c.cmp(scale) > 0) scale = c;
    }
  long sexp = scale.is_exact_zero() ? 0 : std::max(0L, static_cast<long>(mpfr_get_exp(scale.raw())));
  auto negligible = [&](const Scalar& s) {
    if (s.is_rational()) return s.rat() == 0;
    return s.cpx().abs_leq_2exp(policy.zero_exp + sexp);
  };

  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pr = -1;
    if (exact) {
      for (int r = row; r < rows; ++r)
        if (work.at(r, col).rat() != 0) {
          pr = r;
          break;
        }
    } else {
      BigFloat best(64);
      for (int r = row; r < rows; ++r) {
        BigFloat c = work.at(r, col).abs_approx(64);
        if (c.cmp(best) > 0) {
          best = c;
          pr = r;
        }
      }
      if (pr >= 0 && negligible(work.at(pr, col))) pr = -1;
    }
    if (pr < 0) continue;
    if (pr != row)
      for (int c = 0; c <= cols; ++c) std::swap(work.at(pr, c), work.at(row, c));
    Scalar inv = Scalar(1) / work.at(row, col);
    for (int c = col; c <= cols; ++c) work.at(row, c) = inv * work.at(row, c);
    for (int r = 0; r < rows; ++r) {
      if (r == row) continue;
      Scalar factor = work.at(r, col);
      if (negligible(factor)) continue;
      for (int c = col; c <= cols; ++c) work.at(r, c) -= factor * work.at(row, c);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int r = row; r < rows; ++r)
    if (!negligible(work.at(r, cols))) return std::nullopt;

  std::vector<Scalar> x(cols, Scalar(0));
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = work.at(static_cast<int>(i), cols);
  if (!exact) {
    for (int j = 0; j < cols; ++j) {
      if (col_shift[j] == 0 || x[j].is_rational()) continue;
      BigComplex z = x[j].cpx();
      mpfr_mul_2si(z.re().raw(), z.re().raw(), -col_shift[j], MPFR_RNDN);
      mpfr_mul_2si(z.im().raw(), z.im().raw(), -col_shift[j], MPFR_RNDN);
      x[j] = Scalar(z);
    }
  }
  return x;
}

std::pair<std::vector<Scalar>, BigFloat> solve_least_squares(const Mat& a_in,
                                                             const std::vector<Scalar>& b,
                                                             const TolerancePolicy& policy) {
  mpfr_prec_t prec = policy.precision_bits;
  int rows = a_in.rows(), cols = a_in.cols();
  // Column equilibration by powers of two before forming normal equations.
  Mat a(rows, cols);
  std::vector<long> col_shift(cols, 0);
  for (int j = 0; j < cols; ++j) {
    long e = 0;
    bool seen = false;
    for (int i = 0; i < rows; ++i) {
      BigFloat mag = a_in.at(i, j).abs_approx(64);
      if (!mag.is_exact_zero()) {
        long ce = mpfr_get_exp(mag.raw());
        e = seen ? std::max(e, ce) : ce;
        seen = true;
      }
    }
    col_shift[j] = seen ? e : 0;
    for (int i = 0; i < rows; ++i) {
      BigComplex z = a_in.at(i, j).to_complex(prec);
      mpfr_mul_2si(z.re().raw(), z.re().raw(), -col_shift[j], MPFR_RNDN);
      mpfr_mul_2si(z.im().raw(), z.im().raw(), -col_shift[j], MPFR_RNDN);
      a.at(i, j) = Scalar(z);
    }
  }
  // Normal equations A^H A x = A^H b.
  Mat ata(cols, cols);
  std::vector<Scalar> atb(cols, Scalar(0));
  for (int i = 0; i < cols; ++i) {
    for (int j = 0; j < cols; ++j) {
      BigComplex acc(prec);
      for (int r = 0; r < rows; ++r)
        acc = acc + a.at(r, i).to_complex(prec).conj() * a.at(r, j).to_complex(prec);
      ata.at(i, j) = Scalar(acc);
    }
    BigComplex acc(prec);
    for (int r = 0; r < rows; ++r) acc = acc + a.at(r, i).to_complex(prec).conj() * b[r].to_complex(prec);
    atb[i] = Scalar(acc);
  }
  auto sol = solve_consistent(ata, atb, policy);
  if (!sol) fail(Err::DegenerateInput, "normal equations are singular");
  BigFloat residual(prec);
  for (int r = 0; r < rows; ++r) {
    BigComplex acc = b[r].to_complex(prec);
    for (int j = 0; j < cols; ++j) acc = acc - a.at(r, j).to_complex(prec) * (*sol)[j].to_complex(prec);
    BigFloat m = acc.abs();
    if (m.cmp(residual) > 0) residual = m;
  }
  std::vector<Scalar> x = *sol;
  for (int j = 0; j < cols; ++j) {
    if (col_shift[j] == 0) continue;
    BigComplex z = x[j].to_complex(prec);
    mpfr_mul_2si(z.re().raw(), z.re().raw(), -col_shift[j], MPFR_RNDN);
    mpfr_mul_2si(z.im().raw(), z.im().raw(), -col_shift[j], MPFR_RNDN);
    x[j] = Scalar(z);
  }
  return {x, residual};
}

}  // namespace waring
