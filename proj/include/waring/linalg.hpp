#pragma once

#include <optional>
#include <vector>

#include "waring/scalar.hpp"

namespace waring {

// Small dense matrix of Scalars, row major. All nontrivial routines promote
// the whole matrix to complex if any entry is complex.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, Scalar(0)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& at(int r, int c) { return a_[r * cols_ + c]; }
  const Scalar& at(int r, int c) const { return a_[r * cols_ + c]; }

  bool rational() const {
    for (const Scalar& s : a_)
      if (!s.is_rational()) return false;
    return true;
  }

 private:
  int rows_, cols_;
  std::vector<Scalar> a_;
};

// Null space basis: exact reduced row echelon over rationals, one-sided
// Jacobi SVD with relative singular-value thresholding otherwise.
std::vector<std::vector<Scalar>> kernel_basis(const Mat& m, const TolerancePolicy& policy);

int mat_rank(const Mat& m, const TolerancePolicy& policy);

// Particular solution of A x = b when consistent (free variables pinned to
// zero); nullopt when inconsistent under the policy.
std::optional<std::vector<Scalar>> solve_consistent(const Mat& a, const std::vector<Scalar>& b,
                                                    const TolerancePolicy& policy);

// Least squares via normal equations at full precision; also returns the
// residual max-norm of A x - b.
std::pair<std::vector<Scalar>, BigFloat> solve_least_squares(const Mat& a,
                                                             const std::vector<Scalar>& b,
                                                             const TolerancePolicy& policy);

}  // namespace waring
