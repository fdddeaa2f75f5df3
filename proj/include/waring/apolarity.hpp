#pragma once

#include <optional>
#include <vector>

#include "waring/linalg.hpp"
#include "waring/poly.hpp"

namespace waring {

// Matrix of the partial polarization map f_{delta,d-delta}: S^delta -> S_{d-delta};
// column mu holds the coefficients of x^mu -| f.
struct Catalecticant {
  int nvars;
  int source_degree;
  int target_degree;
  Mat m;
};

Catalecticant catalecticant(const HomogeneousForm& f, int delta);

// Null space of the polarization map as dual forms of the source degree.
std::vector<DualForm> exact_kernel(const Catalecticant& c, const TolerancePolicy& policy);

// Apolar ideal of a binary form: minimal generator h in degree s and a
// complementary generator h2 in degree d+2-s.
struct BinaryApolarIdeal {
  int s;
  DualForm h;
  DualForm h2;
};

BinaryApolarIdeal binary_apolar_generators(const HomogeneousForm& f, const TolerancePolicy& policy);

bool is_squarefree(const DualForm& p, const TolerancePolicy& policy);

// Comas-Seiguer dispatch: s when the minimal generator is squarefree,
// d+2-s otherwise.
int binary_rank(const HomogeneousForm& f, const TolerancePolicy& policy);

struct WaringDecomposition {
  std::vector<std::pair<Scalar, HomogeneousForm>> terms;
  int target_degree = 0;
  BigFloat residual;
};

WaringDecomposition binary_decompose(const HomogeneousForm& f, const TolerancePolicy& policy,
                                     Rng& rng);

// Relative max-norm of f minus the re-expanded decomposition.
BigFloat verify_decomposition(const HomogeneousForm& f, const WaringDecomposition& dec,
                              const TolerancePolicy& policy);

// Predicates report a zero input separately; zero is neither a square nor a
// cube for certification purposes.
struct PowerTest {
  bool zero;
  bool yes;
};

PowerTest is_square(const HomogeneousForm& q, const TolerancePolicy& policy);  // binary quadratic
PowerTest is_cube(const HomogeneousForm& t, const TolerancePolicy& policy);    // binary cubic

// Kernel line of the pencil spanned by two dual lines acting on f, if any.
std::optional<DualForm> find_kernel_line_in_pencil(const HomogeneousForm& f, const DualForm& y1,
                                                   const DualForm& y2,
                                                   const TolerancePolicy& policy);

// gcd of binary forms (shared by the squarefree / cube predicates).
template <Ring R>
std::vector<Scalar> binary_gcd(const Form<R>& a, const Form<R>& b, const TolerancePolicy& policy);

// Exact factorization of a rational binary quadratic into rational linear
// forms, when the discriminant is a perfect square.
std::optional<std::pair<HomogeneousForm, HomogeneousForm>> factor_quadratic_exact(
    const HomogeneousForm& q);

// Splits a nonzero binary quadratic into two linear factors with product
// exactly q; stays rational whenever factor_quadratic_exact applies.
std::pair<HomogeneousForm, HomogeneousForm> factor_binary_quadratic(const HomogeneousForm& q,
                                                                    const TolerancePolicy& policy);

// Root points of a binary dual form as elements of S_1 (the annihilated
// directions), with multiplicity. Stays rational for exact linear or
// rational-discriminant quadratic factors; complex otherwise.
std::vector<std::pair<HomogeneousForm, int>> dual_root_points(const DualForm& g,
                                                              const TolerancePolicy& policy);
// Same for a binary form in S_ (roots of the polynomial function).
std::vector<std::pair<std::pair<Scalar, Scalar>, int>> binary_roots(const HomogeneousForm& g,
                                                                    const TolerancePolicy& policy);

}  // namespace waring
