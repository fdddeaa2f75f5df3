#pragma once

#include <vector>

#include "waring/apolarity.hpp"
#include "waring/poly.hpp"

namespace waring {

// Parameterization of the rank-two locus of A_{p,q} for a factored binary
// dual form p = l^1 ... l^{d-2} and q = x0 x1 with distinct roots. Immutable
// after construction.
struct RankTwoPencil {
  int d;                          // form degree (>= 3)
  std::vector<DualForm> factors;  // l^1 .. l^{d-2}
  DualForm p;                     // expanded product of the factors
  HomogeneousForm x0, x1;         // chosen factorization of q
  HomogeneousForm q;              // x0 * x1
  ParamForm r;                    // t-degree d-2, s-degree d
  std::vector<ParamScalar> a;     // a^i = l^i(x0)^2 t0 - l^i(x1)^2 t1
  std::vector<std::pair<Scalar, Scalar>> roots;  // (lambda_i, mu_i) killing a^i
  std::vector<HomogeneousForm> v;                // v_i spanning <l^i>^perp
};

// Expands the defining identity, divides out t0 t1, checks that only even
// t-powers survive, and halves the t-exponents.
RankTwoPencil build_r(const std::vector<DualForm>& factors, const HomogeneousForm& x0,
                      const HomogeneousForm& x1, const TolerancePolicy& policy);

// r'_I with (prod_{i in I} a^i) r'_I = (prod_{i in I} l^i) -| r. Divisibility
// holds identically, so a failure here means an arithmetic bug.
ParamForm r_quotient(const RankTwoPencil& pencil, const std::vector<int>& subset,
                     const TolerancePolicy& policy);

// Membership in the exceptional set X = {[lambda_i, mu_i]} U {[1,0], [0,1]}.
bool exceptional_parameter(const RankTwoPencil& pencil, const Scalar& lam, const Scalar& mu,
                           const TolerancePolicy& policy);

// Evaluation of r outside X; the result has binary rank exactly two.
HomogeneousForm sample_rank_two(const RankTwoPencil& pencil, const Scalar& lam, const Scalar& mu,
                                const TolerancePolicy& policy);

// A binary quintic of rank exactly 3 inside W_{p,t} \ L_{p,3}, built from a
// squarefree cubic in the annihilator of t avoiding the divisors of p and of
// the quadric generator of Ker t_{2,1}.
HomogeneousForm rank3_element(const DualForm& p, const HomogeneousForm& t,
                              const TolerancePolicy& policy, Rng& rng);

// t-degree doubling (t0, t1) -> (t0^2, t1^2), used to state the defining
// identity of the pencil.
ParamForm pf_square_substitute(const ParamForm& f);

}  // namespace waring
