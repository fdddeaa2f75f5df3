#pragma once

#include <array>
#include <optional>
#include <vector>

#include "waring/apolarity.hpp"
#include "waring/poly.hpp"

namespace waring {

// Apolar configuration of k distinct dual lines. The certificate table is
// positional:
//   kind 4: l1 l2 l3 l4 -| f = 0; l1l2l3 -| f and l1l2l4 -| f are not
//           squares; l1l3l4 -| f != 0 and l2l3l4 -| f != 0.
//   kind 3: l1 l2 l3 -| f = 0; l1l3 -| f and l1l2 -| f are not cubes;
//           l2l3 -| f != 0.
//   kind 2: l1 l2 -| f = 0.
struct LineConfiguration {
  int kind = 0;
  std::vector<DualForm> lines;
};

// Square test for a ternary quadratic via the rank of its 3x3 polarization.
PowerTest ternary_quadratic_square(const HomogeneousForm& q, const TolerancePolicy& policy);

// Splits a rank <= 2 dual conic into two lines (equal lines for rank 1);
// nullopt when the conic is irreducible.
std::optional<std::pair<DualForm, DualForm>> factor_conic(const DualForm& q,
                                                          const TolerancePolicy& policy);

// Re-checks the full certificate table from scratch.
bool certify_configuration(const HomogeneousForm& f, const LineConfiguration& config,
                           const TolerancePolicy& policy);

// Outcome of the quartic search: four apolar lines, or an early exit with a
// two-line configuration, or a double line (l^2 -| f = 0) to hand over to
// double_refine.
struct QuarticSearch {
  enum class Outcome { kind4, kind2, double_line };
  Outcome outcome;
  std::vector<DualForm> lines;
};

QuarticSearch find_apolar_split_quartic(const HomogeneousForm& f, const TolerancePolicy& policy,
                                        Rng& rng, int max_retries = 64);

// Tangent lines to the curve p = 0 at its intersections with the line x = 0;
// requires x^2 -| f = 0, p -| f = 0 and transverse simple intersections.
std::vector<DualForm> recap_tangent_lines(const HomogeneousForm& f, const DualForm& x,
                                          const DualForm& p, const TolerancePolicy& policy);

// Constructive core of the double-line case x1 x2^2 -| f = 0. When x1 is not
// given, x2^2 -| f = 0 must hold and x1 is chosen internally. Returns a kind-2
// or kind-3 configuration, or a kind-4 one whose three x1-triples carry
// non-square certificates.
LineConfiguration double_refine(const HomogeneousForm& f, const std::optional<DualForm>& x1,
                                const DualForm& x2, const TolerancePolicy& policy, Rng& rng,
                                int max_retries = 64);

struct RefineResult {
  LineConfiguration config;
  int retries = 0;
};

// Fully certified configuration of kind 2, 3 or 4.
RefineResult refine_configuration(const HomogeneousForm& f, const TolerancePolicy& policy,
                                  Rng& rng, int max_retries = 64);

// Diagnostic data for the finite bad set of the double-contraction lemma;
// the pipeline never branches on it.
struct LrBadSet {
  HomogeneousForm u0, u1;                // binary linear
  HomogeneousForm v1, v2;                // binary cubics
  std::array<HomogeneousForm, 4> vhk;    // v^h_k, h in {1,2}, k in {0,1}
  std::vector<HomogeneousForm> bad;      // the set F of cubic classes
  bool q_is_square = false;
};

LrBadSet compute_lr_bad_set(const HomogeneousForm& q, const DualForm& x1, const DualForm& x2,
                            const DualForm& x3, const TolerancePolicy& policy);

}  // namespace waring
