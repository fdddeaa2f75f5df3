#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "waring/apolarity.hpp"
#include "waring/lineconfig.hpp"
#include "waring/ranklocus.hpp"

namespace waring {

// Append-only key = value run report.
struct RunReport {
  std::vector<std::pair<std::string, std::string>> entries;
  void add(const std::string& key, const std::string& value) { entries.push_back({key, value}); }
  std::string text() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    return out;
  }
};

// Working data of the four-line pipeline. The t-parameterized quintics f3,
// f4, g, f34, f12 live in three variables; the rank-two pencils stay in the
// binary models of the respective annihilator lines.
struct DecompState {
  HomogeneousForm f;
  LineConfiguration config;  // kind 4

  LineBasis basis4, basis3;
  RankTwoPencil pencil4, pencil3;
  ParamForm f4, f3;  // t-degree 3
  ParamScalar a14, a24, a13, a23;
  HomogeneousForm v34, v12;

  ParamForm g, f34, f12;

  Scalar lam, mu;
  HomogeneousForm f12s, f3s, f4s;
  Scalar scale;  // 240 a13 a23 a14 a24 t0 at the sample
  HomogeneousForm piece1, piece2;
  Scalar nu;
  int sample_retries = 0;
};

// Pipeline stages; each throws on violated invariants.
void build_f4(DecompState& state, const TolerancePolicy& policy);
void build_f3_matched(DecompState& state, const TolerancePolicy& policy);
void assemble(DecompState& state, const TolerancePolicy& policy);
void choose_sample(DecompState& state, const TolerancePolicy& policy, Rng& rng, int max_retries);

// Splits a quintic killed by l1 l2 into two pieces of binary rank at most 3
// along the pencil f1 + nu v12^5, f2 - nu v12^5.
std::pair<HomogeneousForm, HomogeneousForm> split_f12(const HomogeneousForm& f12s,
                                                      const DualForm& l1, const DualForm& l2,
                                                      const HomogeneousForm& v12,
                                                      const TolerancePolicy& policy, Rng& rng,
                                                      int max_retries, Scalar* nu_out = nullptr);

// Decomposition driven by an already certified configuration; dispatches on
// its kind (two-line kernel split, three-line rank-(4,3,3) split, or the full
// four-line pipeline).
WaringDecomposition decompose_with_configuration(const HomogeneousForm& f,
                                                 const LineConfiguration& config,
                                                 const TolerancePolicy& policy, Rng& rng,
                                                 RunReport& report, int max_retries = 64);

// End-to-end decomposition into at most ten fifth powers, verified.
WaringDecomposition decompose_ternary_quintic(const HomogeneousForm& f,
                                              const TolerancePolicy& policy, std::uint64_t seed,
                                              RunReport* report = nullptr, int max_retries = 64);

}  // namespace waring
