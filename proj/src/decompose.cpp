#include "waring/decompose.hpp"

#include <algorithm>

namespace waring {

namespace {

DualForm product3(const DualForm& a, const DualForm& b, const DualForm& c) {
  return multiply(multiply(a, b), c);
}

HomogeneousForm cross_point(const DualForm& a, const DualForm& b) {
  return linear_form<Ring::lower>(3, {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                      a[0] * b[1] - a[1] * b[0]});
}

bool pf_equal_tol(const ParamForm& a, const ParamForm& b, const TolerancePolicy& policy) {
  if (a.t_degree() != b.t_degree()) return false;
  long sc = scale_exp_of(pf_max_abs(a)) + scale_exp_of(pf_max_abs(b)) + 8;
  for (int j = 0; j <= a.t_degree(); ++j)
    for (int i = 0; i < a.row(j).dim(); ++i)
      if (!is_zero_rel(a.row(j)[i] - b.row(j)[i], policy, sc)) return false;
  return true;
}

bool ps_is_t0(const ParamScalar& a, const TolerancePolicy& policy) {
  if (a.degree() != 1) return false;
  return is_zero_rel(a[0] - Scalar(1), policy, 2) && is_zero_rel(a[1], policy, 2);
}

bool pf_negligible(const ParamForm& a, const TolerancePolicy& policy, long scale_exp) {
  for (int j = 0; j <= a.t_degree(); ++j)
    for (int i = 0; i < a.row(j).dim(); ++i)
      if (!is_zero_rel(a.row(j)[i], policy, scale_exp)) return false;
  return true;
}

// Canonical change of the t-coordinates taking the linear form a to t0.
std::array<Scalar, 4> normalize_to_t0(const ParamScalar& a, const TolerancePolicy& policy) {
  Scalar alpha = a[0], beta = a[1];
  BigFloat ma = alpha.abs_approx(64), mb = beta.abs_approx(64);
  if (ma.cmp(mb) >= 0) {
    if (is_zero(alpha, policy)) fail(Err::SingularChange, "degenerate a-scalar");
    Scalar inv = Scalar(1) / alpha;
    return {inv, -(beta * inv), Scalar(0), Scalar(1)};
  }
  if (is_zero(beta, policy)) fail(Err::SingularChange, "degenerate a-scalar");
  Scalar inv = Scalar(1) / beta;
  return {Scalar(0), Scalar(1), inv, -(alpha * inv)};
}

// One side of the pipeline: the rank-two pencil of p = (prod of three lines)
// modulo the omitted line, with q the triple contraction of f.
struct SideData {
  LineBasis basis;
  RankTwoPencil pencil;
};

SideData build_side(const HomogeneousForm& f, const std::vector<DualForm>& lines, int omit,
                    const TolerancePolicy& policy) {
  SideData side{line_basis(lines[omit], policy), RankTwoPencil{}};
  DualForm triple(3, 0);
  triple[0] = Scalar(1);
  std::vector<DualForm> factors;
  for (int i = 0; i < 4; ++i) {
    if (i == omit) continue;
    triple = multiply(triple, lines[i]);
    factors.push_back(side.basis.reduce_dual(lines[i]));
  }
  HomogeneousForm q = contract(triple, f);
  HomogeneousForm qbar = side.basis.restrict_form(q, policy);
  auto [x0, x1] = factor_binary_quadratic(qbar, policy);
  side.pencil = build_r(factors, x0, x1, policy);
  return side;
}

// Normalized representative and merging of proportional power terms.
void normalize_term(Scalar& c, HomogeneousForm& v, int d) {
  int pv = 0;
  BigFloat best = v[0].abs_approx(64);
  for (int i = 1; i < v.dim(); ++i) {
    BigFloat m = v[i].abs_approx(64);
    if (m.cmp(best) > 0) {
      best = m;
      pv = i;
    }
  }
  Scalar scale = v[pv];
  for (int i = 0; i < v.dim(); ++i) v[i] = v[i] / scale;
  Scalar sp(1);
  for (int i = 0; i < d; ++i) sp = sp * scale;
  c = c * sp;
}

void append_terms(WaringDecomposition& out, const WaringDecomposition& piece,
                  const LineBasis& basis, const Scalar& multiplier,
                  const TolerancePolicy& policy) {
  for (const auto& [c, vbin] : piece.terms) {
    Scalar coeff = c * multiplier;
    HomogeneousForm v = vbin[0] * basis.u + vbin[1] * basis.w;
    if (is_zero(coeff, policy) || form_is_zero(v, policy)) continue;
    normalize_term(coeff, v, out.target_degree);
    bool merged = false;
    for (auto& [c0, v0] : out.terms) {
      if (proportional(v0, v, policy)) {
        // Normalized representatives match up to tolerance; accumulate.
        c0 += coeff;
        merged = true;
        break;
      }
    }
    if (!merged) out.terms.push_back({coeff, v});
  }
}

void drop_negligible_terms(WaringDecomposition& dec, const TolerancePolicy& policy,
                           const BigFloat& f_scale) {
  long sc = scale_exp_of(f_scale);
  std::vector<std::pair<Scalar, HomogeneousForm>> kept;
  for (auto& term : dec.terms)
    if (!is_zero_rel(term.first, policy, sc)) kept.push_back(term);
  dec.terms = std::move(kept);
}

// Particular solution of f = g1 + g2 with g1 killed by l1 and g2 by l2.
std::pair<HomogeneousForm, HomogeneousForm> kernel_split(const HomogeneousForm& f,
                                                         const LineBasis& basis1,
                                                         const LineBasis& basis2,
                                                         const TolerancePolicy& policy) {
  int d = f.degree();
  int bdim = d + 1;
  std::vector<HomogeneousForm> cols;
  for (int k = 0; k < bdim; ++k) {
    HomogeneousForm mono(2, d);
    mono[k] = Scalar(1);
    cols.push_back(basis1.embed_form(mono));
  }
  for (int k = 0; k < bdim; ++k) {
    HomogeneousForm mono(2, d);
    mono[k] = Scalar(1);
    cols.push_back(basis2.embed_form(mono));
  }
  Mat m(f.dim(), 2 * bdim);
  for (int c = 0; c < 2 * bdim; ++c)
    for (int r = 0; r < f.dim(); ++r) m.at(r, c) = cols[c][r];
  std::vector<Scalar> rhs(f.coeffs());
  auto sol = solve_consistent(m, rhs, policy);
  if (!sol) fail(Err::IdentityFailure, "kernel split is inconsistent");
  HomogeneousForm g1(3, d), g2(3, d);
  for (int c = 0; c < bdim; ++c) g1 = g1 + (*sol)[c] * cols[c];
  for (int c = 0; c < bdim; ++c) g2 = g2 + (*sol)[bdim + c] * cols[bdim + c];
  return {g1, g2};
}

int restricted_rank(const HomogeneousForm& piece, const LineBasis& basis,
                    const TolerancePolicy& policy) {
  HomogeneousForm bar = basis.restrict_form(piece, policy);
  if (form_is_zero(bar, policy)) return 0;
  return binary_rank(bar, policy);
}

}  // namespace

void build_f4(DecompState& state, const TolerancePolicy& policy) {
  const auto& lines = state.config.lines;
  if (state.config.kind != 4) fail(Err::CertificationViolated, "build_f4 needs a kind-4 configuration");

  SideData side = build_side(state.f, lines, 3, policy);
  state.basis4 = side.basis;
  state.pencil4 = side.pencil;

  // Send the a-scalar of l3 to t0.
  auto m = normalize_to_t0(side.pencil.a[2], policy);
  ParamForm f4_bin = param_substitute(side.pencil.r, m, policy);
  state.a14 = ps_substitute(side.pencil.a[0], m);
  state.a24 = ps_substitute(side.pencil.a[1], m);
  ParamScalar a34 = ps_substitute(side.pencil.a[2], m);
  if (!ps_is_t0(a34, policy)) fail(Err::InternalIdentityFailure, "a34 is not t0 after the change");

  state.f4 = state.basis4.embed_param(f4_bin);
  state.v34 = cross_point(lines[2], lines[3]);

  // l1 l2 l3 -| f4 = 240 a14 a24 t0 (l1 l2 l3 -| f)
  HomogeneousForm q = contract(product3(lines[0], lines[1], lines[2]), state.f);
  ParamForm lhs = param_contract(product3(lines[0], lines[1], lines[2]), state.f4);
  ParamForm rhs = (Scalar(240) * (state.a14 * state.a24 * ParamScalar::t0())) * pf_from_form(q);
  if (!pf_equal_tol(lhs, rhs, policy))
    fail(Err::InternalIdentityFailure, "triple contraction identity failed for f4");
}

void build_f3_matched(DecompState& state, const TolerancePolicy& policy) {
  const auto& lines = state.config.lines;
  SideData side = build_side(state.f, lines, 2, policy);
  state.basis3 = side.basis;
  state.pencil3 = side.pencil;

  // Quotient parameterizations on both sides.
  ParamForm r3p = state.basis3.embed_param(r_quotient(side.pencil, {0, 1}, policy));
  DualForm l1l2 = multiply(lines[0], lines[1]);
  ParamForm f4p = param_exact_divide(param_contract(l1l2, state.f4), state.a14 * state.a24, policy);

  HomogeneousForm c12 = contract(l1l2, state.f);
  ParamForm target = (Scalar(240) * ParamScalar::t0()) * pf_from_form(c12) - f4p;

  // Matching identities of the target line.
  {
    long tsc = scale_exp_of(pf_max_abs(target)) + 8;
    ParamForm l3t = param_contract(lines[2], target);
    if (!pf_negligible(l3t, policy, tsc))
      fail(Err::InternalIdentityFailure, "l3 does not annihilate the matching target");
    ParamForm l4t = param_contract(lines[3], target);
    HomogeneousForm c124 = contract(multiply(l1l2, lines[3]), state.f);
    ParamForm expect = (Scalar(240) * ParamScalar::t0()) * pf_from_form(c124);
    if (!pf_equal_tol(l4t, expect, policy))
      fail(Err::InternalIdentityFailure, "l4 contraction of the matching target is off");
  }

  // Solve the 2x2 change: columns of [A B] against the target rows.
  const HomogeneousForm& a = r3p.row(0);
  const HomogeneousForm& b = r3p.row(1);
  Mat m(a.dim(), 2);
  for (int i = 0; i < a.dim(); ++i) {
    m.at(i, 0) = a[i];
    m.at(i, 1) = b[i];
  }
  auto col0 = solve_consistent(m, target.row(0).coeffs(), policy);
  auto col1 = solve_consistent(m, target.row(1).coeffs(), policy);
  if (!col0 || !col1) fail(Err::SingularChange, "matching change has no solution");
  std::array<Scalar, 4> change = {(*col0)[0], (*col1)[0], (*col0)[1], (*col1)[1]};
  Scalar det = change[0] * change[3] - change[1] * change[2];
  if (is_zero(det, policy)) fail(Err::SingularChange, "matching change is singular");

  state.f3 = param_substitute(state.basis3.embed_param(side.pencil.r), change, policy);
  state.a13 = ps_substitute(side.pencil.a[0], change);
  state.a23 = ps_substitute(side.pencil.a[1], change);
  ParamScalar a43 = ps_substitute(side.pencil.a[2], change);
  if (!ps_is_t0(a43, policy)) fail(Err::InternalIdentityFailure, "a43 is not t0 after matching");

  // The substituted pencil must reproduce the target through l1 l2.
  ParamForm check = param_exact_divide(param_contract(l1l2, state.f3), state.a13 * state.a23, policy);
  if (!pf_equal_tol(check, target, policy))
    fail(Err::InternalIdentityFailure, "matched f3 misses the target parameterization");

  state.v12 = cross_point(lines[0], lines[1]);
}

void assemble(DecompState& state, const TolerancePolicy& policy) {
  const auto& lines = state.config.lines;
  state.g = (state.a14 * state.a24) * state.f3 + (state.a13 * state.a23) * state.f4;

  // g vanishes at (0, 1), i.e. the pure t1 row is zero (checked at the
  // working scale of g).
  long gsc = scale_exp_of(pf_max_abs(state.g)) + 8;
  for (int i = 0; i < state.g.row(0).dim(); ++i)
    if (!is_zero_rel(state.g.row(state.g.t_degree())[i], policy, gsc))
      fail(Err::IdentityFailure, "g does not vanish at (0,1)");
  {
    // Rounding dust in the discarded row would defeat exact division.
    HomogeneousForm zero_row(state.g.nvars(), state.g.s_degree());
    state.g.row(state.g.t_degree()) = zero_row;
  }
  state.f34 = param_exact_divide(state.g, ParamScalar::t0(), policy);

  ParamScalar big = state.a13 * state.a23 * state.a14 * state.a24;
  state.f12 = (Scalar(240) * big) * pf_from_form(state.f) - state.f34;

  DualForm l1l2 = multiply(lines[0], lines[1]);
  ParamForm g12 = param_contract(l1l2, state.g);
  ParamForm expect = (Scalar(240) * (big * ParamScalar::t0())) * pf_from_form(contract(l1l2, state.f));
  if (!pf_equal_tol(g12, expect, policy)) fail(Err::IdentityFailure, "g12 identity failed");
  if (!pf_negligible(param_contract(l1l2, state.f12), policy,
                     scale_exp_of(pf_max_abs(state.f12)) + 8))
    fail(Err::IdentityFailure, "l1 l2 does not annihilate f12");

  ParamForm lhs = (Scalar(240) * (big * ParamScalar::t0())) * pf_from_form(state.f);
  ParamForm rhs = ParamScalar::t0() * state.f12 + (state.a14 * state.a24) * state.f3 +
                  (state.a13 * state.a23) * state.f4;
  if (!pf_equal_tol(lhs, rhs, policy)) fail(Err::IdentityFailure, "master identity failed");
}

// Values of nu at which the shifted piece can drop rank, read off from the
// minors of the nu-linear catalecticants (rank <= 2 via delta = 2, rank <= 1
// via delta = 1). A vanishing determinant only nominates candidates; the
// caller certifies ranks afterwards.
static std::vector<Scalar> low_rank_shifts(const HomogeneousForm& base, const HomogeneousForm& dir,
                                           const TolerancePolicy& policy) {
  std::vector<Scalar> out;
  auto roots_of = [&](const ParamScalar& det) {
    std::vector<Scalar> res;
    std::vector<Scalar> coeffs;
    for (int i = 0; i <= det.degree(); ++i) coeffs.push_back(det[i]);
    HomogeneousForm poly(2, det.degree(), coeffs);
    if (form_is_zero(poly, policy)) return res;
    try {
      for (auto& [pt, mult] : binary_roots(poly, policy)) {
        if (is_zero(pt.first, policy)) continue;  // root at infinity
        res.push_back(pt.second / pt.first);
      }
    } catch (const Error&) {
    }
    return res;
  };

  // delta = 2: 4x3 catalecticant, 3x3 minors, cubic determinants.
  {
    Mat mb = catalecticant(base, 2).m;
    Mat md = catalecticant(dir, 2).m;
    for (int skip = 0; skip < 4; ++skip) {
      std::array<ParamScalar, 9> e;
      int idx = 0;
      for (int r = 0; r < 4; ++r) {
        if (r == skip) continue;
        for (int c = 0; c < 3; ++c) e[idx++] = ParamScalar::linear(mb.at(r, c), md.at(r, c));
      }
      ParamScalar det = e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6]) +
                        e[2] * (e[3] * e[7] - e[4] * e[6]);
      auto res = roots_of(det);
      if (!res.empty()) {
        out.insert(out.end(), res.begin(), res.end());
        break;
      }
    }
  }
  // delta = 1: 5x2 catalecticant, 2x2 minors, quadratic determinants.
  {
    Mat mb = catalecticant(base, 1).m;
    Mat md = catalecticant(dir, 1).m;
    for (int r0 = 0; r0 < 5; ++r0) {
      bool done = false;
      for (int r1 = r0 + 1; r1 < 5 && !done; ++r1) {
        ParamScalar a = ParamScalar::linear(mb.at(r0, 0), md.at(r0, 0));
        ParamScalar b = ParamScalar::linear(mb.at(r0, 1), md.at(r0, 1));
        ParamScalar c = ParamScalar::linear(mb.at(r1, 0), md.at(r1, 0));
        ParamScalar d = ParamScalar::linear(mb.at(r1, 1), md.at(r1, 1));
        auto res = roots_of(a * d - b * c);
        if (!res.empty()) {
          out.insert(out.end(), res.begin(), res.end());
          done = true;
        }
      }
      if (done) break;
    }
  }
  return out;
}

std::pair<HomogeneousForm, HomogeneousForm> split_f12(const HomogeneousForm& f12s,
                                                      const DualForm& l1, const DualForm& l2,
                                                      const HomogeneousForm& v12,
                                                      const TolerancePolicy& policy, Rng& rng,
                                                      int max_retries, Scalar* nu_out) {
  long sc = scale_exp_of(form_max_abs(f12s)) + 8;
  HomogeneousForm pairc = contract(multiply(l1, l2), f12s);
  for (int i = 0; i < pairc.dim(); ++i)
    if (!is_zero_rel(pairc[i], policy, sc)) fail(Err::NotInKernel, "l1 l2 -| f12 != 0");
  if (form_is_zero(contract(l1, f12s), policy) || form_is_zero(contract(l2, f12s), policy))
    fail(Err::CertificationViolated, "f12 is annihilated by a single line");

  LineBasis basis1 = line_basis(l1, policy);
  LineBasis basis2 = line_basis(l2, policy);
  auto [f1_base, f2_base] = kernel_split(f12s, basis1, basis2, policy);

  HomogeneousForm v5 = power(v12, 5);

  // Canonical base: shift to the lowest-rank representative among nu = 0 and
  // the catalecticant drop points of either side.
  {
    std::vector<Scalar> candidates = {Scalar(0)};
    HomogeneousForm bar1 = basis1.restrict_form(f1_base, policy);
    HomogeneousForm dir1 = basis1.restrict_form(v5, policy);
    HomogeneousForm bar2 = basis2.restrict_form(f2_base, policy);
    HomogeneousForm dir2 = Scalar(-1) * basis2.restrict_form(v5, policy);
    for (Scalar s : low_rank_shifts(bar1, dir1, policy)) candidates.push_back(s);
    for (Scalar s : low_rank_shifts(bar2, dir2, policy)) candidates.push_back(s);
    int best_max = 99, best_sum = 99;
    Scalar best_shift(0);
    bool have = false;
    for (const Scalar& s : candidates) {
      HomogeneousForm c1 = f1_base + s * v5;
      HomogeneousForm c2 = f2_base - s * v5;
      int r1 = restricted_rank(c1, basis1, policy);
      int r2 = restricted_rank(c2, basis2, policy);
      if (r1 > 3 || r2 > 3) continue;
      int mx = std::max(r1, r2), sm = r1 + r2;
      if (!have || mx < best_max || (mx == best_max && sm < best_sum)) {
        have = true;
        best_max = mx;
        best_sum = sm;
        best_shift = s;
      }
    }
    if (have) {
      if (nu_out) *nu_out = Scalar(0);
      return {f1_base + best_shift * v5, f2_base - best_shift * v5};
    }
  }
  // Lattice step scaled to the size of f12 relative to v12^5.
  long step_exp = scale_exp_of(form_max_abs(f12s)) - scale_exp_of(form_max_abs(v5));
  mpq_class step(1);
  if (step_exp >= 0) {
    mpz_mul_2exp(step.get_num().get_mpz_t(), step.get_num().get_mpz_t(),
                 static_cast<unsigned long>(step_exp));
  } else {
    mpz_mul_2exp(step.get_den().get_mpz_t(), step.get_den().get_mpz_t(),
                 static_cast<unsigned long>(-step_exp));
  }
  step.canonicalize();

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Scalar nu = attempt == 0 ? Scalar(0) : Scalar(mpq_class(rng.uniform(-20, 20)) * step);
    HomogeneousForm f1 = f1_base + nu * v5;
    HomogeneousForm f2 = f2_base - nu * v5;
    int r1 = restricted_rank(f1, basis1, policy);
    int r2 = restricted_rank(f2, basis2, policy);
    if (r1 <= 3 && r2 <= 3) {
      if (nu_out) *nu_out = nu;
      return {f1, f2};
    }
  }
  fail(Err::RetriesExhausted, "no nu with both split ranks <= 3");
}

void choose_sample(DecompState& state, const TolerancePolicy& policy, Rng& rng, int max_retries) {
  const auto& lines = state.config.lines;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    state.sample_retries = attempt;
    Scalar lam(rng.uniform(1, 20) * (rng.next() % 2 == 0 ? 1 : -1));
    Scalar mu(rng.uniform(-20, 20));
    bool ok = true;
    for (const ParamScalar* a : {&state.a13, &state.a23, &state.a14, &state.a24}) {
      // Keep a healthy margin: a nearly vanishing factor would poison the
      // conditioning of everything scaled by 1/(240 a13 a23 a14 a24).
      Scalar value = a->evaluate(lam, mu);
      long coeff_exp = std::max(scale_exp_of((*a)[0].abs_approx(64)),
                                scale_exp_of((*a)[1].abs_approx(64)));
      BigFloat mag = value.abs_approx(64);
      if (mag.abs_leq_2exp(coeff_exp + policy.zero_exp / 4)) ok = false;
    }
    if (!ok) continue;

    HomogeneousForm f12s = param_evaluate(state.f12, lam, mu);
    HomogeneousForm f3s = param_evaluate(state.f3, lam, mu);
    HomogeneousForm f4s = param_evaluate(state.f4, lam, mu);
    if (form_is_zero(contract(lines[0], f12s), policy) ||
        form_is_zero(contract(lines[1], f12s), policy))
      continue;
    if (restricted_rank(f3s, state.basis3, policy) != 2) continue;
    if (restricted_rank(f4s, state.basis4, policy) != 2) continue;

    // Master identity evaluated at the sample.
    Scalar big = (state.a13 * state.a23 * state.a14 * state.a24).evaluate(lam, mu);
    Scalar scale = Scalar(240) * big * lam;
    HomogeneousForm sum = lam * f12s + (state.a14 * state.a24).evaluate(lam, mu) * f3s +
                          (state.a13 * state.a23).evaluate(lam, mu) * f4s;
    HomogeneousForm target = scale * state.f;
    long sc = scale_exp_of(form_max_abs(target)) + 8;
    for (int i = 0; i < sum.dim(); ++i)
      if (!is_zero_rel(sum[i] - target[i], policy, sc))
        fail(Err::IdentityFailure, "sampled master identity does not balance");

    std::pair<HomogeneousForm, HomogeneousForm> pieces;
    try {
      pieces = split_f12(f12s, lines[0], lines[1], state.v12, policy, rng, max_retries, &state.nu);
    } catch (const Error&) {
      continue;  // exceptional sample; redraw
    }
    state.lam = lam;
    state.mu = mu;
    state.f12s = f12s;
    state.f3s = f3s;
    state.f4s = f4s;
    state.scale = scale;
    state.piece1 = pieces.first;
    state.piece2 = pieces.second;
    return;
  }
  fail(Err::RetriesExhausted, "no usable sample parameter found");
}

WaringDecomposition decompose_with_configuration(const HomogeneousForm& f,
                                                 const LineConfiguration& config,
                                                 const TolerancePolicy& policy, Rng& rng,
                                                 RunReport& rep, int max_retries) {
  WaringDecomposition out;
  out.target_degree = 5;
  out.residual = BigFloat(policy.precision_bits);
  BigFloat f_scale = form_max_abs(f, policy.precision_bits);

  if (config.kind == 2) {
    LineBasis basis1 = line_basis(config.lines[0], policy);
    LineBasis basis2 = line_basis(config.lines[1], policy);
    auto [g1, g2] = kernel_split(f, basis1, basis2, policy);
    int idx = 1;
    for (auto& [g, basis] : {std::pair<HomogeneousForm&, LineBasis&>{g1, basis1},
                             std::pair<HomogeneousForm&, LineBasis&>{g2, basis2}}) {
      HomogeneousForm bar = basis.restrict_form(g, policy);
      if (!form_is_zero(bar, policy)) {
        Rng sub = rng.fork(idx);
        WaringDecomposition piece = binary_decompose(bar, policy, sub);
        rep.add("piece" + std::to_string(idx) + "_rank", std::to_string(piece.terms.size()));
        append_terms(out, piece, basis, Scalar(1), policy);
      }
      ++idx;
    }
  } else if (config.kind == 3) {
    const DualForm& l1 = config.lines[0];
    const DualForm& l2 = config.lines[1];
    const DualForm& l3 = config.lines[2];
    LineBasis basis1 = line_basis(l1, policy);
    LineBasis basis2 = line_basis(l2, policy);
    LineBasis basis3 = line_basis(l3, policy);

    // Rank-3 element of W_{p,t} in the l3 world, normalized to the fiber.
    HomogeneousForm t = contract(multiply(l1, l2), f);
    HomogeneousForm tbar = basis3.restrict_form(t, policy);
    DualForm pbar = multiply(basis3.reduce_dual(l1), basis3.reduce_dual(l2));
    Rng sub = rng.fork(3);
    HomogeneousForm g3bar = rank3_element(pbar, tbar, policy, sub);
    HomogeneousForm w = contract(pbar, g3bar);
    int pivot = 0;
    BigFloat best = tbar[0].abs_approx(64);
    for (int i = 1; i < tbar.dim(); ++i) {
      BigFloat m = tbar[i].abs_approx(64);
      if (m.cmp(best) > 0) {
        best = m;
        pivot = i;
      }
    }
    Scalar ratio = w[pivot] / tbar[pivot];
    HomogeneousForm f3 = (Scalar(1) / ratio) * basis3.embed_form(g3bar);

    auto [f1_base, f2_base] = kernel_split(f - f3, basis1, basis2, policy);
    HomogeneousForm v12_5 = power(cross_point(l1, l2), 5);
    HomogeneousForm v13_5 = power(cross_point(l1, l3), 5);
    HomogeneousForm v23_5 = power(cross_point(l2, l3), 5);

    bool found = false;
    for (int attempt = 0; attempt < max_retries && !found; ++attempt) {
      Scalar alpha(0), beta(0), gamma(0);
      if (attempt > 0) {
        alpha = Scalar(rng.uniform(-9, 9));
        if (attempt >= 16) {
          beta = Scalar(rng.uniform(-9, 9));
          gamma = Scalar(rng.uniform(-9, 9));
        }
      }
      HomogeneousForm c1 = f1_base + alpha * v12_5 + beta * v13_5;
      HomogeneousForm c2 = f2_base - alpha * v12_5 + gamma * v23_5;
      HomogeneousForm c3 = f3 - beta * v13_5 - gamma * v23_5;
      int r1 = restricted_rank(c1, basis1, policy);
      int r2 = restricted_rank(c2, basis2, policy);
      int r3 = restricted_rank(c3, basis3, policy);
      if (r1 > 4 || r2 > 3 || r3 > 3) continue;
      rep.add("piece1_rank", std::to_string(r1));
      rep.add("piece2_rank", std::to_string(r2));
      rep.add("piece3_rank", std::to_string(r3));
      int idx = 1;
      for (auto& [piece, basis] : {std::pair<HomogeneousForm&, LineBasis&>{c1, basis1},
                                   std::pair<HomogeneousForm&, LineBasis&>{c2, basis2},
                                   std::pair<HomogeneousForm&, LineBasis&>{c3, basis3}}) {
        HomogeneousForm bar = basis.restrict_form(piece, policy);
        if (!form_is_zero(bar, policy)) {
          Rng sub2 = rng.fork(100 + idx);
          append_terms(out, binary_decompose(bar, policy, sub2), basis, Scalar(1), policy);
        }
        ++idx;
      }
      found = true;
    }
    if (!found) fail(Err::RetriesExhausted, "no consistent triple split with ranks (4,3,3)");
  } else {
    DecompState state;
    state.f = f;
    state.config = config;
    build_f4(state, policy);
    build_f3_matched(state, policy);
    assemble(state, policy);
    choose_sample(state, policy, rng, max_retries);
    rep.add("sample_retries", std::to_string(state.sample_retries));
    rep.add("sample_lambda", state.lam.str());
    rep.add("sample_mu", state.mu.str());
    rep.add("nu", state.nu.str());

    LineBasis basis1 = line_basis(config.lines[0], policy);
    LineBasis basis2 = line_basis(config.lines[1], policy);

    Scalar inv_scale = Scalar(1) / state.scale;
    Scalar c12 = state.lam * inv_scale;
    Scalar c3 = (state.a14 * state.a24).evaluate(state.lam, state.mu) * inv_scale;
    Scalar c4 = (state.a13 * state.a23).evaluate(state.lam, state.mu) * inv_scale;

    struct PieceJob {
      const HomogeneousForm* form;
      const LineBasis* basis;
      Scalar mult;
      const char* name;
      int expect;
    };
    std::vector<PieceJob> jobs = {{&state.piece1, &basis1, c12, "piece1", 3},
                                  {&state.piece2, &basis2, c12, "piece2", 3},
                                  {&state.f3s, &state.basis3, c3, "piece3", 2},
                                  {&state.f4s, &state.basis4, c4, "piece4", 2}};
    int idx = 1;
    for (auto& job : jobs) {
      HomogeneousForm bar = job.basis->restrict_form(*job.form, policy);
      if (!form_is_zero(bar, policy)) {
        int rank = binary_rank(bar, policy);
        if (rank > job.expect) fail(Err::CertificationViolated, "piece rank certificate failed");
        rep.add(std::string(job.name) + "_rank", std::to_string(rank));
        Rng sub = rng.fork(200 + idx);
        append_terms(out, binary_decompose(bar, policy, sub), *job.basis, job.mult, policy);
      }
      ++idx;
    }
  }

  drop_negligible_terms(out, policy, f_scale);
  if (static_cast<int>(out.terms.size()) > 10)
    fail(Err::CertificationViolated, "more than ten terms produced");
  out.residual = verify_decomposition(f, out, policy);
  rep.add("terms", std::to_string(out.terms.size()));
  rep.add("residual", out.residual.str());
  return out;
}

WaringDecomposition decompose_ternary_quintic(const HomogeneousForm& f,
                                              const TolerancePolicy& policy, std::uint64_t seed,
                                              RunReport* report, int max_retries) {
  if (f.nvars() != 3 || f.degree() != 5) fail(Err::DegreeMismatch, "ternary quintic expected");
  if (form_is_zero(f, policy)) fail(Err::ZeroForm, "cannot decompose the zero form");
  Rng rng(seed);
  RunReport local;
  RunReport& rep = report ? *report : local;
  rep.add("seed", std::to_string(seed));
  rep.add("precision_bits", std::to_string(policy.precision_bits));

  RefineResult refined = refine_configuration(f, policy, rng, max_retries);
  rep.add("configuration_kind", std::to_string(refined.config.kind));
  rep.add("configuration_retries", std::to_string(refined.retries));
  return decompose_with_configuration(f, refined.config, policy, rng, rep, max_retries);
}

}  // namespace waring
