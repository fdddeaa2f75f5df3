#include "waring/lineconfig.hpp"

#include <algorithm>

namespace waring {

namespace {

struct Budget {
  int used = 0;
  int cap = 64;
  void spend() {
    if (++used > cap) fail(Err::RetriesExhausted, "configuration search budget exhausted");
  }
};

DualForm random_dual_line(Rng& rng) {
  while (true) {
    DualForm l = linear_form<Ring::upper>(
        3, {Scalar(rng.uniform(-9, 9)), Scalar(rng.uniform(-9, 9)), Scalar(rng.uniform(-9, 9))});
    for (int i = 0; i < 3; ++i)
      if (l[i].rat() != 0) return l;
  }
}

bool lines_distinct(const std::vector<DualForm>& lines, const TolerancePolicy& policy) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (form_is_zero(lines[i], policy)) return false;
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (proportional(lines[i], lines[j], policy)) return false;
  }
  return true;
}

DualForm product_of(const std::vector<DualForm>& lines, int omit = -1) {
  DualForm acc(lines[0].nvars(), 0);
  acc[0] = Scalar(1);
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    if (i == omit) continue;
    acc = multiply(acc, lines[i]);
  }
  return acc;
}

template <Ring R>
std::array<std::array<Scalar, 3>, 3> quadric_matrix(const Form<R>& q) {
  std::array<std::array<Scalar, 3>, 3> m;
  Scalar half(1, 2);
  auto coeff = [&](int i, int j) {
    std::array<int, 3> e = {0, 0, 0};
    e[i] += 1;
    e[j] += 1;
    return q[monomial_index(3, 2, e[0], e[1])];
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = i == j ? coeff(i, i) : half * coeff(i, j);
  return m;
}

template <Ring R>
Mat quadric_mat(const Form<R>& q) {
  auto grid = quadric_matrix(q);
  Mat m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.at(i, j) = grid[i][j];
  return m;
}

Scalar det3(const Mat& m) {
  return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
         m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
         m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

// Direction of v for a rank-one lower quadric q = c v^2.
HomogeneousForm square_root_direction(const HomogeneousForm& q) {
  auto m = quadric_matrix(q);
  int best = 0;
  BigFloat best_mag = m[0][0].abs_approx(64);
  for (int i = 1; i < 3; ++i) {
    BigFloat mag = m[i][i].abs_approx(64);
    if (mag.cmp(best_mag) > 0) {
      best = i;
      best_mag = mag;
    }
  }
  return linear_form<Ring::lower>(3, {m[best][0], m[best][1], m[best][2]});
}

// Two independent dual lines annihilating the point v.
std::pair<DualForm, DualForm> annihilator_pair(const HomogeneousForm& v) {
  int pv = 0;
  BigFloat best = v[0].abs_approx(64);
  for (int i = 1; i < 3; ++i) {
    BigFloat mag = v[i].abs_approx(64);
    if (mag.cmp(best) > 0) {
      pv = i;
      best = mag;
    }
  }
  int j1 = pv == 0 ? 1 : 0;
  int j2 = pv == 2 ? 1 : 2;
  auto make = [&](int j) {
    std::vector<Scalar> c(3, Scalar(0));
    c[j] = v[pv];
    c[pv] = -v[j];
    return linear_form<Ring::upper>(3, std::move(c));
  };
  return {make(j1), make(j2)};
}

// Lift of a binary dual form onto the complement coordinates of the basis.
DualForm lift_dual_form(const LineBasis& basis, const DualForm& g) {
  DualForm acc(3, g.degree());
  DualForm y0 = basis.lift_dual(linear_form<Ring::upper>(2, {Scalar(1), Scalar(0)}));
  DualForm y1 = basis.lift_dual(linear_form<Ring::upper>(2, {Scalar(0), Scalar(1)}));
  for (int k = 0; k <= g.degree(); ++k) {
    DualForm mono = multiply(power(y0, g.degree() - k), power(y1, k));
    acc = acc + g[k] * mono;
  }
  return acc;
}

// Restriction of the polynomial function of a ternary dual form to the line
// {x = 0} parameterized by the basis (u, w).
HomogeneousForm dual_on_line(const DualForm& p, const LineBasis& basis) {
  HomogeneousForm acc(2, p.degree());
  for (int i = 0; i < p.dim(); ++i) {
    auto mu = monomial_exponents(3, p.degree(), i);
    HomogeneousForm term(2, 0);
    term[0] = p[i];
    for (int var = 0; var < 3; ++var) {
      HomogeneousForm coord = linear_form<Ring::lower>(2, {basis.u[var], basis.w[var]});
      for (int k = 0; k < mu[var]; ++k) term = multiply(term, coord);
    }
    acc = acc + term;
  }
  return acc;
}

// Exact-first root of a binary cubic that is a perfect cube.
HomogeneousForm cube_root_point(const HomogeneousForm& t, const TolerancePolicy& policy) {
  if (form_is_rational(t)) {
    HomogeneousForm t0 = partial_derivative(t, 0);
    HomogeneousForm t1 = partial_derivative(t, 1);
    auto g = binary_gcd(t0, t1, policy);  // = v^2 up to scale
    if (g.size() == 3) {
      HomogeneousForm sq(2, 2, g);
      auto roots = binary_roots(sq, policy);
      if (roots.size() == 1 && roots[0].second == 2)
        return linear_form<Ring::lower>(2, {roots[0].first.first, roots[0].first.second});
    }
  }
  auto roots = binary_roots(t, policy);
  if (roots.size() != 1 || roots[0].second != 3)
    fail(Err::InternalIdentityFailure, "cube_root_point called on a non-cube");
  return linear_form<Ring::lower>(2, {roots[0].first.first, roots[0].first.second});
}

}  // namespace

PowerTest ternary_quadratic_square(const HomogeneousForm& q, const TolerancePolicy& policy) {
  if (q.nvars() != 3 || q.degree() != 2) fail(Err::DegreeMismatch, "ternary quadratic expected");
  if (form_is_zero(q, policy)) return PowerTest{true, false};
  int rank = mat_rank(quadric_mat(q), policy);
  return PowerTest{false, rank <= 1};
}

std::optional<std::pair<DualForm, DualForm>> factor_conic(const DualForm& q,
                                                          const TolerancePolicy& policy) {
  if (q.nvars() != 3 || q.degree() != 2) fail(Err::DegreeMismatch, "ternary dual conic expected");
  if (form_is_zero(q, policy)) return std::nullopt;
  Mat m = quadric_mat(q);
  auto kernel = kernel_basis(m, policy);
  if (kernel.empty()) return std::nullopt;  // irreducible

  std::vector<Scalar> k = kernel[0];
  int pv = 0;
  BigFloat best = k[0].abs_approx(64);
  for (int i = 1; i < 3; ++i) {
    BigFloat mag = k[i].abs_approx(64);
    if (mag.cmp(best) > 0) {
      pv = i;
      best = mag;
    }
  }
  for (int i = 0; i < 3; ++i)
    if (i != pv) k[i] = k[i] / k[pv];
  k[pv] = Scalar(1);
  int a = pv == 0 ? 1 : 0;
  int b = pv == 2 ? 1 : 2;

  // Quadric as a binary form in the coordinates (xi_a - k_a xi_pv, xi_b - k_b xi_pv).
  HomogeneousForm bq(2, 2);
  bq[0] = m.at(a, a);
  bq[1] = Scalar(2) * m.at(a, b);
  bq[2] = m.at(b, b);
  if (form_is_zero(bq, policy)) return std::nullopt;  // degenerate beyond rank 2

  auto [f1, f2] = factor_binary_quadratic(bq, policy);
  auto to_line = [&](const HomogeneousForm& bf) {
    std::vector<Scalar> c(3, Scalar(0));
    c[a] = bf[0];
    c[b] = bf[1];
    c[pv] = -(bf[0] * k[a] + bf[1] * k[b]);
    return linear_form<Ring::upper>(3, std::move(c));
  };
  DualForm l1 = to_line(f1);
  DualForm l2 = to_line(f2);
  DualForm prod = multiply(l1, l2);
  long sc = scale_exp_of(form_max_abs(q)) + 2;
  for (int i = 0; i < prod.dim(); ++i)
    if (!is_zero_rel(prod[i] - q[i], policy, sc))
      fail(Err::InternalIdentityFailure, "conic factorization mismatch");
  return std::make_pair(l1, l2);
}

bool certify_configuration(const HomogeneousForm& f, const LineConfiguration& config,
                           const TolerancePolicy& policy) {
  if (f.nvars() != 3 || f.degree() != 5) return false;
  int k = config.kind;
  if (k < 2 || k > 4 || static_cast<int>(config.lines.size()) != k) return false;
  if (!lines_distinct(config.lines, policy)) return false;

  long sc = scale_exp_of(form_max_abs(f)) + 8;
  HomogeneousForm full = contract(product_of(config.lines), f);
  for (int i = 0; i < full.dim(); ++i)
    if (!is_zero_rel(full[i], policy, sc)) return false;
  if (k == 2) return true;

  if (k == 3) {
    // omit-1 and omit-2 pair contractions must not be cubes; omit-0 nonzero.
    for (int omit = 1; omit <= 2; ++omit) {
      HomogeneousForm cubic = contract(product_of(config.lines, omit), f);
      LineBasis basis = line_basis(config.lines[omit], policy);
      HomogeneousForm restricted;
      try {
        restricted = basis.restrict_form(cubic, policy);
      } catch (const Error&) {
        return false;
      }
      PowerTest test = is_cube(restricted, policy);
      if (test.zero || test.yes) return false;
    }
    HomogeneousForm p0 = contract(product_of(config.lines, 0), f);
    return !form_is_zero(p0, policy);
  }

  // kind 4: omit-3 and omit-2 triples non-square; omit-1 and omit-0 nonzero.
  for (int omit = 2; omit <= 3; ++omit) {
    HomogeneousForm quad = contract(product_of(config.lines, omit), f);
    PowerTest test = ternary_quadratic_square(quad, policy);
    if (test.zero || test.yes) return false;
  }
  for (int omit = 0; omit <= 1; ++omit) {
    HomogeneousForm quad = contract(product_of(config.lines, omit), f);
    if (form_is_zero(quad, policy)) return false;
  }
  return true;
}

QuarticSearch find_apolar_split_quartic(const HomogeneousForm& f, const TolerancePolicy& policy,
                                        Rng& rng, int max_retries) {
  if (f.nvars() != 3 || f.degree() != 5) fail(Err::DegreeMismatch, "ternary quintic expected");
  if (form_is_zero(f, policy)) fail(Err::ZeroForm, "zero form");

  auto classify = [&](const DualForm& conic) -> std::optional<QuarticSearch> {
    auto split = factor_conic(conic, policy);
    if (!split) return std::nullopt;
    if (proportional(split->first, split->second, policy))
      return QuarticSearch{QuarticSearch::Outcome::double_line, {split->first}};
    return QuarticSearch{QuarticSearch::Outcome::kind2, {split->first, split->second}};
  };

  // Degree-2 apolar conics give two-line configurations directly. Double
  // lines are kept as a fallback: a distinct-factor pair is always preferable.
  auto k2 = exact_kernel(catalecticant(f, 2), policy);
  std::optional<QuarticSearch> fallback;
  auto stage0 = [&](const DualForm& q) -> std::optional<QuarticSearch> {
    if (auto hit = classify(q)) {
      if (hit->outcome == QuarticSearch::Outcome::kind2) return hit;
      if (!fallback) fallback = hit;
    }
    return std::nullopt;
  };
  for (const DualForm& q : k2) {
    if (auto hit = stage0(q)) return *hit;
  }
  for (std::size_t i = 0; i + 1 < k2.size(); ++i) {
    if (auto hit = stage0(k2[i] + k2[i + 1])) return *hit;
  }
  if (k2.size() >= 2) {
    // Reducible members along a pencil of apolar conics.
    Mat ma = quadric_mat(k2[0]);
    Mat mb = quadric_mat(k2[1]);
    Mat vander(4, 4);
    std::vector<Scalar> rhs(4);
    std::vector<long> pts = {0, 1, -1, 2};
    for (int r = 0; r < 4; ++r) {
      Scalar s(pts[r]);
      Mat mix(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mix.at(i, j) = ma.at(i, j) + s * mb.at(i, j);
      rhs[r] = det3(mix);
      Scalar pw(1);
      for (int c = 0; c < 4; ++c) {
        vander.at(r, c) = pw;
        pw = pw * s;
      }
    }
    auto cubic = solve_consistent(vander, rhs, policy);
    if (cubic) {
      try {
        for (auto& [root, mult] : univariate_roots(*cubic, policy)) {
          Scalar s = Scalar(root);
          DualForm mixed = k2[0] + s * k2[1];
          if (auto hit = stage0(mixed)) return *hit;
        }
      } catch (const Error&) {
        // identically singular pencil; fall through to the quartic search
      }
    }
  }
  if (fallback) return *fallback;

  long sc = scale_exp_of(form_max_abs(f)) + 8;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    DualForm l1 = random_dual_line(rng);
    DualForm l2 = random_dual_line(rng);
    if (proportional(l1, l2, policy)) continue;
    DualForm l1l2 = multiply(l1, l2);
    HomogeneousForm c12 = contract(l1l2, f);
    if (form_is_zero(c12, policy))
      return QuarticSearch{QuarticSearch::Outcome::kind2, {l1, l2}};

    // Kernel of q -> (l1 l2 q) -| f on the six-dimensional space of conics.
    Mat m(3, 6);
    for (int col = 0; col < 6; ++col) {
      DualForm mono(3, 2);
      mono[col] = Scalar(1);
      HomogeneousForm image = contract(multiply(l1l2, mono), f);
      for (int row = 0; row < 3; ++row) m.at(row, col) = image[row];
    }
    auto net = kernel_basis(m, policy);
    if (net.size() < 3) continue;
    std::vector<DualForm> conics;
    for (auto& vec : net) conics.push_back(DualForm(3, 2, vec));

    // Reducible basis members first, then roots of the pencil discriminant.
    std::vector<DualForm> candidates;
    for (const DualForm& q : conics) candidates.push_back(q);
    Mat ma = quadric_mat(conics[0]);
    DualForm mixed_b = conics[1] + Scalar(rng.uniform(-3, 3)) * conics[2];
    Mat mb = quadric_mat(mixed_b);
    Mat vander(4, 4);
    std::vector<Scalar> rhs(4);
    std::vector<long> pts = {0, 1, -1, 2};
    for (int r = 0; r < 4; ++r) {
      Scalar s(pts[r]);
      Mat mix(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mix.at(i, j) = ma.at(i, j) + s * mb.at(i, j);
      rhs[r] = det3(mix);
      Scalar pw(1);
      for (int c = 0; c < 4; ++c) {
        vander.at(r, c) = pw;
        pw = pw * s;
      }
    }
    if (auto cubic = solve_consistent(vander, rhs, policy)) {
      try {
        for (auto& [root, mult] : univariate_roots(*cubic, policy))
          candidates.push_back(conics[0] + Scalar(root) * mixed_b);
      } catch (const Error&) {
        // every pencil member singular: the basis candidates stay in play
      }
    }

    for (const DualForm& q : candidates) {
      if (form_is_zero(q, policy)) continue;
      auto split = factor_conic(q, policy);
      if (!split) continue;
      DualForm l3 = split->first, l4 = split->second;
      if (proportional(l3, l4, policy)) continue;
      if (proportional(l3, l1, policy) || proportional(l3, l2, policy)) continue;
      if (proportional(l4, l1, policy) || proportional(l4, l2, policy)) continue;
      HomogeneousForm check = contract(multiply(l1l2, multiply(l3, l4)), f);
      bool ok = true;
      for (int i = 0; i < check.dim(); ++i)
        if (!is_zero_rel(check[i], policy, sc)) ok = false;
      if (!ok) continue;
      return QuarticSearch{QuarticSearch::Outcome::kind4, {l1, l2, l3, l4}};
    }
  }
  fail(Err::RetriesExhausted, "no apolar quartic found within the retry budget");
}

std::vector<DualForm> recap_tangent_lines(const HomogeneousForm& f, const DualForm& x,
                                          const DualForm& p, const TolerancePolicy& policy) {
  long sc = scale_exp_of(form_max_abs(f)) + 8;
  HomogeneousForm xx = contract(multiply(x, x), f);
  for (int i = 0; i < xx.dim(); ++i)
    if (!is_zero_rel(xx[i], policy, sc)) fail(Err::NotInKernel, "x^2 -| f != 0");
  HomogeneousForm pf = contract(p, f);
  for (int i = 0; i < pf.dim(); ++i)
    if (!is_zero_rel(pf[i], policy, sc)) fail(Err::NotInKernel, "p -| f != 0");

  LineBasis basis = line_basis(x, policy);
  HomogeneousForm on_line = dual_on_line(p, basis);
  if (form_is_zero(on_line, policy))
    fail(Err::NonTransverse, "curve contains the whole line x = 0");
  auto roots = binary_roots(on_line, policy);
  int total = 0;
  for (auto& r : roots) total += r.second;
  if (static_cast<int>(roots.size()) != p.degree() || total != p.degree())
    fail(Err::NonTransverse, "intersection with x = 0 is not simple");

  std::vector<DualForm> tangents;
  for (auto& [pt, mult] : roots) {
    HomogeneousForm v = pt.first * basis.u + pt.second * basis.w;
    std::vector<Scalar> grad(3);
    bool singular = true;
    for (int i = 0; i < 3; ++i) {
      grad[i] = evaluate_dual(partial_derivative(p, i), v);
      if (!is_zero(grad[i], policy)) singular = false;
    }
    if (singular) fail(Err::NonTransverse, "singular point of the curve on x = 0");
    tangents.push_back(linear_form<Ring::upper>(3, std::move(grad)));
  }

  HomogeneousForm check = contract(product_of(tangents), f);
  for (int i = 0; i < check.dim(); ++i)
    if (!is_zero_rel(check[i], policy, sc))
      fail(Err::NonTransverse, "tangent product does not annihilate f");
  return tangents;
}

LineConfiguration double_refine(const HomogeneousForm& f, const std::optional<DualForm>& x1_in,
                                const DualForm& x2, const TolerancePolicy& policy, Rng& rng,
                                int max_retries) {
  long sc = scale_exp_of(form_max_abs(f)) + 8;
  LineBasis basis = line_basis(x2, policy);

  auto check_zero = [&](const HomogeneousForm& g) {
    for (int i = 0; i < g.dim(); ++i)
      if (!is_zero_rel(g[i], policy, sc)) return false;
    return true;
  };

  // Resolve x1: either given (x1 x2^2 -| f = 0) or chosen so that the
  // restricted cubic is not a cube; the x2^2 -| f = 0 hypothesis then allows
  // a free choice, with the kernel-pencil fallback producing a kind-2 pair.
  DualForm x1(3, 1);
  HomogeneousForm g_restricted(2, 3);
  bool have_branch2 = false;
  if (x1_in) {
    x1 = *x1_in;
    if (proportional(x1, x2, policy)) fail(Err::DegenerateInput, "x1 and x2 must be distinct");
    if (!check_zero(contract(multiply(x1, multiply(x2, x2)), f)))
      fail(Err::NotInKernel, "x1 x2^2 -| f != 0");
    HomogeneousForm g = contract(multiply(x1, x2), f);
    if (check_zero(g)) return LineConfiguration{2, {x1, x2}};
    g_restricted = basis.restrict_form(g, policy);
    PowerTest cube = is_cube(g_restricted, policy);
    if (cube.zero) return LineConfiguration{2, {x1, x2}};
    if (cube.yes) {
      // Not surjective: a line kills the cube, giving a three-line config.
      HomogeneousForm root = cube_root_point(g_restricted, policy);
      DualForm l3 = basis.lift_dual(linear_form<Ring::upper>(2, {root[1], -root[0]}));
      if (proportional(l3, x1, policy)) l3 = l3 + x2;
      return LineConfiguration{3, {x1, x2, l3}};
    }
    have_branch2 = true;
  } else {
    if (!check_zero(contract(multiply(x2, x2), f))) fail(Err::NotInKernel, "x2^2 -| f != 0");
    for (int attempt = 0; attempt < 16 && !have_branch2; ++attempt) {
      DualForm cand = random_dual_line(rng);
      if (proportional(cand, x2, policy)) continue;
      HomogeneousForm g = contract(multiply(cand, x2), f);
      if (check_zero(g)) return LineConfiguration{2, {cand, x2}};
      HomogeneousForm gr = basis.restrict_form(g, policy);
      PowerTest cube = is_cube(gr, policy);
      if (!cube.zero && !cube.yes) {
        x1 = cand;
        g_restricted = gr;
        have_branch2 = true;
      }
    }
    if (!have_branch2) {
      // Every sampled contraction is a pure power: the kernel pencil of
      // x2 -| f must contain a line.
      DualForm y1 = basis.lift_dual(linear_form<Ring::upper>(2, {Scalar(1), Scalar(0)}));
      DualForm y2 = basis.lift_dual(linear_form<Ring::upper>(2, {Scalar(0), Scalar(1)}));
      auto l = find_kernel_line_in_pencil(contract(x2, f), y1, y2, policy);
      if (l) return LineConfiguration{2, {*l, x2}};
      fail(Err::DegenerateG, "no usable companion line for the double-line case");
    }
  }

  // Branch 2: the restricted cubic has a surjective polarization.
  const HomogeneousForm& gbar = g_restricted;
  auto v_kernel = exact_kernel(catalecticant(gbar, 3), policy);
  if (v_kernel.size() != 3) fail(Err::DegenerateG, "Ker G_{3,0} is not 3-dimensional");
  DualForm x1bar = basis.reduce_dual(x1);

  HomogeneousForm fprime = contract(x1, f);
  HomogeneousForm big_f = fprime - multiply(basis.complement(), contract(x2, fprime));
  HomogeneousForm fbar = basis.restrict_form(big_f, policy);

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    DualForm h_bin(2, 3);
    for (const DualForm& b : v_kernel) h_bin = h_bin + Scalar(rng.uniform(-9, 9)) * b;
    if (form_is_zero(h_bin, policy)) continue;
    std::vector<std::pair<HomogeneousForm, int>> pts;
    try {
      pts = dual_root_points(h_bin, policy);
    } catch (const Error&) {
      continue;
    }
    if (pts.size() != 3) continue;
    bool good = true;
    std::vector<DualForm> ls;
    for (auto& [w, mult] : pts) {
      if (mult != 1 || is_zero(evaluate_dual(x1bar, w), policy)) {
        good = false;
        break;
      }
      ls.push_back(linear_form<Ring::upper>(2, {w[1], -w[0]}));
    }
    if (!good) continue;
    for (int i = 0; i < 3 && good; ++i)
      for (int j = i + 1; j < 3 && good; ++j)
        if (form_is_zero(contract(multiply(ls[i], ls[j]), gbar), policy)) good = false;
    if (!good) continue;

    // Solve K -| G = -(H -| F) in the binary dual quadrics.
    HomogeneousForm target = -contract(h_bin, fbar);
    Mat km(2, 3);
    for (int col = 0; col < 3; ++col) {
      DualForm mono(2, 2);
      mono[col] = Scalar(1);
      HomogeneousForm img = contract(mono, gbar);
      for (int row = 0; row < 2; ++row) km.at(row, col) = img[row];
    }
    auto ksol = solve_consistent(km, {target[0], target[1]}, policy);
    if (!ksol) continue;
    DualForm k_bin(2, 2, *ksol);

    DualForm p = lift_dual_form(basis, h_bin) + multiply(x2, lift_dual_form(basis, k_bin));
    if (!check_zero(contract(p, fprime))) continue;

    std::vector<DualForm> tangents;
    try {
      tangents = recap_tangent_lines(fprime, x2, p, policy);
    } catch (const Error&) {
      continue;
    }

    std::vector<DualForm> lines = {x1, tangents[0], tangents[1], tangents[2]};
    if (!lines_distinct(lines, policy)) continue;
    if (!check_zero(contract(product_of(lines), f))) continue;
    // The three x1-triples must avoid squares; a vanishing companion triple
    // demotes the configuration to three lines.
    HomogeneousForm companion = contract(product_of(lines, 0), f);
    if (form_is_zero(companion, policy))
      return LineConfiguration{3, {tangents[0], tangents[1], tangents[2]}};
    bool squares_ok = true;
    for (int omit = 1; omit <= 3; ++omit) {
      PowerTest test = ternary_quadratic_square(contract(product_of(lines, omit), f), policy);
      if (test.zero || test.yes) squares_ok = false;
    }
    if (!squares_ok) continue;
    return LineConfiguration{4, lines};
  }
  fail(Err::DegenerateG, "double-line refinement exhausted its retries");
}

namespace {

LineConfiguration finish_triple(const HomogeneousForm& f, std::vector<DualForm> lines,
                                const TolerancePolicy& policy, Rng& rng, Budget& budget);

LineConfiguration finish_quartic(const HomogeneousForm& f, std::vector<DualForm> lines,
                                 const TolerancePolicy& policy, Rng& rng, Budget& budget) {
  LineConfiguration out;
  while (true) {
    budget.spend();
    if (!lines_distinct(lines, policy))
      fail(Err::CertificationViolated, "degenerate quartic candidate");

    std::vector<HomogeneousForm> q;
    for (int i = 0; i < 4; ++i) q.push_back(contract(product_of(lines, i), f));
    for (int i = 0; i < 4; ++i) {
      if (form_is_zero(q[i], policy)) {
        std::vector<DualForm> triple;
        for (int j = 0; j < 4; ++j)
          if (j != i) triple.push_back(lines[j]);
        return finish_triple(f, triple, policy, rng, budget);
      }
    }

    std::vector<int> squares;
    for (int i = 0; i < 4; ++i)
      if (ternary_quadratic_square(q[i], policy).yes) squares.push_back(i);

    if (squares.size() <= 1) {
      std::vector<DualForm> ordered;
      if (!squares.empty()) ordered.push_back(lines[squares[0]]);
      for (int i = 0; i < 4; ++i)
        if (squares.empty() || i != squares[0]) ordered.push_back(lines[i]);
      return LineConfiguration{4, ordered};
    }

    // Repair: replace the configuration using the annihilator pencil of a
    // square contraction.
    int i0 = squares[0];
    HomogeneousForm v_dir = square_root_direction(q[i0]);
    auto [y1, y2] = annihilator_pair(v_dir);
    std::vector<int> others;
    for (int i = 0; i < 4; ++i)
      if (i != i0 && std::find(squares.begin(), squares.end(), i) == squares.end())
        others.push_back(i);
    for (int i = 0; i < 4 && others.size() < 2; ++i)
      if (i != i0 && std::find(others.begin(), others.end(), i) == others.end())
        others.push_back(i);
    const DualForm& la = lines[others[0]];
    const DualForm& lb = lines[others[1]];

    auto l = find_kernel_line_in_pencil(contract(multiply(la, lb), f), y1, y2, policy);
    if (l) {
      if (!proportional(*l, la, policy) && !proportional(*l, lb, policy))
        return finish_triple(f, {*l, la, lb}, policy, rng, budget);
      const DualForm& doubled = proportional(*l, la, policy) ? la : lb;
      const DualForm& single = proportional(*l, la, policy) ? lb : la;
      LineConfiguration cfg = double_refine(f, single, doubled, policy, rng);
      if (cfg.kind == 2) return cfg;
      if (cfg.kind == 3) return finish_triple(f, cfg.lines, policy, rng, budget);
      lines = cfg.lines;
      continue;
    }

    // Fresh member of the automatic apolar family through the square.
    bool replaced = false;
    for (int tries = 0; tries < 8 && !replaced; ++tries) {
      budget.spend();
      DualForm lnew = Scalar(rng.uniform(-9, 9)) * y1 + Scalar(rng.uniform(-9, 9)) * y2;
      if (form_is_zero(lnew, policy)) continue;
      std::vector<DualForm> cand = {lnew};
      for (int i = 0; i < 4; ++i)
        if (i != i0) cand.push_back(lines[i]);
      if (!lines_distinct(cand, policy)) continue;
      lines = cand;
      replaced = true;
    }
    if (!replaced) fail(Err::RetriesExhausted, "quartic repair failed to move off the square");
  }
}

LineConfiguration finish_triple(const HomogeneousForm& f, std::vector<DualForm> lines,
                                const TolerancePolicy& policy, Rng& rng, Budget& budget) {
  while (true) {
    budget.spend();
    if (!lines_distinct(lines, policy))
      fail(Err::CertificationViolated, "degenerate triple candidate");

    std::vector<HomogeneousForm> pairc;
    for (int i = 0; i < 3; ++i) pairc.push_back(contract(product_of(lines, i), f));
    for (int i = 0; i < 3; ++i) {
      if (form_is_zero(pairc[i], policy)) {
        std::vector<DualForm> pair;
        for (int j = 0; j < 3; ++j)
          if (j != i) pair.push_back(lines[j]);
        return LineConfiguration{2, pair};
      }
    }

    std::vector<int> cubes;
    std::vector<HomogeneousForm> restricted(3, HomogeneousForm(2, 3));
    for (int i = 0; i < 3; ++i) {
      LineBasis basis = line_basis(lines[i], policy);
      restricted[i] = basis.restrict_form(pairc[i], policy);
      if (is_cube(restricted[i], policy).yes) cubes.push_back(i);
    }

    if (cubes.size() <= 1) {
      std::vector<DualForm> ordered;
      if (!cubes.empty()) ordered.push_back(lines[cubes[0]]);
      for (int i = 0; i < 3; ++i)
        if (cubes.empty() || i != cubes[0]) ordered.push_back(lines[i]);
      return LineConfiguration{3, ordered};
    }

    // Repair via the annihilator of the cube root.
    int k0 = cubes[0];
    LineBasis basis = line_basis(lines[k0], policy);
    HomogeneousForm root_bin = cube_root_point(restricted[k0], policy);
    HomogeneousForm w = root_bin[0] * basis.u + root_bin[1] * basis.w;
    auto [y1, y2] = annihilator_pair(w);
    std::vector<int> rest;
    for (int i = 0; i < 3; ++i)
      if (i != k0) rest.push_back(i);

    bool rerun = false;
    for (int idx : rest) {
      auto l = find_kernel_line_in_pencil(contract(lines[idx], f), y1, y2, policy);
      if (!l) continue;
      if (!proportional(*l, lines[idx], policy)) return LineConfiguration{2, {*l, lines[idx]}};
      LineConfiguration cfg = double_refine(f, std::nullopt, lines[idx], policy, rng);
      if (cfg.kind == 2) return cfg;
      if (cfg.kind == 3) {
        lines = cfg.lines;
        rerun = true;
        break;
      }
      return finish_quartic(f, cfg.lines, policy, rng, budget);
    }
    if (rerun) continue;

    bool replaced = false;
    for (int tries = 0; tries < 8 && !replaced; ++tries) {
      budget.spend();
      DualForm lnew = Scalar(rng.uniform(-9, 9)) * y1 + Scalar(rng.uniform(-9, 9)) * y2;
      if (form_is_zero(lnew, policy)) continue;
      std::vector<DualForm> cand = {lnew, lines[rest[0]], lines[rest[1]]};
      if (!lines_distinct(cand, policy)) continue;
      lines = cand;
      replaced = true;
    }
    if (!replaced) fail(Err::RetriesExhausted, "triple repair failed to move off the cube");
  }
}

}  // namespace

RefineResult refine_configuration(const HomogeneousForm& f, const TolerancePolicy& policy,
                                  Rng& rng, int max_retries) {
  if (form_is_zero(f, policy)) fail(Err::ZeroForm, "zero form");
  Budget budget;
  budget.cap = max_retries;

  LineConfiguration config;
  while (true) {
    budget.spend();
    QuarticSearch qs = find_apolar_split_quartic(f, policy, rng, max_retries);
    if (qs.outcome == QuarticSearch::Outcome::kind2) {
      config = LineConfiguration{2, qs.lines};
    } else if (qs.outcome == QuarticSearch::Outcome::double_line) {
      LineConfiguration cfg = double_refine(f, std::nullopt, qs.lines[0], policy, rng);
      config = cfg.kind == 4 ? finish_quartic(f, cfg.lines, policy, rng, budget)
               : cfg.kind == 3 ? finish_triple(f, cfg.lines, policy, rng, budget)
                               : cfg;
    } else {
      config = finish_quartic(f, qs.lines, policy, rng, budget);
    }
    if (certify_configuration(f, config, policy)) break;
  }
  return RefineResult{config, budget.used - 1};
}

LrBadSet compute_lr_bad_set(const HomogeneousForm& q, const DualForm& x1, const DualForm& x2,
                            const DualForm& x3, const TolerancePolicy& policy) {
  if (q.nvars() != 2 || q.degree() != 2) fail(Err::DegreeMismatch, "binary quadratic expected");
  if (form_is_zero(q, policy)) fail(Err::ZeroForm, "zero quadratic");

  LrBadSet out;
  auto [p0, p1] = factor_binary_quadratic(q, policy);
  out.q_is_square = is_square(q, policy).yes;

  Scalar x3_p0 = evaluate_dual(x3, p0);
  Scalar x3_p1 = evaluate_dual(x3, p1);
  out.u0 = x3_p1 * p0 + x3_p0 * p1;
  out.u1 = x3_p1 * p0 - x3_p0 * p1;

  auto bad_cubic = [&](const DualForm& xh) {
    return evaluate_dual(xh, out.u1) * power(out.u0, 3) -
           evaluate_dual(xh, out.u0) * power(out.u1, 3);
  };
  out.v1 = bad_cubic(x1);
  out.v2 = bad_cubic(x2);

  int idx = 0;
  for (const DualForm* xh : {&x1, &x2}) {
    for (int k = 0; k < 2; ++k) {
      const HomogeneousForm& xk = k == 0 ? p0 : p1;
      const HomogeneousForm& xo = k == 0 ? p1 : p0;
      out.vhk[idx++] = evaluate_dual(*xh, xo) * power(xk, 3) -
                       Scalar(3) * evaluate_dual(*xh, xk) * multiply(multiply(xk, xk), xo);
    }
  }

  if (out.q_is_square) {
    out.bad = {power(p0, 3)};
  } else {
    out.bad = {out.v1, out.v2, out.vhk[0], out.vhk[1], out.vhk[2], out.vhk[3]};
  }
  return out;
}

}  // namespace waring
