// Command-line front end: rank / decompose / verify / pencil / lines / batch /
// selftest over the text form format.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "../tests/acceptance_suite.hpp"
#include "waring/decompose.hpp"
#include "waring/textio.hpp"

using namespace waring;

namespace {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case Err::ParseError:
    case Err::Usage:
      return 3;
    default:
      return 2;
  }
}

std::string read_input(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(arg);
  if (in.good()) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  // Inline form text; semicolons double as line breaks for shell usage.
  std::string text = arg;
  for (char& c : text)
    if (c == ';') c = '\n';
  return text;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Err::Usage, "cannot open output file " + path);
  out << text;
}

struct CommonOpts {
  long precision = 256;
  std::uint64_t seed = 0;
  int max_retries = 64;
  std::string output;

  TolerancePolicy policy() const { return TolerancePolicy(precision); }
  std::uint64_t effective_seed() const {
    if (const char* env = std::getenv("WARING_SEED")) return std::strtoull(env, nullptr, 10);
    return seed;
  }
};

int cmd_rank(const CommonOpts& opts, const std::string& input) {
  TolerancePolicy policy = opts.policy();
  HomogeneousForm f = parse_form(read_input(input), policy);
  if (f.nvars() != 2) fail(Err::Usage, "rank expects a binary form (vars=2)");
  std::cout << binary_rank(f, policy) << "\n";
  return 0;
}

int cmd_decompose(const CommonOpts& opts, const std::string& input) {
  TolerancePolicy policy = opts.policy();
  HomogeneousForm f = parse_form(read_input(input), policy);
  RunReport report;
  WaringDecomposition dec =
      decompose_ternary_quintic(f, policy, opts.effective_seed(), &report, opts.max_retries);
  std::cout << report.text();
  write_output(opts.output, emit_decomposition(dec));
  return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& form_path, const std::string& dec_path) {
  TolerancePolicy policy = opts.policy();
  HomogeneousForm f = parse_form(read_input(form_path), policy);
  WaringDecomposition dec = parse_decomposition(read_input(dec_path), policy);
  dec.target_degree = f.degree();
  for (const auto& [c, v] : dec.terms)
    if (v.nvars() != f.nvars()) fail(Err::Usage, "decomposition lines do not match the form");
  BigFloat residual = verify_decomposition(f, dec, policy);
  std::cout << "residual = " << residual.str() << "\n";
  return 0;
}

int cmd_pencil(const CommonOpts& opts, const std::string& input) {
  TolerancePolicy policy = opts.policy();
  std::vector<DualForm> factors;
  HomogeneousForm x0(2, 1), x1(2, 1);
  if (!input.empty()) {
    auto forms = parse_forms(read_input(input), policy);
    if (forms.size() != 5) fail(Err::Usage, "pencil input needs five binary linear forms");
    for (auto& g : forms)
      if (g.nvars() != 2 || g.degree() != 1) fail(Err::Usage, "pencil forms must be binary linear");
    for (int i = 0; i < 3; ++i) factors.push_back(DualForm(2, 1, forms[i].coeffs()));
    x0 = forms[3];
    x1 = forms[4];
  } else {
    Rng rng(opts.effective_seed());
    for (int i = 0; i < 3; ++i) {
      DualForm l(2, 1);
      l[0] = Scalar(rng.uniform(-9, 9));
      l[1] = Scalar(rng.uniform(-9, 9));
      if (l[0].rat() == 0 && l[1].rat() == 0) l[0] = Scalar(1);
      factors.push_back(l);
    }
    x0 = linear_form<Ring::lower>(2, {rng.small_rational(), Scalar(rng.uniform(-9, 9))});
    x1 = linear_form<Ring::lower>(2, {Scalar(rng.uniform(-9, 9)), rng.small_rational()});
  }
  RankTwoPencil pencil = build_r(factors, x0, x1, policy);
  std::ostringstream out;
  out << "d = " << pencil.d << "\n";
  for (int j = 0; j <= pencil.r.t_degree(); ++j) {
    out << "r t1^" << j << ":\n" << emit_form(pencil.r.row(j));
  }
  for (std::size_t i = 0; i < pencil.a.size(); ++i) {
    out << "a" << i + 1 << " = " << pencil.a[i][0].str() << " t0 + " << pencil.a[i][1].str()
        << " t1\n";
  }
  out << "X:";
  for (auto& [l, m] : pencil.roots) out << " [" << l.str() << "," << m.str() << "]";
  out << " [1,0] [0,1]\n";
  write_output(opts.output, out.str());
  return 0;
}

int cmd_lines(const CommonOpts& opts, const std::string& input) {
  TolerancePolicy policy = opts.policy();
  HomogeneousForm f = parse_form(read_input(input), policy);
  Rng rng(opts.effective_seed());
  RefineResult res = refine_configuration(f, policy, rng, opts.max_retries);
  std::ostringstream out;
  out << "kind = " << res.config.kind << "\n";
  out << "retries = " << res.retries << "\n";
  for (std::size_t i = 0; i < res.config.lines.size(); ++i) {
    out << "l" << i + 1 << " =";
    for (int j = 0; j < 3; ++j) out << " " << res.config.lines[i][j].str();
    out << "\n";
  }
  auto contraction_of = [&](std::vector<int> omit) {
    DualForm prod(3, 0);
    prod[0] = Scalar(1);
    for (std::size_t i = 0; i < res.config.lines.size(); ++i)
      if (std::find(omit.begin(), omit.end(), static_cast<int>(i)) == omit.end())
        prod = multiply(prod, res.config.lines[i]);
    return contract(prod, f);
  };
  out << "product_annihilates = " << (form_is_zero(contraction_of({}), policy) ? "true" : "false")
      << "\n";
  if (res.config.kind == 4) {
    for (int omit = 0; omit < 4; ++omit) {
      HomogeneousForm q = contraction_of({omit});
      PowerTest t = ternary_quadratic_square(q, policy);
      out << "triple_omitting_l" << omit + 1 << " = "
          << (t.zero ? "zero" : t.yes ? "square" : "nonsquare") << "\n";
    }
  } else if (res.config.kind == 3) {
    for (int omit = 0; omit < 3; ++omit) {
      HomogeneousForm p = contraction_of({omit});
      if (form_is_zero(p, policy)) {
        out << "pair_omitting_l" << omit + 1 << " = zero\n";
        continue;
      }
      LineBasis basis = line_basis(res.config.lines[omit], policy);
      PowerTest t = is_cube(basis.restrict_form(p, policy), policy);
      out << "pair_omitting_l" << omit + 1 << " = " << (t.yes ? "cube" : "noncube") << "\n";
    }
  }
  out << "certified = " << (certify_configuration(f, res.config, policy) ? "true" : "false")
      << "\n";
  write_output(opts.output, out.str());
  return 0;
}

int cmd_batch(const CommonOpts& opts, const std::string& input, int threads) {
  TolerancePolicy policy = opts.policy();
  auto forms = parse_forms(read_input(input), policy);
  if (forms.empty()) fail(Err::Usage, "batch input contains no forms");
  std::vector<std::string> lines(forms.size());
  std::vector<std::string> decs(forms.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> any_failed{false};
  std::uint64_t base_seed = opts.effective_seed();

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= forms.size()) break;
      std::ostringstream line;
      line << "form " << i;
      try {
        RunReport report;
        WaringDecomposition dec = decompose_ternary_quintic(forms[i], policy, base_seed + i,
                                                            &report, opts.max_retries);
        line << " terms=" << dec.terms.size() << " residual=" << dec.residual.str(10)
             << " status=ok";
        decs[i] = emit_decomposition(dec);
      } catch (const Error& e) {
        line << " status=error: " << e.what();
        any_failed = true;
      }
      lines[i] = line.str();
    }
  };
  int n = std::max(1, std::min<int>(threads, static_cast<int>(forms.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (auto& l : lines) std::cout << l << "\n";
  if (!opts.output.empty()) {
    std::string all;
    for (auto& d : decs) all += d;
    write_output(opts.output, all);
  }
  return any_failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waring decomposition of ternary quintics into at most ten fifth powers"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&opts](CLI::App* cmd) {
    cmd->add_option("--precision", opts.precision, "working precision in bits (>= 64)")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "random seed (WARING_SEED overrides)")
        ->capture_default_str();
    cmd->add_option("--max-retries", opts.max_retries, "bound for seeded searches")
        ->capture_default_str();
    cmd->add_option("--output", opts.output, "write the main artifact to this path");
  };

  std::string input, dec_path;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 4;

  CLI::App* rank = app.add_subcommand("rank", "binary Waring rank of a form");
  rank->add_option("input", input, "file, inline text, or - for stdin")->required();

  CLI::App* dec = app.add_subcommand("decompose", "decompose a ternary quintic");
  dec->add_option("input", input)->required();

  CLI::App* verify = app.add_subcommand("verify", "residual of a claimed decomposition");
  verify->add_option("form", input)->required();
  verify->add_option("decomposition", dec_path)->required();

  CLI::App* pencil = app.add_subcommand("pencil", "dump a rank-two pencil");
  pencil->add_option("input", input, "five binary linear forms (l1 l2 l3 x0 x1)");

  CLI::App* lines_cmd = app.add_subcommand("lines", "apolar line configuration and certificates");
  lines_cmd->add_option("input", input)->required();

  CLI::App* batch = app.add_subcommand("batch", "decompose every form in a file");
  batch->add_option("input", input)->required();
  batch->add_option("--threads", threads, "worker threads")->capture_default_str();

  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  for (CLI::App* cmd : {rank, dec, verify, pencil, lines_cmd, batch, selftest}) add_common(cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (rank->parsed()) return cmd_rank(opts, input);
    if (dec->parsed()) return cmd_decompose(opts, input);
    if (verify->parsed()) return cmd_verify(opts, input, dec_path);
    if (pencil->parsed()) return cmd_pencil(opts, input);
    if (lines_cmd->parsed()) return cmd_lines(opts, input);
    if (batch->parsed()) return cmd_batch(opts, input, threads);
    if (selftest->parsed()) {
      auto outcome = waring::acceptance::run_all(std::cout, opts.effective_seed());
      return outcome.failed == 0 ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
