#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "waring/textio.hpp"

using namespace waring;

namespace {

// The CLI binary sits next to the test executable.
std::string cli_path() { return "./waring"; }

struct RunResult {
  int code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("rank command on binary forms") {
  auto r = run_cli("rank \"vars=2 deg=5;5 0 = 1\"");
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");
  auto r2 = run_cli("rank \"vars=2 deg=5;1 4 = 1\"");
  CHECK(r2.code == 0);
  CHECK(r2.out == "5\n");
}

TEST_CASE("rank rejects ternary input with exit 3") {
  auto r = run_cli("rank \"vars=3 deg=5;5 0 0 = 1\"");
  CHECK(r.code == 3);
}

TEST_CASE("parse errors exit with 3") {
  auto r = run_cli("decompose \"vars=3 deg=5;1 1 1 = 1\"");
  CHECK(r.code == 3);
}

TEST_CASE("decompose a single power") {
  auto r = run_cli("decompose \"vars=3 deg=5;5 0 0 = 1\" --output /tmp/waring_cli_dec.txt");
  CHECK(r.code == 0);
  CHECK(r.out.find("terms = 1") != std::string::npos);
  std::ifstream in("/tmp/waring_cli_dec.txt");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("residual = 0") != std::string::npos);
}

TEST_CASE("verify round trip") {
  write_file("/tmp/waring_cli_form.txt", "vars=3 deg=5\n5 0 0 = 1\n0 5 0 = 2\n");
  auto dec = run_cli(
      "decompose /tmp/waring_cli_form.txt --output /tmp/waring_cli_dec2.txt");
  REQUIRE(dec.code == 0);
  auto ver = run_cli("verify /tmp/waring_cli_form.txt /tmp/waring_cli_dec2.txt");
  CHECK(ver.code == 0);
  CHECK(ver.out.rfind("residual = 0", 0) == 0);
}

TEST_CASE("determinism across runs") {
  write_file("/tmp/waring_cli_form3.txt",
             "vars=3 deg=5\n5 0 0 = 3\n2 2 1 = -1\n0 1 4 = 2\n1 1 3 = 7\n");
  auto a = run_cli("decompose /tmp/waring_cli_form3.txt --seed 5");
  auto b = run_cli("decompose /tmp/waring_cli_form3.txt --seed 5");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("batch keeps input order and reports per form") {
  std::string forms;
  forms += "vars=3 deg=5\n5 0 0 = 1\n";
  forms += "vars=3 deg=5\n0 5 0 = 1\n0 0 5 = 1\n";
  forms += "vars=3 deg=5\n1 2 2 = 1\n";
  write_file("/tmp/waring_cli_batch.txt", forms);
  auto r = run_cli("batch /tmp/waring_cli_batch.txt --threads 3");
  CHECK(r.code == 0);
  std::size_t p0 = r.out.find("form 0 ");
  std::size_t p1 = r.out.find("form 1 ");
  std::size_t p2 = r.out.find("form 2 ");
  REQUIRE(p0 != std::string::npos);
  REQUIRE(p1 != std::string::npos);
  REQUIRE(p2 != std::string::npos);
  CHECK(p0 < p1);
  CHECK(p1 < p2);
  CHECK(r.out.find("status=error") == std::string::npos);
}

TEST_CASE("pencil and lines subcommands emit their dumps") {
  auto p = run_cli("pencil --seed 11");
  CHECK(p.code == 0);
  CHECK(p.out.find("d = 5") != std::string::npos);
  CHECK(p.out.find("X:") != std::string::npos);

  auto l = run_cli("lines \"vars=3 deg=5;5 0 0 = 1;0 5 0 = 1;0 0 5 = 1\"");
  CHECK(l.code == 0);
  CHECK(l.out.find("kind = 2") != std::string::npos);
  CHECK(l.out.find("certified = true") != std::string::npos);
}

TEST_CASE("decomposition text round trips through the parser") {
  TolerancePolicy policy(256);
  WaringDecomposition dec;
  dec.target_degree = 5;
  dec.residual = BigFloat(256);
  dec.terms.push_back({Scalar(3, 2), linear_form<Ring::lower>(3, {Scalar(1), Scalar(0), Scalar(-2)})});
  std::string text = emit_decomposition(dec);
  WaringDecomposition back = parse_decomposition(text, policy);
  REQUIRE(back.terms.size() == 1);
  CHECK(back.terms[0].first.exact_eq(Scalar(3, 2)));
  CHECK(back.terms[0].second[2].exact_eq(Scalar(-2)));
}
