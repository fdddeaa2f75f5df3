#include "waring/textio.hpp"

#include <sstream>

namespace waring {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
  fail(Err::ParseError, "line " + std::to_string(lineno) + ": " + what);
}

BigFloat parse_float(const std::string& s, mpfr_prec_t prec, int lineno) {
  BigFloat f(prec);
  if (mpfr_set_str(f.raw(), s.c_str(), 10, MPFR_RNDN) != 0)
    parse_fail(lineno, "bad decimal value '" + s + "'");
  return f;
}

Scalar parse_scalar_at(const std::string& tok, const TolerancePolicy& policy, int lineno) {
  if (tok.empty()) parse_fail(lineno, "empty scalar");
  if (tok.back() == 'i') {
    std::string body = tok.substr(0, tok.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < body.size(); ++k) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') split = k;
    }
    if (split == std::string::npos) parse_fail(lineno, "malformed complex scalar '" + tok + "'");
    BigFloat re = parse_float(body.substr(0, split), policy.precision_bits, lineno);
    BigFloat im = parse_float(body.substr(split), policy.precision_bits, lineno);
    return Scalar(BigComplex(std::move(re), std::move(im)));
  }
  if (tok.find('.') != std::string::npos || tok.find('e') != std::string::npos ||
      tok.find('E') != std::string::npos) {
    return Scalar(BigComplex(parse_float(tok, policy.precision_bits, lineno),
                             BigFloat(policy.precision_bits)));
  }
  try {
    mpq_class q(tok);
    q.canonicalize();
    return Scalar(q);
  } catch (const std::invalid_argument&) {
    parse_fail(lineno, "bad rational scalar '" + tok + "'");
  }
}

}  // namespace

std::string emit_scalar(const Scalar& s) { return s.str(); }

Scalar parse_scalar(const std::string& text, const TolerancePolicy& policy) {
  return parse_scalar_at(text, policy, 0);
}

std::string emit_form(const HomogeneousForm& f) {
  std::ostringstream out;
  out << "vars=" << f.nvars() << " deg=" << f.degree() << "\n";
  for (int i = 0; i < f.dim(); ++i) {
    bool zero = f[i].is_rational() ? f[i].rat() == 0
                                   : (f[i].cpx().re().is_exact_zero() && f[i].cpx().im().is_exact_zero());
    if (zero) continue;
    auto e = monomial_exponents(f.nvars(), f.degree(), i);
    out << e[0] << " " << e[1];
    if (f.nvars() == 3) out << " " << e[2];
    out << " = " << f[i].str() << "\n";
  }
  return out.str();
}

std::vector<HomogeneousForm> parse_forms(const std::string& text, const TolerancePolicy& policy) {
  std::vector<HomogeneousForm> forms;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_form = false;
  HomogeneousForm current;
  auto flush = [&]() {
    if (have_form) forms.push_back(current);
    have_form = false;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].rfind("vars=", 0) == 0) {
      flush();
      if (toks.size() != 2 || toks[1].rfind("deg=", 0) != 0)
        parse_fail(lineno, "header must be 'vars=<n> deg=<d>'");
      int nvars, deg;
      try {
        nvars = std::stoi(toks[0].substr(5));
        deg = std::stoi(toks[1].substr(4));
      } catch (const std::exception&) {
        parse_fail(lineno, "bad header numbers");
      }
      if (nvars != 2 && nvars != 3) parse_fail(lineno, "vars must be 2 or 3");
      if (deg < 0) parse_fail(lineno, "negative degree");
      current = HomogeneousForm(nvars, deg);
      have_form = true;
      continue;
    }
    if (!have_form) parse_fail(lineno, "monomial line before any header");
    std::size_t expect = static_cast<std::size_t>(current.nvars()) + 2;
    if (toks.size() != expect || toks[current.nvars()] != "=")
      parse_fail(lineno, "expected 'e0 e1" + std::string(current.nvars() == 3 ? " e2" : "") +
                             " = <scalar>'");
    std::array<int, 3> e = {0, 0, 0};
    int sum = 0;
    for (int i = 0; i < current.nvars(); ++i) {
      try {
        e[i] = std::stoi(toks[i]);
      } catch (const std::exception&) {
        parse_fail(lineno, "bad exponent");
      }
      if (e[i] < 0) parse_fail(lineno, "negative exponent");
      sum += e[i];
    }
    if (sum != current.degree()) parse_fail(lineno, "exponents do not sum to the declared degree");
    Scalar value = parse_scalar_at(toks[expect - 1], policy, lineno);
    current[monomial_index(current.nvars(), current.degree(), e[0], e[1])] = value;
  }
  flush();
  return forms;
}

HomogeneousForm parse_form(const std::string& text, const TolerancePolicy& policy) {
  auto forms = parse_forms(text, policy);
  if (forms.size() != 1) fail(Err::ParseError, "expected exactly one form");
  return forms[0];
}

std::string emit_decomposition(const WaringDecomposition& dec) {
  std::ostringstream out;
  for (const auto& [c, v] : dec.terms) {
    out << c.str() << " :";
    for (int i = 0; i < v.dim(); ++i) out << " " << v[i].str();
    out << "\n";
  }
  out << "residual = " << dec.residual.str() << "\n";
  return out.str();
}

WaringDecomposition parse_decomposition(const std::string& text, const TolerancePolicy& policy) {
  WaringDecomposition dec;
  dec.residual = BigFloat(policy.precision_bits);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_residual = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "residual") {
      if (toks.size() != 3 || toks[1] != "=") parse_fail(lineno, "bad residual line");
      dec.residual = parse_float(toks[2], policy.precision_bits, lineno);
      saw_residual = true;
      continue;
    }
    if (toks.size() < 4 || toks[1] != ":") parse_fail(lineno, "expected 'c : a0 a1 [a2]'");
    int nv = static_cast<int>(toks.size()) - 2;
    if (nv != 2 && nv != 3) parse_fail(lineno, "term must have 2 or 3 line coordinates");
    Scalar c = parse_scalar_at(toks[0], policy, lineno);
    std::vector<Scalar> coords;
    for (int i = 0; i < nv; ++i) coords.push_back(parse_scalar_at(toks[2 + i], policy, lineno));
    dec.terms.push_back({c, linear_form<Ring::lower>(nv, std::move(coords))});
  }
  if (dec.terms.empty() && !saw_residual) fail(Err::ParseError, "empty decomposition");
  if (!dec.terms.empty()) dec.target_degree = 0;  // caller sets the degree from context
  return dec;
}

}  // namespace waring
