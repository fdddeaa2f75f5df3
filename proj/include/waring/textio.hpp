#pragma once

#include <string>
#include <vector>

#include "waring/apolarity.hpp"
#include "waring/poly.hpp"

namespace waring {

// Bit-exact text form: header "vars=<2|3> deg=<d>", then one line per
// nonzero monomial "e0 e1 [e2] = <scalar>"; omitted monomials are zero.
std::string emit_form(const HomogeneousForm& f);
HomogeneousForm parse_form(const std::string& text, const TolerancePolicy& policy);
// Parses a whole file of concatenated forms.
std::vector<HomogeneousForm> parse_forms(const std::string& text, const TolerancePolicy& policy);

// Rational "num/den" (plain integer when den == 1) or complex "re+imi".
std::string emit_scalar(const Scalar& s);
Scalar parse_scalar(const std::string& text, const TolerancePolicy& policy);

// One line per term "c : a0 a1 [a2]", then "residual = <real>".
std::string emit_decomposition(const WaringDecomposition& dec);
WaringDecomposition parse_decomposition(const std::string& text, const TolerancePolicy& policy);

}  // namespace waring
