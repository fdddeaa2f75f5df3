#pragma once

#include <stdexcept>
#include <string>

namespace waring {

// Every failure mode the pipeline can report. Kinds marked "bug" in the
// message text indicate a violated mathematical invariant rather than bad
// input; they should never fire on inputs that passed certification.
enum class Err {
  DegenerateInput,
  DegreeMismatch,
  SingularChange,
  NotDivisible,
  NotInKernel,
  ZeroForm,
  SamplingExhausted,
  ExceptionalParameter,
  SquareQ,
  CubeInput,
  SearchExhausted,
  RetriesExhausted,
  NonTransverse,
  DegenerateG,
  CertificationViolated,
  IdentityFailure,
  InternalIdentityFailure,
  ParseError,
  Usage,
};

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& what) { throw Error(kind, what); }

}  // namespace waring
