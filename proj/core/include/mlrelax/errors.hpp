#pragma once

#include <stdexcept>
#include <string>

namespace mlrelax {

/// Error taxonomy shared by all modules. name() is a stable identifier that
/// the CLI prints on its diagnostic stream; kind() separates parameter errors
/// (CLI exit 2) from numerical failures (CLI exit 3).
class Error : public std::runtime_error {
 public:
  enum class Kind { parameter, numerical };

  Error(Kind kind, std::string name, const std::string& what)
      : std::runtime_error(what), kind_(kind), name_(std::move(name)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Kind kind_;
  std::string name_;
};

struct InvalidParam : Error {
  explicit InvalidParam(const std::string& w)
      : Error(Kind::parameter, "InvalidParam", w) {}
};

struct DenominatorTooLarge : Error {
  explicit DenominatorTooLarge(const std::string& w)
      : Error(Kind::parameter, "DenominatorTooLarge", w) {}
};

struct GridTooNarrow : Error {
  explicit GridTooNarrow(const std::string& w)
      : Error(Kind::parameter, "GridTooNarrow", w) {}
};

struct NonConvergent : Error {
  explicit NonConvergent(const std::string& w)
      : Error(Kind::numerical, "NonConvergent", w) {}
};

struct QuadratureFailure : Error {
  explicit QuadratureFailure(const std::string& w)
      : Error(Kind::numerical, "QuadratureFailure", w) {}
};

struct MethodDisagreement : Error {
  explicit MethodDisagreement(const std::string& w)
      : Error(Kind::numerical, "MethodDisagreement", w) {}
};

struct NumericalOverflow : Error {
  explicit NumericalOverflow(const std::string& w)
      : Error(Kind::numerical, "NumericalOverflow", w) {}
};

struct RouteUnavailable : Error {
  explicit RouteUnavailable(const std::string& w)
      : Error(Kind::numerical, "RouteUnavailable", w) {}
};

struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& w)
      : Error(Kind::numerical, "GridTooCoarse", w) {}
};

}  // namespace mlrelax
