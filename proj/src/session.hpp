#pragma once

#include <string>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "rewrite.hpp"
#include "syntax.hpp"

namespace tik {

/// One CLI/API invocation context: a fixed species, an environment
/// preloaded with the species' named constants, and the command
/// implementations shared by the C API and the test suite.
class Session {
 public:
  /// species_name: "complex-lorentz" (default) or "unit".
  explicit Session(const std::string& species_name);

  const SpeciesPtr& species() const { return env_.species(); }
  Environment& env() { return env_; }
  const Environment& env() const { return env_; }

  /// Binds a tensor from a JSON literal file; an empty name derives the
  /// binding name from the file stem.
  void load_env_file(const std::string& name, const std::string& path);
  void load_env_json(const std::string& name, const std::string& json_text);

  /// Canonical dump of the elaborated expression; equalities print as
  /// (= LHS RHS).
  std::string cmd_parse(const std::string& expr) const;
  /// Evaluates a (non-equality) expression to its tensor, as JSON.
  std::string cmd_eval(const std::string& expr) const;
  /// Normalized tree dump; when trace_out is non-null, one line per
  /// rewrite step is appended to it.
  std::string cmd_simplify(const std::string& expr, std::string* trace_out) const;
  EqualityResult cmd_prove_eq(const std::string& expr, double tol) const;
  AxiomReport cmd_axioms(double tol) const;
  /// Writes every named constant of the species to dir/<stem>.json.
  void cmd_constants_dump(const std::string& dir) const;

  std::string axioms_text(const AxiomReport& report) const;
  std::string axioms_json(const AxiomReport& report) const;

  const std::vector<std::pair<std::string, DenseTensor>>& named_constants() const {
    return named_constants_;
  }

 private:
  Environment env_;
  std::vector<std::pair<std::string, DenseTensor>> named_constants_;  // stem -> value
};

}  // namespace tik
