#pragma once

#include <map>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace tik::lorentz {

/// A named constant of the complex-Lorentz species, with an ASCII file
/// stem for dumps and accepted alias spellings for expressions.
struct NamedConstant {
  std::string name;       // canonical display name, e.g. "εL'"
  std::string file_stem;  // e.g. "epsLP"
  std::vector<std::string> aliases;
  DenseTensor value;
};

/// The physics constants over the complex-Lorentz species: the metrics
/// η (up) and η' (down), the spinor metrics εL/εL'/εR/εR', the unit δ of
/// each color, and the four Pauli tensors. pauliContr is built from the
/// explicit Pauli components with signature [up, upL, upR]; pauliCo,
/// pauliCoDown and pauliContrDown are evaluated from their defining
/// index-notation expressions.
class Constants {
 public:
  static const Constants& instance();

  const SpeciesPtr& species() const { return species_; }
  const std::vector<NamedConstant>& all() const { return constants_; }
  const DenseTensor& get(const std::string& name_or_alias) const;
  TreePtr constant(const std::string& name_or_alias) const;

  /// Binds every constant, canonical names and aliases, into env.
  void bind_all(Environment& env) const;

 private:
  Constants();
  SpeciesPtr species_;
  std::vector<NamedConstant> constants_;
  std::map<std::string, int> by_name_;
};

enum class BispinorKind { ContrUp, ContrDown, CoUp, CoDown };

/// Bispinors built from a Lorentz vector by contraction with the Pauli
/// tensors, evaluated from their defining expressions. contr* kinds take
/// p with signature [up], co* kinds take [down].
DenseTensor bispinor(BispinorKind kind, const DenseTensor& p);

}  // namespace tik::lorentz
