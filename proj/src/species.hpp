#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "complexmat.hpp"
#include "error.hpp"

namespace tik {

/// Label of an index type within a species. Values index the owning
/// species' color table; colors of different species must not be mixed.
struct Color {
  std::uint8_t value = 0;
  bool operator==(const Color&) const = default;
  auto operator<=>(const Color&) const = default;
};

/// An element of the species' symmetry group, stored as a square complex
/// matrix (2x2 for the SL(2,C)-based species, 1x1 for the unit species).
/// Validity is species-specific; see Species::validate_group_element.
using GroupElement = CMatrix;

struct AxiomReport {
  struct Entry {
    Color color;
    bool contr_tmul_symm = false;  // K_c = transpose(K_{tau c})
    bool unit_symm = false;        // unit_c[a][b] = unit_{tau c}[b][a]
    bool contr_unit = false;       // K_c . unit_c = id
    bool contr_metric = false;     // metric_c . K_c . metric_{tau c} = unit_c (braided)
    bool all() const { return contr_tmul_symm && unit_symm && contr_unit && contr_metric; }
  };
  double tol = 0.0;
  std::vector<Entry> entries;
  bool all_pass() const;
};

/// The data package defining a family of tensors: colors with a dual
/// involution, per-color representations of a common symmetry group, and
/// the invariant contraction/unit/metric elements in basis coordinates.
///
/// Shapes, with d(c) = rep_dim(c):
///   contr_form(c)  : d(c) x d(tau c)
///   unit_vec(c)    : d(tau c) x d(c)
///   metric_vec(c)  : d(c) x d(c)
///
/// Instances are immutable after construction and safe to share across
/// threads; tensors and trees hold them by shared_ptr and treat pointer
/// identity as species identity.
class Species {
 public:
  struct Config {
    std::string name;
    std::vector<std::string> color_names;
    std::vector<std::uint8_t> tau;  // involution, as indices into color_names
    std::vector<int> rep_dims;
    int group_dim = 1;
    // representation action in the standard basis; must be a homomorphism
    std::function<CMatrix(Color, const GroupElement&)> rep;
    // per color, in the order of color_names
    std::vector<CMatrix> contr_forms;
    std::vector<CMatrix> unit_vecs;
    std::vector<CMatrix> metric_vecs;
    // |constraint(g)| <= tol for valid group elements, e.g. det-1 for SL(2,C)
    std::function<double(const GroupElement&)> group_defect;
    std::function<GroupElement(std::mt19937_64&)> group_sampler;
  };

  explicit Species(Config cfg);

  const std::string& name() const { return cfg_.name; }
  int color_count() const { return static_cast<int>(cfg_.color_names.size()); }
  std::string_view color_name(Color c) const { return cfg_.color_names[c.value]; }
  std::optional<Color> color_by_name(std::string_view name) const;

  Color dual(Color c) const { return Color{cfg_.tau[c.value]}; }
  int rep_dim(Color c) const { return cfg_.rep_dims[c.value]; }
  int group_dim() const { return cfg_.group_dim; }

  CMatrix rep_matrix(Color c, const GroupElement& g) const;
  const CMatrix& contr_form(Color c) const { return cfg_.contr_forms[c.value]; }
  const CMatrix& unit_vec(Color c) const { return cfg_.unit_vecs[c.value]; }
  const CMatrix& metric_vec(Color c) const { return cfg_.metric_vecs[c.value]; }

  /// Throws BadArgument when g has the wrong shape or violates the
  /// species' group constraint beyond 1e-10.
  void validate_group_element(const GroupElement& g) const;
  GroupElement random_group_element(std::mt19937_64& rng) const;

  /// Numeric verification of the four species axioms, per color.
  /// Failures are data in the report, never exceptions.
  AxiomReport check_axioms(double tol) const;

 private:
  Config cfg_;
};

using SpeciesPtr = std::shared_ptr<const Species>;

Color dual_color(const Species& species, Color c);
const CMatrix& contraction_form(const Species& species, Color c);

/// Synthetic test species: one self-dual color "u" of dimension 1 with
/// all structure data equal to 1 and a trivial U(1) action. Useful for
/// exercising trees and rewrites independently of physics conventions.
SpeciesPtr unit_species();

std::string axiom_report_text(const Species& species, const AxiomReport& report);

}  // namespace tik
