#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "rewrite.hpp"
#include "tree.hpp"

namespace tik {

// --- syntax trees -----------------------------------------------------------

/// One entry of an atom's index list: a symbol or a numeric literal.
struct Index {
  std::string symbol;  // empty for numerals
  int numeral = -1;    // -1 for symbols
  SourceSpan span;
  bool is_numeral() const { return numeral >= 0; }
};

enum class ExprKind { Atom, Prod, Add, Smul, Action, Neg, Eq };

struct SyntaxExpr;
using ExprPtr = std::shared_ptr<const SyntaxExpr>;

/// Parsed index-notation expression. Eq appears only at top level.
struct SyntaxExpr {
  ExprKind kind;
  SourceSpan span;

  // Atom
  std::string name;
  std::vector<Index> indices;

  // Prod / Add / Eq
  ExprPtr left, right;

  // Neg / Smul / Action
  ExprPtr child;
  std::string scalar_or_group;  // bound name; empty when a literal is used
  Complex scalar_literal{};
  bool has_scalar_literal = false;
};

// --- environment ------------------------------------------------------------

/// Named leaf values for elaboration: tensors, scalars and group
/// elements. Names are unique across all three maps.
class Environment {
 public:
  explicit Environment(SpeciesPtr species);

  const SpeciesPtr& species() const { return species_; }

  void bind_tensor(const std::string& name, DenseTensor value);
  void bind_scalar(const std::string& name, Complex value);
  void bind_group(const std::string& name, GroupElement value);

  const DenseTensor* tensor(const std::string& name) const;
  const Complex* scalar(const std::string& name) const;
  const GroupElement* group(const std::string& name) const;
  bool has(const std::string& name) const;

  const std::map<std::string, DenseTensor>& tensors() const { return tensors_; }

 private:
  SpeciesPtr species_;
  std::map<std::string, DenseTensor> tensors_;
  std::map<std::string, Complex> scalars_;
  std::map<std::string, GroupElement> groups_;
};

// --- parsing ----------------------------------------------------------------

/// Parses an index-notation expression of the form { ... }ᵀ (ASCII alias
/// }T; an optional trailing ".tensor" is accepted and ignored).
/// Operators, loosest first: = < + < ⊗ (alias @) < prefix -, •ₜ (alias
/// *.), •ₐ (alias @.). Errors carry byte offsets.
ExprPtr parse(const std::string& text);

// --- elaboration ------------------------------------------------------------

struct ElabResult {
  TreePtr lhs;
  TreePtr rhs;  // null unless the input was an equality; already perm-aligned
  std::vector<std::string> free_names;  // free index symbols in lhs signature order
  bool is_eq() const { return rhs != nullptr; }
};

/// Turns a parsed expression into a tensor tree over env's species:
/// numeric indices become eval nodes (left to right), repeated symbols
/// are contracted innermost-first per atom/product scope, and the right
/// side of + and = gets a perm node aligning its free indices with the
/// left's.
ElabResult elaborate(const SyntaxExpr& expr, const Environment& env);

ElabResult parse_and_elaborate(const std::string& text, const Environment& env);

// --- formatting -------------------------------------------------------------

/// Renders a tree back to index notation, generating fresh index symbols
/// (i0, i1, ...) deterministically; the result re-elaborates against
/// `names` to a semantics-equal tree. Every leaf and action node must be
/// labeled. Interior permutations are lifted to the root first; a
/// non-identity root permutation is realized by contracting against unit
/// tensors, which must be bound (under any name) in `names`.
std::string format(const TreePtr& tree, const Environment& names);

}  // namespace tik
