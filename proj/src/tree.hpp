#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tensor.hpp"

namespace tik {

class TensorTree;
using TreePtr = std::shared_ptr<const TensorTree>;

enum class NodeKind { Tensor, Smul, Neg, Add, Action, Perm, Prod, Contr, Eval };

const char* node_kind_name(NodeKind k);

/// Child selector for addressing subtrees: Only for single-child nodes,
/// Left/Right for add and prod.
enum class Step { Only, Left, Right };
using Path = std::vector<Step>;

struct TensorNode {
  DenseTensor value;
  std::string label;  // optional name, used by printers only
};
struct SmulNode {
  Complex scalar;
  TreePtr child;
};
struct NegNode {
  TreePtr child;
};
struct AddNode {
  TreePtr left, right;
};
struct ActionNode {
  GroupElement element;
  std::string label;  // optional name, used by printers only
  TreePtr child;
};
struct PermNode {
  Permutation sigma;
  TreePtr child;
};
struct ProdNode {
  TreePtr left, right;
};
struct ContrNode {
  int i, j;
  TreePtr child;
};
struct EvalNode {
  int i, x;
  TreePtr child;
};

/// Immutable tensor-expression tree. Each node caches its signature; the
/// typing rule of every constructor is checked at construction, so a
/// TensorTree value is well-typed by existence and semantics() is total.
class TensorTree {
 public:
  static TreePtr tensor(DenseTensor value, std::string label = {});
  static TreePtr smul(Complex scalar, TreePtr child);
  static TreePtr neg(TreePtr child);
  static TreePtr add(TreePtr left, TreePtr right);
  static TreePtr action(GroupElement g, TreePtr child, std::string label = {});
  static TreePtr perm(Permutation sigma, TreePtr child);
  static TreePtr prod(TreePtr left, TreePtr right);
  /// Contracts position i with position succ_above(i, j) of the child
  /// signature; the latter color must be the dual of the former
  /// (ElabDuality otherwise -- the runtime analogue of the constructor's
  /// proof obligation).
  static TreePtr contr(int i, int j, TreePtr child);
  static TreePtr eval(int i, int x, TreePtr child);

  NodeKind kind() const { return static_cast<NodeKind>(node_.index()); }
  const Signature& signature() const { return sig_; }
  const SpeciesPtr& species() const { return species_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(node_);
  }

  /// Children in Path order (Only, or Left then Right).
  std::vector<TreePtr> children() const;

 private:
  using Node = std::variant<TensorNode, SmulNode, NegNode, AddNode, ActionNode, PermNode,
                            ProdNode, ContrNode, EvalNode>;
  TensorTree(Node node, Signature sig, SpeciesPtr species)
      : node_(std::move(node)), sig_(std::move(sig)), species_(std::move(species)) {}

  Node node_;
  Signature sig_;
  SpeciesPtr species_;
};

const Signature& signature_of(const TensorTree& node);

/// The tensor a tree denotes, by structural recursion over the nine
/// constructors.
DenseTensor semantics(const TensorTree& node);

/// Canonical s-expression dump, e.g.
///   (contr 0 0 (prod (tensor "A") (tensor "S")))
/// Stable across versions; used by golden tests.
std::string dump(const TensorTree& node);
std::string dump(const TreePtr& node);

/// Canonical text for a complex scalar as used in dumps: shortest
/// round-trip decimal, imaginary part as "+bi"/"-bi" when nonzero.
std::string format_complex(Complex value);
std::string format_path(const Path& path);

TreePtr subtree_at(const TreePtr& tree, const Path& path);

/// Replaces the subtree at `path`; the replacement must carry the same
/// signature (BadArgument otherwise). Unmodified subtrees are shared.
TreePtr replace_at(const TreePtr& tree, const Path& path, TreePtr replacement);

/// Structural equality: same shape, parameters and leaf data (bitwise on
/// components). Printer labels are ignored.
bool structurally_equal(const TensorTree& a, const TensorTree& b);

}  // namespace tik
