#include "tree.hpp"

#include <charconv>
#include <sstream>

#include "error.hpp"

namespace tik {

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Tensor: return "tensor";
    case NodeKind::Smul: return "smul";
    case NodeKind::Neg: return "neg";
    case NodeKind::Add: return "add";
    case NodeKind::Action: return "action";
    case NodeKind::Perm: return "perm";
    case NodeKind::Prod: return "prod";
    case NodeKind::Contr: return "contr";
    case NodeKind::Eval: return "eval";
  }
  return "?";
}

namespace {

TreePtr make(TensorTree&& t) { return std::make_shared<const TensorTree>(std::move(t)); }

void require_child(const TreePtr& child, const char* what) {
  if (!child) fail(ErrorCategory::BadArgument, std::string(what) + ": null child");
}

void require_same_species(const TreePtr& a, const TreePtr& b, const char* what) {
  if (a->species() != b->species())
    fail(ErrorCategory::BadArgument, std::string(what) + ": children of different species");
}

}  // namespace

// The private constructor is only reachable through the factories below,
// each of which enforces its typing rule before building the node.
struct TreeFactory;

TreePtr TensorTree::tensor(DenseTensor value, std::string label) {
  Signature sig = value.signature();
  SpeciesPtr sp = value.species();
  return make(TensorTree(TensorNode{std::move(value), std::move(label)}, std::move(sig),
                         std::move(sp)));
}

TreePtr TensorTree::smul(Complex scalar, TreePtr child) {
  require_child(child, "smul");
  Signature sig = child->signature();
  SpeciesPtr sp = child->species();
  return make(TensorTree(SmulNode{scalar, std::move(child)}, std::move(sig), std::move(sp)));
}

TreePtr TensorTree::neg(TreePtr child) {
  require_child(child, "neg");
  Signature sig = child->signature();
  SpeciesPtr sp = child->species();
  return make(TensorTree(NegNode{std::move(child)}, std::move(sig), std::move(sp)));
}

TreePtr TensorTree::add(TreePtr left, TreePtr right) {
  require_child(left, "add");
  require_child(right, "add");
  require_same_species(left, right, "add");
  if (left->signature() != right->signature())
    fail(ErrorCategory::BadArgument, "add children must share one signature");
  Signature sig = left->signature();
  SpeciesPtr sp = left->species();
  return make(
      TensorTree(AddNode{std::move(left), std::move(right)}, std::move(sig), std::move(sp)));
}

TreePtr TensorTree::action(GroupElement g, TreePtr child, std::string label) {
  require_child(child, "action");
  child->species()->validate_group_element(g);
  Signature sig = child->signature();
  SpeciesPtr sp = child->species();
  return make(TensorTree(ActionNode{std::move(g), std::move(label), std::move(child)},
                         std::move(sig), std::move(sp)));
}

TreePtr TensorTree::perm(Permutation sigma, TreePtr child) {
  require_child(child, "perm");
  if (sigma.source != child->signature())
    fail(ErrorCategory::BadArgument, "perm source signature does not match child");
  Signature sig = sigma.target;
  SpeciesPtr sp = child->species();
  return make(
      TensorTree(PermNode{std::move(sigma), std::move(child)}, std::move(sig), std::move(sp)));
}

TreePtr TensorTree::prod(TreePtr left, TreePtr right) {
  require_child(left, "prod");
  require_child(right, "prod");
  require_same_species(left, right, "prod");
  Signature sig = left->signature();
  sig.insert(sig.end(), right->signature().begin(), right->signature().end());
  SpeciesPtr sp = left->species();
  return make(
      TensorTree(ProdNode{std::move(left), std::move(right)}, std::move(sig), std::move(sp)));
}

TreePtr TensorTree::contr(int i, int j, TreePtr child) {
  require_child(child, "contr");
  const Signature& csig = child->signature();
  const int n = static_cast<int>(csig.size());
  if (n < 2) fail(ErrorCategory::BadArgument, "contr child must have rank >= 2");
  if (i < 0 || i >= n || j < 0 || j >= n - 1)
    fail(ErrorCategory::BadArgument, "contr positions out of range");
  const int i2 = succ_above(i, j);
  const Species& sp = *child->species();
  if (csig[i2] != sp.dual(csig[i]))
    throw Error(ErrorCategory::ElabDuality,
                "cannot contract color " + std::string(sp.color_name(csig[i])) +
                    " against non-dual color " + std::string(sp.color_name(csig[i2])));
  Signature sig;
  sig.reserve(n - 2);
  for (int k = 0; k < n; ++k)
    if (k != i && k != i2) sig.push_back(csig[k]);
  SpeciesPtr spp = child->species();
  return make(TensorTree(ContrNode{i, j, std::move(child)}, std::move(sig), std::move(spp)));
}

TreePtr TensorTree::eval(int i, int x, TreePtr child) {
  require_child(child, "eval");
  const Signature& csig = child->signature();
  const int n = static_cast<int>(csig.size());
  if (n < 1) fail(ErrorCategory::BadArgument, "eval child must have rank >= 1");
  if (i < 0 || i >= n) fail(ErrorCategory::BadArgument, "eval position out of range");
  if (x < 0) fail(ErrorCategory::BadArgument, "eval index must be non-negative");
  Signature sig;
  sig.reserve(n - 1);
  for (int k = 0; k < n; ++k)
    if (k != i) sig.push_back(csig[k]);
  SpeciesPtr sp = child->species();
  return make(TensorTree(EvalNode{i, x, std::move(child)}, std::move(sig), std::move(sp)));
}

std::vector<TreePtr> TensorTree::children() const {
  switch (kind()) {
    case NodeKind::Tensor: return {};
    case NodeKind::Smul: return {as<SmulNode>().child};
    case NodeKind::Neg: return {as<NegNode>().child};
    case NodeKind::Add: return {as<AddNode>().left, as<AddNode>().right};
    case NodeKind::Action: return {as<ActionNode>().child};
    case NodeKind::Perm: return {as<PermNode>().child};
    case NodeKind::Prod: return {as<ProdNode>().left, as<ProdNode>().right};
    case NodeKind::Contr: return {as<ContrNode>().child};
    case NodeKind::Eval: return {as<EvalNode>().child};
  }
  return {};
}

const Signature& signature_of(const TensorTree& node) { return node.signature(); }

DenseTensor semantics(const TensorTree& node) {
  switch (node.kind()) {
    case NodeKind::Tensor: return node.as<TensorNode>().value;
    case NodeKind::Smul: {
      const auto& n = node.as<SmulNode>();
      return scale(n.scalar, semantics(*n.child));
    }
    case NodeKind::Neg: return negate(semantics(*node.as<NegNode>().child));
    case NodeKind::Add: {
      const auto& n = node.as<AddNode>();
      return add_tensors(semantics(*n.left), semantics(*n.right));
    }
    case NodeKind::Action: {
      const auto& n = node.as<ActionNode>();
      return group_act(n.element, semantics(*n.child));
    }
    case NodeKind::Perm: {
      const auto& n = node.as<PermNode>();
      return permute(semantics(*n.child), n.sigma);
    }
    case NodeKind::Prod: {
      const auto& n = node.as<ProdNode>();
      return tensor_product(semantics(*n.left), semantics(*n.right));
    }
    case NodeKind::Contr: {
      const auto& n = node.as<ContrNode>();
      return contract(semantics(*n.child), n.i, n.j);
    }
    case NodeKind::Eval: {
      const auto& n = node.as<EvalNode>();
      return eval_index(semantics(*n.child), n.i, n.x);
    }
  }
  fail(ErrorCategory::Internal, "unreachable node kind");
}

std::string format_complex(Complex value) {
  auto num = [](double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, p);
  };
  if (value.imag() == 0.0) return num(value.real());
  std::string s = num(value.real());
  s += value.imag() < 0 ? "-" : "+";
  s += num(std::abs(value.imag()));
  s += "i";
  return s;
}

std::string format_path(const Path& path) {
  std::string s = "[";
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) s += " ";
    s += path[k] == Step::Only ? "only" : (path[k] == Step::Left ? "left" : "right");
  }
  return s + "]";
}

namespace {

void dump_into(const TensorTree& node, std::ostringstream& os) {
  switch (node.kind()) {
    case NodeKind::Tensor: {
      const auto& n = node.as<TensorNode>();
      if (n.label.empty())
        os << "(tensor _)";
      else
        os << "(tensor \"" << n.label << "\")";
      return;
    }
    case NodeKind::Smul: {
      const auto& n = node.as<SmulNode>();
      os << "(smul " << format_complex(n.scalar) << " ";
      dump_into(*n.child, os);
      os << ")";
      return;
    }
    case NodeKind::Neg: {
      os << "(neg ";
      dump_into(*node.as<NegNode>().child, os);
      os << ")";
      return;
    }
    case NodeKind::Add: {
      const auto& n = node.as<AddNode>();
      os << "(add ";
      dump_into(*n.left, os);
      os << " ";
      dump_into(*n.right, os);
      os << ")";
      return;
    }
    case NodeKind::Action: {
      const auto& n = node.as<ActionNode>();
      os << "(action " << (n.label.empty() ? "_" : "\"" + n.label + "\"") << " ";
      dump_into(*n.child, os);
      os << ")";
      return;
    }
    case NodeKind::Perm: {
      const auto& n = node.as<PermNode>();
      os << "(perm [";
      for (int k = 0; k < n.sigma.size(); ++k) os << (k ? " " : "") << n.sigma.map[k];
      os << "] ";
      dump_into(*n.child, os);
      os << ")";
      return;
    }
    case NodeKind::Prod: {
      const auto& n = node.as<ProdNode>();
      os << "(prod ";
      dump_into(*n.left, os);
      os << " ";
      dump_into(*n.right, os);
      os << ")";
      return;
    }
    case NodeKind::Contr: {
      const auto& n = node.as<ContrNode>();
      os << "(contr " << n.i << " " << n.j << " ";
      dump_into(*n.child, os);
      os << ")";
      return;
    }
    case NodeKind::Eval: {
      const auto& n = node.as<EvalNode>();
      os << "(eval " << n.i << " " << n.x << " ";
      dump_into(*n.child, os);
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string dump(const TensorTree& node) {
  std::ostringstream os;
  dump_into(node, os);
  return os.str();
}

std::string dump(const TreePtr& node) { return dump(*node); }

TreePtr subtree_at(const TreePtr& tree, const Path& path) {
  TreePtr cur = tree;
  for (Step step : path) {
    const auto kids = cur->children();
    switch (step) {
      case Step::Only:
        if (kids.size() != 1)
          fail(ErrorCategory::BadArgument, "path step 'only' at a node without a single child");
        cur = kids[0];
        break;
      case Step::Left:
        if (kids.size() != 2)
          fail(ErrorCategory::BadArgument, "path step 'left' at a node without two children");
        cur = kids[0];
        break;
      case Step::Right:
        if (kids.size() != 2)
          fail(ErrorCategory::BadArgument, "path step 'right' at a node without two children");
        cur = kids[1];
        break;
    }
  }
  return cur;
}

namespace {

TreePtr rebuild_with_child(const TensorTree& node, Step step, TreePtr child) {
  switch (node.kind()) {
    case NodeKind::Smul: return TensorTree::smul(node.as<SmulNode>().scalar, std::move(child));
    case NodeKind::Neg: return TensorTree::neg(std::move(child));
    case NodeKind::Add: {
      const auto& n = node.as<AddNode>();
      return step == Step::Left ? TensorTree::add(std::move(child), n.right)
                                : TensorTree::add(n.left, std::move(child));
    }
    case NodeKind::Action: {
      const auto& n = node.as<ActionNode>();
      return TensorTree::action(n.element, std::move(child), n.label);
    }
    case NodeKind::Perm: return TensorTree::perm(node.as<PermNode>().sigma, std::move(child));
    case NodeKind::Prod: {
      const auto& n = node.as<ProdNode>();
      return step == Step::Left ? TensorTree::prod(std::move(child), n.right)
                                : TensorTree::prod(n.left, std::move(child));
    }
    case NodeKind::Contr: {
      const auto& n = node.as<ContrNode>();
      return TensorTree::contr(n.i, n.j, std::move(child));
    }
    case NodeKind::Eval: {
      const auto& n = node.as<EvalNode>();
      return TensorTree::eval(n.i, n.x, std::move(child));
    }
    case NodeKind::Tensor: break;
  }
  fail(ErrorCategory::BadArgument, "path descends into a leaf");
}

}  // namespace

TreePtr replace_at(const TreePtr& tree, const Path& path, TreePtr replacement) {
  if (path.empty()) {
    if (tree->signature() != replacement->signature())
      fail(ErrorCategory::BadArgument, "replacement signature mismatch at " +
                                           format_path(path));
    return replacement;
  }
  Path rest(path.begin() + 1, path.end());
  const auto kids = tree->children();
  const Step step = path.front();
  const std::size_t which = (step == Step::Right) ? 1 : 0;
  if (which >= kids.size())
    fail(ErrorCategory::BadArgument, "path does not resolve to a node");
  TreePtr new_child = replace_at(kids[which], rest, std::move(replacement));
  return rebuild_with_child(*tree, step, std::move(new_child));
}

bool structurally_equal(const TensorTree& a, const TensorTree& b) {
  if (a.kind() != b.kind()) return false;
  if (a.signature() != b.signature()) return false;
  switch (a.kind()) {
    case NodeKind::Tensor: {
      const auto& x = a.as<TensorNode>();
      const auto& y = b.as<TensorNode>();
      return x.value.species() == y.value.species() && x.value.data() == y.value.data();
    }
    case NodeKind::Smul: {
      const auto& x = a.as<SmulNode>();
      const auto& y = b.as<SmulNode>();
      return x.scalar == y.scalar && structurally_equal(*x.child, *y.child);
    }
    case NodeKind::Neg:
      return structurally_equal(*a.as<NegNode>().child, *b.as<NegNode>().child);
    case NodeKind::Add: {
      const auto& x = a.as<AddNode>();
      const auto& y = b.as<AddNode>();
      return structurally_equal(*x.left, *y.left) && structurally_equal(*x.right, *y.right);
    }
    case NodeKind::Action: {
      const auto& x = a.as<ActionNode>();
      const auto& y = b.as<ActionNode>();
      return x.element == y.element && structurally_equal(*x.child, *y.child);
    }
    case NodeKind::Perm: {
      const auto& x = a.as<PermNode>();
      const auto& y = b.as<PermNode>();
      return x.sigma.map == y.sigma.map && structurally_equal(*x.child, *y.child);
    }
    case NodeKind::Prod: {
      const auto& x = a.as<ProdNode>();
      const auto& y = b.as<ProdNode>();
      return structurally_equal(*x.left, *y.left) && structurally_equal(*x.right, *y.right);
    }
    case NodeKind::Contr: {
      const auto& x = a.as<ContrNode>();
      const auto& y = b.as<ContrNode>();
      return x.i == y.i && x.j == y.j && structurally_equal(*x.child, *y.child);
    }
    case NodeKind::Eval: {
      const auto& x = a.as<EvalNode>();
      const auto& y = b.as<EvalNode>();
      return x.i == y.i && x.x == y.x && structurally_equal(*x.child, *y.child);
    }
  }
  return false;
}

}  // namespace tik
