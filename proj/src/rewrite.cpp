#include "rewrite.hpp"

#include <algorithm>
#include <utility>

#include "error.hpp"

namespace tik {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::EqualByNormalForm: return "equal-by-normal-form";
    case Verdict::EqualNumerically: return "equal-numerically";
    case Verdict::NotEqual: return "not-equal";
  }
  return "?";
}

namespace {

// Index bookkeeping ---------------------------------------------------------

// The two child positions a contr node touches: (i, succ_above(i, j)).
std::pair<int, int> contr_pair(const ContrNode& n) {
  return {n.i, succ_above(n.i, n.j)};
}

// (i, j) arguments contracting child positions u and u2 (u != u2).
std::pair<int, int> contr_args_for(int u, int u2) {
  return {u, u2 < u ? u2 : u2 - 1};
}

// Position p after deleting positions a and b; requires p not in {a, b}.
int delete2_adjust(int p, int a, int b) {
  return p - (p > a ? 1 : 0) - (p > b ? 1 : 0);
}

// The q-th surviving position once `deleted` (sorted) is removed.
int undelete(int q, const std::vector<int>& deleted) {
  int pos = q;
  for (int d : deleted)
    if (d <= pos) ++pos;
  return pos;
}

// Canonical key of a contraction: its position pair in the coordinates
// of the signature below the parts being compared, smaller first.
struct ChainKey {
  int lo, hi;
  auto operator<=>(const ChainKey&) const = default;
};

ChainKey make_key(int a, int b) {
  return a < b ? ChainKey{a, b} : ChainKey{b, a};
}

// Keys of a contraction chain (outermost node first), all expressed in
// the signature of the tree below the innermost contraction.
std::vector<ChainKey> chain_keys(const TensorTree& top) {
  std::vector<const ContrNode*> chain;
  const TensorTree* cur = &top;
  while (cur->kind() == NodeKind::Contr) {
    chain.push_back(&cur->as<ContrNode>());
    cur = cur->as<ContrNode>().child.get();
  }
  std::vector<ChainKey> keys(chain.size());
  std::vector<int> deleted;
  for (int t = static_cast<int>(chain.size()) - 1; t >= 0; --t) {
    const auto [i, i2] = contr_pair(*chain[t]);
    const int bi = undelete(i, deleted);
    const int bi2 = undelete(i2, deleted);
    keys[t] = make_key(bi, bi2);
    deleted.push_back(bi);
    deleted.push_back(bi2);
    std::sort(deleted.begin(), deleted.end());
  }
  return keys;
}

// Shape predicates -----------------------------------------------------------

bool perm_under(const TensorTree& t, NodeKind outer) {
  if (t.kind() != outer) return false;
  switch (outer) {
    case NodeKind::Neg: return t.as<NegNode>().child->kind() == NodeKind::Perm;
    case NodeKind::Smul: return t.as<SmulNode>().child->kind() == NodeKind::Perm;
    case NodeKind::Contr: return t.as<ContrNode>().child->kind() == NodeKind::Perm;
    default: return false;
  }
}

// Rule builders ---------------------------------------------------------------

TreePtr build_prod_perm_left(const TreePtr& t) {
  const auto& pr = t->as<ProdNode>();
  const auto& p = pr.left->as<PermNode>();
  const int na = p.sigma.size();
  const int nb = static_cast<int>(pr.right->signature().size());
  std::vector<int> map(na + nb);
  for (int i = 0; i < na; ++i) map[i] = p.sigma.map[i];
  for (int k = 0; k < nb; ++k) map[na + k] = na + k;
  TreePtr inner = TensorTree::prod(p.child, pr.right);
  return TensorTree::perm(Permutation::from_map(inner->signature(), std::move(map)), inner);
}

TreePtr build_prod_perm_right(const TreePtr& t) {
  const auto& pr = t->as<ProdNode>();
  const auto& p = pr.right->as<PermNode>();
  const int na = static_cast<int>(pr.left->signature().size());
  const int nb = p.sigma.size();
  std::vector<int> map(na + nb);
  for (int i = 0; i < na; ++i) map[i] = i;
  for (int k = 0; k < nb; ++k) map[na + k] = na + p.sigma.map[k];
  TreePtr inner = TensorTree::prod(pr.left, p.child);
  return TensorTree::perm(Permutation::from_map(inner->signature(), std::move(map)), inner);
}

TreePtr build_perm_perm(const TreePtr& t) {
  const auto& outer = t->as<PermNode>();
  const auto& inner = outer.child->as<PermNode>();
  return TensorTree::perm(compose(outer.sigma, inner.sigma), inner.child);
}

TreePtr build_perm_contr_congr(const TreePtr& t) {
  const auto& c = t->as<ContrNode>();
  const auto& p = c.child->as<PermNode>();
  const int i2 = succ_above(c.i, c.j);
  const std::vector<int> pinv = p.sigma.inverse_map();
  const int u = pinv[c.i];
  const int u2 = pinv[i2];
  const auto [ni, nj] = contr_args_for(u, u2);
  TreePtr inner = TensorTree::contr(ni, nj, p.child);
  std::vector<int> map;
  map.reserve(p.sigma.map.size() - 2);
  for (int o = 0; o < p.sigma.size(); ++o) {
    if (o == u || o == u2) continue;
    map.push_back(delete2_adjust(p.sigma.map[o], c.i, i2));
  }
  return TensorTree::perm(Permutation::from_map(inner->signature(), std::move(map)), inner);
}

TreePtr build_contr_contr(const TreePtr& t) {
  const auto& outer = t->as<ContrNode>();
  const auto& inner = outer.child->as<ContrNode>();
  const auto [k, k2] = contr_pair(inner);
  const auto survivor = [&](int m) { return succ_above(inner.i, succ_above(inner.j, m)); };
  const int oi2 = succ_above(outer.i, outer.j);
  const int u = survivor(outer.i);
  const int u2 = survivor(oi2);
  const auto [ni, nj] = contr_args_for(u, u2);
  const auto [nk, nl] = contr_args_for(delete2_adjust(k, u, u2), delete2_adjust(k2, u, u2));
  TreePtr swapped = TensorTree::contr(nk, nl, TensorTree::contr(ni, nj, inner.child));
  // The orders delete the same position set, so the induced permutation
  // is the identity on the surviving positions.
  return TensorTree::perm(Permutation::identity(swapped->signature()), swapped);
}

TreePtr build_neg_fst_prod(const TreePtr& t) {
  const auto& pr = t->as<ProdNode>();
  return TensorTree::neg(TensorTree::prod(pr.left->as<NegNode>().child, pr.right));
}

TreePtr build_neg_snd_prod(const TreePtr& t) {
  const auto& pr = t->as<ProdNode>();
  return TensorTree::neg(TensorTree::prod(pr.left, pr.right->as<NegNode>().child));
}

TreePtr build_neg_contr(const TreePtr& t) {
  const auto& c = t->as<ContrNode>();
  return TensorTree::neg(TensorTree::contr(c.i, c.j, c.child->as<NegNode>().child));
}

TreePtr build_smul_fst_prod(const TreePtr& t) {
  const auto& pr = t->as<ProdNode>();
  const auto& s = pr.left->as<SmulNode>();
  return TensorTree::smul(s.scalar, TensorTree::prod(s.child, pr.right));
}

TreePtr build_smul_snd_prod(const TreePtr& t) {
  const auto& pr = t->as<ProdNode>();
  const auto& s = pr.right->as<SmulNode>();
  return TensorTree::smul(s.scalar, TensorTree::prod(pr.left, s.child));
}

TreePtr build_smul_contr(const TreePtr& t) {
  const auto& c = t->as<ContrNode>();
  const auto& s = c.child->as<SmulNode>();
  return TensorTree::smul(s.scalar, TensorTree::contr(c.i, c.j, s.child));
}

TreePtr build_perm_neg(const TreePtr& t) {
  const auto& p = t->as<NegNode>().child->as<PermNode>();
  return TensorTree::perm(p.sigma, TensorTree::neg(p.child));
}

TreePtr build_perm_smul(const TreePtr& t) {
  const auto& s = t->as<SmulNode>();
  const auto& p = s.child->as<PermNode>();
  return TensorTree::perm(p.sigma, TensorTree::smul(s.scalar, p.child));
}

TreePtr build_neg_smul(const TreePtr& t) {
  const auto& s = t->as<SmulNode>();
  return TensorTree::neg(TensorTree::smul(s.scalar, s.child->as<NegNode>().child));
}

TreePtr build_neg_neg(const TreePtr& t) {
  return t->as<NegNode>().child->as<NegNode>().child;
}

TreePtr build_smul_smul(const TreePtr& t) {
  const auto& outer = t->as<SmulNode>();
  const auto& inner = outer.child->as<SmulNode>();
  return TensorTree::smul(outer.scalar * inner.scalar, inner.child);
}

TreePtr build_smul_one(const TreePtr& t) { return t->as<SmulNode>().child; }

TreePtr build_perm_id(const TreePtr& t) { return t->as<PermNode>().child; }

TreePtr build_add_perm(const TreePtr& t) {
  const auto& a = t->as<AddNode>();
  const auto& pl = a.left->as<PermNode>();
  const auto& pr = a.right->as<PermNode>();
  return TensorTree::perm(pl.sigma, TensorTree::add(pl.child, pr.child));
}

std::vector<RewriteRule> make_catalog() {
  std::vector<RewriteRule> rules;
  auto rule = [&](std::string name, std::function<bool(const TensorTree&)> matches,
                  std::function<TreePtr(const TreePtr&)> build) {
    rules.push_back(RewriteRule{std::move(name), std::move(matches), std::move(build)});
  };

  rule(
      "perm_id",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Perm && t.as<PermNode>().sigma.is_identity();
      },
      build_perm_id);
  rule(
      "smul_one",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Smul && t.as<SmulNode>().scalar == Complex{1.0, 0.0};
      },
      build_smul_one);
  rule(
      "neg_neg",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Neg &&
               t.as<NegNode>().child->kind() == NodeKind::Neg;
      },
      build_neg_neg);
  rule(
      "perm_perm",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Perm &&
               t.as<PermNode>().child->kind() == NodeKind::Perm;
      },
      build_perm_perm);
  rule(
      "smul_smul",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Smul &&
               t.as<SmulNode>().child->kind() == NodeKind::Smul;
      },
      build_smul_smul);
  rule(
      "prod_perm_left",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Prod &&
               t.as<ProdNode>().left->kind() == NodeKind::Perm;
      },
      build_prod_perm_left);
  rule(
      "prod_perm_right",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Prod &&
               t.as<ProdNode>().right->kind() == NodeKind::Perm;
      },
      build_prod_perm_right);
  rule(
      "perm_contr_congr",
      [](const TensorTree& t) { return perm_under(t, NodeKind::Contr); },
      build_perm_contr_congr);
  rule(
      "neg_fst_prod",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Prod &&
               t.as<ProdNode>().left->kind() == NodeKind::Neg;
      },
      build_neg_fst_prod);
  rule(
      "neg_snd_prod",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Prod &&
               t.as<ProdNode>().right->kind() == NodeKind::Neg;
      },
      build_neg_snd_prod);
  rule(
      "neg_contr",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Contr &&
               t.as<ContrNode>().child->kind() == NodeKind::Neg;
      },
      build_neg_contr);
  rule(
      "smul_fst_prod",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Prod &&
               t.as<ProdNode>().left->kind() == NodeKind::Smul;
      },
      build_smul_fst_prod);
  rule(
      "smul_snd_prod",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Prod &&
               t.as<ProdNode>().right->kind() == NodeKind::Smul;
      },
      build_smul_snd_prod);
  rule(
      "smul_contr",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Contr &&
               t.as<ContrNode>().child->kind() == NodeKind::Smul;
      },
      build_smul_contr);
  rule(
      "perm_neg",
      [](const TensorTree& t) { return perm_under(t, NodeKind::Neg); },
      build_perm_neg);
  rule(
      "perm_smul",
      [](const TensorTree& t) { return perm_under(t, NodeKind::Smul); },
      build_perm_smul);
  rule(
      "neg_smul",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Smul &&
               t.as<SmulNode>().child->kind() == NodeKind::Neg;
      },
      build_neg_smul);
  rule(
      "add_perm",
      [](const TensorTree& t) {
        if (t.kind() != NodeKind::Add) return false;
        const auto& a = t.as<AddNode>();
        if (a.left->kind() != NodeKind::Perm || a.right->kind() != NodeKind::Perm)
          return false;
        return a.left->as<PermNode>().sigma.map == a.right->as<PermNode>().sigma.map;
      },
      build_add_perm);
  rule(
      "contr_contr",
      [](const TensorTree& t) {
        return t.kind() == NodeKind::Contr &&
               t.as<ContrNode>().child->kind() == NodeKind::Contr;
      },
      build_contr_contr);
  return rules;
}

// normalize applies contr_contr only to repair chain-order inversions;
// every other rule fires whenever its matcher does.
bool normalize_guard(const RewriteRule& rule, const TensorTree& t) {
  if (rule.name != "contr_contr") return true;
  const std::vector<ChainKey> keys = chain_keys(t);
  return keys.size() >= 2 && keys[0] < keys[1];
}

}  // namespace

const std::vector<RewriteRule>& rule_catalog() {
  static const std::vector<RewriteRule> catalog = make_catalog();
  return catalog;
}

const RewriteRule& rule_by_name(const std::string& name) {
  for (const RewriteRule& r : rule_catalog())
    if (r.name == name) return r;
  fail(ErrorCategory::BadArgument, "unknown rewrite rule: " + name);
}

TreePtr apply_rule(const TreePtr& tree, const Path& path, const RewriteRule& rule) {
  TreePtr sub = subtree_at(tree, path);
  if (!rule.matches(*sub))
    throw Error(ErrorCategory::NoMatch, "rule " + rule.name + " does not match " +
                                            node_kind_name(sub->kind()) + " node at " +
                                            format_path(path));
  return replace_at(tree, path, rule.build(sub));
}

std::array<long, 4> termination_measure(const TensorTree& t) {
  std::array<long, 4> m{0, 0, 0, 0};

  // core = how many prod/contr/add nodes sit above; neg_smul = how many
  // neg/smul nodes sit above; smul = how many smul nodes sit above.
  const std::function<void(const TensorTree&, long, long, long)> walk =
      [&](const TensorTree& node, long core, long neg_smul, long smul) {
        long c = core, ns = neg_smul, s = smul;
        switch (node.kind()) {
          case NodeKind::Perm:
            m[0] += core;
            m[1] += neg_smul;
            m[2] += 1;
            break;
          case NodeKind::Neg:
            m[0] += core;
            m[1] += smul;
            m[2] += 1;
            ns += 1;
            break;
          case NodeKind::Smul:
            m[0] += core;
            m[2] += 1;
            ns += 1;
            s += 1;
            break;
          case NodeKind::Add:
          case NodeKind::Prod:
          case NodeKind::Contr:
            c += 1;
            break;
          default:
            break;
        }
        for (const TreePtr& ch : node.children()) walk(*ch, c, ns, s);
      };
  walk(t, 0, 0, 0);

  // m[3]: contraction-order inversions over directly nested chains.
  const std::function<void(const TensorTree&, bool)> scan =
      [&](const TensorTree& node, bool parent_contr) {
        if (node.kind() == NodeKind::Contr && !parent_contr) {
          const std::vector<ChainKey> keys = chain_keys(node);
          for (std::size_t a = 0; a < keys.size(); ++a)
            for (std::size_t b = a + 1; b < keys.size(); ++b)
              if (keys[a] < keys[b]) m[3] += 1;  // outer smaller than inner: inverted
        }
        for (const TreePtr& c : node.children())
          scan(*c, node.kind() == NodeKind::Contr);
      };
  scan(t, false);
  return m;
}

namespace {

constexpr long kNormalizeStepLimit = 200000;

struct NormState {
  std::vector<TraceEntry>* trace = nullptr;
  long steps = 0;
};

TreePtr normalize_rec(const TreePtr& t, NormState& st, Path& cur) {
  // children first (innermost-out)
  TreePtr out = t;
  {
    const auto kids = t->children();
    if (kids.size() == 1) {
      cur.push_back(Step::Only);
      TreePtr c = normalize_rec(kids[0], st, cur);
      cur.pop_back();
      if (c != kids[0]) out = replace_at(t, Path{Step::Only}, std::move(c));
    } else if (kids.size() == 2) {
      cur.push_back(Step::Left);
      TreePtr l = normalize_rec(kids[0], st, cur);
      cur.back() = Step::Right;
      TreePtr r = normalize_rec(kids[1], st, cur);
      cur.pop_back();
      if (l != kids[0]) out = replace_at(out, Path{Step::Left}, std::move(l));
      if (r != kids[1]) out = replace_at(out, Path{Step::Right}, std::move(r));
    }
  }

  for (const RewriteRule& rule : rule_catalog()) {
    if (!rule.matches(*out) || !normalize_guard(rule, *out)) continue;
    const std::array<long, 4> before_measure = termination_measure(*out);
    std::string before;
    if (st.trace) before = dump(out);
    TreePtr next = rule.build(out);
    // Rules state their result with an explicit induced permutation; an
    // identity one is immediately elided.
    if (next->kind() == NodeKind::Perm && next->as<PermNode>().sigma.is_identity())
      next = next->as<PermNode>().child;
    const std::array<long, 4> after_measure = termination_measure(*next);
    if (!(after_measure < before_measure))
      fail(ErrorCategory::Internal,
           "normalize: rule " + rule.name + " did not decrease the termination measure");
    if (++st.steps > kNormalizeStepLimit)
      fail(ErrorCategory::Internal, "normalize exceeded its step limit");
    if (st.trace) st.trace->push_back({rule.name, cur, std::move(before), dump(next)});
    return normalize_rec(next, st, cur);
  }
  return out;
}

}  // namespace

TreePtr normalize(const TreePtr& tree, std::vector<TraceEntry>* trace) {
  NormState st;
  st.trace = trace;
  Path cur;
  return normalize_rec(tree, st, cur);
}

EqualityResult check_equal(const TreePtr& lhs, const TreePtr& rhs, double tol) {
  EqualityResult res;
  if (lhs->species() != rhs->species()) {
    res.detail = "trees belong to different species";
    return res;
  }
  if (lhs->signature() != rhs->signature()) {
    res.detail = "signature mismatch";
    return res;
  }
  const TreePtr nl = normalize(lhs);
  const TreePtr nr = normalize(rhs);
  if (structurally_equal(*nl, *nr)) {
    res.verdict = Verdict::EqualByNormalForm;
    res.detail = "normal forms coincide";
    return res;
  }
  const DenseTensor dl = semantics(*lhs);
  const DenseTensor dr = semantics(*rhs);
  res.max_diff = max_abs_diff(dl, dr);
  if (res.max_diff <= tol) {
    res.verdict = Verdict::EqualNumerically;
    res.detail = "components agree within tolerance";
    return res;
  }
  res.verdict = Verdict::NotEqual;
  res.witness = argmax_abs_diff(dl, dr);
  std::string w = "[";
  for (std::size_t k = 0; k < res.witness.size(); ++k)
    w += (k ? " " : "") + std::to_string(res.witness[k]);
  w += "]";
  res.detail = "max abs difference " + format_complex(Complex{res.max_diff, 0.0}) +
               " at index " + w;
  return res;
}

}  // namespace tik
