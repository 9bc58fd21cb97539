#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "tree.hpp"

namespace tik {

/// A semantics-preserving rewrite of a node shape. `matches` is a pure
/// shape predicate; `build` may assume it holds.
struct RewriteRule {
  std::string name;
  std::function<bool(const TensorTree&)> matches;
  std::function<TreePtr(const TreePtr&)> build;
};

/// The rule catalog in the deterministic priority order used by
/// normalize().
const std::vector<RewriteRule>& rule_catalog();
const RewriteRule& rule_by_name(const std::string& name);

/// Applies `rule` to the subtree at `path`, rebuilding the spine.
/// Throws NoMatch when the matcher fails there.
TreePtr apply_rule(const TreePtr& tree, const Path& path, const RewriteRule& rule);

struct TraceEntry {
  std::string rule;
  Path path;        // relative to the tree normalize() was called on
  std::string before;  // canonical dump of the rewritten subtree
  std::string after;
};

/// Rewrites to the canonical form, innermost-out with the catalog
/// priority:
///   - per additive branch at most one root perm, below it at most one
///     neg, below that at most one smul (identity perms and unit scalars
///     are elided, stacked scalars multiplied out);
///   - no perm/neg/smul between a prod/contr node and the next add,
///     eval, action or leaf below it;
///   - directly nested contractions ordered innermost-smallest by the
///     pair of positions they touch in the signature below the chain.
/// Terminates: every applied rule strictly decreases termination_measure
/// (checked on every application).
TreePtr normalize(const TreePtr& tree, std::vector<TraceEntry>* trace = nullptr);

/// Lexicographic termination measure for the rule system; normalize
/// asserts a strict decrease on every rule application. Components:
/// [0] perm/neg/smul nodes weighted by their prod/contr/add ancestors,
/// [1] stack disorder (perm under neg/smul, neg under smul),
/// [2] count of perm/neg/smul nodes,
/// [3] contraction-order inversions in directly nested chains.
std::array<long, 4> termination_measure(const TensorTree& t);

enum class Verdict { EqualByNormalForm, EqualNumerically, NotEqual };

const char* verdict_name(Verdict v);

struct EqualityResult {
  Verdict verdict = Verdict::NotEqual;
  double max_diff = 0.0;
  std::vector<int> witness;  // multi-index of the largest discrepancy
  std::string detail;
  bool equal() const { return verdict != Verdict::NotEqual; }
};

/// Decides semantic equality: first by comparing normal forms
/// structurally (the perm_congr route), then numerically within tol.
EqualityResult check_equal(const TreePtr& lhs, const TreePtr& rhs, double tol);

}  // namespace tik
