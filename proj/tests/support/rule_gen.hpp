#pragma once

// Random trees whose root matches a given rewrite rule, for the
// per-rule soundness sweeps.

#include <random>
#include <string>

#include "generators.hpp"
#include "rewrite.hpp"

namespace tik::testgen {

// A leaf whose signature starts with a dual pair (plus `extra` random
// positions), so contractions are available.
inline TreePtr leaf_with_dual_pair(const SpeciesPtr& sp, int extra, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> color(0, sp->color_count() - 1);
  const Color c{static_cast<std::uint8_t>(color(rng))};
  Signature sig{c, sp->dual(c)};
  const Signature tail = random_signature(sp, extra, rng);
  sig.insert(sig.end(), tail.begin(), tail.end());
  return TensorTree::tensor(random_tensor(sp, sig, rng), "L");
}

inline TreePtr small_subtree(const SpeciesPtr& sp, std::mt19937_64& rng, int max_rank = 2) {
  TreeGenConfig cfg{sp};
  cfg.max_depth = 2;
  cfg.max_leaf_rank = max_rank;
  cfg.max_rank = max_rank + 1;
  return random_tree(cfg, rng);
}

inline TreePtr wrap_random_contr(const SpeciesPtr& sp, TreePtr t, std::mt19937_64& rng) {
  const auto pairs = contractible_pairs(sp, t->signature());
  if (pairs.empty()) return nullptr;
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pairs.size()) - 1);
  const auto [i, j] = pairs[pick(rng)];
  return TensorTree::contr(i, j, std::move(t));
}

/// A random tree whose root matches `rule`; never returns null.
inline TreePtr matching_tree(const std::string& rule, const SpeciesPtr& sp,
                             std::mt19937_64& rng) {
  auto sub = [&] { return small_subtree(sp, rng); };
  auto perm_of = [&](const TreePtr& t) {
    return TensorTree::perm(random_permutation(t->signature(), rng), t);
  };
  for (;;) {
    if (rule == "perm_id") {
      TreePtr c = sub();
      return TensorTree::perm(Permutation::identity(c->signature()), c);
    }
    if (rule == "smul_one") return TensorTree::smul(Complex{1.0, 0.0}, sub());
    if (rule == "neg_neg") return TensorTree::neg(TensorTree::neg(sub()));
    if (rule == "perm_perm") {
      TreePtr c = sub();
      TreePtr inner = perm_of(c);
      return perm_of(inner);
    }
    if (rule == "smul_smul")
      return TensorTree::smul(rand_complex(rng), TensorTree::smul(rand_complex(rng), sub()));
    if (rule == "prod_perm_left") {
      TreePtr a = sub();
      return TensorTree::prod(perm_of(a), sub());
    }
    if (rule == "prod_perm_right") {
      TreePtr b = sub();
      return TensorTree::prod(sub(), perm_of(b));
    }
    if (rule == "perm_contr_congr") {
      TreePtr base = leaf_with_dual_pair(sp, 1, rng);
      TreePtr p = perm_of(base);
      TreePtr out = wrap_random_contr(sp, p, rng);
      if (out) return out;
      continue;
    }
    if (rule == "contr_contr") {
      std::uniform_int_distribution<int> color(0, sp->color_count() - 1);
      const Color c1{static_cast<std::uint8_t>(color(rng))};
      const Color c2{static_cast<std::uint8_t>(color(rng))};
      Signature sig{c1, sp->dual(c1), c2, sp->dual(c2)};
      std::shuffle(sig.begin(), sig.end(), rng);
      TreePtr t = TensorTree::tensor(random_tensor(sp, sig, rng), "L");
      TreePtr inner = wrap_random_contr(sp, t, rng);
      if (!inner) continue;
      TreePtr outer = wrap_random_contr(sp, inner, rng);
      if (!outer) continue;
      return outer;
    }
    if (rule == "neg_fst_prod") return TensorTree::prod(TensorTree::neg(sub()), sub());
    if (rule == "neg_snd_prod") return TensorTree::prod(sub(), TensorTree::neg(sub()));
    if (rule == "neg_contr") {
      TreePtr out =
          wrap_random_contr(sp, TensorTree::neg(leaf_with_dual_pair(sp, 1, rng)), rng);
      if (out) return out;
      continue;
    }
    if (rule == "smul_fst_prod")
      return TensorTree::prod(TensorTree::smul(rand_complex(rng), sub()), sub());
    if (rule == "smul_snd_prod")
      return TensorTree::prod(sub(), TensorTree::smul(rand_complex(rng), sub()));
    if (rule == "smul_contr") {
      TreePtr out = wrap_random_contr(
          sp, TensorTree::smul(rand_complex(rng), leaf_with_dual_pair(sp, 1, rng)), rng);
      if (out) return out;
      continue;
    }
    if (rule == "perm_neg") return TensorTree::neg(perm_of(sub()));
    if (rule == "perm_smul") return TensorTree::smul(rand_complex(rng), perm_of(sub()));
    if (rule == "neg_smul")
      return TensorTree::smul(rand_complex(rng), TensorTree::neg(sub()));
    if (rule == "add_perm") {
      TreePtr a = sub();
      const Permutation sigma = random_permutation(a->signature(), rng);
      TreePtr b = TensorTree::tensor(random_tensor(sp, a->signature(), rng), "R");
      return TensorTree::add(TensorTree::perm(sigma, a), TensorTree::perm(sigma, b));
    }
    fail(ErrorCategory::BadArgument, "no matching-tree generator for rule " + rule);
  }
}

}  // namespace tik::testgen
