#include "syntax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "error.hpp"

namespace tik {

// --- environment ------------------------------------------------------------

Environment::Environment(SpeciesPtr species) : species_(std::move(species)) {
  if (!species_) fail(ErrorCategory::BadArgument, "environment needs a species");
}

void Environment::bind_tensor(const std::string& name, DenseTensor value) {
  if (value.species() != species_)
    fail(ErrorCategory::BadArgument, "tensor bound to environment of another species");
  if (has(name)) fail(ErrorCategory::BadArgument, "duplicate environment name " + name);
  tensors_.emplace(name, std::move(value));
}

void Environment::bind_scalar(const std::string& name, Complex value) {
  if (has(name)) fail(ErrorCategory::BadArgument, "duplicate environment name " + name);
  scalars_.emplace(name, value);
}

void Environment::bind_group(const std::string& name, GroupElement value) {
  species_->validate_group_element(value);
  if (has(name)) fail(ErrorCategory::BadArgument, "duplicate environment name " + name);
  groups_.emplace(name, std::move(value));
}

const DenseTensor* Environment::tensor(const std::string& name) const {
  auto it = tensors_.find(name);
  return it == tensors_.end() ? nullptr : &it->second;
}

const Complex* Environment::scalar(const std::string& name) const {
  auto it = scalars_.find(name);
  return it == scalars_.end() ? nullptr : &it->second;
}

const GroupElement* Environment::group(const std::string& name) const {
  auto it = groups_.find(name);
  return it == groups_.end() ? nullptr : &it->second;
}

bool Environment::has(const std::string& name) const {
  return tensors_.count(name) || scalars_.count(name) || groups_.count(name);
}

// --- lexer ------------------------------------------------------------------

namespace {

enum class Tok {
  LBrace,
  RBraceT,
  Pipe,
  Otimes,
  Plus,
  EqSign,
  Minus,
  SmulOp,
  ActOp,
  LParen,
  RParen,
  Ident,
  Number,
  DotTensor,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  SourceSpan span;
};

constexpr const char* kOtimes = "\xE2\x8A\x97";       // ⊗
constexpr const char* kBullet = "\xE2\x80\xA2";       // •
constexpr const char* kSmul = "\xE2\x80\xA2\xE2\x82\x9C";  // •ₜ
constexpr const char* kAct = "\xE2\x80\xA2\xE2\x82\x90";   // •ₐ
constexpr const char* kSupT = "\xE1\xB5\x80";         // ᵀ

bool starts_with(const std::string& s, std::size_t pos, const char* pat) {
  const std::size_t n = std::char_traits<char>::length(pat);
  return s.compare(pos, n, pat) == 0;
}

std::size_t codepoint_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 0;  // invalid lead byte
}

[[noreturn]] void lex_error(const std::string& msg, std::size_t at) {
  throw Error(ErrorCategory::Parse, msg + " at byte " + std::to_string(at),
              SourceSpan{at, at + 1});
}

bool ident_start(const std::string& s, std::size_t pos) {
  const unsigned char c = static_cast<unsigned char>(s[pos]);
  if (c < 0x80)
    return std::isalpha(c) || c == '_' || c == '\'';
  // Non-ASCII: any codepoint that is not one of the operator glyphs.
  return !starts_with(s, pos, kOtimes) && !starts_with(s, pos, kBullet) &&
         !starts_with(s, pos, kSupT);
}

bool ident_continue(const std::string& s, std::size_t pos) {
  const unsigned char c = static_cast<unsigned char>(s[pos]);
  if (c < 0x80)
    return std::isalnum(c) || c == '_' || c == '\'';
  return !starts_with(s, pos, kOtimes) && !starts_with(s, pos, kBullet) &&
         !starts_with(s, pos, kSupT);
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::size_t begin, std::size_t end, std::string text = {},
                  double num = 0.0) {
    out.push_back(Token{kind, std::move(text), num, SourceSpan{begin, end}});
  };
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '{') {
      push(Tok::LBrace, i, i + 1);
      ++i;
      continue;
    }
    if (c == '}') {
      if (i + 1 < s.size() && s[i + 1] == 'T') {
        push(Tok::RBraceT, i, i + 2);
        i += 2;
        continue;
      }
      if (starts_with(s, i + 1, kSupT)) {
        push(Tok::RBraceT, i, i + 4);
        i += 4;
        continue;
      }
      lex_error("missing ᵀ marker after '}'", i);
    }
    if (c == '|') { push(Tok::Pipe, i, i + 1); ++i; continue; }
    if (c == '+') { push(Tok::Plus, i, i + 1); ++i; continue; }
    if (c == '=') { push(Tok::EqSign, i, i + 1); ++i; continue; }
    if (c == '-') { push(Tok::Minus, i, i + 1); ++i; continue; }
    if (c == '(') { push(Tok::LParen, i, i + 1); ++i; continue; }
    if (c == ')') { push(Tok::RParen, i, i + 1); ++i; continue; }
    if (c == '@') {
      if (i + 1 < s.size() && s[i + 1] == '.') {
        push(Tok::ActOp, i, i + 2);
        i += 2;
      } else {
        push(Tok::Otimes, i, i + 1);
        ++i;
      }
      continue;
    }
    if (c == '*' && i + 1 < s.size() && s[i + 1] == '.') {
      push(Tok::SmulOp, i, i + 2);
      i += 2;
      continue;
    }
    if (c == '.') {
      if (starts_with(s, i, ".tensor")) {
        push(Tok::DotTensor, i, i + 7);
        i += 7;
        continue;
      }
      lex_error("unexpected '.'", i);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.' && j + 1 < s.size() &&
          std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      const std::string text = s.substr(i, j - i);
      push(Tok::Number, i, j, text, std::stod(text));
      i = j;
      continue;
    }
    if (starts_with(s, i, kSmul)) {
      push(Tok::SmulOp, i, i + 6);
      i += 6;
      continue;
    }
    if (starts_with(s, i, kAct)) {
      push(Tok::ActOp, i, i + 6);
      i += 6;
      continue;
    }
    if (starts_with(s, i, kOtimes)) {
      push(Tok::Otimes, i, i + 3);
      i += 3;
      continue;
    }
    if (ident_start(s, i)) {
      std::size_t j = i;
      while (j < s.size()) {
        const std::size_t len = codepoint_len(static_cast<unsigned char>(s[j]));
        if (len == 0) lex_error("invalid UTF-8 byte", j);
        if (!ident_continue(s, j)) break;
        j += len;
      }
      push(Tok::Ident, i, j, s.substr(i, j - i));
      i = j;
      continue;
    }
    lex_error("unexpected character", i);
  }
  push(Tok::End, s.size(), s.size());
  return out;
}

// --- parser -----------------------------------------------------------------

struct Parser {
  std::vector<Token> toks;
  std::size_t p = 0;

  const Token& cur() const { return toks[p]; }
  const Token& peek() const { return toks[std::min(p + 1, toks.size() - 1)]; }
  Token take() { return toks[p++]; }

  [[noreturn]] void err(const std::string& msg) const {
    throw Error(ErrorCategory::Parse, msg + " at byte " + std::to_string(cur().span.begin),
                cur().span);
  }

  void expect(Tok kind, const char* what) {
    if (cur().kind != kind) err(std::string("expected ") + what);
    ++p;
  }

  ExprPtr parse_input() {
    expect(Tok::LBrace, "'{'");
    ExprPtr e = parse_eq();
    if (cur().kind != Tok::RBraceT) err("unbalanced braces: expected '}ᵀ'");
    ++p;
    if (cur().kind == Tok::DotTensor) ++p;
    if (cur().kind != Tok::End) err("trailing input after '}ᵀ'");
    return e;
  }

  ExprPtr parse_eq() {
    ExprPtr l = parse_add();
    if (cur().kind != Tok::EqSign) return l;
    const SourceSpan at = take().span;
    ExprPtr r = parse_add();
    if (cur().kind == Tok::EqSign) err("chained '=' is not allowed");
    auto e = std::make_shared<SyntaxExpr>();
    e->kind = ExprKind::Eq;
    e->span = at;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
  }

  ExprPtr parse_add() {
    ExprPtr l = parse_prod();
    while (cur().kind == Tok::Plus) {
      const SourceSpan at = take().span;
      ExprPtr r = parse_prod();
      auto e = std::make_shared<SyntaxExpr>();
      e->kind = ExprKind::Add;
      e->span = at;
      e->left = std::move(l);
      e->right = std::move(r);
      l = std::move(e);
    }
    return l;
  }

  ExprPtr parse_prod() {
    ExprPtr l = parse_prefix();
    while (cur().kind == Tok::Otimes) {
      const SourceSpan at = take().span;
      ExprPtr r = parse_prefix();
      auto e = std::make_shared<SyntaxExpr>();
      e->kind = ExprKind::Prod;
      e->span = at;
      e->left = std::move(l);
      e->right = std::move(r);
      l = std::move(e);
    }
    return l;
  }

  // Scalar literal: [-] NUMBER, optionally (+|-) NUMBER followed by the
  // ident "i" for a complex value. Only valid directly before •ₜ.
  bool scalar_literal_ahead(Complex& value, std::size_t& after) const {
    std::size_t q = p;
    double sign = 1.0;
    if (toks[q].kind == Tok::Minus && q + 1 < toks.size() &&
        toks[q + 1].kind == Tok::Number) {
      sign = -1.0;
      ++q;
    }
    if (toks[q].kind != Tok::Number) return false;
    double re = sign * toks[q].number;
    double im = 0.0;
    ++q;
    if (q + 2 < toks.size() && (toks[q].kind == Tok::Plus || toks[q].kind == Tok::Minus) &&
        toks[q + 1].kind == Tok::Number && toks[q + 2].kind == Tok::Ident &&
        toks[q + 2].text == "i") {
      im = toks[q + 1].number * (toks[q].kind == Tok::Minus ? -1.0 : 1.0);
      q += 3;
    }
    if (q >= toks.size() || toks[q].kind != Tok::SmulOp) return false;
    value = Complex{re, im};
    after = q;
    return true;
  }

  ExprPtr parse_prefix() {
    Complex lit;
    std::size_t after = 0;
    const bool literal = scalar_literal_ahead(lit, after);
    if (!literal && cur().kind == Tok::Minus) {
      const SourceSpan at = take().span;
      auto e = std::make_shared<SyntaxExpr>();
      e->kind = ExprKind::Neg;
      e->span = at;
      e->child = parse_prefix();
      return e;
    }
    if (literal) {
      const SourceSpan at = cur().span;
      p = after + 1;  // past •ₜ
      auto e = std::make_shared<SyntaxExpr>();
      e->kind = ExprKind::Smul;
      e->span = at;
      e->scalar_literal = lit;
      e->has_scalar_literal = true;
      e->child = parse_prefix();
      return e;
    }
    if (cur().kind == Tok::Ident &&
        (peek().kind == Tok::SmulOp || peek().kind == Tok::ActOp)) {
      Token name = take();
      const bool is_smul = cur().kind == Tok::SmulOp;
      ++p;
      auto e = std::make_shared<SyntaxExpr>();
      e->kind = is_smul ? ExprKind::Smul : ExprKind::Action;
      e->span = name.span;
      e->scalar_or_group = std::move(name.text);
      e->child = parse_prefix();
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (cur().kind == Tok::LParen) {
      ++p;
      ExprPtr e = parse_add();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (cur().kind != Tok::Ident) err("expected a tensor atom");
    Token name = take();
    if (cur().kind != Tok::Pipe)
      err("expected '|' after tensor name '" + name.text + "'");
    ++p;
    auto e = std::make_shared<SyntaxExpr>();
    e->kind = ExprKind::Atom;
    e->span = name.span;
    e->name = std::move(name.text);
    while (cur().kind == Tok::Ident || cur().kind == Tok::Number) {
      Token t = take();
      Index ix;
      ix.span = t.span;
      if (t.kind == Tok::Ident) {
        ix.symbol = std::move(t.text);
      } else {
        const double r = t.number;
        if (r != std::floor(r) || r < 0)
          throw Error(ErrorCategory::Parse, "index literal must be a non-negative integer",
                      t.span);
        ix.numeral = static_cast<int>(r);
      }
      e->indices.push_back(std::move(ix));
    }
    return e;
  }
};

}  // namespace

ExprPtr parse(const std::string& text) {
  Parser parser{lex(text)};
  return parser.parse_input();
}

// --- elaborator ---------------------------------------------------------------

namespace {

struct FreeIx {
  std::string name;
  SourceSpan span;
};

struct Part {
  TreePtr tree;
  std::vector<FreeIx> free;  // entry k describes signature position k
};

struct Elaborator {
  const Environment& env;

  // Contracts repeated symbols within one scope, pairs resolved in order
  // of the first occurrence, positions recomputed after each step.
  void contract_repeats(Part& part) const {
    for (const FreeIx& f : part.free) {
      int count = 0;
      for (const FreeIx& g : part.free) count += (g.name == f.name);
      if (count > 2)
        throw Error(ErrorCategory::ElabMultiplicity,
                    "index '" + f.name + "' occurs more than twice in one scope", f.span);
    }
    for (;;) {
      int pi = -1, qi = -1;
      for (int a = 0; a < static_cast<int>(part.free.size()) && pi < 0; ++a)
        for (int b = a + 1; b < static_cast<int>(part.free.size()); ++b)
          if (part.free[a].name == part.free[b].name) {
            pi = a;
            qi = b;
            break;
          }
      if (pi < 0) return;
      const Signature& sig = part.tree->signature();
      const Species& sp = *part.tree->species();
      if (sig[qi] != sp.dual(sig[pi]))
        throw Error(ErrorCategory::ElabDuality,
                    "contracted index '" + part.free[pi].name + "' pairs color " +
                        std::string(sp.color_name(sig[pi])) + " with non-dual color " +
                        std::string(sp.color_name(sig[qi])),
                    part.free[qi].span);
      part.tree = TensorTree::contr(pi, qi - 1, part.tree);
      part.free.erase(part.free.begin() + qi);
      part.free.erase(part.free.begin() + pi);
    }
  }

  Part atom(const SyntaxExpr& e) const {
    const DenseTensor* value = env.tensor(e.name);
    if (!value) {
      const char* what = env.has(e.name) ? " is not bound to a tensor" : " is not bound";
      throw Error(ErrorCategory::EnvMissing, "name '" + e.name + "'" + what, e.span);
    }
    if (static_cast<int>(e.indices.size()) != value->rank())
      throw Error(ErrorCategory::ElabArity,
                  "tensor '" + e.name + "' has rank " + std::to_string(value->rank()) +
                      " but " + std::to_string(e.indices.size()) + " indices were given",
                  e.span);
    Part part;
    part.tree = TensorTree::tensor(*value, e.name);
    std::vector<Index> live = e.indices;
    // Numeric indices become eval nodes, left to right.
    for (;;) {
      int p = -1;
      for (int k = 0; k < static_cast<int>(live.size()); ++k)
        if (live[k].is_numeral()) {
          p = k;
          break;
        }
      if (p < 0) break;
      part.tree = TensorTree::eval(p, live[p].numeral, part.tree);
      live.erase(live.begin() + p);
    }
    for (const Index& ix : live) part.free.push_back(FreeIx{ix.symbol, ix.span});
    contract_repeats(part);
    return part;
  }

  // Builds the permutation aligning `right` onto `left`'s free order for
  // + and =; both sides must expose the same (symbol, color) set.
  Permutation alignment(const Part& left, const Part& right, const SyntaxExpr& e) const {
    const Species& sp = *left.tree->species();
    auto pos_of = [&](const std::string& name) {
      for (int k = 0; k < static_cast<int>(left.free.size()); ++k)
        if (left.free[k].name == name) return k;
      return -1;
    };
    const char* op = e.kind == ExprKind::Eq ? "'='" : "'+'";
    if (left.free.size() != right.free.size())
      throw Error(ErrorCategory::ElabArity,
                  std::string("sides of ") + op + " expose different numbers of free indices",
                  e.span);
    std::vector<int> map(right.free.size());
    for (int k = 0; k < static_cast<int>(right.free.size()); ++k) {
      const int q = pos_of(right.free[k].name);
      if (q < 0)
        throw Error(ErrorCategory::ElabArity,
                    "free index '" + right.free[k].name + "' appears on only one side of " + op,
                    right.free[k].span);
      const Color cl = left.tree->signature()[q];
      const Color cr = right.tree->signature()[k];
      if (cl != cr)
        throw Error(ErrorCategory::ElabDuality,
                    "free index '" + right.free[k].name + "' has color " +
                        std::string(sp.color_name(cr)) + " on the right but " +
                        std::string(sp.color_name(cl)) + " on the left of " + op,
                    right.free[k].span);
      map[k] = q;
    }
    return Permutation::from_map(right.tree->signature(), std::move(map));
  }

  Part elab(const SyntaxExpr& e) const {
    switch (e.kind) {
      case ExprKind::Atom:
        return atom(e);
      case ExprKind::Prod: {
        Part l = elab(*e.left);
        Part r = elab(*e.right);
        Part part;
        part.tree = TensorTree::prod(l.tree, r.tree);
        part.free = std::move(l.free);
        part.free.insert(part.free.end(), r.free.begin(), r.free.end());
        contract_repeats(part);
        return part;
      }
      case ExprKind::Add: {
        Part l = elab(*e.left);
        Part r = elab(*e.right);
        Permutation sigma = alignment(l, r, e);
        Part part;
        part.tree = TensorTree::add(l.tree, TensorTree::perm(std::move(sigma), r.tree));
        part.free = std::move(l.free);
        return part;
      }
      case ExprKind::Neg: {
        Part c = elab(*e.child);
        c.tree = TensorTree::neg(c.tree);
        return c;
      }
      case ExprKind::Smul: {
        Complex value;
        if (e.has_scalar_literal) {
          value = e.scalar_literal;
        } else {
          const Complex* s = env.scalar(e.scalar_or_group);
          if (!s)
            throw Error(ErrorCategory::EnvMissing,
                        "scalar '" + e.scalar_or_group + "' is not bound", e.span);
          value = *s;
        }
        Part c = elab(*e.child);
        c.tree = TensorTree::smul(value, c.tree);
        return c;
      }
      case ExprKind::Action: {
        const GroupElement* g = env.group(e.scalar_or_group);
        if (!g)
          throw Error(ErrorCategory::EnvMissing,
                      "group element '" + e.scalar_or_group + "' is not bound", e.span);
        Part c = elab(*e.child);
        c.tree = TensorTree::action(*g, c.tree, e.scalar_or_group);
        return c;
      }
      case ExprKind::Eq:
        fail(ErrorCategory::Parse, "'=' is only allowed at top level");
    }
    fail(ErrorCategory::Internal, "unreachable expression kind");
  }
};

}  // namespace

ElabResult elaborate(const SyntaxExpr& expr, const Environment& env) {
  Elaborator el{env};
  ElabResult res;
  if (expr.kind == ExprKind::Eq) {
    Part l = el.elab(*expr.left);
    Part r = el.elab(*expr.right);
    Permutation sigma = el.alignment(l, r, expr);
    res.lhs = l.tree;
    res.rhs = TensorTree::perm(std::move(sigma), r.tree);
    for (const FreeIx& f : l.free) res.free_names.push_back(f.name);
    return res;
  }
  Part part = el.elab(expr);
  res.lhs = part.tree;
  for (const FreeIx& f : part.free) res.free_names.push_back(f.name);
  return res;
}

ElabResult parse_and_elaborate(const std::string& text, const Environment& env) {
  return elaborate(*parse(text), env);
}

// --- formatter ----------------------------------------------------------------

namespace {

// Position p of a deletion result, mapped back to the pre-deletion
// signature where `removed` (sorted) are gone.
int undelete_one(int p, int removed) { return p < removed ? p : p + 1; }

// Pushes every eval node down until it sits directly above a tensor leaf
// (or another pushed eval), commuting it through the other constructors.
// Group-action nodes block the move (eval is not equivariant), which is
// reported as unformattable.
TreePtr push_evals(const TreePtr& t);

TreePtr push_eval_step(int i, int x, const TreePtr& c) {
  switch (c->kind()) {
    case NodeKind::Tensor:
      return TensorTree::eval(i, x, c);
    case NodeKind::Eval:
      return TensorTree::eval(i, x, c);  // stacked evals end at a leaf already
    case NodeKind::Neg:
      return TensorTree::neg(push_eval_step(i, x, c->as<NegNode>().child));
    case NodeKind::Smul: {
      const auto& n = c->as<SmulNode>();
      return TensorTree::smul(n.scalar, push_eval_step(i, x, n.child));
    }
    case NodeKind::Add: {
      const auto& n = c->as<AddNode>();
      return TensorTree::add(push_eval_step(i, x, n.left), push_eval_step(i, x, n.right));
    }
    case NodeKind::Prod: {
      const auto& n = c->as<ProdNode>();
      const int nl = static_cast<int>(n.left->signature().size());
      if (i < nl) return TensorTree::prod(push_eval_step(i, x, n.left), n.right);
      return TensorTree::prod(n.left, push_eval_step(i - nl, x, n.right));
    }
    case NodeKind::Perm: {
      const auto& n = c->as<PermNode>();
      const std::vector<int> pinv = n.sigma.inverse_map();
      const int u = pinv[i];
      std::vector<int> map;
      map.reserve(n.sigma.map.size() - 1);
      for (int o = 0; o < n.sigma.size(); ++o) {
        if (o == u) continue;
        map.push_back(n.sigma.map[o] - (n.sigma.map[o] > i ? 1 : 0));
      }
      TreePtr inner = push_eval_step(u, x, n.child);
      return TensorTree::perm(Permutation::from_map(inner->signature(), std::move(map)),
                              inner);
    }
    case NodeKind::Contr: {
      const auto& n = c->as<ContrNode>();
      const int pi = n.i;
      const int pi2 = succ_above(n.i, n.j);
      // i is a position of the contraction result; undelete through the pair
      int u = i;
      for (int d : {std::min(pi, pi2), std::max(pi, pi2)}) u = undelete_one(u, d);
      const int a = pi - (pi > u ? 1 : 0);
      const int b = pi2 - (pi2 > u ? 1 : 0);
      TreePtr inner = push_eval_step(u, x, n.child);
      return TensorTree::contr(a, b < a ? b : b - 1, inner);
    }
    case NodeKind::Action:
      fail(ErrorCategory::BadArgument,
           "cannot format an eval applied over a group action");
  }
  fail(ErrorCategory::Internal, "unreachable in push_eval_step");
}

TreePtr push_evals(const TreePtr& t) {
  if (t->kind() == NodeKind::Eval) {
    const auto& n = t->as<EvalNode>();
    TreePtr child = push_evals(n.child);
    return push_eval_step(n.i, n.x, child);
  }
  const auto kids = t->children();
  TreePtr out = t;
  if (kids.size() == 1) {
    TreePtr c = push_evals(kids[0]);
    if (c != kids[0]) out = replace_at(t, Path{Step::Only}, std::move(c));
  } else if (kids.size() == 2) {
    TreePtr l = push_evals(kids[0]);
    TreePtr r = push_evals(kids[1]);
    if (l != kids[0]) out = replace_at(out, Path{Step::Left}, std::move(l));
    if (r != kids[1]) out = replace_at(out, Path{Step::Right}, std::move(r));
  }
  return out;
}

// Lifts every permutation to the root so that each node's signature
// order coincides with its atom-appearance order, the invariant the
// renderer needs. Permutations directly under an add's right branch are
// harmless (addition aligns free indices by name) and stay.
TreePtr lift_perms(const TreePtr& t) {
  TreePtr out = t;
  {
    const auto kids = t->children();
    if (kids.size() == 1) {
      TreePtr c = lift_perms(kids[0]);
      if (c != kids[0]) out = replace_at(t, Path{Step::Only}, std::move(c));
    } else if (kids.size() == 2) {
      TreePtr l = lift_perms(kids[0]);
      TreePtr r = lift_perms(kids[1]);
      if (l != kids[0]) out = replace_at(out, Path{Step::Left}, std::move(l));
      if (r != kids[1]) out = replace_at(out, Path{Step::Right}, std::move(r));
    }
  }
  auto child_is_perm = [](const TreePtr& c) { return c->kind() == NodeKind::Perm; };
  for (int guard = 0; guard < 10000; ++guard) {
    switch (out->kind()) {
      case NodeKind::Perm: {
        const auto& n = out->as<PermNode>();
        if (n.sigma.is_identity()) {
          out = n.child;
          continue;
        }
        if (child_is_perm(n.child)) {
          out = lift_perms(apply_rule(out, {}, rule_by_name("perm_perm")));
          continue;
        }
        return out;
      }
      case NodeKind::Prod: {
        const auto& n = out->as<ProdNode>();
        if (child_is_perm(n.left)) {
          out = lift_perms(apply_rule(out, {}, rule_by_name("prod_perm_left")));
          continue;
        }
        if (child_is_perm(n.right)) {
          out = lift_perms(apply_rule(out, {}, rule_by_name("prod_perm_right")));
          continue;
        }
        return out;
      }
      case NodeKind::Contr: {
        if (child_is_perm(out->as<ContrNode>().child)) {
          out = lift_perms(apply_rule(out, {}, rule_by_name("perm_contr_congr")));
          continue;
        }
        return out;
      }
      case NodeKind::Neg: {
        if (child_is_perm(out->as<NegNode>().child)) {
          out = lift_perms(apply_rule(out, {}, rule_by_name("perm_neg")));
          continue;
        }
        return out;
      }
      case NodeKind::Smul: {
        if (child_is_perm(out->as<SmulNode>().child)) {
          out = lift_perms(apply_rule(out, {}, rule_by_name("perm_smul")));
          continue;
        }
        return out;
      }
      case NodeKind::Action: {
        const auto& n = out->as<ActionNode>();
        if (child_is_perm(n.child)) {
          const auto& p = n.child->as<PermNode>();
          out = TensorTree::perm(p.sigma, TensorTree::action(n.element, p.child, n.label));
          continue;
        }
        return out;
      }
      case NodeKind::Add: {
        const auto& n = out->as<AddNode>();
        if (child_is_perm(n.left)) {
          const auto& p = n.left->as<PermNode>();
          TreePtr right = TensorTree::perm(p.sigma.inverse(), n.right);
          out = TensorTree::perm(p.sigma, TensorTree::add(p.child, lift_perms(right)));
          continue;
        }
        return out;
      }
      default:
        return out;
    }
  }
  fail(ErrorCategory::Internal, "perm lifting did not terminate");
}

// Realizes a root permutation by contracting each index against a unit
// tensor from the environment, in target order; the re-elaborated free
// order then matches sigma.target.
TreePtr reorder_via_units(const Permutation& sigma, TreePtr x, const Environment& env) {
  const SpeciesPtr& sp = env.species();
  auto find_unit = [&](Color c) -> TreePtr {
    const DenseTensor want = unit_tensor(sp, c);
    for (const auto& [name, value] : env.tensors()) {
      if (value.signature() == want.signature() && value.data() == want.data())
        return TensorTree::tensor(value, name);
    }
    fail(ErrorCategory::BadArgument,
         "cannot format: the tree needs a free-index reordering, which requires a unit "
         "tensor for color " +
             std::string(sp.get()->color_name(c)) + " bound in the environment");
  };
  const int n = sigma.size();
  const std::vector<int> inv = sigma.inverse_map();
  std::vector<int> cur(n);
  for (int s = 0; s < n; ++s) cur[s] = s;
  TreePtr out = std::move(x);
  for (int k = 0; k < n; ++k) {
    const int source = inv[k];
    const Color c = sigma.target[k];
    const int p = cur[source];
    const int rank = static_cast<int>(out->signature().size());
    out = TensorTree::prod(out, find_unit(c));
    out = TensorTree::contr(p, rank - 1, out);  // pairs p with the unit's first slot
    for (int s = 0; s < n; ++s)
      if (cur[s] > p) cur[s] -= 1;
  }
  return out;
}

struct SlotTable {
  std::vector<int> parent;
  std::map<int, int> pins;  // union root -> numeral

  int fresh() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Fragment {
  std::string text;  // slots encoded as \x01<id>\x01
  int prec = 4;      // 1 add, 2 prod, 3 prefix, 4 atom
  std::vector<int> slots;
};

std::string marker(int slot) {
  return std::string("\x01") + std::to_string(slot) + "\x01";
}

std::string wrap(const Fragment& f, int minprec) {
  return f.prec < minprec ? "(" + f.text + ")" : f.text;
}

Fragment render(const TreePtr& t, SlotTable& table) {
  switch (t->kind()) {
    case NodeKind::Tensor: {
      const auto& n = t->as<TensorNode>();
      if (n.label.empty())
        fail(ErrorCategory::BadArgument, "cannot format a tree with unnamed tensor leaves");
      Fragment f;
      f.prec = 4;
      f.text = n.label + " |";
      for (int k = 0; k < n.value.rank(); ++k) {
        const int s = table.fresh();
        f.slots.push_back(s);
        f.text += " " + marker(s);
      }
      return f;
    }
    case NodeKind::Eval: {
      const auto& n = t->as<EvalNode>();
      Fragment f = render(n.child, table);
      table.pins[table.find(f.slots[n.i])] = n.x;
      f.slots.erase(f.slots.begin() + n.i);
      return f;
    }
    case NodeKind::Neg: {
      Fragment c = render(t->as<NegNode>().child, table);
      Fragment f;
      f.prec = 3;
      // parenthesize anything but a bare atom: a following scalar
      // literal would otherwise absorb the minus sign
      f.text = "- " + wrap(c, 4);
      f.slots = std::move(c.slots);
      return f;
    }
    case NodeKind::Smul: {
      const auto& n = t->as<SmulNode>();
      Fragment c = render(n.child, table);
      Fragment f;
      f.prec = 3;
      f.text = format_complex(n.scalar) + " \xE2\x80\xA2\xE2\x82\x9C " + wrap(c, 3);
      f.slots = std::move(c.slots);
      return f;
    }
    case NodeKind::Action: {
      const auto& n = t->as<ActionNode>();
      if (n.label.empty())
        fail(ErrorCategory::BadArgument, "cannot format a tree with unnamed group actions");
      Fragment c = render(n.child, table);
      Fragment f;
      f.prec = 3;
      f.text = n.label + " \xE2\x80\xA2\xE2\x82\x90 " + wrap(c, 3);
      f.slots = std::move(c.slots);
      return f;
    }
    case NodeKind::Add: {
      const auto& n = t->as<AddNode>();
      Fragment l = render(n.left, table);
      Fragment r = render(n.right, table);
      for (std::size_t k = 0; k < l.slots.size(); ++k) table.unite(l.slots[k], r.slots[k]);
      Fragment f;
      f.prec = 1;
      f.text = wrap(l, 1) + " + " + wrap(r, 1);
      f.slots = std::move(l.slots);
      return f;
    }
    case NodeKind::Prod: {
      const auto& n = t->as<ProdNode>();
      Fragment l = render(n.left, table);
      Fragment r = render(n.right, table);
      Fragment f;
      f.prec = 2;
      f.text = wrap(l, 2) + " \xE2\x8A\x97 " + wrap(r, 2);
      f.slots = std::move(l.slots);
      f.slots.insert(f.slots.end(), r.slots.begin(), r.slots.end());
      return f;
    }
    case NodeKind::Perm: {
      const auto& n = t->as<PermNode>();
      Fragment c = render(n.child, table);
      Fragment f;
      f.prec = c.prec;
      f.text = std::move(c.text);
      f.slots.resize(c.slots.size());
      for (int k = 0; k < n.sigma.size(); ++k) f.slots[n.sigma.map[k]] = c.slots[k];
      return f;
    }
    case NodeKind::Contr: {
      const auto& n = t->as<ContrNode>();
      Fragment f = render(n.child, table);
      const int i = n.i;
      const int i2 = succ_above(n.i, n.j);
      table.unite(f.slots[i], f.slots[i2]);
      f.slots.erase(f.slots.begin() + std::max(i, i2));
      f.slots.erase(f.slots.begin() + std::min(i, i2));
      return f;
    }
  }
  fail(ErrorCategory::Internal, "unreachable in render");
}

}  // namespace

std::string format(const TreePtr& tree, const Environment& names) {
  TreePtr pushed = lift_perms(push_evals(tree));
  if (pushed->kind() == NodeKind::Perm) {
    const auto& n = pushed->as<PermNode>();
    pushed = reorder_via_units(n.sigma, n.child, names);
  }
  SlotTable table;
  Fragment body = render(pushed, table);
  // Substitute slot markers: numerals for pinned classes, fresh symbols
  // i0, i1, ... in first-appearance order otherwise.
  std::map<int, std::string> symbol_of;
  int counter = 0;
  std::string out = "{";
  const std::string& s = body.text;
  for (std::size_t k = 0; k < s.size();) {
    if (s[k] != '\x01') {
      out += s[k++];
      continue;
    }
    std::size_t e = s.find('\x01', k + 1);
    const int slot = std::stoi(s.substr(k + 1, e - k - 1));
    const int root = table.find(slot);
    if (auto it = table.pins.find(root); it != table.pins.end()) {
      out += std::to_string(it->second);
    } else {
      auto [it2, inserted] = symbol_of.emplace(root, "");
      if (inserted) it2->second = "i" + std::to_string(counter++);
      out += it2->second;
    }
    k = e + 1;
  }
  out += "}\xE1\xB5\x80";
  return out;
}

}  // namespace tik
