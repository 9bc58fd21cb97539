#include "constants.hpp"

#include "error.hpp"
#include "lorentz.hpp"

namespace tik::lorentz {

namespace {

DenseTensor make_pauli_contr(const SpeciesPtr& sp) {
  // sigma^{mu alpha beta}: flat layout mu*4 + alpha*2 + beta
  std::vector<Complex> data(16);
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) data[mu * 4 + a * 2 + b] = pauli_matrix(mu).at(a, b);
  return DenseTensor(sp, {kUp, kUpL, kUpR}, std::move(data));
}

}  // namespace

Constants::Constants() : species_(complex_lorentz_species()) {
  auto add = [&](std::string name, std::string stem, std::vector<std::string> aliases,
                 DenseTensor value) {
    by_name_.emplace(name, static_cast<int>(constants_.size()));
    for (const std::string& a : aliases) by_name_.emplace(a, static_cast<int>(constants_.size()));
    constants_.push_back(
        NamedConstant{std::move(name), std::move(stem), std::move(aliases), std::move(value)});
  };

  add("\xCE\xB7", "eta", {"eta"}, metric_tensor(species_, kUp));
  add("\xCE\xB7'", "etaP", {"\xCE\xB7\xE2\x80\xB2", "eta'"}, metric_tensor(species_, kDown));
  add("\xCE\xB5L", "epsL", {"epsL"}, metric_tensor(species_, kUpL));
  add("\xCE\xB5L'", "epsLP", {"\xCE\xB5L\xE2\x80\xB2", "epsL'"}, metric_tensor(species_, kDownL));
  add("\xCE\xB5R", "epsR", {"epsR"}, metric_tensor(species_, kUpR));
  add("\xCE\xB5R'", "epsRP", {"\xCE\xB5R\xE2\x80\xB2", "epsR'"}, metric_tensor(species_, kDownR));
  for (int ci = 0; ci < species_->color_count(); ++ci) {
    const Color c{static_cast<std::uint8_t>(ci)};
    const std::string cname(species_->color_name(c));
    add("\xCE\xB4_" + cname, "delta_" + cname, {"delta_" + cname}, unit_tensor(species_, c));
  }
  add("pauliContr", "pauliContr", {}, make_pauli_contr(species_));

  // The remaining Pauli tensors are the defining expressions, evaluated.
  Environment env(species_);
  bind_all(env);
  auto define = [&](std::string name, const std::string& expr) {
    DenseTensor value = semantics(*parse_and_elaborate(expr, env).lhs);
    env.bind_tensor(name, value);
    add(name, name, {}, std::move(value));
  };
  define("pauliCo", "{\xCE\xB7' | \xCE\xBC \xCE\xBD \xE2\x8A\x97 pauliContr | \xCE\xBD \xCE\xB1 \xCE\xB2}\xE1\xB5\x80");
  define("pauliCoDown",
         "{pauliCo | \xCE\xBC \xCE\xB1 \xCE\xB2 \xE2\x8A\x97 \xCE\xB5L' | \xCE\xB1 \xCE\xB1' "
         "\xE2\x8A\x97 \xCE\xB5R' | \xCE\xB2 \xCE\xB2'}\xE1\xB5\x80");
  define("pauliContrDown",
         "{pauliContr | \xCE\xBC \xCE\xB1 \xCE\xB2 \xE2\x8A\x97 \xCE\xB5L' | \xCE\xB1 \xCE\xB1' "
         "\xE2\x8A\x97 \xCE\xB5R' | \xCE\xB2 \xCE\xB2'}\xE1\xB5\x80");
}

const Constants& Constants::instance() {
  static const Constants c;
  return c;
}

const DenseTensor& Constants::get(const std::string& name_or_alias) const {
  auto it = by_name_.find(name_or_alias);
  if (it == by_name_.end())
    throw Error(ErrorCategory::EnvMissing, "unknown constant '" + name_or_alias + "'");
  return constants_[it->second].value;
}

TreePtr Constants::constant(const std::string& name_or_alias) const {
  auto it = by_name_.find(name_or_alias);
  if (it == by_name_.end())
    throw Error(ErrorCategory::EnvMissing, "unknown constant '" + name_or_alias + "'");
  return TensorTree::tensor(constants_[it->second].value, constants_[it->second].name);
}

void Constants::bind_all(Environment& env) const {
  for (const NamedConstant& c : constants_) {
    if (!env.has(c.name)) env.bind_tensor(c.name, c.value);
    for (const std::string& a : c.aliases)
      if (!env.has(a)) env.bind_tensor(a, c.value);
  }
}

DenseTensor bispinor(BispinorKind kind, const DenseTensor& p) {
  const Constants& cs = Constants::instance();
  const bool wants_up = kind == BispinorKind::ContrUp || kind == BispinorKind::ContrDown;
  const Signature expected{wants_up ? kUp : kDown};
  if (p.species() != cs.species() || p.signature() != expected)
    fail(ErrorCategory::BadArgument,
         std::string("bispinor expects a vector of signature [") +
             (wants_up ? "up" : "down") + "]");

  Environment env(cs.species());
  cs.bind_all(env);
  env.bind_tensor("p", p);
  auto eval_expr = [&](const std::string& expr) {
    return semantics(*parse_and_elaborate(expr, env).lhs);
  };
  switch (kind) {
    case BispinorKind::ContrUp:
      return eval_expr("{pauliCo | \xCE\xBC \xCE\xB1 \xCE\xB2 \xE2\x8A\x97 p | \xCE\xBC}\xE1\xB5\x80");
    case BispinorKind::CoUp:
      return eval_expr("{pauliContr | \xCE\xBC \xCE\xB1 \xCE\xB2 \xE2\x8A\x97 p | \xCE\xBC}\xE1\xB5\x80");
    case BispinorKind::ContrDown: {
      env.bind_tensor("q", bispinor(BispinorKind::ContrUp, p));
      return eval_expr(
          "{\xCE\xB5L' | \xCE\xB1 \xCE\xB1' \xE2\x8A\x97 \xCE\xB5R' | \xCE\xB2 \xCE\xB2' "
          "\xE2\x8A\x97 q | \xCE\xB1 \xCE\xB2}\xE1\xB5\x80");
    }
    case BispinorKind::CoDown: {
      env.bind_tensor("q", bispinor(BispinorKind::CoUp, p));
      return eval_expr(
          "{\xCE\xB5L' | \xCE\xB1 \xCE\xB1' \xE2\x8A\x97 \xCE\xB5R' | \xCE\xB2 \xCE\xB2' "
          "\xE2\x8A\x97 q | \xCE\xB1 \xCE\xB2}\xE1\xB5\x80");
    }
  }
  fail(ErrorCategory::Internal, "unreachable bispinor kind");
}

}  // namespace tik::lorentz
