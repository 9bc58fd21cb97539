#include "session.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace tik {

namespace {

SpeciesPtr the_unit_species() {
  static const SpeciesPtr sp = unit_species();
  return sp;
}

SpeciesPtr species_by_name(const std::string& name) {
  if (name.empty() || name == "complex-lorentz") return lorentz::Constants::instance().species();
  if (name == "unit") return the_unit_species();
  fail(ErrorCategory::BadArgument,
       "unknown species '" + name + "' (expected complex-lorentz or unit)");
}

}  // namespace

Session::Session(const std::string& species_name) : env_(species_by_name(species_name)) {
  if (env_.species() == lorentz::Constants::instance().species()) {
    const auto& cs = lorentz::Constants::instance();
    cs.bind_all(env_);
    for (const auto& c : cs.all()) named_constants_.emplace_back(c.file_stem, c.value);
  } else {
    // The unit species ships its structure data under ASCII names.
    for (int ci = 0; ci < env_.species()->color_count(); ++ci) {
      const Color c{static_cast<std::uint8_t>(ci)};
      const std::string cname(env_.species()->color_name(c));
      DenseTensor delta = unit_tensor(env_.species(), c);
      DenseTensor metric = metric_tensor(env_.species(), c);
      env_.bind_tensor("delta_" + cname, delta);
      env_.bind_tensor("g_" + cname, metric);
      named_constants_.emplace_back("delta_" + cname, std::move(delta));
      named_constants_.emplace_back("g_" + cname, std::move(metric));
    }
  }
}

void Session::load_env_file(const std::string& name, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::EnvMissing, "cannot open env file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bind = name;
  if (bind.empty()) bind = std::filesystem::path(path).stem().string();
  load_env_json(bind, buf.str());
}

void Session::load_env_json(const std::string& name, const std::string& json_text) {
  if (name.empty()) fail(ErrorCategory::BadArgument, "env binding needs a name");
  env_.bind_tensor(name, tensor_from_json(env_.species(), json_text));
}

std::string Session::cmd_parse(const std::string& expr) const {
  const ElabResult r = parse_and_elaborate(expr, env_);
  if (r.is_eq()) return "(= " + dump(r.lhs) + " " + dump(r.rhs) + ")";
  return dump(r.lhs);
}

std::string Session::cmd_eval(const std::string& expr) const {
  const ElabResult r = parse_and_elaborate(expr, env_);
  if (r.is_eq())
    fail(ErrorCategory::BadArgument, "eval expects a tensor expression, not an equation");
  return tensor_to_json(semantics(*r.lhs));
}

std::string Session::cmd_simplify(const std::string& expr, std::string* trace_out) const {
  const ElabResult r = parse_and_elaborate(expr, env_);
  if (r.is_eq())
    fail(ErrorCategory::BadArgument, "simplify expects a tensor expression, not an equation");
  std::vector<TraceEntry> trace;
  const TreePtr normal = normalize(r.lhs, trace_out ? &trace : nullptr);
  if (trace_out) {
    std::ostringstream os;
    for (std::size_t k = 0; k < trace.size(); ++k) {
      const TraceEntry& e = trace[k];
      os << "step " << k + 1 << ": " << e.rule << " at " << format_path(e.path) << "\n";
      os << "  before: " << e.before << "\n";
      os << "  after:  " << e.after << "\n";
    }
    *trace_out = os.str();
  }
  return dump(normal);
}

EqualityResult Session::cmd_prove_eq(const std::string& expr, double tol) const {
  const ElabResult r = parse_and_elaborate(expr, env_);
  if (!r.is_eq())
    fail(ErrorCategory::BadArgument, "prove-eq expects an equation containing '='");
  return check_equal(r.lhs, r.rhs, tol);
}

AxiomReport Session::cmd_axioms(double tol) const { return env_.species()->check_axioms(tol); }

void Session::cmd_constants_dump(const std::string& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  for (const auto& [stem, value] : named_constants_) {
    const std::string path = (std::filesystem::path(dir) / (stem + ".json")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::Io, "cannot write " + path);
    out << tensor_to_json(value) << "\n";
  }
}

std::string Session::axioms_text(const AxiomReport& report) const {
  return axiom_report_text(*env_.species(), report);
}

std::string Session::axioms_json(const AxiomReport& report) const {
  nlohmann::json j;
  j["species"] = env_.species()->name();
  j["tol"] = report.tol;
  j["all_pass"] = report.all_pass();
  auto colors = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json c;
    c["color"] = std::string(env_.species()->color_name(e.color));
    c["contr_tmul_symm"] = e.contr_tmul_symm;
    c["unit_symm"] = e.unit_symm;
    c["contr_unit"] = e.contr_unit;
    c["contr_metric"] = e.contr_metric;
    colors.push_back(std::move(c));
  }
  j["colors"] = std::move(colors);
  return j.dump();
}

}  // namespace tik
