#include "species.hpp"

#include <cmath>
#include <sstream>

#include "error.hpp"

namespace tik {

bool AxiomReport::all_pass() const {
  for (const Entry& e : entries)
    if (!e.all()) return false;
  return true;
}

Species::Species(Config cfg) : cfg_(std::move(cfg)) {
  const std::size_t n = cfg_.color_names.size();
  if (n == 0) fail(ErrorCategory::BadArgument, "species needs at least one color");
  if (cfg_.tau.size() != n || cfg_.rep_dims.size() != n || cfg_.contr_forms.size() != n ||
      cfg_.unit_vecs.size() != n || cfg_.metric_vecs.size() != n)
    fail(ErrorCategory::BadArgument, "species config arrays disagree on color count");
  for (std::size_t i = 0; i < n; ++i) {
    if (cfg_.tau[i] >= n) fail(ErrorCategory::BadArgument, "tau out of range");
    if (cfg_.tau[cfg_.tau[i]] != i)
      fail(ErrorCategory::BadArgument, "tau is not an involution");
    if (cfg_.rep_dims[i] < 1)
      fail(ErrorCategory::BadArgument, "rep_dim must be positive");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int dc = cfg_.rep_dims[i];
    const int dt = cfg_.rep_dims[cfg_.tau[i]];
    const CMatrix& k = cfg_.contr_forms[i];
    if (k.rows() != dc || k.cols() != dt)
      fail(ErrorCategory::BadArgument, "contr_form shape mismatch");
    const CMatrix& u = cfg_.unit_vecs[i];
    if (u.rows() != dt || u.cols() != dc)
      fail(ErrorCategory::BadArgument, "unit_vec shape mismatch");
    const CMatrix& m = cfg_.metric_vecs[i];
    if (m.rows() != dc || m.cols() != dc)
      fail(ErrorCategory::BadArgument, "metric_vec shape mismatch");
  }
  if (!cfg_.rep || !cfg_.group_defect || !cfg_.group_sampler)
    fail(ErrorCategory::BadArgument, "species config missing callbacks");
}

std::optional<Color> Species::color_by_name(std::string_view name) const {
  for (std::size_t i = 0; i < cfg_.color_names.size(); ++i)
    if (cfg_.color_names[i] == name) return Color{static_cast<std::uint8_t>(i)};
  return std::nullopt;
}

CMatrix Species::rep_matrix(Color c, const GroupElement& g) const {
  validate_group_element(g);
  CMatrix r = cfg_.rep(c, g);
  if (r.rows() != rep_dim(c) || r.cols() != rep_dim(c))
    fail(ErrorCategory::Internal, "representation matrix has wrong shape");
  return r;
}

void Species::validate_group_element(const GroupElement& g) const {
  if (g.rows() != cfg_.group_dim || g.cols() != cfg_.group_dim)
    fail(ErrorCategory::BadArgument, "group element has wrong shape for species " + cfg_.name);
  const double defect = cfg_.group_defect(g);
  if (!(defect <= 1e-10))
    fail(ErrorCategory::BadArgument, "invalid group element for species " + cfg_.name);
}

GroupElement Species::random_group_element(std::mt19937_64& rng) const {
  GroupElement g = cfg_.group_sampler(rng);
  validate_group_element(g);
  return g;
}

namespace {

// max_xz |sum_y K[x][y] U[y][z] - delta_xz|
double contr_unit_defect(const CMatrix& k, const CMatrix& u) {
  const CMatrix p = k * u;
  return max_abs_diff(p, CMatrix::identity(p.rows()));
}

}  // namespace

AxiomReport Species::check_axioms(double tol) const {
  AxiomReport report;
  report.tol = tol;
  for (int ci = 0; ci < color_count(); ++ci) {
    const Color c{static_cast<std::uint8_t>(ci)};
    const Color tc = dual(c);
    AxiomReport::Entry e;
    e.color = c;
    // (1) K_c[x][y] = K_{tau c}[y][x]
    e.contr_tmul_symm = max_abs_diff(contr_form(c), contr_form(tc).transpose()) <= tol;
    // (2) unit_c[a][b] = unit_{tau c}[b][a]
    e.unit_symm = max_abs_diff(unit_vec(c), unit_vec(tc).transpose()) <= tol;
    // (3) sum_y K_c[x][y] unit_c[y][z] = delta_xz
    e.contr_unit = contr_unit_defect(contr_form(c), unit_vec(c)) <= tol;
    // (4) sum_{y,u} metric_c[x][y] K_c[y][u] metric_{tau c}[u][v] = unit_c[v][x]
    const CMatrix lhs = metric_vec(c) * contr_form(c) * metric_vec(tc);
    e.contr_metric = max_abs_diff(lhs, unit_vec(c).transpose()) <= tol;
    report.entries.push_back(e);
  }
  return report;
}

Color dual_color(const Species& species, Color c) { return species.dual(c); }

const CMatrix& contraction_form(const Species& species, Color c) {
  return species.contr_form(c);
}

SpeciesPtr unit_species() {
  Species::Config cfg;
  cfg.name = "unit";
  cfg.color_names = {"u"};
  cfg.tau = {0};
  cfg.rep_dims = {1};
  cfg.group_dim = 1;
  const CMatrix one(1, 1, {Complex{1.0, 0.0}});
  cfg.contr_forms = {one};
  cfg.unit_vecs = {one};
  cfg.metric_vecs = {one};
  // Trivial action: every unit-modulus phase acts as the identity.
  cfg.rep = [](Color, const GroupElement&) { return CMatrix::identity(1); };
  cfg.group_defect = [](const GroupElement& g) {
    return std::abs(std::abs(g.at(0, 0)) - 1.0);
  };
  cfg.group_sampler = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    const double t = angle(rng);
    CMatrix g(1, 1);
    g.at(0, 0) = Complex{std::cos(t), std::sin(t)};
    return g;
  };
  return std::make_shared<Species>(std::move(cfg));
}

std::string axiom_report_text(const Species& species, const AxiomReport& report) {
  std::ostringstream os;
  auto mark = [](bool ok) { return ok ? "pass" : "FAIL"; };
  os << "species " << species.name() << " axioms (tol " << report.tol << ")\n";
  for (const auto& e : report.entries) {
    os << "  " << species.color_name(e.color) << ": contr_tmul_symm=" << mark(e.contr_tmul_symm)
       << " unit_symm=" << mark(e.unit_symm) << " contr_unit=" << mark(e.contr_unit)
       << " contr_metric=" << mark(e.contr_metric) << "\n";
  }
  os << (report.all_pass() ? "all axioms pass" : "AXIOM FAILURES PRESENT") << "\n";
  return os.str();
}

}  // namespace tik
