#include <doctest.h>

#include "lorentz.hpp"
#include "species.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "tensor.hpp"

using namespace tik;

namespace {

// The complex-Lorentz species with metric_vec(up) zeroed out.
SpeciesPtr broken_metric_species() {
  SpeciesPtr base = lorentz::complex_lorentz_species();
  Species::Config cfg;
  cfg.name = "broken";
  cfg.group_dim = base->group_dim();
  for (int ci = 0; ci < base->color_count(); ++ci) {
    const Color c{static_cast<std::uint8_t>(ci)};
    cfg.color_names.emplace_back(base->color_name(c));
    cfg.tau.push_back(base->dual(c).value);
    cfg.rep_dims.push_back(base->rep_dim(c));
    cfg.contr_forms.push_back(base->contr_form(c));
    cfg.unit_vecs.push_back(base->unit_vec(c));
    cfg.metric_vecs.push_back(c == lorentz::kUp ? CMatrix(4, 4) : base->metric_vec(c));
  }
  cfg.rep = [base](Color c, const GroupElement& g) { return base->rep_matrix(c, g); };
  cfg.group_defect = [base](const GroupElement& g) {
    try {
      base->validate_group_element(g);
      return 0.0;
    } catch (const Error&) {
      return 1.0;
    }
  };
  cfg.group_sampler = [base](std::mt19937_64& rng) { return base->random_group_element(rng); };
  return std::make_shared<Species>(std::move(cfg));
}

}  // namespace

TEST_CASE("dual_color follows the complex-Lorentz tau table") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  CHECK(dual_color(*sp, lorentz::kUp) == lorentz::kDown);
  CHECK(dual_color(*sp, lorentz::kDown) == lorentz::kUp);
  CHECK(dual_color(*sp, lorentz::kUpL) == lorentz::kDownL);
  CHECK(dual_color(*sp, lorentz::kDownL) == lorentz::kUpL);
  CHECK(dual_color(*sp, lorentz::kUpR) == lorentz::kDownR);
  CHECK(dual_color(*sp, lorentz::kDownR) == lorentz::kUpR);
}

TEST_CASE("dual_color is an involution for every color of both species") {
  for (const SpeciesPtr& sp : {lorentz::complex_lorentz_species(), unit_species()}) {
    for (int ci = 0; ci < sp->color_count(); ++ci) {
      const Color c{static_cast<std::uint8_t>(ci)};
      CHECK(dual_color(*sp, dual_color(*sp, c)) == c);
    }
  }
}

TEST_CASE("contraction forms are dot products") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  CHECK(max_abs_diff(contraction_form(*sp, lorentz::kUp), CMatrix::identity(4)) == 0.0);
  CHECK(max_abs_diff(contraction_form(*sp, lorentz::kUpL), CMatrix::identity(2)) == 0.0);
  SpeciesPtr u = unit_species();
  CHECK(contraction_form(*u, Color{0}).at(0, 0) == Complex{1.0, 0.0});
}

TEST_CASE("check_axioms passes for complex-Lorentz and unit species at 1e-12") {
  for (const SpeciesPtr& sp : {lorentz::complex_lorentz_species(), unit_species()}) {
    const AxiomReport report = sp->check_axioms(1e-12);
    CAPTURE(sp->name());
    CHECK(report.all_pass());
    CHECK(report.entries.size() == static_cast<std::size_t>(sp->color_count()));
  }
}

TEST_CASE("zero metric breaks contr_metric but nothing else") {
  SpeciesPtr sp = broken_metric_species();
  const AxiomReport report = sp->check_axioms(1e-12);
  CHECK_FALSE(report.all_pass());
  for (const auto& e : report.entries) {
    CAPTURE(sp->color_name(e.color));
    CHECK(e.contr_tmul_symm);
    CHECK(e.unit_symm);
    CHECK(e.contr_unit);
    if (e.color == lorentz::kUp) {
      CHECK_FALSE(e.contr_metric);
    } else if (e.color == lorentz::kDown) {
      // metric_vec(up) also enters the down-color diagram
      CHECK_FALSE(e.contr_metric);
    } else {
      CHECK(e.contr_metric);
    }
  }
}

TEST_CASE("pairing is invariant: rep(c,g)^T K rep(tau c, g) = K on 50 random g") {
  std::mt19937_64 rng(42);
  for (const SpeciesPtr& sp : {lorentz::complex_lorentz_species(), unit_species()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const GroupElement g = sp->random_group_element(rng);
      for (int ci = 0; ci < sp->color_count(); ++ci) {
        const Color c{static_cast<std::uint8_t>(ci)};
        const CMatrix lhs =
            sp->rep_matrix(c, g).transpose() * sp->contr_form(c) * sp->rep_matrix(sp->dual(c), g);
        CHECK(max_abs_diff(lhs, sp->contr_form(c)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("unit and metric elements are invariant under the group action") {
  std::mt19937_64 rng(43);
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  for (int trial = 0; trial < 25; ++trial) {
    const GroupElement g = sp->random_group_element(rng);
    for (int ci = 0; ci < sp->color_count(); ++ci) {
      const Color c{static_cast<std::uint8_t>(ci)};
      const DenseTensor u = unit_tensor(sp, c);
      const DenseTensor m = metric_tensor(sp, c);
      CHECK(max_abs_diff(group_act(g, u), u) <= 1e-10);
      CHECK(max_abs_diff(group_act(g, m), m) <= 1e-10);
    }
  }
}

TEST_CASE("rep_matrix is a homomorphism on random pairs") {
  std::mt19937_64 rng(44);
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  for (int trial = 0; trial < 25; ++trial) {
    const GroupElement g = sp->random_group_element(rng);
    const GroupElement h = sp->random_group_element(rng);
    const GroupElement gh = g * h;
    for (int ci = 0; ci < sp->color_count(); ++ci) {
      const Color c{static_cast<std::uint8_t>(ci)};
      CHECK(max_abs_diff(sp->rep_matrix(c, gh), sp->rep_matrix(c, g) * sp->rep_matrix(c, h)) <=
            1e-10);
    }
  }
  for (int ci = 0; ci < sp->color_count(); ++ci) {
    const Color c{static_cast<std::uint8_t>(ci)};
    const CMatrix id = sp->rep_matrix(c, CMatrix::identity(2));
    CHECK(max_abs_diff(id, CMatrix::identity(sp->rep_dim(c))) <= 1e-12);
  }
}

TEST_CASE("group element validation") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  CMatrix bad = CMatrix::identity(2);
  bad.at(0, 0) = 2.0;  // det 2
  CHECK_THROWS_AS(sp->validate_group_element(bad), Error);
  CHECK_THROWS_AS(sp->validate_group_element(CMatrix::identity(3)), Error);
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupElement g = sp->random_group_element(rng);
    CHECK(std::abs(g.det2() - Complex{1.0, 0.0}) <= 1e-10);
  }
  SpeciesPtr u = unit_species();
  CMatrix phase(1, 1);
  phase.at(0, 0) = Complex{0.6, 0.8};
  sp = nullptr;
  u->validate_group_element(phase);  // unit modulus is accepted
  CMatrix off(1, 1);
  off.at(0, 0) = Complex{0.5, 0.0};
  CHECK_THROWS_AS(u->validate_group_element(off), Error);
}

TEST_CASE("species construction rejects malformed configs") {
  Species::Config cfg;
  cfg.name = "bad";
  cfg.color_names = {"x", "y"};
  cfg.tau = {1, 1};  // not an involution
  cfg.rep_dims = {1, 1};
  const CMatrix one = CMatrix::identity(1);
  cfg.contr_forms = {one, one};
  cfg.unit_vecs = {one, one};
  cfg.metric_vecs = {one, one};
  cfg.rep = [](Color, const GroupElement&) { return CMatrix::identity(1); };
  cfg.group_defect = [](const GroupElement&) { return 0.0; };
  cfg.group_sampler = [](std::mt19937_64&) { return CMatrix::identity(1); };
  CHECK_THROWS_AS((void)Species(cfg), Error);
  cfg.tau = {0, 1};
  cfg.rep_dims = {0, 1};  // zero dimension
  CHECK_THROWS_AS((void)Species(cfg), Error);
}

TEST_CASE("axiom report text names species, colors and failures") {
  SpeciesPtr sp = unit_species();
  const std::string text = axiom_report_text(*sp, sp->check_axioms(1e-12));
  CHECK(text.find("unit") != std::string::npos);
  CHECK(text.find("all axioms pass") != std::string::npos);
}
