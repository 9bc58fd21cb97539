#include "lorentz.hpp"

#include <array>
#include <cmath>

#include "error.hpp"

namespace tik::lorentz {

namespace {

const Complex kI{0.0, 1.0};

std::array<CMatrix, 4> make_pauli() {
  return {
      CMatrix(2, 2, {1, 0, 0, 1}),
      CMatrix(2, 2, {0, 1, 1, 0}),
      CMatrix(2, 2, {0, -kI, kI, 0}),
      CMatrix(2, 2, {1, 0, 0, -1}),
  };
}

// sigma with the vector index lowered: (sigma^0, -sigma^1, -sigma^2, -sigma^3)
std::array<CMatrix, 4> make_pauli_lowered() {
  auto p = make_pauli();
  for (int mu = 1; mu < 4; ++mu) p[mu] = -p[mu];
  return p;
}

}  // namespace

const CMatrix& pauli_matrix(int mu) {
  static const std::array<CMatrix, 4> sigma = make_pauli();
  if (mu < 0 || mu > 3) fail(ErrorCategory::BadArgument, "pauli index out of range");
  return sigma[mu];
}

const CMatrix& minkowski_eta() {
  static const CMatrix eta(4, 4, {1, 0, 0, 0,  //
                                  0, -1, 0, 0,  //
                                  0, 0, -1, 0,  //
                                  0, 0, 0, -1});
  return eta;
}

CMatrix sl2c_to_lorentz(const GroupElement& m) {
  if (m.rows() != 2 || m.cols() != 2)
    fail(ErrorCategory::BadArgument, "sl2c_to_lorentz expects a 2x2 matrix");
  if (std::abs(m.det2() - Complex{1.0, 0.0}) > 1e-10)
    fail(ErrorCategory::BadArgument, "matrix is not in SL(2,C)");
  static const std::array<CMatrix, 4> lowered = make_pauli_lowered();
  const CMatrix mdag = m.adjoint();
  CMatrix lam(4, 4);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const CMatrix prod = lowered[mu] * m * lowered[nu] * mdag;
      Complex tr = prod.at(0, 0) + prod.at(1, 1);
      lam.at(mu, nu) = 0.5 * tr.real();
    }
  }
  return lam;
}

SpeciesPtr complex_lorentz_species() {
  Species::Config cfg;
  cfg.name = "complex-lorentz";
  cfg.color_names = {"upL", "downL", "upR", "downR", "up", "down"};
  cfg.tau = {1, 0, 3, 2, 5, 4};
  cfg.rep_dims = {2, 2, 2, 2, 4, 4};
  cfg.group_dim = 2;

  const CMatrix id2 = CMatrix::identity(2);
  const CMatrix id4 = CMatrix::identity(4);
  cfg.contr_forms = {id2, id2, id2, id2, id4, id4};
  cfg.unit_vecs = {id2, id2, id2, id2, id4, id4};

  // Spinor metrics: epsilon^{01} = +1 for the upper metrics, and the
  // matrix inverses for the lower ones. These signs, together with the
  // Minkowski metric below, satisfy contr_metric for every color and
  // give the Pauli contraction identity with coefficient +2.
  const CMatrix eps(2, 2, {0, 1, -1, 0});
  const CMatrix epsP(2, 2, {0, -1, 1, 0});  // eps^{-1}
  const CMatrix& eta = minkowski_eta();
  cfg.metric_vecs = {eps, epsP, eps, epsP, eta, eta};

  cfg.rep = [](Color c, const GroupElement& m) -> CMatrix {
    switch (c.value) {
      case kUpL.value:
        return m;
      case kDownL.value:
        return m.inverse2().transpose();
      case kUpR.value:
        return m.conjugate();
      case kDownR.value:
        return m.inverse2().adjoint();
      case kUp.value:
        return sl2c_to_lorentz(m);
      case kDown.value: {
        // Lambda^{-T} = eta Lambda eta for Lorentz matrices.
        const CMatrix& e = minkowski_eta();
        return e * sl2c_to_lorentz(m) * e;
      }
      default:
        fail(ErrorCategory::Internal, "unknown complex-lorentz color");
    }
  };
  cfg.group_defect = [](const GroupElement& g) {
    if (g.rows() != 2 || g.cols() != 2) return 1.0;
    return std::abs(g.det2() - Complex{1.0, 0.0});
  };
  // Entries uniform in the unit disc, rejected while |det| <= 0.1, then
  // scaled by det^{-1/2}.
  cfg.group_sampler = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (;;) {
      CMatrix m(2, 2);
      bool inside = true;
      for (int k = 0; k < 4 && inside; ++k) {
        const double re = unit(rng);
        const double im = unit(rng);
        if (re * re + im * im > 1.0) {
          inside = false;
          break;
        }
        m.data()[k] = Complex{re, im};
      }
      if (!inside) continue;
      const Complex det = m.det2();
      if (std::abs(det) <= 0.1) continue;
      return m.scaled(1.0 / std::sqrt(det));
    }
  };
  return std::make_shared<Species>(std::move(cfg));
}

}  // namespace tik::lorentz
