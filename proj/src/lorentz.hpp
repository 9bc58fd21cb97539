#pragma once

#include "species.hpp"

namespace tik::lorentz {

// Fixed color order of the complex-Lorentz species.
inline constexpr Color kUpL{0};
inline constexpr Color kDownL{1};
inline constexpr Color kUpR{2};
inline constexpr Color kDownR{3};
inline constexpr Color kUp{4};
inline constexpr Color kDown{5};

/// sigma^0..sigma^3 in the standard convention:
/// sigma^0 = I, sigma^1 = [[0,1],[1,0]], sigma^2 = [[0,-i],[i,0]],
/// sigma^3 = [[1,0],[0,-1]].
const CMatrix& pauli_matrix(int mu);

/// Minkowski metric diag(1,-1,-1,-1) as a 4x4 matrix.
const CMatrix& minkowski_eta();

/// The vector-representation image of M in SL(2,C):
///   Lambda(M)^mu_nu = 1/2 Re tr(sigmabar^mu M sigma_nu M^dagger)
/// with sigmabar = sigma_lowered = (sigma^0, -sigma^1, -sigma^2, -sigma^3).
/// The result is a proper orthochronous Lorentz matrix (real entries,
/// Lambda^T eta Lambda = eta). Rejects M with |det M - 1| > 1e-10.
CMatrix sl2c_to_lorentz(const GroupElement& m);

/// The complex-Lorentz tensor species: colors upL/downL/upR/downR of
/// dimension 2 acting by M, M^{-T}, M*, M^{-dagger}, and up/down of
/// dimension 4 acting by Lambda(M), Lambda(M)^{-T}. Contraction forms and
/// units are identity matrices; metrics are eta for up/down and the
/// antisymmetric epsilon pair for the spinor colors.
SpeciesPtr complex_lorentz_species();

}  // namespace tik::lorentz
