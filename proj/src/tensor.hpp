#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "species.hpp"

namespace tik {

/// Ordered list of colors carried by a tensor's index positions.
using Signature = std::vector<Color>;

/// Order-preserving injection [0,n+1) -> [0,n+2) with a hole at i:
/// returns j when j < i, else j + 1. Bounds are checked.
int succ_above(int i, int j);

/// A color-compatible bijection of index positions: source[i] = target[map[i]].
struct Permutation {
  Signature source;
  Signature target;
  std::vector<int> map;

  /// Builds the permutation from a source signature and a position map;
  /// the target signature is derived as target[map[i]] = source[i].
  static Permutation from_map(Signature source, std::vector<int> map);
  static Permutation identity(Signature sig);

  int size() const { return static_cast<int>(map.size()); }
  bool is_identity() const;
  Permutation inverse() const;
  std::vector<int> inverse_map() const;

  bool operator==(const Permutation&) const = default;
};

/// outer ∘ inner (apply inner first); inner.target must equal outer.source.
Permutation compose(const Permutation& outer, const Permutation& inner);

/// Dense tensor: a signature over a species plus a flat row-major array
/// of complex components (last index fastest). Rank 0 holds one scalar.
/// Values are immutable in spirit: all kernels below return new tensors.
class DenseTensor {
 public:
  DenseTensor(SpeciesPtr species, Signature sig, std::vector<Complex> data);
  static DenseTensor zeros(SpeciesPtr species, Signature sig);
  static DenseTensor scalar(SpeciesPtr species, Complex value);

  const SpeciesPtr& species() const { return species_; }
  const Signature& signature() const { return sig_; }
  int rank() const { return static_cast<int>(sig_.size()); }
  int dim(int position) const { return species_->rep_dim(sig_[position]); }
  std::size_t size() const { return data_.size(); }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  Complex at(std::span<const int> idx) const { return data_[flatten(idx)]; }
  Complex& at(std::span<const int> idx) { return data_[flatten(idx)]; }
  std::size_t flatten(std::span<const int> idx) const;

  /// Row-major strides (last index has stride 1).
  std::vector<std::size_t> strides() const;

 private:
  SpeciesPtr species_;
  Signature sig_;
  std::vector<Complex> data_;
};

std::size_t signature_size(const Species& species, const Signature& sig);

// --- kernels -------------------------------------------------------------

/// Concatenated signature; out[(m, m')] = a[m] * b[m'].
DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);

/// Contracts position i against position succ_above(i, j), requiring
/// signature[succ_above(i, j)] = tau(signature[i]); the pair is summed
/// against the species contraction form. Violating the color-duality
/// precondition raises an ElabDuality error.
DenseTensor contract(const DenseTensor& t, int i, int j);

/// result[b] = t[a] with a[i] = b[sigma.map[i]]; sigma.source must equal
/// t's signature.
DenseTensor permute(const DenseTensor& t, const Permutation& sigma);

/// Deletes position i, fixing its index to x when x < dim, else to 0.
DenseTensor eval_index(const DenseTensor& t, int i, int x);

/// result[b] = sum_a prod_k rep(sig[k], g)[b_k][a_k] * t[a].
DenseTensor group_act(const GroupElement& g, const DenseTensor& t);

DenseTensor add_tensors(const DenseTensor& a, const DenseTensor& b);
DenseTensor scale(Complex alpha, const DenseTensor& t);
DenseTensor negate(const DenseTensor& t);

double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

/// Multi-index of the largest |a-b| entry (empty for rank 0).
std::vector<int> argmax_abs_diff(const DenseTensor& a, const DenseTensor& b);

std::vector<int> unflatten(const DenseTensor& t, std::size_t flat);

// --- species data as tensors ----------------------------------------------

DenseTensor unit_tensor(const SpeciesPtr& species, Color c);    // signature [tau c, c]
DenseTensor metric_tensor(const SpeciesPtr& species, Color c);  // signature [c, c]

// --- JSON tensor literal format --------------------------------------------
// {"signature": ["up", "down"], "data": [[re, im], ...]}  (row-major; "data"
// may be omitted for an all-zero tensor)

std::string tensor_to_json(const DenseTensor& t);
DenseTensor tensor_from_json(const SpeciesPtr& species, const std::string& text);

}  // namespace tik
