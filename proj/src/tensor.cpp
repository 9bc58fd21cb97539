#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace tik {

using nlohmann::json;

int succ_above(int i, int j) {
  if (i < 0 || j < 0) fail(ErrorCategory::BadArgument, "succ_above: negative position");
  return j < i ? j : j + 1;
}

Permutation Permutation::from_map(Signature source, std::vector<int> map) {
  const int n = static_cast<int>(source.size());
  if (static_cast<int>(map.size()) != n)
    fail(ErrorCategory::BadArgument, "permutation map length mismatch");
  std::vector<bool> seen(n, false);
  Signature target(n);
  for (int i = 0; i < n; ++i) {
    const int p = map[i];
    if (p < 0 || p >= n || seen[p])
      fail(ErrorCategory::BadArgument, "permutation map is not a bijection");
    seen[p] = true;
    target[p] = source[i];
  }
  return Permutation{std::move(source), std::move(target), std::move(map)};
}

Permutation Permutation::identity(Signature sig) {
  std::vector<int> map(sig.size());
  std::iota(map.begin(), map.end(), 0);
  return Permutation{sig, sig, std::move(map)};
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (map[i] != i) return false;
  return true;
}

std::vector<int> Permutation::inverse_map() const {
  std::vector<int> inv(map.size());
  for (int i = 0; i < size(); ++i) inv[map[i]] = i;
  return inv;
}

Permutation Permutation::inverse() const {
  return Permutation{target, source, inverse_map()};
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (inner.target != outer.source)
    fail(ErrorCategory::BadArgument, "permutation composition signature mismatch");
  std::vector<int> map(inner.map.size());
  for (int i = 0; i < inner.size(); ++i) map[i] = outer.map[inner.map[i]];
  return Permutation{inner.source, outer.target, std::move(map)};
}

std::size_t signature_size(const Species& species, const Signature& sig) {
  std::size_t n = 1;
  for (Color c : sig) n *= static_cast<std::size_t>(species.rep_dim(c));
  return n;
}

DenseTensor::DenseTensor(SpeciesPtr species, Signature sig, std::vector<Complex> data)
    : species_(std::move(species)), sig_(std::move(sig)), data_(std::move(data)) {
  if (!species_) fail(ErrorCategory::BadArgument, "tensor needs a species");
  if (data_.size() != signature_size(*species_, sig_))
    fail(ErrorCategory::BadArgument, "tensor data length does not match signature");
}

DenseTensor DenseTensor::zeros(SpeciesPtr species, Signature sig) {
  const std::size_t n = signature_size(*species, sig);
  return DenseTensor(std::move(species), std::move(sig), std::vector<Complex>(n));
}

DenseTensor DenseTensor::scalar(SpeciesPtr species, Complex value) {
  return DenseTensor(std::move(species), {}, {value});
}

std::vector<std::size_t> DenseTensor::strides() const {
  std::vector<std::size_t> s(sig_.size(), 1);
  for (int k = rank() - 2; k >= 0; --k)
    s[k] = s[k + 1] * static_cast<std::size_t>(dim(k + 1));
  return s;
}

std::size_t DenseTensor::flatten(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank())
    fail(ErrorCategory::BadArgument, "multi-index rank mismatch");
  std::size_t flat = 0;
  for (int k = 0; k < rank(); ++k) {
    if (idx[k] < 0 || idx[k] >= dim(k))
      fail(ErrorCategory::BadArgument, "multi-index out of range");
    flat = flat * static_cast<std::size_t>(dim(k)) + static_cast<std::size_t>(idx[k]);
  }
  return flat;
}

std::vector<int> unflatten(const DenseTensor& t, std::size_t flat) {
  std::vector<int> idx(t.rank());
  for (int k = t.rank() - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(t.dim(k)));
    flat /= static_cast<std::size_t>(t.dim(k));
  }
  return idx;
}

namespace {

void require_same_species(const DenseTensor& a, const DenseTensor& b) {
  if (a.species() != b.species())
    fail(ErrorCategory::BadArgument, "tensors belong to different species");
}

}  // namespace

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
  require_same_species(a, b);
  Signature sig = a.signature();
  sig.insert(sig.end(), b.signature().begin(), b.signature().end());
  std::vector<Complex> data(a.size() * b.size());
  std::size_t k = 0;
  for (std::size_t ia = 0; ia < a.size(); ++ia)
    for (std::size_t ib = 0; ib < b.size(); ++ib) data[k++] = a.data()[ia] * b.data()[ib];
  return DenseTensor(a.species(), std::move(sig), std::move(data));
}

DenseTensor contract(const DenseTensor& t, int i, int j) {
  const int n = t.rank();
  if (n < 2) fail(ErrorCategory::BadArgument, "contract needs rank >= 2");
  if (i < 0 || i >= n || j < 0 || j >= n - 1)
    fail(ErrorCategory::BadArgument, "contract positions out of range");
  const int i2 = succ_above(i, j);
  const Signature& sig = t.signature();
  const Species& sp = *t.species();
  if (sig[i2] != sp.dual(sig[i]))
    throw Error(ErrorCategory::ElabDuality,
                "contraction pairs non-dual colors " + std::string(sp.color_name(sig[i])) +
                    " and " + std::string(sp.color_name(sig[i2])));

  Signature out_sig;
  out_sig.reserve(n - 2);
  for (int k = 0; k < n; ++k)
    if (k != i && k != i2) out_sig.push_back(sig[k]);

  const CMatrix& form = sp.contr_form(sig[i]);
  DenseTensor out = DenseTensor::zeros(t.species(), out_sig);
  const int di = sp.rep_dim(sig[i]);
  const int dj = sp.rep_dim(sig[i2]);

  std::vector<int> full(n, 0);
  for (std::size_t m = 0; m < out.size(); ++m) {
    const std::vector<int> rest = unflatten(out, m);
    int r = 0;
    for (int k = 0; k < n; ++k)
      if (k != i && k != i2) full[k] = rest[r++];
    Complex acc{};
    for (int x = 0; x < di; ++x) {
      for (int y = 0; y < dj; ++y) {
        const Complex w = form.at(x, y);
        if (w == Complex{}) continue;
        full[i] = x;
        full[i2] = y;
        acc += w * t.at(full);
      }
    }
    out.data()[m] = acc;
  }
  return out;
}

DenseTensor permute(const DenseTensor& t, const Permutation& sigma) {
  if (sigma.source != t.signature())
    fail(ErrorCategory::BadArgument, "permutation source does not match tensor signature");
  DenseTensor out = DenseTensor::zeros(t.species(), sigma.target);
  std::vector<int> src(t.rank(), 0);
  for (std::size_t m = 0; m < out.size(); ++m) {
    const std::vector<int> b = unflatten(out, m);
    for (int k = 0; k < t.rank(); ++k) src[k] = b[sigma.map[k]];
    out.data()[m] = t.at(src);
  }
  return out;
}

DenseTensor eval_index(const DenseTensor& t, int i, int x) {
  const int n = t.rank();
  if (n < 1) fail(ErrorCategory::BadArgument, "eval_index needs rank >= 1");
  if (i < 0 || i >= n) fail(ErrorCategory::BadArgument, "eval position out of range");
  const int d = t.dim(i);
  const int xi = (x >= 0 && x < d) ? x : 0;  // too-large indices default to 0

  Signature out_sig;
  out_sig.reserve(n - 1);
  for (int k = 0; k < n; ++k)
    if (k != i) out_sig.push_back(t.signature()[k]);
  DenseTensor out = DenseTensor::zeros(t.species(), out_sig);
  std::vector<int> full(n, 0);
  for (std::size_t m = 0; m < out.size(); ++m) {
    const std::vector<int> rest = unflatten(out, m);
    int r = 0;
    for (int k = 0; k < n; ++k) full[k] = (k == i) ? xi : rest[r++];
    out.data()[m] = t.at(full);
  }
  return out;
}

DenseTensor group_act(const GroupElement& g, const DenseTensor& t) {
  const Species& sp = *t.species();
  const int n = t.rank();
  std::vector<CMatrix> reps;
  reps.reserve(n);
  for (int k = 0; k < n; ++k) reps.push_back(sp.rep_matrix(t.signature()[k], g));

  DenseTensor out = DenseTensor::zeros(t.species(), t.signature());
  for (std::size_t mb = 0; mb < out.size(); ++mb) {
    const std::vector<int> b = unflatten(out, mb);
    Complex acc{};
    for (std::size_t ma = 0; ma < t.size(); ++ma) {
      const std::vector<int> a = unflatten(t, ma);
      Complex w = t.data()[ma];
      if (w == Complex{}) continue;
      for (int k = 0; k < n && w != Complex{}; ++k) w *= reps[k].at(b[k], a[k]);
      acc += w;
    }
    out.data()[mb] = acc;
  }
  return out;
}

DenseTensor add_tensors(const DenseTensor& a, const DenseTensor& b) {
  require_same_species(a, b);
  if (a.signature() != b.signature())
    fail(ErrorCategory::BadArgument, "tensor addition signature mismatch");
  DenseTensor out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] += b.data()[k];
  return out;
}

DenseTensor scale(Complex alpha, const DenseTensor& t) {
  DenseTensor out = t;
  for (Complex& v : out.data()) v *= alpha;
  return out;
}

DenseTensor negate(const DenseTensor& t) { return scale(Complex{-1.0, 0.0}, t); }

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  require_same_species(a, b);
  if (a.signature() != b.signature())
    fail(ErrorCategory::BadArgument, "max_abs_diff signature mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

std::vector<int> argmax_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  double m = -1.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a.data()[k] - b.data()[k]);
    if (d > m) {
      m = d;
      arg = k;
    }
  }
  return unflatten(a, arg);
}

DenseTensor unit_tensor(const SpeciesPtr& species, Color c) {
  const CMatrix& u = species->unit_vec(c);
  return DenseTensor(species, {species->dual(c), c}, u.data());
}

DenseTensor metric_tensor(const SpeciesPtr& species, Color c) {
  const CMatrix& m = species->metric_vec(c);
  return DenseTensor(species, {c, c}, m.data());
}

std::string tensor_to_json(const DenseTensor& t) {
  json j;
  j["signature"] = json::array();
  for (Color c : t.signature()) j["signature"].push_back(t.species()->color_name(c));
  json data = json::array();
  for (const Complex& v : t.data()) data.push_back(json::array({v.real(), v.imag()}));
  j["data"] = std::move(data);
  return j.dump();
}

DenseTensor tensor_from_json(const SpeciesPtr& species, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCategory::Io, std::string("bad tensor JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("signature") || !j["signature"].is_array())
    fail(ErrorCategory::Io, "tensor JSON needs a \"signature\" array");
  Signature sig;
  for (const auto& name : j["signature"]) {
    if (!name.is_string()) fail(ErrorCategory::Io, "signature entries must be color names");
    const auto c = species->color_by_name(name.get<std::string>());
    if (!c)
      fail(ErrorCategory::Io, "unknown color \"" + name.get<std::string>() +
                                  "\" for species " + species->name());
    sig.push_back(*c);
  }
  const std::size_t n = signature_size(*species, sig);
  std::vector<Complex> data(n);
  if (j.contains("data")) {
    const auto& arr = j["data"];
    if (!arr.is_array() || arr.size() != n)
      fail(ErrorCategory::Io, "tensor JSON data length does not match signature");
    for (std::size_t k = 0; k < n; ++k) {
      const auto& pair = arr[k];
      if (!pair.is_array() || pair.size() != 2)
        fail(ErrorCategory::Io, "tensor JSON data entries must be [re, im] pairs");
      data[k] = Complex{pair[0].get<double>(), pair[1].get<double>()};
    }
  }
  return DenseTensor(species, std::move(sig), std::move(data));
}

}  // namespace tik
