#pragma once

// Independent naive implementations of the tensor kernels and of tree
// evaluation, used as oracles. They share nothing with the library
// kernels beyond the row-major layout definition: multi-indices are
// enumerated with an odometer and flattened with local arithmetic.

#include <vector>

#include "tensor.hpp"
#include "tree.hpp"

namespace tik::oracle {

inline std::vector<int> dims_of(const DenseTensor& t) {
  std::vector<int> d(t.rank());
  for (int k = 0; k < t.rank(); ++k) d[k] = t.dim(k);
  return d;
}

inline bool advance(std::vector<int>& idx, const std::vector<int>& dims) {
  for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
    if (++idx[k] < dims[k]) return true;
    idx[k] = 0;
  }
  return false;
}

inline std::size_t flat(const std::vector<int>& idx, const std::vector<int>& dims) {
  std::size_t f = 0;
  for (std::size_t k = 0; k < idx.size(); ++k)
    f = f * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(idx[k]);
  return f;
}

inline DenseTensor product(const DenseTensor& a, const DenseTensor& b) {
  Signature sig = a.signature();
  sig.insert(sig.end(), b.signature().begin(), b.signature().end());
  DenseTensor out = DenseTensor::zeros(a.species(), sig);
  const auto da = dims_of(a), db = dims_of(b), dout = dims_of(out);
  std::vector<int> ia(a.rank(), 0);
  do {
    std::vector<int> ib(b.rank(), 0);
    do {
      std::vector<int> io = ia;
      io.insert(io.end(), ib.begin(), ib.end());
      out.data()[flat(io, dout)] = a.data()[flat(ia, da)] * b.data()[flat(ib, db)];
    } while (advance(ib, db));
  } while (advance(ia, da));
  return out;
}

inline DenseTensor contract(const DenseTensor& t, int i, int j) {
  const int i2 = j < i ? j : j + 1;
  const Species& sp = *t.species();
  Signature sig;
  for (int k = 0; k < t.rank(); ++k)
    if (k != i && k != i2) sig.push_back(t.signature()[k]);
  DenseTensor out = DenseTensor::zeros(t.species(), sig);
  const auto dt = dims_of(t), dout = dims_of(out);
  const CMatrix& form = sp.contr_form(t.signature()[i]);
  std::vector<int> io(out.rank(), 0);
  if (out.rank() == 0) io.clear();
  do {
    Complex acc{};
    for (int x = 0; x < sp.rep_dim(t.signature()[i]); ++x)
      for (int y = 0; y < sp.rep_dim(t.signature()[i2]); ++y) {
        std::vector<int> full;
        int r = 0;
        for (int k = 0; k < t.rank(); ++k) {
          if (k == i)
            full.push_back(x);
          else if (k == i2)
            full.push_back(y);
          else
            full.push_back(io[r++]);
        }
        acc += form.at(x, y) * t.data()[flat(full, dt)];
      }
    out.data()[flat(io, dout)] = acc;
  } while (advance(io, dout));
  return out;
}

inline DenseTensor permute(const DenseTensor& t, const Permutation& sigma) {
  DenseTensor out = DenseTensor::zeros(t.species(), sigma.target);
  const auto dt = dims_of(t), dout = dims_of(out);
  std::vector<int> b(out.rank(), 0);
  do {
    std::vector<int> a(t.rank());
    for (int k = 0; k < t.rank(); ++k) a[k] = b[sigma.map[k]];
    out.data()[flat(b, dout)] = t.data()[flat(a, dt)];
  } while (advance(b, dout));
  return out;
}

inline DenseTensor eval_index(const DenseTensor& t, int i, int x) {
  const int xi = x < t.dim(i) ? x : 0;
  Signature sig;
  for (int k = 0; k < t.rank(); ++k)
    if (k != i) sig.push_back(t.signature()[k]);
  DenseTensor out = DenseTensor::zeros(t.species(), sig);
  const auto dt = dims_of(t), dout = dims_of(out);
  std::vector<int> io(out.rank(), 0);
  do {
    std::vector<int> full;
    int r = 0;
    for (int k = 0; k < t.rank(); ++k) full.push_back(k == i ? xi : io[r++]);
    out.data()[flat(io, dout)] = t.data()[flat(full, dt)];
  } while (advance(io, dout));
  return out;
}

inline DenseTensor group_act(const GroupElement& g, const DenseTensor& t) {
  const Species& sp = *t.species();
  std::vector<CMatrix> reps;
  for (int k = 0; k < t.rank(); ++k) reps.push_back(sp.rep_matrix(t.signature()[k], g));
  DenseTensor out = DenseTensor::zeros(t.species(), t.signature());
  const auto dt = dims_of(t);
  std::vector<int> b(t.rank(), 0);
  do {
    Complex acc{};
    std::vector<int> a(t.rank(), 0);
    do {
      Complex w = t.data()[flat(a, dt)];
      for (int k = 0; k < t.rank(); ++k) w *= reps[k].at(b[k], a[k]);
      acc += w;
    } while (advance(a, dt));
    out.data()[flat(b, dt)] = acc;
  } while (advance(b, dt));
  return out;
}

inline DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] += b.data()[k];
  return out;
}

inline DenseTensor scale(Complex s, const DenseTensor& t) {
  DenseTensor out = t;
  for (Complex& v : out.data()) v *= s;
  return out;
}

// Tree evaluation through the oracle kernels only.
inline DenseTensor semantics(const TensorTree& node) {
  switch (node.kind()) {
    case NodeKind::Tensor: return node.as<TensorNode>().value;
    case NodeKind::Smul: {
      const auto& n = node.as<SmulNode>();
      return oracle::scale(n.scalar, oracle::semantics(*n.child));
    }
    case NodeKind::Neg: return oracle::scale(Complex{-1.0, 0.0}, oracle::semantics(*node.as<NegNode>().child));
    case NodeKind::Add: {
      const auto& n = node.as<AddNode>();
      return oracle::add(oracle::semantics(*n.left), oracle::semantics(*n.right));
    }
    case NodeKind::Action: {
      const auto& n = node.as<ActionNode>();
      return oracle::group_act(n.element, oracle::semantics(*n.child));
    }
    case NodeKind::Perm: {
      const auto& n = node.as<PermNode>();
      return oracle::permute(oracle::semantics(*n.child), n.sigma);
    }
    case NodeKind::Prod: {
      const auto& n = node.as<ProdNode>();
      return oracle::product(oracle::semantics(*n.left), oracle::semantics(*n.right));
    }
    case NodeKind::Contr: {
      const auto& n = node.as<ContrNode>();
      return oracle::contract(oracle::semantics(*n.child), n.i, n.j);
    }
    case NodeKind::Eval: {
      const auto& n = node.as<EvalNode>();
      return oracle::eval_index(oracle::semantics(*n.child), n.i, n.x);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace tik::oracle
