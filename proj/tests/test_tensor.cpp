#include <doctest.h>

#include <array>

#include "lorentz.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "tensor.hpp"

using namespace tik;
using tik::lorentz::kDown;
using tik::lorentz::kUp;

TEST_CASE("succ_above") {
  CHECK(succ_above(0, 0) == 1);
  CHECK(succ_above(2, 1) == 1);
  // the order-preserving injection [0,3) -> [0,4) missing 1, by enumeration
  std::vector<int> image;
  for (int v = 0; v < 4; ++v)
    if (v != 1) image.push_back(v);
  for (int j = 0; j < 3; ++j) CHECK(succ_above(1, j) == image[j]);
  CHECK(succ_above(1, 2) == 3);
  CHECK_THROWS_AS(succ_above(-1, 0), Error);
}

TEST_CASE("tensor_product basics") {
  SpeciesPtr u = unit_species();
  const DenseTensor two = DenseTensor::scalar(u, 2.0);
  const DenseTensor three = DenseTensor::scalar(u, 3.0);
  CHECK(tensor_product(two, three).data()[0] == Complex{6.0, 0.0});

  SpeciesPtr sp = lorentz::complex_lorentz_species();
  std::mt19937_64 rng(1);
  const DenseTensor delta = unit_tensor(sp, kUp);  // [down, up]
  const DenseTensor v = testgen::random_tensor(sp, {kUp}, rng);
  const DenseTensor dv = tensor_product(delta, v);
  CHECK(dv.signature() == Signature{kDown, kUp, kUp});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int x = 0; x < 4; ++x)
        CHECK(dv.data()[(a * 4 + b) * 4 + x] ==
              delta.data()[a * 4 + b] * v.data()[x]);

  const DenseTensor w = testgen::random_tensor(sp, {kDown, kUp}, rng);
  const DenseTensor vw = tensor_product(v, w);
  CHECK(vw.signature() == Signature{kUp, kDown, kUp});
  CHECK(vw.size() == 64);

  SpeciesPtr other = unit_species();
  CHECK_THROWS_AS(tensor_product(v, DenseTensor::scalar(other, 1.0)), Error);
}

TEST_CASE("contract examples") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  // eta_{mu nu} (x) eta^{nu rho} contracted -> delta_mu^rho
  const DenseTensor etaP = metric_tensor(sp, kDown);
  const DenseTensor eta = metric_tensor(sp, kUp);
  const DenseTensor prod = tensor_product(etaP, eta);
  const DenseTensor contracted = contract(prod, 1, 1);  // positions 1 and 2
  CHECK(contracted.signature() == Signature{kDown, kUp});
  CHECK(max_abs_diff(contracted, unit_tensor(sp, kUp)) <= 1e-15);

  SpeciesPtr u = unit_species();
  DenseTensor ones = DenseTensor::zeros(u, {Color{0}, Color{0}});
  ones.data()[0] = 1.0;
  CHECK(contract(ones, 0, 0).data()[0] == Complex{1.0, 0.0});

  // random rank-3 against an explicit triple loop
  std::mt19937_64 rng(7);
  const DenseTensor t = testgen::random_tensor(sp, {kUp, kDown, kDown}, rng);
  const DenseTensor got = contract(t, 0, 0);
  for (int m = 0; m < 4; ++m) {
    Complex expect{};
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        expect += sp->contr_form(kUp).at(x, y) * t.data()[(x * 4 + y) * 4 + m];
    CHECK(std::abs(got.data()[m] - expect) <= 1e-12);
  }

  // color-duality precondition
  const DenseTensor bad = testgen::random_tensor(sp, {kUp, kUp}, rng);
  CHECK_THROWS_AS(contract(bad, 0, 0), Error);
  try {
    contract(bad, 0, 0);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::ElabDuality);
  }
}

TEST_CASE("permute: identity, swap involution, composition") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  std::mt19937_64 rng(11);
  const DenseTensor t = testgen::random_tensor(sp, {kUp, kDown}, rng);
  CHECK(max_abs_diff(permute(t, Permutation::identity(t.signature())), t) == 0.0);

  const Permutation swap = Permutation::from_map(t.signature(), {1, 0});
  const DenseTensor once = permute(t, swap);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(once.data()[b * 4 + a] == t.data()[a * 4 + b]);
  const Permutation back = Permutation::from_map(once.signature(), {1, 0});
  CHECK(max_abs_diff(permute(once, back), t) == 0.0);

  for (int trial = 0; trial < 100; ++trial) {
    const Signature sig = testgen::random_signature(sp, 3, rng);
    const DenseTensor x = testgen::random_tensor(sp, sig, rng);
    const Permutation s1 = testgen::random_permutation(sig, rng);
    const Permutation s2 = testgen::random_permutation(s1.target, rng);
    CHECK(max_abs_diff(permute(permute(x, s1), s2), permute(x, compose(s2, s1))) == 0.0);
  }
}

TEST_CASE("permutation validation") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  CHECK_THROWS_AS(Permutation::from_map({kUp, kDown}, {0, 0}), Error);
  CHECK_THROWS_AS(Permutation::from_map({kUp, kDown}, {0}), Error);
  std::mt19937_64 rng(12);
  const DenseTensor t = testgen::random_tensor(sp, {kUp, kDown}, rng);
  const Permutation wrong = Permutation::identity({kUp, kUp});
  CHECK_THROWS_AS(permute(t, wrong), Error);
}

TEST_CASE("eval_index: basis rows, overflow default, exhaustive recovery") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  const DenseTensor delta = unit_tensor(sp, kUp);  // [down, up]
  const DenseTensor row = eval_index(delta, 0, 1);
  CHECK(row.signature() == Signature{kUp});
  for (int b = 0; b < 4; ++b)
    CHECK(row.data()[b] == (b == 1 ? Complex{1.0, 0.0} : Complex{}));

  std::mt19937_64 rng(13);
  const DenseTensor t = testgen::random_tensor(sp, {kUp, kDown}, rng);
  CHECK(max_abs_diff(eval_index(t, 0, 4), eval_index(t, 0, 0)) == 0.0);   // x = dim
  CHECK(max_abs_diff(eval_index(t, 0, 17), eval_index(t, 0, 0)) == 0.0);  // far too big

  const DenseTensor v = testgen::random_tensor(sp, {kUp}, rng);
  for (int x = 0; x < 4; ++x) CHECK(eval_index(v, 0, x).data()[0] == v.data()[x]);
}

TEST_CASE("group_act: identity, scalars, homomorphism") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  std::mt19937_64 rng(14);
  const DenseTensor t = testgen::random_tensor(sp, {kUp, lorentz::kUpL}, rng);
  CHECK(max_abs_diff(group_act(CMatrix::identity(2), t), t) <= 1e-12);

  const DenseTensor s = DenseTensor::scalar(sp, Complex{2.5, -1.0});
  for (int trial = 0; trial < 5; ++trial)
    CHECK(max_abs_diff(group_act(sp->random_group_element(rng), s), s) == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    const GroupElement g = sp->random_group_element(rng);
    const GroupElement h = sp->random_group_element(rng);
    const DenseTensor x = testgen::random_tensor(sp, {lorentz::kUpL, kDown}, rng);
    CHECK(max_abs_diff(group_act(g, group_act(h, x)), group_act(g * h, x)) <= 1e-10);
  }
}

TEST_CASE("add, scale, negate") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  std::mt19937_64 rng(15);
  const DenseTensor t = testgen::random_tensor(sp, {kUp, kDown, kUp}, rng);
  const DenseTensor zero = add_tensors(t, negate(t));
  for (const Complex& v : zero.data()) CHECK(v == Complex{});
  CHECK(max_abs_diff(scale(2.0, scale(3.0, t)), scale(6.0, t)) <= 1e-12);

  const DenseTensor b = testgen::random_tensor(sp, t.signature(), rng);
  const DenseTensor sum = add_tensors(t, b);
  for (std::size_t k = 0; k < sum.size(); ++k)
    CHECK(sum.data()[k] == t.data()[k] + b.data()[k]);

  const DenseTensor c = testgen::random_tensor(sp, {kUp}, rng);
  CHECK_THROWS_AS(add_tensors(t, c), Error);
}

TEST_CASE("product is bilinear") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  std::mt19937_64 rng(16);
  const DenseTensor a = testgen::random_tensor(sp, {kUp}, rng);
  const DenseTensor b = testgen::random_tensor(sp, {kUp}, rng);
  const DenseTensor c = testgen::random_tensor(sp, {kDown}, rng);
  const Complex alpha = testgen::rand_complex(rng);
  CHECK(max_abs_diff(tensor_product(add_tensors(a, b), c),
                     add_tensors(tensor_product(a, c), tensor_product(b, c))) <= 1e-12);
  CHECK(max_abs_diff(tensor_product(scale(alpha, a), c),
                     scale(alpha, tensor_product(a, c))) <= 1e-12);
  CHECK(max_abs_diff(tensor_product(a, scale(alpha, c)),
                     scale(alpha, tensor_product(a, c))) <= 1e-12);
}

TEST_CASE("kernels agree with the naive oracles on mixed-dimension signatures") {
  SpeciesPtr sp = testgen::mixed_species();
  std::mt19937_64 rng(17);
  // exhaustive rank <= 2, sampled rank 3 (the acceptance suite sweeps rank 3
  // exhaustively and rank 4 randomly)
  std::vector<Signature> sigs{{}};
  for (int c1 = 0; c1 < 4; ++c1) {
    sigs.push_back({Color{static_cast<std::uint8_t>(c1)}});
    for (int c2 = 0; c2 < 4; ++c2)
      sigs.push_back({Color{static_cast<std::uint8_t>(c1)}, Color{static_cast<std::uint8_t>(c2)}});
  }
  for (const Signature& sig : sigs) {
    const DenseTensor t = testgen::random_tensor(sp, sig, rng);
    for (const Signature& sig2 : sigs) {
      if (sig.size() + sig2.size() > 3) continue;
      const DenseTensor s = testgen::random_tensor(sp, sig2, rng);
      CHECK(max_abs_diff(tensor_product(t, s), oracle::product(t, s)) <= 1e-12);
    }
    const int n = static_cast<int>(sig.size());
    for (int i = 0; i < n; ++i) {
      for (int x = 0; x <= sp->rep_dim(sig[i]); ++x)
        CHECK(max_abs_diff(eval_index(t, i, x), oracle::eval_index(t, i, x)) <= 1e-12);
      for (int j = 0; j < n - 1; ++j) {
        if (sig[succ_above(i, j)] != sp->dual(sig[i])) continue;
        CHECK(max_abs_diff(contract(t, i, j), oracle::contract(t, i, j)) <= 1e-12);
      }
    }
    for (int trial = 0; trial < 3; ++trial) {
      const Permutation sigma = testgen::random_permutation(sig, rng);
      CHECK(max_abs_diff(permute(t, sigma), oracle::permute(t, sigma)) <= 1e-12);
    }
  }
}

TEST_CASE("naturality: the group action commutes with contraction") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseTensor t = testgen::random_tensor(sp, {kUp, kDown, lorentz::kUpL}, rng);
    const GroupElement g = sp->random_group_element(rng);
    CHECK(max_abs_diff(group_act(g, contract(t, 0, 0)), contract(group_act(g, t), 0, 0)) <=
          1e-10);
  }
}

TEST_CASE("eval_index is not equivariant: explicit counterexample") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  // z-boost with rapidity 1 acting on the first basis vector of [up]
  CMatrix m(2, 2);
  m.at(0, 0) = std::exp(0.5);
  m.at(1, 1) = std::exp(-0.5);
  DenseTensor e0 = DenseTensor::zeros(sp, {kUp});
  e0.data()[0] = 1.0;
  const DenseTensor acted_then_eval = eval_index(group_act(m, e0), 0, 0);
  const DenseTensor eval_then_acted = group_act(m, eval_index(e0, 0, 0));
  CHECK(max_abs_diff(acted_then_eval, eval_then_acted) > 0.1);
}

TEST_CASE("tensor JSON round trip is bit-exact") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Signature sig = testgen::random_signature(sp, trial % 4, rng);
    const DenseTensor t = testgen::random_tensor(sp, sig, rng);
    const DenseTensor back = tensor_from_json(sp, tensor_to_json(t));
    CHECK(back.signature() == t.signature());
    CHECK(back.data() == t.data());  // exact
  }
  // omitted data means zeros
  const DenseTensor z = tensor_from_json(sp, R"({"signature": ["up", "downL"]})");
  CHECK(z.size() == 8);
  for (const Complex& v : z.data()) CHECK(v == Complex{});
  CHECK_THROWS_AS(tensor_from_json(sp, R"({"signature": ["nope"]})"), Error);
  CHECK_THROWS_AS(tensor_from_json(sp, R"({"signature": ["up"], "data": [[1, 0]] })"),
                  Error);  // wrong length: needs 4
  CHECK_THROWS_AS(tensor_from_json(sp, "not json"), Error);
}

TEST_CASE("rank-0 tensors hold exactly one scalar") {
  SpeciesPtr sp = lorentz::complex_lorentz_species();
  const DenseTensor s = DenseTensor::scalar(sp, Complex{4.0, 1.0});
  CHECK(s.rank() == 0);
  CHECK(s.size() == 1);
  CHECK_THROWS_AS(DenseTensor(sp, {kUp}, {Complex{1.0, 0.0}}), Error);
}
