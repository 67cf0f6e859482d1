// Copyright 2026 The QRC Memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "qrc/core.hpp"
#include "qrc/dynamics.hpp"
#include "qrc/error.hpp"
#include "qrc/reservoirs.hpp"
#include "qrc/tasks.hpp"
#include "test_util.hpp"

using namespace qrc;
using qrc::testing::random_spec;
using qrc::testing::trace_distance_eig;

namespace {

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

void check_density(const ComplexMatrix& rho) {
  CHECK(std::abs(rho.trace() - Complex(1.0)) <= 1e-9);
  CHECK(max_abs(rho - rho.adjoint()) <= 1e-9);
  CHECK(qrc::testing::min_eig(rho) >= -1e-7);
}

// Depolarizing channel on every auxiliary qubit, built from dense Kraus
// operators on the full space.
ComplexMatrix dense_depolarize(const ComplexMatrix& rho, std::size_t n, double omega) {
  const std::size_t total = 2 * n;
  ComplexMatrix out = rho;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t site = n + a;
    ComplexMatrix next = (1.0 - 3.0 * omega / 4.0) * out;
    for (Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
      const ComplexMatrix k = pauli_site(axis, site, total);
      next += (omega / 4.0) * k * out * k.adjoint();
    }
    out = next;
  }
  return out;
}

std::vector<double> inputs(std::size_t n, std::uint64_t seed) {
  return gen_uniform_inputs(n, seed).values;
}

}  // namespace

TEST_CASE("Markov reservoir follows the propagator") {
  const LindbladSpec spec = random_spec(2, 0.1, 1);
  std::mt19937_64 rng(2);
  const DensityMatrix init = random_density(4, rng);
  MarkovReservoir r(spec, 10.0, init);
  r.step(0.4);
  const Superoperator p = propagator(build_liouvillian(spec, 0.4), 10.0);
  CHECK(max_abs(r.state().matrix() - p.apply(init.matrix())) <= 1e-12);
  CHECK_THROWS_AS(r.step(1.5), Error);
  CHECK_THROWS_AS(r.step(-0.1), Error);

  MarkovReservoir frozen(spec, 1e-12, init);
  frozen.step(0.5);
  CHECK(max_abs(frozen.state().matrix() - init.matrix()) <= 1e-9);
}

TEST_CASE("Markov reservoir echo state property") {
  const LindbladSpec spec = random_spec(3, 0.1, 3);
  std::mt19937_64 rng(4);
  MarkovReservoir a(spec, 10.0, random_density(8, rng));
  MarkovReservoir b(spec, 10.0, random_density(8, rng));
  for (double s : inputs(1000, 5)) {
    a.step(s);
    b.step(s);
    check_density(a.state().matrix());
  }
  CHECK(trace_distance_eig(a.state().matrix(), b.state().matrix()) <= 1e-6);
}

TEST_CASE("constant input converges to the steady state") {
  const LindbladSpec spec = random_spec(2, 0.1, 6);
  std::mt19937_64 rng(7);
  MarkovReservoir r(spec, 10.0, random_density(4, rng));
  for (int k = 0; k < 2000; ++k) r.step(0.3);
  const DensityMatrix ss = steady_state(build_liouvillian(spec, 0.3));
  CHECK(trace_distance_eig(r.state().matrix(), ss.matrix()) <= 1e-6);
}

TEST_CASE("residual reservoir with lambda one is the Markov reservoir") {
  const LindbladSpec spec = random_spec(3, 0.1, 8);
  std::mt19937_64 rng(9);
  const DensityMatrix init = random_density(8, rng);
  MarkovReservoir m(spec, 10.0, init);
  ResidualReservoir r(spec, 10.0, 1.0, 10, init);
  for (double s : inputs(200, 10)) {
    m.step(s);
    r.step(s);
    CHECK(max_abs(m.state().matrix() - r.state().matrix()) <= 1e-12);
  }
}

TEST_CASE("residual update mixes with the delayed state before propagating") {
  const LindbladSpec spec = random_spec(2, 0.1, 11);
  std::mt19937_64 rng(12);
  const std::size_t tau_e = 4;
  const double lambda = 0.3;
  ResidualReservoir r(spec, 10.0, lambda, tau_e, random_density(4, rng));
  CHECK(r.history().size() == tau_e);
  const auto seq = inputs(30, 13);
  // Oracle: explicit list of all states, rho_{k+1} = P(s) [l rho_k + (1-l) rho_{k+1-tau_e}].
  std::vector<ComplexMatrix> states(tau_e, r.state().matrix());
  for (double s : seq) {
    const ComplexMatrix& cur = states.back();
    const ComplexMatrix& delayed = states[states.size() - tau_e];
    const ComplexMatrix mixed = lambda * cur + (1.0 - lambda) * delayed;
    states.push_back(hermitize_normalize(propagator(build_liouvillian(spec, s), 10.0).apply(mixed)));
    r.step(s);
    CHECK(max_abs(r.state().matrix() - states.back()) <= 1e-12);
    CHECK(r.history().size() == tau_e);
    for (const DensityMatrix& h : r.history()) check_density(h.matrix());
  }

  // lambda = 0 depends only on the delayed state and the input.
  ResidualReservoir z(spec, 10.0, 0.0, 3, random_density(4, rng));
  const ComplexMatrix delayed = z.history().back().matrix();
  z.step(0.6);
  CHECK(max_abs(z.state().matrix() -
                propagator(build_liouvillian(spec, 0.6), 10.0).apply(delayed)) <= 1e-12);

  CHECK_THROWS_AS(ResidualReservoir(spec, 10.0, 1.1, 3, random_density(4, rng)), Error);
  CHECK_THROWS_AS(ResidualReservoir(spec, 10.0, 0.5, 0, random_density(4, rng)), Error);
}

TEST_CASE("residual skip connection re-injects the input seen tau_e steps ago") {
  // With lambda = 0 each new state is the delayed state pushed through the
  // current propagator, so a pulse at step 0 leaves the next tau_e - 1 states
  // untouched and resurfaces at step tau_e.
  const LindbladSpec spec = random_spec(2, 1.0, 14);
  std::mt19937_64 rng(15);
  const std::size_t tau_e = 5;
  ResidualReservoir base(spec, 1.0, 0.0, tau_e, random_density(4, rng));
  ResidualReservoir pulsed = base;
  std::vector<double> s(12, 0.5);
  std::vector<double> sp = s;
  sp[0] = 1.0;
  std::vector<double> diff;
  for (std::size_t k = 0; k < s.size(); ++k) {
    base.step(s[k]);
    pulsed.step(sp[k]);
    diff.push_back(trace_distance_eig(base.state().matrix(), pulsed.state().matrix()));
  }
  CHECK(diff[0] > 1e-3);
  for (std::size_t k = 1; k < tau_e; ++k) CHECK(diff[k] <= 1e-12);
  CHECK(diff[tau_e] > 1e-4);
}

TEST_CASE("partial swap unitary") {
  for (double eta : {0.1, std::numbers::pi / 4.0, 1.5}) {
    for (std::size_t site = 0; site < 2; ++site) {
      const ComplexMatrix u = partial_swap_unitary(eta, site, 2);
      CHECK(u.rows() == 16);
      CHECK(max_abs(u * u.adjoint() - identity(16)) <= 1e-12);
    }
  }
  CHECK(max_abs(partial_swap_unitary(0.0, 0, 2) - identity(16)) <= 1e-15);
  CHECK_THROWS_AS(partial_swap_unitary(std::numbers::pi / 2.0, 0, 2), Error);
  CHECK_THROWS_AS(partial_swap_unitary(0.3, 2, 2), Error);

  // Near pi/2 the conjugation swaps reservoir qubit 0 with auxiliary 0.
  std::mt19937_64 rng(16);
  const DensityMatrix a = random_density(2, rng);
  const DensityMatrix b = random_density(2, rng);
  const ComplexMatrix rho = kron(a.matrix(), b.matrix());
  const ComplexMatrix u = partial_swap_unitary(std::numbers::pi / 2.0 - 1e-9, 0, 1);
  CHECK(max_abs(u * rho * u.adjoint() - kron(b.matrix(), a.matrix())) <= 1e-8);

  // Only the chosen pair is touched: site 1 commutes with ops on pair 0.
  const ComplexMatrix u1 = partial_swap_unitary(0.7, 1, 2);
  const ComplexMatrix z0 = pauli_site(Axis::kZ, 0, 4);
  const ComplexMatrix x2 = pauli_site(Axis::kX, 2, 4);
  CHECK(max_abs(u1 * z0 - z0 * u1) <= 1e-15);
  CHECK(max_abs(u1 * x2 - x2 * u1) <= 1e-15);
}

TEST_CASE("auxiliary depolarization matches dense Kraus operators") {
  std::mt19937_64 rng(17);
  for (double omega : {0.0, 0.37, 1.0}) {
    // Kraus completeness.
    ComplexMatrix sum = (1.0 - 3.0 * omega / 4.0) * identity(2);
    for (Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
      sum += (omega / 4.0) * pauli(axis).adjoint() * pauli(axis);
    }
    CHECK(max_abs(sum - identity(2)) <= 1e-14);
    for (std::size_t n : {1u, 2u}) {
      const auto dim = std::size_t{1} << (2 * n);
      const ComplexMatrix rho = random_density(dim, rng).matrix();
      CHECK(max_abs(depolarize_aux(rho, n, omega) - dense_depolarize(rho, n, omega)) <= 1e-14);
    }
  }
  const ComplexMatrix rho = random_density(16, rng).matrix();
  CHECK(max_abs(depolarize_aux(rho, 2, 0.0) - rho) <= 1e-12);
  // Omega = 1 fully mixes the auxiliaries of a product state.
  const ComplexMatrix res = random_density(4, rng).matrix();
  const ComplexMatrix aux = random_density(4, rng).matrix();
  const ComplexMatrix out = depolarize_aux(kron(res, aux), 2, 1.0);
  const std::vector<std::size_t> dims{2, 2, 2, 2};
  const std::vector<std::size_t> aux_sites{2, 3};
  const std::vector<std::size_t> res_sites{0, 1};
  CHECK(max_abs(partial_trace(out, dims, aux_sites) - identity(4) / 4.0) <= 1e-14);
  CHECK(max_abs(partial_trace(out, dims, res_sites) - res) <= 1e-14);
  CHECK_THROWS_AS(depolarize_aux(rho, 2, 1.2), Error);
}

TEST_CASE("index-factored reservoir map equals the dense joint superoperator") {
  const LindbladSpec spec = random_spec(2, 0.1, 18);
  const Superoperator p = propagator(build_liouvillian(spec, 0.2), 0.5);
  std::mt19937_64 rng(19);
  const ComplexMatrix joint = random_density(16, rng).matrix();
  // Dense oracle: Choi-free Kraus-free route through the identity on aux
  // operators, sum over aux matrix units.
  ComplexMatrix oracle = ComplexMatrix::Zero(16, 16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      ComplexMatrix block(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) block(i, j) = joint(i * 4 + a, j * 4 + b);
      const ComplexMatrix mapped = p.apply(block);
      ComplexMatrix unit = ComplexMatrix::Zero(4, 4);
      unit(a, b) = 1.0;
      oracle += kron(mapped, unit);
    }
  }
  CHECK(max_abs(EmbeddedReservoir::apply_reservoir_map(p, joint) - oracle) <= 1e-13);
}

TEST_CASE("embedded reservoir step order and invariants") {
  const LindbladSpec spec = random_spec(2, 0.1, 20);
  std::mt19937_64 rng(21);
  const DensityMatrix init = random_density(4, rng);
  const double eta = std::numbers::pi / 4.0;
  const double omega = 0.5;
  EmbeddedReservoir e(spec, 0.5, eta, omega, init);
  CHECK(e.joint_state().dim() == 16);
  CHECK(max_abs(e.reservoir_state().matrix() - init.matrix()) <= 1e-15);

  ComplexMatrix oracle = kron(init.matrix(), identity(4) / 4.0);
  const ComplexMatrix swaps = partial_swap_unitary(eta, 0, 2) * partial_swap_unitary(eta, 1, 2);
  for (double s : inputs(100, 22)) {
    const Superoperator p = propagator(build_liouvillian(spec, s), 0.5);
    oracle = EmbeddedReservoir::apply_reservoir_map(p, oracle);
    oracle = swaps * oracle * swaps.adjoint();
    oracle = hermitize_normalize(dense_depolarize(oracle, 2, omega));
    e.step(s);
    CHECK(max_abs(e.joint_state().matrix() - oracle) <= 1e-10);
    check_density(e.joint_state().matrix());
  }
  CHECK_THROWS_AS(e.step(2.0), Error);
}

TEST_CASE("embedded reservoir without coupling is the Markov reservoir") {
  const LindbladSpec spec = random_spec(2, 0.1, 23);
  std::mt19937_64 rng(24);
  const DensityMatrix init = random_density(4, rng);
  EmbeddedReservoir e(spec, 0.5, 0.0, 0.3, init);
  MarkovReservoir m(spec, 0.5, init);
  for (double s : inputs(100, 25)) {
    e.step(s);
    m.step(s);
    CHECK(max_abs(e.reservoir_state().matrix() - m.state().matrix()) <= 1e-10);
  }
}

TEST_CASE("fully depolarized auxiliaries give Markovian reservoir dynamics") {
  const LindbladSpec spec = random_spec(2, 0.1, 26);
  std::mt19937_64 rng(27);
  const double eta = std::numbers::pi / 4.0;
  EmbeddedReservoir e(spec, 0.5, eta, 1.0, random_density(4, rng));
  const auto seq = inputs(60, 28);
  for (std::size_t k = 0; k < 30; ++k) e.step(seq[k]);
  // Re-prepare (reservoir marginal) x I/4 and continue both.
  EmbeddedReservoir fresh(spec, 0.5, eta, 1.0, e.reservoir_state());
  for (std::size_t k = 30; k < seq.size(); ++k) {
    e.step(seq[k]);
    fresh.step(seq[k]);
    CHECK(max_abs(e.reservoir_state().matrix() - fresh.reservoir_state().matrix()) <= 1e-9);
  }
}

TEST_CASE("every model maps states to states") {
  const LindbladSpec spec = random_spec(2, 0.1, 29);
  std::mt19937_64 rng(30);
  std::vector<Reservoir> models;
  models.emplace_back(MarkovReservoir(spec, 10.0, random_density(4, rng)));
  models.emplace_back(ResidualReservoir(spec, 10.0, 0.4, 3, random_density(4, rng)));
  models.emplace_back(EmbeddedReservoir(spec, 0.5, 0.6, 0.2, random_density(4, rng)));
  for (Reservoir& m : models) {
    for (double s : inputs(100, 31)) {
      step(m, s);
      check_density(full_state(m).matrix());
      check_density(reservoir_state(m).matrix());
    }
    CHECK(reservoir_qubits(m) == 2);
  }
}

TEST_CASE("run_sequence washout and determinism") {
  const LindbladSpec spec = random_spec(2, 0.1, 32);
  std::mt19937_64 rng(33);
  const DensityMatrix init = random_density(4, rng);
  const auto seq = inputs(50, 34);
  const ObservableSet obs = ObservableSet::pauli_strings(2, true);

  Reservoir a = ResidualReservoir(spec, 10.0, 0.5, 4, init);
  Reservoir b = ResidualReservoir(spec, 10.0, 0.5, 4, init);
  const auto fa = run_sequence(a, seq, obs, 20);
  const auto fb = run_sequence(b, seq, obs, 20);
  REQUIRE(fa.size() == 30);
  for (std::size_t k = 0; k < fa.size(); ++k) {
    CHECK(fa[k].time_index == 20 + k);
    CHECK((fa[k].features.array() == fb[k].features.array()).all());
  }
  Reservoir c = MarkovReservoir(spec, 10.0, init);
  CHECK(run_sequence(c, seq, obs, seq.size() - 1).size() == 1);
  Reservoir d = MarkovReservoir(spec, 10.0, init);
  CHECK_THROWS_AS(run_sequence(d, {}, obs, 0), Error);
  CHECK_THROWS_AS(run_sequence(d, seq, obs, seq.size()), Error);
  CHECK_THROWS_AS(run_sequence(d, seq, ObservableSet::single_z(3), 0), Error);
}

TEST_CASE("washed-out features do not depend on the initial state") {
  const LindbladSpec spec = random_spec(3, 0.1, 35);
  std::mt19937_64 rng(36);
  const auto seq = inputs(1100, 37);
  const ObservableSet obs = ObservableSet::single_z(3);
  Reservoir a = MarkovReservoir(spec, 10.0, random_density(8, rng));
  Reservoir b = MarkovReservoir(spec, 10.0, random_density(8, rng));
  const auto fa = run_sequence(a, seq, obs, 1000);
  const auto fb = run_sequence(b, seq, obs, 1000);
  for (std::size_t k = 0; k < fa.size(); ++k) {
    CHECK((fa[k].features - fb[k].features).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("embedded features are measured on the reservoir qubits") {
  const LindbladSpec spec = random_spec(2, 0.1, 38);
  std::mt19937_64 rng(39);
  Reservoir e = EmbeddedReservoir(spec, 0.5, 0.7, 0.4, random_density(4, rng));
  const auto seq = inputs(10, 40);
  const ObservableSet obs = ObservableSet::pauli_strings(2, true);
  const auto f = run_sequence(e, seq, obs, 9);
  const FeatureRecord direct = measure(reservoir_state(e).matrix(), obs, 9);
  CHECK((f[0].features - direct.features).cwiseAbs().maxCoeff() <= 1e-15);
}
