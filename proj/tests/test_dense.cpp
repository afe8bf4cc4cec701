#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "oracle.hpp"
#include "qbat/dense.hpp"
#include "qbat/model.hpp"

using namespace qbat;
using Catch::Approx;

TEST_CASE("to_dense matches the Kronecker oracle") {
  SECTION("single-site X") {
    PauliSum s(1);
    s.add(PauliString::single(1, 'X', 0));
    HermitianOperator op = to_dense(s);
    REQUIRE(oracle::max_abs(op.matrix() - oracle::sigma('X')) == 0.0);
  }
  SECTION("three-site graph Hamiltonian") {
    PauliSum h = stabilizer_hamiltonian(3, 2);
    HermitianOperator op = to_dense(h);
    REQUIRE(oracle::max_abs(op.matrix() - oracle::dense_sum(h)) == 0.0);
    auto dec = op.spectral();
    std::vector<double> expected{-3, -1, -1, -1, 1, 1, 1, 3};
    for (int i = 0; i < 8; ++i)
      REQUIRE(dec->eigenvalues[i] == Approx(expected[i]).margin(1e-10));
  }
  SECTION("empty sum is the zero matrix") {
    PauliSum empty(2);
    HermitianOperator op = to_dense(empty);
    REQUIRE(oracle::max_abs(op.matrix()) == 0.0);
  }
  SECTION("non-Hermitian sums rejected") {
    PauliSum s(1);
    s.add(PauliString::single(1, 'X', 0), cplx(0, 1));
    REQUIRE_THROWS_AS(to_dense(s), ValidationError);
  }
  SECTION("site cap") {
    PauliSum s(15);
    s.add(PauliString::single(15, 'X', 0));
    REQUIRE_THROWS_AS(to_dense(s), ResourceError);
  }
}

TEST_CASE("spectral evolution") {
  int n = 4, k = 2;
  HermitianOperator h = to_dense(stabilizer_hamiltonian(n, k));
  QuantumState down = QuantumState::basis(n, (1ull << n) - 1);

  SECTION("t = 0 is the identity") {
    QuantumState same = evolve_spectral(h, down, 0.0);
    REQUIRE((same.vector() - down.vector()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("quarter period sends all-down to all-up") {
    QuantumState up = evolve_spectral(h, down, std::numbers::pi / 2);
    REQUIRE(std::abs(up.vector()(0)) == Approx(1.0).epsilon(1e-10));
  }
  SECTION("forward then backward") {
    QuantumState back = evolve_spectral(h, evolve_spectral(h, down, 0.83), -0.83);
    REQUIRE((back.vector() - down.vector()).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("matches the dense matrix exponential") {
    std::mt19937_64 rng(3);
    oracle::Vec v = oracle::random_state(n, rng);
    QuantumState psi = QuantumState::pure(n, v);
    double t = 0.37;
    QuantumState got = evolve_spectral(h, psi, t);
    oracle::Vec expected =
        oracle::expm(cplx(0, -t) * oracle::dense_sum(stabilizer_hamiltonian(n, k))) * v;
    REQUIRE((got.vector() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("energy is conserved") {
    std::mt19937_64 rng(4);
    QuantumState psi = QuantumState::pure(n, oracle::random_state(n, rng));
    double e0 = expectation(h, psi);
    for (double t : {0.3, 1.1, 2 * std::numbers::pi})
      REQUIRE(expectation(h, evolve_spectral(h, psi, t)) ==
              Approx(e0).margin(1e-10));
  }
}

TEST_CASE("product-formula evolution") {
  SECTION("single X generator rotates a spin") {
    auto g = PauliString::single(1, 'X', 0);
    QuantumState down = QuantumState::basis(1, 1);
    QuantumState got =
        evolve_stabilizer_product({g}, down, std::numbers::pi / 2);
    REQUIRE(std::abs(got.vector()(0) - cplx(0, -1)) < 1e-12);
  }
  SECTION("cross-engine agreement on random states") {
    std::mt19937_64 rng(17);
    for (int n = 3; n <= 7; ++n)
      for (int k = 2; k <= k_max(n); k += 2) {
        HermitianOperator h = to_dense(stabilizer_hamiltonian(n, k));
        auto gens = stabilizer_generators(n, k);
        QuantumState psi = QuantumState::pure(n, oracle::random_state(n, rng));
        double t = 0.7;
        QuantumState a = evolve_stabilizer_product(gens, psi, t);
        QuantumState b = evolve_spectral(h, psi, t);
        REQUIRE((a.vector() - b.vector()).cwiseAbs().maxCoeff() < 1e-10);
      }
  }
  SECTION("full period gives (-1)^N on the charger's own ground state") {
    int n = 5, k = 2;
    QuantumState psi = ground_state(BatterySpec{RegularBattery{k}}, n);
    QuantumState got = evolve_stabilizer_product(stabilizer_generators(n, k),
                                                 psi, std::numbers::pi);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    REQUIRE((got.vector() - sign * psi.vector()).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("non-commuting generators rejected") {
    std::vector<PauliString> bad = {PauliString::single(1, 'X', 0),
                                    PauliString::single(1, 'Z', 0)};
    REQUIRE_THROWS_AS(
        evolve_stabilizer_product(bad, QuantumState::basis(1, 0), 0.1),
        PreconditionError);
  }
}

TEST_CASE("expectation values") {
  QuantumState down = QuantumState::basis(3, 0b111);
  REQUIRE(expectation(local_battery(3, Axis::Z), down) == Approx(-3.0));

  QuantumState g = ground_state(BatterySpec{RegularBattery{2}}, 4);
  REQUIRE(expectation(stabilizer_hamiltonian(4, 2), g) == Approx(-4.0));

  // maximally mixed state, traceless operator
  Mat mixed = Mat::Identity(8, 8) / 8.0;
  QuantumState rho = QuantumState::density(3, mixed);
  REQUIRE(expectation(local_battery(3, Axis::Y), rho) == Approx(0.0).margin(1e-14));

  PauliSum wrong(2);
  wrong.add(PauliString::single(2, 'Z', 0));
  REQUIRE_THROWS_AS(expectation(wrong, down), DimensionError);
}

TEST_CASE("partial trace over the trailing sites") {
  SECTION("m = N returns the full projector") {
    QuantumState psi = ground_state(BatterySpec{LocalBattery{Axis::X}}, 3);
    QuantumState rho = partial_trace_block(psi, 3);
    oracle::Mat proj = psi.vector() * psi.vector().adjoint();
    REQUIRE(oracle::max_abs(rho.matrix() - proj) < 1e-14);
  }
  SECTION("product state reduces to a pure qubit") {
    QuantumState psi = ground_state(BatterySpec{LocalBattery{Axis::Y}}, 4);
    QuantumState rho = partial_trace_block(psi, 1);
    REQUIRE((rho.matrix() * rho.matrix()).trace().real() == Approx(1.0));
  }
  SECTION("entangled pair reduces to the maximally mixed qubit") {
    Vec bell(4);
    bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    QuantumState rho = partial_trace_block(QuantumState::pure(2, bell), 1);
    REQUIRE(oracle::max_abs(rho.matrix() - oracle::Mat::Identity(2, 2) / 2.0) <
            1e-14);
  }
  SECTION("m out of range") {
    QuantumState psi = QuantumState::basis(2, 0);
    REQUIRE_THROWS_AS(partial_trace_block(psi, 0), ValidationError);
    REQUIRE_THROWS_AS(partial_trace_block(psi, 3), ValidationError);
  }
}

TEST_CASE("state validation and binary dump") {
  Vec not_normalized(2);
  not_normalized << 1.0, 1.0;
  REQUIRE_THROWS_AS(QuantumState::pure(1, not_normalized), NumericalError);

  Mat bad_trace = Mat::Identity(2, 2);
  REQUIRE_THROWS_AS(QuantumState::density(1, bad_trace), NumericalError);

  QuantumState psi = ground_state(BatterySpec{LocalBattery{Axis::X}}, 2);
  auto path = std::filesystem::temp_directory_path() / "qbat_state_dump.bin";
  psi.dump_binary(path.string());
  REQUIRE(std::filesystem::file_size(path) == 8 + 4 + 4 + 4 * 16);
  std::filesystem::remove(path);
}
