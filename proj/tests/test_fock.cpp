#include <catch2/catch_amalgamated.hpp>

#include "scartower/fock.hpp"
#include "scartower/models.hpp"
#include "scartower/rng.hpp"
#include "test_utils.hpp"

using namespace scartower;

TEST_CASE("sparse application") {
  SECTION("creation fills an empty site") {
    const SparseState out = apply(Operator::creation(0), SparseState::vacuum(3));
    REQUIRE(out.amplitudes().size() == 1);
    CHECK(out.amplitude(0b001) == Complex(1.0));
  }
  SECTION("hard-core constraint") {
    const SparseState occupied = SparseState::basis_state(3, 0b001);
    CHECK(apply(Operator::creation(0), occupied).empty());
  }
  SECTION("particle-number eigenstates") {
    const SparseState w2 = dicke_state(5, 2);
    const SparseState out = apply(Operator::total_number(5), w2);
    CHECK((out - 2.0 * w2).norm() < 1e-12);
  }
  SECTION("agrees with the dense oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
      const Operator a = testing::random_operator(rng, 6, 4, 3);
      SparseState psi(6);
      for (int b = 0; b < 12; ++b)
        psi.add(static_cast<std::uint64_t>(rng.uniform_int(0, 63)), rng.coefficient());
      if (psi.empty()) continue;
      const Eigen::VectorXcd dense = to_matrix(a, 6) * psi.to_dense();
      const Eigen::VectorXcd sparse = apply(a, psi).to_dense();
      CHECK((dense - sparse).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("Dicke states") {
  SECTION("W state on three sites") {
    const SparseState w = dicke_state(3, 1);
    REQUIRE(w.amplitudes().size() == 3);
    for (std::uint64_t bits : {0b001ull, 0b010ull, 0b100ull})
      CHECK(std::abs(w.amplitude(bits) - Complex(1.0 / std::sqrt(3.0))) < 1e-14);
  }
  SECTION("top of the tower") {
    const SparseState top = dicke_state(2, 2);
    REQUIRE(top.amplitudes().size() == 1);
    CHECK(top.amplitude(0b11) == Complex(1.0));
  }
  SECTION("six strings at half filling of four sites") {
    const SparseState half = dicke_state(4, 2);
    REQUIRE(half.amplitudes().size() == 6);
    for (const auto& [bits, amp] : half.amplitudes())
      CHECK(std::abs(amp - Complex(1.0 / std::sqrt(6.0))) < 1e-14);
  }
  SECTION("matches the normalized creation power") {
    for (int p = 0; p <= 4; ++p) {
      const SparseState direct = dicke_state(6, p);
      const SparseState via_tower = tower_state(dicke_spec(6), p, 6);
      CHECK((direct - via_tower).norm() < 1e-12);
    }
  }
  SECTION("rejects invalid particle numbers") {
    CHECK_THROWS_AS(dicke_state(4, 5), InvalidParticleNumber);
    CHECK_THROWS_AS(dicke_state(4, -1), InvalidParticleNumber);
  }
}

TEST_CASE("tower states") {
  SECTION("bond-pair tower on the periodic six-chain") {
    const TowerSpec q = s2_spec(6);
    const SparseState q3 = tower_state(q, 3, 6);
    // three disjoint bonds cover the ring: the only three-pair state
    REQUIRE(q3.amplitudes().size() == 1);
    CHECK(std::abs(q3.amplitude(0b111111) - Complex(1.0)) < 1e-12);
    try {
      tower_state(q, 4, 6);
      FAIL("expected truncation");
    } catch (const TowerTruncated& e) {
      CHECK(e.max_p == 3);
    }
    CHECK(tower_end(q, 6, 10) == 3);
  }
  SECTION("definite charge towers carry c*p particles") {
    for (int n : {6, 8}) {
      const TowerSpec q = s2_spec(n);
      const auto c = charge_of(q);
      REQUIRE(c);
      for (int p = 1; p <= n / 2; ++p) {
        const SparseState psi = tower_state(q, p, n);
        const SparseState np = apply(Operator::total_number(n), psi);
        CHECK((np - Complex(static_cast<double>(*c * p)) * psi).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("Schmidt coefficients") {
  SECTION("frozen binomial values") {
    CHECK(std::abs(schmidt_coeff(4, 2, 2, 1) - std::sqrt(2.0 / 3.0)) < 1e-14);
    CHECK(std::abs(schmidt_coeff(4, 2, 2, 0) - std::sqrt(1.0 / 6.0)) < 1e-14);
  }
  SECTION("normalization") {
    for (int n : {6, 9}) {
      for (int x = 1; x < n; ++x) {
        for (int p = 0; p <= n; ++p) {
          double total = 0.0;
          for (int l = std::max(0, p - (n - x)); l <= std::min(x, p); ++l)
            total += schmidt_coeff(n, x, p, l) * schmidt_coeff(n, x, p, l);
          CHECK(std::abs(total - 1.0) < 1e-12);
        }
      }
    }
  }
  SECTION("reproduces the actual Schmidt spectrum") {
    // Singular values of the Dicke state across a contiguous cut.
    for (int n : {6, 8, 10}) {
      for (int p : {1, 2, 3}) {
        const int x = n / 2;
        const SparseState psi = dicke_state(n, p);
        Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(1 << x, 1 << (n - x));
        for (const auto& [bits, amp] : psi.amplitudes()) {
          const auto row = static_cast<Eigen::Index>(bits & ((1ull << x) - 1));
          const auto col = static_cast<Eigen::Index>(bits >> x);
          coeffs(row, col) = amp;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeffs);
        std::vector<double> singular(svd.singularValues().data(),
                                     svd.singularValues().data() + svd.singularValues().size());
        std::vector<double> expected;
        for (int l = std::max(0, p - (n - x)); l <= std::min(x, p); ++l)
          expected.push_back(schmidt_coeff(n, x, p, l));
        std::sort(expected.rbegin(), expected.rend());
        expected.resize(singular.size(), 0.0);
        for (std::size_t i = 0; i < singular.size(); ++i)
          CHECK(std::abs(singular[i] - expected[i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("reduced entropy") {
  SECTION("product state has none") {
    CHECK(reduced_entropy(SparseState::vacuum(6), {0, 1, 2}) < 1e-14);
  }
  SECTION("W state across the half cut") {
    const double s = reduced_entropy(dicke_state(4, 1), {0, 1});
    CHECK(std::abs(s - std::log(2.0)) < 1e-12);
  }
  SECTION("maximally entangled pair") {
    SparseState bell(2);
    bell.add(0b00, Complex(1.0 / std::sqrt(2.0)));
    bell.add(0b11, Complex(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(reduced_entropy(bell, {0}) - std::log(2.0)) < 1e-12);
  }
  SECTION("matches the Schmidt-coefficient formula") {
    for (int p : {1, 2, 3}) {
      const double s = reduced_entropy(dicke_state(8, p), {0, 1, 2, 3});
      double expect = 0.0;
      for (int l = 0; l <= std::min(4, p); ++l) {
        const double f2 = std::pow(schmidt_coeff(8, 4, p, l), 2.0);
        if (f2 > 1e-14) expect -= f2 * std::log(f2);
      }
      CHECK(std::abs(s - expect) < 1e-10);
    }
  }
  SECTION("subset cap") {
    CHECK_THROWS_AS(reduced_entropy(SparseState::vacuum(20), std::vector<int>(13, 0), 12),
                    SubsetTooLarge);
  }
}

TEST_CASE("eigenstate checks") {
  SECTION("number operator on Dicke states") {
    for (int p = 0; p <= 4; ++p) {
      const auto chk = eigen_check(Operator::total_number(6), dicke_state(6, p));
      CHECK(std::abs(chk.eigenvalue - Complex(static_cast<double>(p))) < 1e-12);
      CHECK(chk.residual < 1e-12);
    }
  }
  SECTION("zero-momentum magnon under hopping") {
    const auto chk = eigen_check(hopping_chain(6, true), dicke_state(6, 1));
    CHECK(std::abs(chk.eigenvalue - Complex(2.0)) < 1e-12);
    CHECK(chk.residual < 1e-12);
  }
  SECTION("two magnons scatter") {
    const auto chk = eigen_check(hopping_chain(6, true), dicke_state(6, 2));
    CHECK(chk.residual > 1e-6);
  }
}
