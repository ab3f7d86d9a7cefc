#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace majbound;
using namespace majbound::quantum;
using Catch::Approx;

namespace {

DensityState z1_state() {
    ComplexVector z1(2);
    z1 << Complex(1.0, 0.0), Complex(0.0, 0.0);
    return DensityState::pure(z1);
}

} // namespace

TEST_CASE("measure_probs on an eigenstate", "[quantum]") {
    Observable z(testsupport::z_basis(), "Z");
    auto p = measure_probs(z, z1_state());
    REQUIRE(p[0] == Approx(1.0).margin(1e-12));
    REQUIRE(p[1] == Approx(0.0).margin(1e-12));
}

TEST_CASE("measure_probs in a rotated basis", "[quantum]") {
    Observable x(testsupport::x_theta_basis(M_PI / 2.0), "X");
    auto p = measure_probs(x, z1_state());
    REQUIRE(p[0] == Approx(0.5).margin(1e-12));
    REQUIRE(p[1] == Approx(0.5).margin(1e-12));
}

TEST_CASE("uniform POVM ignores the state", "[quantum]") {
    std::vector<ComplexMatrix> halves{ComplexMatrix::Identity(2, 2) / 2.0,
                                      ComplexMatrix::Identity(2, 2) / 2.0};
    Povm povm(halves, "uniform");
    oracle::SeededRng rng(5);
    auto p = measure_probs(povm, oracle::sample_pure_state(rng, 2));
    REQUIRE(p[0] == Approx(0.5).margin(1e-12));
    REQUIRE(p[1] == Approx(0.5).margin(1e-12));
}

TEST_CASE("subset_operator basics", "[quantum]") {
    Measurement z = Observable(testsupport::z_basis(), "Z");
    REQUIRE(spectral::max_abs(subset_operator(z, {1, 2}) - ComplexMatrix::Identity(2, 2)) < 1e-12);

    ComplexMatrix first = subset_operator(z, {1});
    REQUIRE(first(0, 0).real() == Approx(1.0).margin(1e-12));
    REQUIRE(std::abs(first(1, 1)) < 1e-12);

    REQUIRE(spectral::max_abs(subset_operator(z, {})) == 0.0);

    REQUIRE_THROWS_AS(subset_operator(z, {3}), error);
    try {
        subset_operator(z, {1, 1});
        FAIL("expected duplicate_index");
    } catch (const error& e) {
        REQUIRE(e.code() == errc::duplicate_index);
    }
}

TEST_CASE("subset_operator over POVM effects", "[quantum]") {
    std::vector<ComplexMatrix> effects;
    for (int k = 0; k < 3; ++k) {
        const double a = k * M_PI / 3.0;
        ComplexVector v(2);
        v << Complex(std::cos(a), 0.0), Complex(std::sin(a), 0.0);
        effects.push_back(ComplexMatrix(2.0 / 3.0 * (v * v.adjoint())));
    }
    Measurement trine = Povm(effects, "trine");
    REQUIRE(spectral::max_abs(ComplexMatrix(subset_operator(trine, {1, 2, 3}) -
                                            ComplexMatrix::Identity(2, 2))) < 1e-12);
    REQUIRE_THROWS_AS(subset_operator(trine, {4}), error);
}

TEST_CASE("partial_sum_check worked values", "[quantum]") {
    Measurement z = Observable(testsupport::z_basis(), "Z");
    DensityState state = z1_state();
    REQUIRE(partial_sum_check(z, state, {1, 2}) == Approx(1.0).margin(1e-12));

    DensityState mixed(RealVector::Constant(2, 0.5), ComplexMatrix::Identity(2, 2) / 2.0);
    REQUIRE(partial_sum_check(z, mixed, {1}) == Approx(0.5).margin(1e-12));

    Measurement x = Observable(testsupport::x_theta_basis(M_PI / 3.0), "X");
    // Direct inner product: |<x_1|z_1>|^2 = cos^2(pi/6) = 3/4.
    REQUIRE(partial_sum_check(x, state, {1}) == Approx(0.75).margin(1e-12));
}

TEST_CASE("partial sums agree with measured prefix sums", "[quantum][property]") {
    oracle::SeededRng rng(17);
    for (int dim = 2; dim <= 6; ++dim) {
        for (int rep = 0; rep < 20; ++rep) {
            Measurement obs = Observable(oracle::sample_unitary(rng, dim));
            DensityState state = oracle::sample_pure_state(rng, dim);
            auto probs = measure_probs(obs, state);
            std::vector<int> indices;
            double expected = 0.0;
            for (int i = 1; i <= dim; ++i) {
                if (rng.raw() % 2 == 0) {
                    indices.push_back(i);
                    expected += probs[i - 1];
                }
            }
            REQUIRE(partial_sum_check(obs, state, indices) == Approx(expected).margin(1e-10));
        }
    }
}

TEST_CASE("measured distributions sum to one", "[quantum][property]") {
    oracle::SeededRng rng(18);
    for (int rep = 0; rep < 30; ++rep) {
        const int dim = 2 + static_cast<int>(rng.raw() % 3);
        Measurement obs = Observable(oracle::sample_unitary(rng, dim));
        RealVector lambda(dim);
        double total = 0.0;
        for (int i = 0; i < dim; ++i) {
            lambda(i) = rng.uniform();
            total += lambda(i);
        }
        lambda /= total;
        std::sort(lambda.data(), lambda.data() + dim, std::greater<>());
        auto p = measure_probs(obs, oracle::sample_mixed_state(rng, dim, lambda));
        double sum = 0.0;
        for (int i = 0; i < p.size(); ++i) sum += p[i];
        REQUIRE(sum == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("type validation", "[quantum]") {
    // Non-unitary basis.
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2) * 1.1;
    REQUIRE_THROWS_AS(Observable(bad), error);

    // POVM that does not resolve the identity.
    std::vector<ComplexMatrix> short_effects{ComplexMatrix::Identity(2, 2) / 2.0};
    REQUIRE_THROWS_AS(Povm(short_effects), error);

    // Spectrum that does not sum to one.
    RealVector bad_spec(2);
    bad_spec << 0.9, 0.2;
    REQUIRE_THROWS_AS(DensityState(bad_spec), error);

    // Probability entries below the rounding floor are rejected...
    RealVector neg(2);
    neg << 1.0 + 1e-9, -1e-9;
    REQUIRE_THROWS_AS(ProbabilityVector(neg), error);
    // ...but entries within it are clamped to zero.
    RealVector tiny(2);
    tiny << 1.0 + 1e-13, -1e-13;
    ProbabilityVector clamped(tiny);
    REQUIRE(clamped[1] == 0.0);

    // measure_probs needs the full density matrix.
    Observable z(testsupport::z_basis());
    RealVector spec(2);
    spec << 1.0, 0.0;
    try {
        measure_probs(z, DensityState(spec));
        FAIL("expected missing_density_matrix");
    } catch (const error& e) {
        REQUIRE(e.code() == errc::missing_density_matrix);
    }

    // Dimension mismatch.
    oracle::SeededRng rng(3);
    REQUIRE_THROWS_AS(measure_probs(z, oracle::sample_pure_state(rng, 3)), error);
}
