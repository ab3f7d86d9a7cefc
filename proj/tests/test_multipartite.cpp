#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace majbound;
using namespace majbound::multipartite;
using quantum::Observable;
using Catch::Approx;

namespace {

Observable z2() { return Observable(testsupport::z_basis(), "Z"); }
Observable x_at(double theta) { return Observable(testsupport::x_theta_basis(theta), "X"); }

PureTensorState random_state(oracle::SeededRng& rng, const std::vector<int>& dims) {
    return oracle::sample_pure_tensor(rng, dims);
}

std::vector<Observable> random_observables(oracle::SeededRng& rng, const std::vector<int>& dims) {
    std::vector<Observable> out;
    for (int d : dims) out.emplace_back(oracle::sample_unitary(rng, d));
    return out;
}

} // namespace

TEST_CASE("unfold of a matrix-shaped tensor", "[multipartite]") {
    TensorC t({2, 2});
    t.at({0, 0}) = Complex(1, 0);
    t.at({0, 1}) = Complex(2, 0);
    t.at({1, 0}) = Complex(3, 0);
    t.at({1, 1}) = Complex(4, 0);
    ComplexMatrix m1 = unfold(t, 1);
    REQUIRE(m1(0, 0).real() == 1.0);
    REQUIRE(m1(0, 1).real() == 2.0);
    REQUIRE(m1(1, 0).real() == 3.0);
    REQUIRE(m1(1, 1).real() == 4.0);
    ComplexMatrix m2 = unfold(t, 2);
    REQUIRE(spectral::max_abs(ComplexMatrix(m2 - m1.transpose())) < 1e-15);
    REQUIRE_THROWS_AS(unfold(t, 3), error);
}

TEST_CASE("unfold of the GHZ tensor", "[multipartite]") {
    auto ghz = testsupport::ghz_state();
    ComplexMatrix m = unfold(ghz.tensor(), 1);
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 4);
    REQUIRE(m(0, 0).real() == Approx(r));
    REQUIRE(m(1, 3).real() == Approx(r));
    REQUIRE(std::abs(m(0, 1)) + std::abs(m(0, 2)) + std::abs(m(0, 3)) < 1e-15);
    REQUIRE(std::abs(m(1, 0)) + std::abs(m(1, 1)) + std::abs(m(1, 2)) < 1e-15);
}

TEST_CASE("hosvd of a product state", "[multipartite]") {
    Eigen::VectorXcd e0(2);
    e0 << Complex(1, 0), Complex(0, 0);
    auto psi = testsupport::product_state({e0, e0, e0});
    auto h = hosvd(psi);
    REQUIRE(std::abs(h.core.flat()[0]) == Approx(1.0).margin(1e-12));
    for (std::size_t f = 1; f < h.core.size(); ++f) {
        REQUIRE(std::abs(h.core.flat()[f]) < 1e-10);
    }
    for (const auto& sigma : h.mode_singular_values) {
        REQUIRE(sigma(0) == Approx(1.0).margin(1e-12));
        REQUIRE(sigma(1) == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("hosvd of the Bell state", "[multipartite]") {
    auto h = hosvd(testsupport::bell_state());
    const double r = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < 2; ++k) {
        REQUIRE(h.mode_singular_values[k](0) == Approx(r).margin(1e-10));
        REQUIRE(h.mode_singular_values[k](1) == Approx(r).margin(1e-10));
    }
}

TEST_CASE("bipartite core is diagonal with Schmidt coefficients", "[multipartite]") {
    oracle::SeededRng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        auto psi = random_state(rng, {2, 2});
        auto h = hosvd(psi);
        auto svd = spectral::svd(unfold(psi.tensor(), 1));
        REQUIRE(std::abs(h.core.at({0, 1})) < 1e-9);
        REQUIRE(std::abs(h.core.at({1, 0})) < 1e-9);
        REQUIRE(std::abs(h.core.at({0, 0})) == Approx(svd.singular_values(0)).margin(1e-9));
        REQUIRE(std::abs(h.core.at({1, 1})) == Approx(svd.singular_values(1)).margin(1e-9));
    }
}

TEST_CASE("hosvd invariants across shapes", "[multipartite][property]") {
    // Reconstruction and all-orthogonality are enforced inside hosvd; this
    // sweep also pins the ordering and the reduced-spectrum match.
    oracle::SeededRng rng(8);
    for (const auto& dims :
         std::vector<std::vector<int>>{{2, 2}, {2, 2, 2}, {3, 3}, {2, 3, 2}}) {
        for (int rep = 0; rep < 40; ++rep) {
            auto psi = random_state(rng, dims);
            auto h = hosvd(psi);
            for (int k = 1; k <= psi.order(); ++k) {
                const RealVector& sigma = h.mode_singular_values[k - 1];
                for (Eigen::Index i = 1; i < sigma.size(); ++i) {
                    REQUIRE(sigma(i) <= sigma(i - 1) + 1e-12);
                }
                RealVector spectrum = reduced_density(psi, k).spectrum();
                for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
                    REQUIRE(spectrum(i) == Approx(sigma(i) * sigma(i)).margin(1e-9));
                }
            }
        }
    }
}

TEST_CASE("reduced densities of the named states", "[multipartite]") {
    Eigen::VectorXcd e0(2);
    e0 << Complex(1, 0), Complex(0, 0);
    auto product = testsupport::product_state({e0, e0});
    REQUIRE(reduced_density(product, 1).spectrum()(0) == Approx(1.0).margin(1e-12));

    auto bell = reduced_density(testsupport::bell_state(), 1);
    REQUIRE(spectral::max_abs(ComplexMatrix(bell.matrix() - ComplexMatrix::Identity(2, 2) / 2.0)) <
            1e-12);

    auto ghz = testsupport::ghz_state();
    for (int k = 1; k <= 3; ++k) {
        auto rho = reduced_density(ghz, k);
        REQUIRE(spectral::max_abs(ComplexMatrix(rho.matrix() - ComplexMatrix::Identity(2, 2) / 2.0)) <
                1e-12);
    }
}

TEST_CASE("joint_prob worked cases", "[multipartite]") {
    Eigen::VectorXcd e0(2);
    e0 << Complex(1, 0), Complex(0, 0);
    auto product = testsupport::product_state({e0, e0});
    auto p0 = joint_prob(product, {z2(), z2()});
    REQUIRE(p0.tensor().at({0, 0}) == Approx(1.0).margin(1e-12));

    auto bell = testsupport::bell_state();
    auto pzz = joint_prob(bell, {z2(), z2()});
    REQUIRE(pzz.tensor().at({0, 0}) == Approx(0.5).margin(1e-12));
    REQUIRE(pzz.tensor().at({1, 1}) == Approx(0.5).margin(1e-12));
    REQUIRE(pzz.tensor().at({0, 1}) == Approx(0.0).margin(1e-12));

    // Z (x) X_{pi/4}: entries (c^2, s^2; s^2, c^2)/2 with c = cos(pi/8).
    auto pzx = joint_prob(bell, {z2(), x_at(M_PI / 4.0)});
    const double c2 = std::pow(std::cos(M_PI / 8.0), 2);
    REQUIRE(pzx.tensor().at({0, 0}) == Approx(c2 / 2.0).margin(1e-12));
    REQUIRE(pzx.tensor().at({0, 1}) == Approx((1.0 - c2) / 2.0).margin(1e-12));
    REQUIRE(pzx.tensor().at({1, 0}) == Approx((1.0 - c2) / 2.0).margin(1e-12));
    REQUIRE(pzx.tensor().at({1, 1}) == Approx(c2 / 2.0).margin(1e-12));

    REQUIRE_THROWS_AS(joint_prob(bell, {z2()}), error);
    REQUIRE_THROWS_AS(joint_prob(bell, {z2(), Observable(testsupport::z_basis(3))}), error);
}

TEST_CASE("marginals and comarginals", "[multipartite]") {
    auto bell = testsupport::bell_state();
    auto pzz = joint_prob(bell, {z2(), z2()});
    auto m = marginal(pzz, 1);
    REQUIRE(m[0] == Approx(0.5).margin(1e-12));
    REQUIRE(m[1] == Approx(0.5).margin(1e-12));

    // Product states factor into marginal x comarginal.
    Eigen::VectorXcd a(2), b(2);
    a << Complex(0.8, 0.0), Complex(0.6, 0.0);
    b << Complex(0.6, 0.0), Complex(-0.8, 0.0);
    auto product = testsupport::product_state({a, b});
    auto p = joint_prob(product, {z2(), z2()});
    auto ma = marginal(p, 1);
    auto mb = comarginal(p, 1);
    REQUIRE(ma[0] == Approx(0.64).margin(1e-12));
    REQUIRE(mb[0] == Approx(0.36).margin(1e-12));
    double sum = 0.0;
    for (int i = 0; i < mb.size(); ++i) sum += mb[i];
    REQUIRE(sum == Approx(1.0).margin(1e-12));
}

TEST_CASE("mutual information worked cases", "[multipartite]") {
    auto bell = testsupport::bell_state();
    auto pzz = unfolded_joint(joint_prob(bell, {z2(), z2()}), 1);
    REQUIRE(mutual_information(pzz) == Approx(1.0).margin(1e-12));

    auto pzx = unfolded_joint(joint_prob(bell, {z2(), x_at(M_PI / 4.0)}), 1);
    // 1 - H_bin(cos^2 pi/8), evaluated directly.
    REQUIRE(mutual_information(pzx) == Approx(0.3991239633071439).margin(1e-12));

    Eigen::VectorXcd a(2), b(2);
    a << Complex(0.8, 0.0), Complex(0.6, 0.0);
    b << Complex(0.6, 0.0), Complex(-0.8, 0.0);
    auto product = unfolded_joint(joint_prob(testsupport::product_state({a, b}), {z2(), z2()}), 1);
    REQUIRE(mutual_information(product) == Approx(0.0).margin(1e-12));
    REQUIRE(correlation_distance(product) == Approx(0.0).margin(1e-12));
    REQUIRE(lemma2_bound(product) == Approx(0.0).margin(1e-12));
}

TEST_CASE("correlation distance and lemma2 bound on the Bell joint", "[multipartite]") {
    auto pzz = unfolded_joint(joint_prob(testsupport::bell_state(), {z2(), z2()}), 1);
    REQUIRE(correlation_distance(pzz) == Approx(1.0).margin(1e-12));
    // (1/(2 ln 2)) (1/2 - 1/4) with singular values (1/2, 1/2).
    REQUIRE(lemma2_bound(pzz) == Approx(0.1803368801111204).margin(1e-12));
}

TEST_CASE("information chain on random joints", "[multipartite][property]") {
    oracle::SeededRng rng(9);
    for (int rep = 0; rep < 60; ++rep) {
        auto psi = random_state(rng, {2, 2, 2});
        auto obs = random_observables(rng, {2, 2, 2});
        auto joint = joint_prob(psi, obs);
        for (int k = 1; k <= 3; ++k) {
            RealMatrix unfolded = unfolded_joint(joint, k);
            const double info = mutual_information(unfolded);
            const double dist = correlation_distance(unfolded);
            const double lemma = lemma2_bound(unfolded);
            const double pinsker = kInvTwoLn2 * dist * dist;
            REQUIRE(info >= pinsker - 1e-10);
            REQUIRE(pinsker >= lemma - 1e-10);

            // Rank-one approximation inequality behind the lemma.
            RealVector p = unfolded.rowwise().sum();
            RealVector q = unfolded.colwise().sum().transpose();
            const double residual = (unfolded - p * q.transpose()).squaredNorm();
            const double sigma1 = spectral::top_singular_value(unfolded);
            REQUIRE(residual >= unfolded.squaredNorm() - sigma1 * sigma1 - 1e-10);
        }
    }
}

TEST_CASE("marginal majorization by squared singular values", "[multipartite][property]") {
    Eigen::VectorXcd e0(2);
    e0 << Complex(1, 0), Complex(0, 0);
    auto product = testsupport::product_state({e0, e0});
    REQUIRE(marginal_majorization_check(product, 1, x_at(M_PI / 3.0)));

    REQUIRE(marginal_majorization_check(testsupport::bell_state(), 1, x_at(M_PI / 5.0)));

    oracle::SeededRng rng(10);
    for (int rep = 0; rep < 100; ++rep) {
        auto psi = random_state(rng, {2, 2, 2});
        auto obs = random_observables(rng, {2, 2, 2});
        for (int k = 1; k <= 3; ++k) {
            REQUIRE(marginal_majorization_check(psi, k, obs[static_cast<std::size_t>(k - 1)]));
        }
    }
}

TEST_CASE("prop2 identity on special states", "[multipartite]") {
    Eigen::VectorXcd a(2), b(2);
    a << Complex(0.8, 0.0), Complex(0.6, 0.0);
    b << Complex(0.6, 0.0), Complex(-0.8, 0.0);
    auto product = testsupport::product_state({a, b});
    auto rec = prop2_identity(product, z2(), z2(), x_at(M_PI / 4.0), x_at(M_PI / 4.0));
    REQUIRE(rec.i_ab == Approx(0.0).margin(1e-10));
    REQUIRE(rec.lhs == Approx(rec.h_x + rec.h_y).margin(1e-10));

    // Bell with aligned partners: conditioning removes all uncertainty.
    auto bell = testsupport::bell_state();
    auto aligned = prop2_identity(bell, z2(), z2(), x_at(M_PI / 4.0), x_at(M_PI / 4.0));
    REQUIRE(aligned.lhs == Approx(0.0).margin(1e-9));
    REQUIRE(aligned.rhs == Approx(0.0).margin(1e-9));
    REQUIRE(aligned.i_ab == Approx(2.0).margin(1e-9));
}

TEST_CASE("prop2 reduction matches the binary-entropy form", "[multipartite]") {
    // Rotating the partners by alpha and beta leaves
    // H(X)+H(Y) - I_AB = H_bin(cos^2 a/2) + H_bin(cos^2 b/2) on the Bell state.
    auto bell = testsupport::bell_state();
    for (double alpha : {0.0, 0.3, 1.1}) {
        for (double beta : {0.0, 0.7}) {
            Observable za = z2();
            Observable zb(testsupport::x_theta_basis(alpha));  // Z rotated by alpha
            Observable xa = x_at(M_PI / 4.0);
            Observable xb(testsupport::x_theta_basis(M_PI / 4.0 + beta));
            auto rec = prop2_identity(bell, za, zb, xa, xb);
            const double expected = entropic::binary_entropy(std::pow(std::cos(alpha / 2.0), 2)) +
                                    entropic::binary_entropy(std::pow(std::cos(beta / 2.0), 2));
            REQUIRE(rec.rhs == Approx(expected).margin(1e-9));
            REQUIRE(rec.lhs == Approx(expected).margin(1e-9));
        }
    }
}

TEST_CASE("entangled states with nonaligned bases keep I_AB positive", "[multipartite]") {
    auto bell = testsupport::bell_state();
    auto rec = prop2_identity(bell, z2(), Observable(testsupport::x_theta_basis(0.9)),
                              x_at(0.4), Observable(testsupport::x_theta_basis(1.3)));
    REQUIRE(rec.i_ab > 1e-6);

    oracle::SeededRng rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        // Entangle by hand: amplitudes biased towards the diagonal.
        TensorC t({2, 2});
        t.at({0, 0}) = Complex(0.8, 0.1);
        t.at({1, 1}) = Complex(0.5, -0.2);
        t.at({0, 1}) = Complex(0.05 * rng.gaussian(), 0.05 * rng.gaussian());
        double norm = 0.0;
        for (auto& v : t.flat()) norm += std::norm(v);
        for (auto& v : t.flat()) v /= std::sqrt(norm);
        PureTensorState psi(std::move(t));
        auto r = prop2_identity(psi, z2(), z2(), x_at(0.7), x_at(0.7));
        REQUIRE(r.i_ab > 1e-6);
    }
}

TEST_CASE("prop2 and corollary2 identities hold on random inputs", "[multipartite][property]") {
    oracle::SeededRng rng(11);
    for (int rep = 0; rep < 60; ++rep) {
        auto pair = random_state(rng, {2, 2});
        auto obs = random_observables(rng, {2, 2, 2, 2});
        auto rec = prop2_identity(pair, obs[0], obs[1], obs[2], obs[3]);
        REQUIRE(rec.residual <= 1e-9);
        REQUIRE(rec.i_ab >= rec.lemma_lower - 1e-10);

        auto triple = random_state(rng, {2, 2, 2});
        auto obs3 = random_observables(rng, {2, 2, 2});
        auto rec3 = corollary2_identity(triple, obs3[0], obs3[1], obs3[2]);
        REQUIRE(rec3.residual <= 1e-9);
    }
}

TEST_CASE("memory comparator", "[multipartite]") {
    auto bell = testsupport::bell_state();
    auto rec = memory_comparator(bell, z2(), x_at(M_PI / 4.0));
    REQUIRE(rec.value == Approx(-0.7715533031636120).margin(1e-9));
    REQUIRE(rec.conditional_entropy == Approx(-1.0).margin(1e-12));

    Eigen::VectorXcd a(2), b(2);
    a << Complex(0.8, 0.0), Complex(0.6, 0.0);
    b << Complex(0.6, 0.0), Complex(-0.8, 0.0);
    auto product = testsupport::product_state({a, b});
    auto rec_product = memory_comparator(product, z2(), x_at(M_PI / 4.0));
    REQUIRE(rec_product.value == Approx(0.2284466968363880).margin(1e-9));
    auto rec_same = memory_comparator(product, z2(), z2());
    REQUIRE(rec_same.value == Approx(0.0).margin(1e-12));
}

TEST_CASE("corollary2 on GHZ and W", "[multipartite]") {
    auto ghz = corollary2_identity(testsupport::ghz_state(), z2(), z2(), z2());
    REQUIRE(ghz.lhs == Approx(0.0).margin(1e-12));
    REQUIRE(ghz.h_x == Approx(1.0).margin(1e-12));
    REQUIRE(ghz.pair_mi == Approx(1.0).margin(1e-12));
    REQUIRE(ghz.total_correlation == Approx(2.0).margin(1e-12));

    auto w = corollary2_identity(testsupport::w_state(), z2(), z2(), z2());
    REQUIRE(w.residual <= 1e-9);

    Eigen::VectorXcd e0(2);
    e0 << Complex(1, 0), Complex(0, 0);
    Eigen::VectorXcd plus(2);
    plus << Complex(M_SQRT1_2, 0), Complex(M_SQRT1_2, 0);
    auto product = testsupport::product_state({e0, plus, e0});
    auto rec = corollary2_identity(product, z2(), z2(), z2());
    REQUIRE(rec.total_correlation == Approx(0.0).margin(1e-10));
    REQUIRE(rec.pair_mi == Approx(0.0).margin(1e-10));
    REQUIRE(rec.lhs == Approx(rec.h_x).margin(1e-10));
}

TEST_CASE("tensor type validation", "[multipartite]") {
    TensorC unnormalized({2, 2});
    unnormalized.at({0, 0}) = Complex(1.0, 0.0);
    unnormalized.at({1, 1}) = Complex(1.0, 0.0);
    REQUIRE_THROWS_AS(PureTensorState(std::move(unnormalized)), error);

    TensorC single({4});
    single.at({0}) = Complex(1.0, 0.0);
    REQUIRE_THROWS_AS(PureTensorState(std::move(single)), error);

    TensorR negative({2, 2});
    negative.flat() = {0.6, 0.5, -0.1, 0.0};
    REQUIRE_THROWS_AS(JointProbTensor(std::move(negative)), error);
}
