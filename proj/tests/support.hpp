#pragma once

// Shared test fixtures and independent brute-force oracles. The oracles here
// go straight through Eigen so they share no code path with the library's
// enumeration or entropy machinery.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "majbound/majbound.hpp"

namespace testsupport {

using majbound::Complex;
using majbound::ComplexMatrix;
using majbound::RealVector;

inline ComplexMatrix z_basis(int n = 2) { return ComplexMatrix::Identity(n, n); }

inline ComplexMatrix x_theta_basis(double theta) {
    ComplexMatrix u(2, 2);
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    u << c, s, s, -c;
    return u;
}

inline ComplexMatrix qutrit_y_basis() {
    const double s3 = 1.0 / std::sqrt(3.0), s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0);
    ComplexMatrix u(3, 3);
    u << s3, s3, s3, s2, 0.0, -s2, s6, -std::sqrt(2.0 / 3.0), s6;
    return u;
}

inline majbound::multipartite::PureTensorState bell_state() {
    majbound::multipartite::TensorC t({2, 2});
    const double r = 1.0 / std::sqrt(2.0);
    t.at({0, 0}) = Complex(r, 0.0);
    t.at({1, 1}) = Complex(r, 0.0);
    return majbound::multipartite::PureTensorState(std::move(t));
}

inline majbound::multipartite::PureTensorState ghz_state() {
    majbound::multipartite::TensorC t({2, 2, 2});
    const double r = 1.0 / std::sqrt(2.0);
    t.at({0, 0, 0}) = Complex(r, 0.0);
    t.at({1, 1, 1}) = Complex(r, 0.0);
    return majbound::multipartite::PureTensorState(std::move(t));
}

inline majbound::multipartite::PureTensorState w_state() {
    majbound::multipartite::TensorC t({2, 2, 2});
    const double r = 1.0 / std::sqrt(3.0);
    t.at({1, 0, 0}) = Complex(r, 0.0);
    t.at({0, 1, 0}) = Complex(r, 0.0);
    t.at({0, 0, 1}) = Complex(r, 0.0);
    return majbound::multipartite::PureTensorState(std::move(t));
}

// Product tensor state from single-particle amplitude vectors.
inline majbound::multipartite::PureTensorState product_state(
    const std::vector<Eigen::VectorXcd>& factors) {
    std::vector<int> dims;
    for (const auto& f : factors) dims.push_back(static_cast<int>(f.size()));
    majbound::multipartite::TensorC t(dims);
    std::vector<int> index;
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        t.unflatten(flat, index);
        Complex v(1.0, 0.0);
        for (std::size_t j = 0; j < factors.size(); ++j) {
            v *= factors[j](index[j]) / factors[j].norm();
        }
        t.flat()[flat] = v;
    }
    return majbound::multipartite::PureTensorState(std::move(t));
}

inline ComplexMatrix random_hermitian(majbound::oracle::SeededRng& rng, int n) {
    ComplexMatrix g(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) g(r, c) = Complex(rng.gaussian(), rng.gaussian());
    }
    return (g + ComplexMatrix(g.adjoint())) / 2.0;
}

// Independent brute-force t oracle: enumerates subsets with bitmasks and
// scores through a fresh Eigen solver call.
inline double brute_t(const std::vector<std::vector<ComplexMatrix>>& effect_lists,
                      const RealVector& spectrum, int mu) {
    RealVector lambda = spectrum;
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());
    const int dim = static_cast<int>(effect_lists.front().front().rows());
    double best = -1e300;
    std::function<void(std::size_t, int, const ComplexMatrix&)> rec =
        [&](std::size_t j, int taken, const ComplexMatrix& acc) {
            if (j == effect_lists.size()) {
                if (taken != mu) return;
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(acc,
                                                                       Eigen::EigenvaluesOnly);
                RealVector vals = solver.eigenvalues().reverse();
                best = std::max(best, lambda.dot(vals));
                return;
            }
            const auto& effects = effect_lists[j];
            const int count = static_cast<int>(effects.size());
            for (unsigned mask = 0; mask < (1u << count); ++mask) {
                const int bits = __builtin_popcount(mask);
                if (taken + bits > mu) continue;
                ComplexMatrix next = acc;
                for (int b = 0; b < count; ++b) {
                    if (mask & (1u << b)) next += effects[static_cast<std::size_t>(b)];
                }
                rec(j + 1, taken + bits, next);
            }
        };
    rec(0, 0, ComplexMatrix::Zero(dim, dim));
    return best;
}

inline std::vector<std::vector<ComplexMatrix>> projector_lists(
    const std::vector<ComplexMatrix>& bases) {
    std::vector<std::vector<ComplexMatrix>> out;
    for (const auto& basis : bases) {
        std::vector<ComplexMatrix> projectors;
        for (Eigen::Index i = 0; i < basis.cols(); ++i) {
            projectors.push_back(basis.col(i) * basis.col(i).adjoint());
        }
        out.push_back(std::move(projectors));
    }
    return out;
}

} // namespace testsupport
