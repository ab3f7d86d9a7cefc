#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "majbound/majorization.hpp"
#include "majbound/quantum.hpp"

namespace majbound::entropic {

using majorization::SVector;
using majorization::WitnessChoice;
using quantum::DensityState;
using quantum::Measurement;
using quantum::Observable;
using quantum::ProbabilityVector;

// log base 2 everywhere user-facing; natural logs only appear inside the
// 1/(2 ln 2) Pinsker constant in the multipartite module.

inline double entropy_term(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

/// -sum x log2 x over the entries as given (no normalization); negative
/// entries are rounding noise and are clamped at zero.
template <class Range>
inline double entropy_bits(const Range& values) {
    double h = 0.0;
    for (double x : values) h += entropy_term(std::max(x, 0.0));
    return h;
}

inline double shannon_entropy(const ProbabilityVector& p) {
    double h = 0.0;
    for (int i = 0; i < p.size(); ++i) h += entropy_term(p[i]);
    return h;
}

inline double binary_entropy(double p) {
    require(p >= -kTol.probability_clamp && p <= 1.0 + kTol.probability_clamp, errc::out_of_range,
            "binary_entropy argument " + std::to_string(p) + " outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    return entropy_term(p) + entropy_term(1.0 - p);
}

/// H(s): entropy of the majorant components as-is (they sum to the number of
/// measurements, matching the right-hand side of the entropic relation).
inline double h_of_s(const SVector& sv) { return entropy_bits(sv.components); }

inline double von_neumann_entropy(const RealVector& spectrum) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) h += entropy_term(std::max(spectrum(i), 0.0));
    return h;
}

/// log2(1/c) with c the maximum squared overlap between the two bases.
inline double maassen_uffink_bound(const Observable& a, const Observable& b) {
    require(a.dimension() == b.dimension(), errc::dimension_mismatch,
            "observables must share one dimension");
    const ComplexMatrix overlaps = a.basis().adjoint() * b.basis();
    double c = 0.0;
    for (Eigen::Index i = 0; i < overlaps.rows(); ++i) {
        for (Eigen::Index j = 0; j < overlaps.cols(); ++j) {
            c = std::max(c, std::norm(overlaps(i, j)));
        }
    }
    return std::log2(1.0 / c);
}

/// One candidate from the optimal-bound search: the state built from a
/// maximizing operator sum, its outcome distributions and entropy sum.
struct CandidateBound {
    int mu = 0;
    std::vector<int> composition;
    std::vector<std::vector<int>> subsets;
    ComplexMatrix state;
    std::vector<ProbabilityVector> distributions;
    double entropy_sum = 0.0;
};

struct EntropyBoundReport {
    double h_s = 0.0;
    double conjecture_bound = 0.0;
    int cutoff = 0;  // smallest mu whose t value saturates at M
    std::vector<CandidateBound> candidates;
    std::size_t best_index = 0;
    SVector s;

    const CandidateBound& best() const { return candidates[best_index]; }
};

/// Optimal-bound search: for every mu up to the saturation cutoff and every
/// tied maximizer, pair the state spectrum with the maximizer's eigenbasis in
/// descending order and take the smallest entropy sum over the candidates.
inline EntropyBoundReport conjecture_bound(const std::vector<Measurement>& observables,
                                           const RealVector& spectrum,
                                           std::size_t cap = kDefaultEnumerationCap) {
    EntropyBoundReport report;
    report.s = majorization::s_vector(observables, spectrum, cap);
    report.h_s = h_of_s(report.s);

    const double m = static_cast<double>(observables.size());
    report.cutoff = static_cast<int>(report.s.t_values.size());
    for (std::size_t i = 0; i < report.s.t_values.size(); ++i) {
        if (report.s.t_values[i] >= m - kTol.saturation) {
            report.cutoff = static_cast<int>(i) + 1;
            break;
        }
    }

    RealVector lambda = spectrum;
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());

    report.conjecture_bound = std::numeric_limits<double>::infinity();
    for (int mu = 1; mu <= report.cutoff; ++mu) {
        const auto& witness = report.s.witnesses[static_cast<std::size_t>(mu - 1)];
        for (const WitnessChoice& choice : witness.maximizers) {
            CandidateBound candidate;
            candidate.mu = mu;
            candidate.composition = choice.composition;
            candidate.subsets = choice.subsets;

            const ComplexMatrix& vectors = choice.eigensystem.eigenvectors;
            ComplexMatrix rho = ComplexMatrix::Zero(lambda.size(), lambda.size());
            for (Eigen::Index i = 0; i < lambda.size(); ++i) {
                rho += Complex(lambda(i), 0.0) * (vectors.col(i) * vectors.col(i).adjoint());
            }
            candidate.state = rho;

            DensityState state(lambda, rho);
            candidate.entropy_sum = 0.0;
            for (const auto& obs : observables) {
                ProbabilityVector p = quantum::measure_probs(obs, state);
                candidate.entropy_sum += shannon_entropy(p);
                candidate.distributions.push_back(std::move(p));
            }
            if (candidate.entropy_sum < report.conjecture_bound) {
                report.conjecture_bound = candidate.entropy_sum;
                report.best_index = report.candidates.size();
            }
            report.candidates.push_back(std::move(candidate));
        }
    }
    require(report.conjecture_bound >= report.h_s - kTol.identity_residual, errc::internal_error,
            "candidate search produced a bound below H(s)");
    return report;
}

} // namespace majbound::entropic
