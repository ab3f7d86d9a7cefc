#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "majbound/quantum.hpp"
#include "majbound/spectral.hpp"

namespace majbound::majorization {

using quantum::Measurement;
using quantum::ProbabilityVector;
using spectral::EigenSystem;

/// Real vector under majorization semantics: comparisons always go through
/// the descending sort and its prefix sums.
class MajorizationVector {
  public:
    MajorizationVector() = default;
    explicit MajorizationVector(std::vector<double> values) : values_(std::move(values)) {}
    explicit MajorizationVector(const Eigen::Ref<const RealVector>& values)
        : values_(values.data(), values.data() + values.size()) {}

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    std::vector<double> descending() const {
        std::vector<double> sorted = values_;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        return sorted;
    }

    std::vector<double> prefix_sums() const {
        std::vector<double> sorted = descending();
        std::partial_sum(sorted.begin(), sorted.end(), sorted.begin());
        return sorted;
    }

    double total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  private:
    std::vector<double> values_;
};

struct MajorizationSlack {
    double max_prefix_excess = 0.0;  // max_k prefix_a(k) - prefix_b(k)
    double total_difference = 0.0;   // sum(a) - sum(b)
};

/// Prefix slack of a against b after padding to a common length with zeros.
inline MajorizationSlack majorization_slack(const MajorizationVector& a,
                                            const MajorizationVector& b) {
    std::vector<double> pa = a.prefix_sums();
    std::vector<double> pb = b.prefix_sums();
    const std::size_t n = std::max(pa.size(), pb.size());
    const double ta = pa.empty() ? 0.0 : pa.back();
    const double tb = pb.empty() ? 0.0 : pb.back();
    MajorizationSlack slack;
    slack.total_difference = ta - tb;
    slack.max_prefix_excess = n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double ak = k < pa.size() ? pa[k] : ta;
        const double bk = k < pb.size() ? pb[k] : tb;
        slack.max_prefix_excess = std::max(slack.max_prefix_excess, ak - bk);
    }
    return slack;
}

/// True iff a is majorized by b (a ≺ b): every descending prefix sum of a is
/// at most the matching prefix sum of b and the totals agree, both within tol.
inline bool majorizes(const MajorizationVector& a, const MajorizationVector& b,
                      double tol = kTol.majorization) {
    MajorizationSlack slack = majorization_slack(a, b);
    return slack.max_prefix_excess <= tol && std::abs(slack.total_difference) <= tol;
}

/// Concatenation of outcome distributions (the left-hand side of the
/// majorization relation for multiple measurements).
inline MajorizationVector direct_sum(const std::vector<ProbabilityVector>& probs) {
    std::vector<double> all;
    for (const auto& p : probs) {
        all.insert(all.end(), p.values().data(), p.values().data() + p.values().size());
    }
    return MajorizationVector(std::move(all));
}

/// One maximizing choice behind a t value: how many outcomes were taken from
/// each measurement, which (1-based) outcome indices, and the eigensystem of
/// the resulting operator sum.
struct WitnessChoice {
    std::vector<int> composition;
    std::vector<std::vector<int>> subsets;
    EigenSystem eigensystem;
};

struct TValue {
    int mu = 0;
    double value = 0.0;
    // All maximizers within kTol.argmax_tie, lexicographic by composition
    // then subsets; the first entry is the canonical witness.
    std::vector<WitnessChoice> maximizers;
};

/// Optimal majorant of the direct-sum relation: components are the
/// successive differences of the t values.
struct SVector {
    int observable_count = 0;
    std::vector<double> components;
    std::vector<double> t_values;
    std::vector<TValue> witnesses;  // witnesses[mu-1] describes t_mu

    MajorizationVector majorant() const { return MajorizationVector(components); }
};

namespace detail {

inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::iota(pick.begin(), pick.end(), 1);
    if (k == 0) {
        fn(pick);
        return;
    }
    if (k > n) return;
    while (true) {
        fn(pick);
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + 1 + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

inline void for_each_composition(const std::vector<int>& limits, int total,
                                 const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> counts(limits.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int remaining) {
        if (pos + 1 == limits.size()) {
            if (remaining <= limits[pos]) {
                counts[pos] = remaining;
                fn(counts);
            }
            return;
        }
        const int hi = std::min(limits[pos], remaining);
        for (int c = 0; c <= hi; ++c) {
            counts[pos] = c;
            rec(pos + 1, remaining - c);
        }
    };
    if (!limits.empty() && total >= 0) rec(0, total);
}

struct Engine {
    std::vector<std::vector<ComplexMatrix>> effects;  // per measurement, 1-based by position+1
    std::vector<int> limits;                          // outcome counts
    int dimension = 0;
    RealVector lambda;  // descending state spectrum

    Engine(const std::vector<Measurement>& observables, const RealVector& spectrum) {
        require(!observables.empty(), errc::dimension_mismatch, "need at least one measurement");
        dimension = quantum::dimension(observables.front());
        require(spectrum.size() == dimension, errc::dimension_mismatch,
                "spectrum length must equal the measurement dimension");
        lambda = spectrum;
        std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());
        double sum = lambda.sum();
        require(std::abs(sum - 1.0) <= kTol.probability_sum, errc::invalid_spectrum,
                "spectrum must sum to 1");
        for (const auto& m : observables) {
            require(quantum::dimension(m) == dimension, errc::dimension_mismatch,
                    "all measurements must share one dimension");
            std::vector<ComplexMatrix> list;
            list.reserve(static_cast<std::size_t>(quantum::outcome_count(m)));
            for (int i = 1; i <= quantum::outcome_count(m); ++i) {
                list.push_back(quantum::effect(m, i));
            }
            effects.push_back(std::move(list));
            limits.push_back(quantum::outcome_count(m));
        }
    }

    int total_outcomes() const { return std::accumulate(limits.begin(), limits.end(), 0); }

    // Number of operator sums the full enumeration visits: prod_j 2^{L_j}.
    double enumeration_size() const {
        double size = 1.0;
        for (int l : limits) size *= std::ldexp(1.0, l);
        return size;
    }

    ComplexMatrix operator_sum(const std::vector<std::vector<int>>& subsets) const {
        ComplexMatrix sum = ComplexMatrix::Zero(dimension, dimension);
        for (std::size_t j = 0; j < subsets.size(); ++j) {
            for (int index : subsets[j]) {
                sum += effects[j][static_cast<std::size_t>(index - 1)];
            }
        }
        return sum;
    }

    double score(const ComplexMatrix& opsum) const {
        return lambda.dot(spectral::eig_hermitian_values(opsum));
    }

    // Visits every (composition, subsets) pair for a fixed mu in
    // lexicographic order.
    void scan(int mu,
              const std::function<void(double, const std::vector<int>&,
                                       const std::vector<std::vector<int>>&)>& fn) const {
        for_each_composition(limits, mu, [&](const std::vector<int>& composition) {
            std::vector<std::vector<int>> chosen(effects.size());
            std::function<void(std::size_t)> pick = [&](std::size_t j) {
                if (j == effects.size()) {
                    fn(score(operator_sum(chosen)), composition, chosen);
                    return;
                }
                for_each_subset(limits[j], composition[j], [&](const std::vector<int>& subset) {
                    chosen[j] = subset;
                    pick(j + 1);
                });
            };
            pick(0);
        });
    }

    TValue best_for(int mu) const {
        TValue out;
        out.mu = mu;
        if (mu == 0) {
            // S_0 = {0}: the empty operator sum.
            WitnessChoice witness;
            witness.composition.assign(limits.size(), 0);
            witness.subsets.assign(limits.size(), {});
            witness.eigensystem = spectral::eig_hermitian(ComplexMatrix::Zero(dimension, dimension));
            out.value = 0.0;
            out.maximizers.push_back(std::move(witness));
            return out;
        }
        double best = -std::numeric_limits<double>::infinity();
        std::vector<std::pair<std::vector<int>, std::vector<std::vector<int>>>> tied;
        scan(mu, [&](double value, const std::vector<int>& composition,
                     const std::vector<std::vector<int>>& subsets) {
            if (value > best + kTol.argmax_tie) {
                best = value;
                tied.clear();
                tied.emplace_back(composition, subsets);
            } else if (value >= best - kTol.argmax_tie) {
                best = std::max(best, value);
                tied.emplace_back(composition, subsets);
            }
        });
        require(!tied.empty(), errc::mu_out_of_range,
                "no operator sum of size " + std::to_string(mu));
        out.value = best;
        for (auto& [composition, subsets] : tied) {
            WitnessChoice witness;
            witness.composition = std::move(composition);
            witness.subsets = std::move(subsets);
            witness.eigensystem = spectral::eig_hermitian(operator_sum(witness.subsets));
            out.maximizers.push_back(std::move(witness));
        }
        return out;
    }
};

} // namespace detail

/// t_mu: maximum of lambda_desc . eig_desc(operator sum) over all ways of
/// drawing mu outcomes across the measurements.
inline TValue t_value(const std::vector<Measurement>& observables, const RealVector& spectrum,
                      int mu) {
    detail::Engine engine(observables, spectrum);
    require(mu >= 0 && mu <= engine.total_outcomes(), errc::mu_out_of_range,
            "mu " + std::to_string(mu) + " outside 0.." + std::to_string(engine.total_outcomes()));
    return engine.best_for(mu);
}

/// Full optimal majorant: components (t_1, t_2 - t_1, ...). The enumeration
/// is capped; exceeding the cap raises combinatorial_blowup.
inline SVector s_vector(const std::vector<Measurement>& observables, const RealVector& spectrum,
                        std::size_t cap = kDefaultEnumerationCap) {
    detail::Engine engine(observables, spectrum);
    require(engine.enumeration_size() <= static_cast<double>(cap), errc::combinatorial_blowup,
            "subset enumeration would visit more than " + std::to_string(cap) + " operator sums");

    const int total = engine.total_outcomes();
    const int m = static_cast<int>(observables.size());
    SVector out;
    out.observable_count = m;
    out.t_values.reserve(static_cast<std::size_t>(total));
    out.witnesses.reserve(static_cast<std::size_t>(total));
    double previous = 0.0;
    for (int mu = 1; mu <= total; ++mu) {
        TValue t = engine.best_for(mu);
        require(t.value >= previous - kTol.argmax_tie, errc::internal_error,
                "t values must be non-decreasing");
        out.t_values.push_back(t.value);
        out.components.push_back(std::max(t.value - previous, 0.0));
        previous = t.value;
        out.witnesses.push_back(std::move(t));
    }
    require(std::abs(previous - static_cast<double>(m)) <= kTol.saturation, errc::internal_error,
            "t must saturate at the measurement count");
    return out;
}

} // namespace majbound::majorization
