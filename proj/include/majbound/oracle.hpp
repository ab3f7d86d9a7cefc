#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "majbound/entropic.hpp"
#include "majbound/majorization.hpp"
#include "majbound/multipartite.hpp"
#include "majbound/parallel.hpp"
#include "majbound/quantum.hpp"

namespace majbound::oracle {

using majorization::MajorizationVector;
using multipartite::PureTensorState;
using multipartite::TensorC;
using quantum::DensityState;
using quantum::Measurement;
using quantum::Observable;
using quantum::Povm;

struct SamplingConfig {
    std::uint64_t seed = 20240601;
    int n_samples = 200;
    std::vector<int> dims;
    double tolerance = kTol.majorization;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-trial seeds derived from the base seed and trial index so parallel
// trials are order-independent.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 1));
}

// mt19937_64 with a fixed uniform/gaussian mapping; std::normal_distribution
// is implementation-defined, which would break seed portability.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    double uniform() {  // [0, 1)
        return static_cast<double>(raw() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline ComplexVector sample_state_vector(SeededRng& rng, int dim) {
    ComplexVector psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = Complex(rng.gaussian(), rng.gaussian());
    return psi / psi.norm();
}

inline DensityState sample_pure_state(SeededRng& rng, int dim) {
    return DensityState::pure(sample_state_vector(rng, dim));
}

inline PureTensorState sample_pure_tensor(SeededRng& rng, const std::vector<int>& dims) {
    TensorC amplitudes(dims);
    double norm2 = 0.0;
    for (auto& v : amplitudes.flat()) {
        v = Complex(rng.gaussian(), rng.gaussian());
        norm2 += std::norm(v);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : amplitudes.flat()) v *= inv;
    return PureTensorState(std::move(amplitudes));
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal
/// phase fix.
inline ComplexMatrix sample_unitary(SeededRng& rng, int dim) {
    ComplexMatrix ginibre(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) ginibre(r, c) = Complex(rng.gaussian(), rng.gaussian());
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        const double mag = std::abs(d);
        q.col(i) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    }
    return q;
}

/// Fixed-spectrum random state rho = U diag(lambda) U^dagger.
inline DensityState sample_mixed_state(SeededRng& rng, int dim, RealVector spectrum) {
    require(spectrum.size() == dim, errc::invalid_spectrum,
            "spectrum length must match the dimension");
    std::sort(spectrum.data(), spectrum.data() + spectrum.size(), std::greater<>());
    ComplexMatrix u = sample_unitary(rng, dim);
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        rho += Complex(spectrum(i), 0.0) * (u.col(i) * u.col(i).adjoint());
    }
    return DensityState(std::move(spectrum), std::move(rho));
}

namespace detail {

// Entropy-sum objective evaluated without going through DensityState
// validation; this is the sampling/grid hot path.
class EntropyObjective {
  public:
    explicit EntropyObjective(const std::vector<Measurement>& observables) {
        for (const auto& m : observables) {
            if (const auto* obs = std::get_if<Observable>(&m)) {
                bases_.push_back(obs->basis().adjoint());
                effect_sets_.emplace_back();
            } else {
                bases_.emplace_back();
                effect_sets_.push_back(std::get<Povm>(m).effects());
            }
        }
    }

    double pure(const ComplexVector& psi) const {
        double h = 0.0;
        for (std::size_t j = 0; j < bases_.size(); ++j) {
            if (bases_[j].size() > 0) {
                ComplexVector amps = bases_[j] * psi;
                for (Eigen::Index i = 0; i < amps.size(); ++i) {
                    h += entropic::entropy_term(std::norm(amps(i)));
                }
            } else {
                for (const auto& effect : effect_sets_[j]) {
                    h += entropic::entropy_term((psi.adjoint() * effect * psi).value().real());
                }
            }
        }
        return h;
    }

    double mixed(const ComplexMatrix& rho) const {
        double h = 0.0;
        for (std::size_t j = 0; j < bases_.size(); ++j) {
            if (bases_[j].size() > 0) {
                ComplexMatrix rotated = bases_[j] * rho * bases_[j].adjoint();
                for (Eigen::Index i = 0; i < rotated.rows(); ++i) {
                    h += entropic::entropy_term(rotated(i, i).real());
                }
            } else {
                for (const auto& effect : effect_sets_[j]) {
                    h += entropic::entropy_term(spectral::trace_with(effect, rho));
                }
            }
        }
        return h;
    }

  private:
    std::vector<ComplexMatrix> bases_;  // adjoint bases; empty for POVM entries
    std::vector<std::vector<ComplexMatrix>> effect_sets_;
};

// State family swept by the grid: a parameter vector plus a builder mapping
// parameters to an entropy sum.
struct ParamSpace {
    std::vector<double> lo, hi;      // inclusive lower, exclusive/inclusive upper
    std::vector<int> steps;          // grid points per axis
    std::vector<bool> periodic;

    std::size_t total() const {
        std::size_t n = 1;
        for (int s : steps) n *= static_cast<std::size_t>(s);
        return n;
    }

    std::vector<double> point(std::size_t flat) const {
        std::vector<double> p(steps.size());
        for (std::size_t a = 0; a < steps.size(); ++a) {
            const int i = static_cast<int>(flat % static_cast<std::size_t>(steps[a]));
            flat /= static_cast<std::size_t>(steps[a]);
            const double span = hi[a] - lo[a];
            const int denom = periodic[a] ? steps[a] : std::max(steps[a] - 1, 1);
            p[a] = lo[a] + span * static_cast<double>(i) / static_cast<double>(denom);
        }
        return p;
    }

    void clamp(std::vector<double>& p) const {
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (periodic[a]) {
                const double span = hi[a] - lo[a];
                while (p[a] < lo[a]) p[a] += span;
                while (p[a] >= hi[a]) p[a] -= span;
            } else {
                p[a] = std::clamp(p[a], lo[a], hi[a]);
            }
        }
    }
};

inline int axis_steps(double span, double resolution, bool periodic) {
    const int n = std::max(1, static_cast<int>(std::lround(span / resolution)));
    return periodic ? n : n + 1;
}

template <class Eval>
std::pair<double, std::size_t> grid_scan(std::size_t total, const Eval& eval) {
    const unsigned workers = std::max(1u, worker_count());
    std::vector<double> best(workers, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> where(workers, 0);
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            for (std::size_t i = begin; i < end; ++i) {
                const double v = eval(i);
                if (v < best[w]) {
                    best[w] = v;
                    where[w] = i;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    double value = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    for (unsigned w = 0; w < workers; ++w) {
        if (best[w] < value || (best[w] == value && where[w] < index)) {
            value = best[w];
            index = where[w];
        }
    }
    return {value, index};
}

// Derivative-free compass refinement from the best grid point.
template <class Eval>
double refine(const ParamSpace& space, std::vector<double> p, double value, double step,
              const Eval& eval) {
    const int max_iterations = 400;
    for (int it = 0; it < max_iterations && step > 1e-8; ++it) {
        bool improved = false;
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (double dir : {+1.0, -1.0}) {
                std::vector<double> q = p;
                q[a] += dir * step;
                space.clamp(q);
                const double v = eval(q);
                if (v < value - 1e-15) {
                    value = v;
                    p = q;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return value;
}

} // namespace detail

/// Minimum entropy sum over a reproducible grid of fixed-spectrum states,
/// refined by local descent. Supports qubits with any spectrum (Bloch grid)
/// and qutrits with a pure spectrum (state-space grid).
inline double min_entropy_grid(const std::vector<Measurement>& observables,
                               const RealVector& spectrum, double resolution) {
    require(!observables.empty() && observables.size() <= 3, errc::dimension_too_large,
            "grid oracle supports at most three measurements");
    const int dim = quantum::dimension(observables.front());
    require(dim <= 3, errc::dimension_too_large, "grid oracle supports dimension <= 3");
    require(resolution > 0.0, errc::out_of_range, "resolution must be positive");
    RealVector lambda = spectrum;
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());
    const bool pure = lambda(0) >= 1.0 - kTol.spectrum_sum;

    detail::EntropyObjective objective(observables);
    detail::ParamSpace space;
    std::function<double(const std::vector<double>&)> eval_params;

    if (dim == 2) {
        // Bloch parameterization of the eigenbasis; covers mixed spectra.
        space.lo = {0.0, 0.0};
        space.hi = {M_PI, 2.0 * M_PI};
        space.periodic = {false, true};
        space.steps = {detail::axis_steps(M_PI, resolution, false),
                       detail::axis_steps(2.0 * M_PI, resolution, true)};
        const double l1 = lambda(0), l2 = lambda(1);
        eval_params = [&objective, l1, l2](const std::vector<double>& p) {
            const double c = std::cos(p[0] / 2.0), s = std::sin(p[0] / 2.0);
            const Complex phase = std::polar(1.0, p[1]);
            ComplexVector v1(2), v2(2);
            v1 << Complex(c, 0.0), s * phase;
            v2 << -s * std::conj(phase), Complex(c, 0.0);
            ComplexMatrix rho = l1 * (v1 * v1.adjoint()) + l2 * (v2 * v2.adjoint());
            return objective.mixed(rho);
        };
    } else {
        require(pure, errc::dimension_too_large,
                "grid oracle supports mixed spectra only in dimension 2");
        // psi = (cos a, sin a cos b e^{i p1}, sin a sin b e^{i p2}).
        space.lo = {0.0, 0.0, 0.0, 0.0};
        space.hi = {M_PI / 2.0, M_PI / 2.0, 2.0 * M_PI, 2.0 * M_PI};
        space.periodic = {false, false, true, true};
        space.steps = {detail::axis_steps(M_PI / 2.0, resolution, false),
                       detail::axis_steps(M_PI / 2.0, resolution, false),
                       detail::axis_steps(2.0 * M_PI, resolution, true),
                       detail::axis_steps(2.0 * M_PI, resolution, true)};
        eval_params = [&objective](const std::vector<double>& p) {
            ComplexVector psi(3);
            psi << Complex(std::cos(p[0]), 0.0),
                std::sin(p[0]) * std::cos(p[1]) * std::polar(1.0, p[2]),
                std::sin(p[0]) * std::sin(p[1]) * std::polar(1.0, p[3]);
            return objective.pure(psi);
        };
    }

    require(space.total() <= 50'000'000, errc::dimension_too_large,
            "grid resolution too fine for this dimension");
    auto [value, index] = detail::grid_scan(
        space.total(), [&](std::size_t i) { return eval_params(space.point(i)); });
    return detail::refine(space, space.point(index), value, resolution, eval_params);
}

struct DominanceReport {
    int samples = 0;
    int violations = 0;
    double worst_slack = -std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    double tolerance = 0.0;
};

/// Samples fixed-spectrum states and checks the direct-sum distributions
/// against an explicit majorant (mutation checks pass a deliberately broken
/// bound here).
inline DominanceReport dominance_trial(const std::vector<Measurement>& observables,
                                       const RealVector& spectrum, const SamplingConfig& cfg,
                                       const MajorizationVector& bound) {
    require(cfg.n_samples >= 1, errc::out_of_range, "need at least one sample");
    const int dim = quantum::dimension(observables.front());
    DominanceReport report;
    report.samples = cfg.n_samples;
    report.seed = cfg.seed;
    report.tolerance = cfg.tolerance;

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> slack(n, 0.0);
    std::vector<char> violated(n, 0);
    parallel_for(n, [&](std::size_t i) {
        SeededRng rng(derive_seed(cfg.seed, i));
        DensityState state = sample_mixed_state(rng, dim, spectrum);
        std::vector<quantum::ProbabilityVector> probs;
        probs.reserve(observables.size());
        for (const auto& m : observables) probs.push_back(quantum::measure_probs(m, state));
        majorization::MajorizationSlack s =
            majorization::majorization_slack(majorization::direct_sum(probs), bound);
        slack[i] = s.max_prefix_excess;
        violated[i] = (s.max_prefix_excess > cfg.tolerance ||
                       std::abs(s.total_difference) > cfg.tolerance)
                          ? 1
                          : 0;
    });
    for (std::size_t i = 0; i < n; ++i) {
        report.violations += violated[i];
        report.worst_slack = std::max(report.worst_slack, slack[i]);
    }
    return report;
}

inline DominanceReport dominance_trial(const std::vector<Measurement>& observables,
                                       const RealVector& spectrum, const SamplingConfig& cfg) {
    majorization::SVector s = majorization::s_vector(observables, spectrum);
    return dominance_trial(observables, spectrum, cfg, s.majorant());
}

struct SampledMinimum {
    double value = std::numeric_limits<double>::infinity();
    std::size_t at_sample = 0;
};

/// Minimum entropy sum over seeded random fixed-spectrum states; the
/// sampling-side consistency check for the optimal-bound search.
inline SampledMinimum min_entropy_sampled(const std::vector<Measurement>& observables,
                                          const RealVector& spectrum, const SamplingConfig& cfg) {
    const int dim = quantum::dimension(observables.front());
    RealVector lambda = spectrum;
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());
    const bool pure = lambda(0) >= 1.0 - kTol.spectrum_sum;
    detail::EntropyObjective objective(observables);

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<double> values(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        SeededRng rng(derive_seed(cfg.seed, i));
        if (pure) {
            values[i] = objective.pure(sample_state_vector(rng, dim));
        } else {
            ComplexMatrix u = sample_unitary(rng, dim);
            ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
            for (int k = 0; k < dim; ++k) {
                rho += Complex(lambda(k), 0.0) * (u.col(k) * u.col(k).adjoint());
            }
            values[i] = objective.mixed(rho);
        }
    });
    SampledMinimum out;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] < out.value) {
            out.value = values[i];
            out.at_sample = i;
        }
    }
    return out;
}

} // namespace majbound::oracle
