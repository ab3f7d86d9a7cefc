#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "majbound/spectral.hpp"

namespace majbound::quantum {

using spectral::EigenSystem;

/// Projective observable identified by its orthonormal measurement basis;
/// the eigenvalue list is outcome metadata only (defaults to N..1).
class Observable {
  public:
    explicit Observable(ComplexMatrix basis, std::string label = "",
                        std::optional<RealVector> eigenvalues = std::nullopt)
        : basis_(std::move(basis)), label_(std::move(label)) {
        require(basis_.rows() == basis_.cols() && basis_.rows() > 0, errc::dimension_mismatch,
                "observable basis must be square and nonempty");
        require(spectral::is_unitary(basis_), errc::schema_error,
                "observable basis is not unitary within tolerance");
        if (eigenvalues) {
            require(eigenvalues->size() == basis_.rows(), errc::dimension_mismatch,
                    "eigenvalue list length must match dimension");
            eigenvalues_ = std::move(*eigenvalues);
        } else {
            eigenvalues_ = RealVector::LinSpaced(basis_.rows(), static_cast<double>(basis_.rows()), 1.0);
        }
    }

    int dimension() const { return static_cast<int>(basis_.rows()); }
    int outcome_count() const { return dimension(); }
    const ComplexMatrix& basis() const { return basis_; }
    const RealVector& eigenvalues() const { return eigenvalues_; }
    const std::string& label() const { return label_; }

    ComplexVector basis_vector(int index) const {  // index is 1-based
        require(index >= 1 && index <= dimension(), errc::index_out_of_range,
                "basis index " + std::to_string(index) + " outside 1.." + std::to_string(dimension()));
        return basis_.col(index - 1);
    }

    ComplexMatrix projector(int index) const {
        ComplexVector v = basis_vector(index);
        return v * v.adjoint();
    }

  private:
    ComplexMatrix basis_;
    RealVector eigenvalues_;
    std::string label_;
};

/// Generalized measurement given directly by its effect operators E_i.
class Povm {
  public:
    explicit Povm(std::vector<ComplexMatrix> effects, std::string label = "")
        : effects_(std::move(effects)), label_(std::move(label)) {
        require(!effects_.empty(), errc::schema_error, "POVM needs at least one effect");
        const Eigen::Index n = effects_.front().rows();
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        for (const auto& effect : effects_) {
            require(effect.rows() == n && effect.cols() == n, errc::dimension_mismatch,
                    "all POVM effects must share one dimension");
            require(spectral::is_hermitian(effect), errc::schema_error, "POVM effect not Hermitian");
            RealVector vals = spectral::eig_hermitian_values(effect);
            require(vals(vals.size() - 1) >= -kTol.psd, errc::schema_error,
                    "POVM effect has a negative eigenvalue");
            sum += effect;
        }
        sum -= ComplexMatrix::Identity(n, n);
        require(spectral::max_abs(sum) <= kTol.probability_sum, errc::schema_error,
                "POVM effects do not sum to the identity");
    }

    int dimension() const { return static_cast<int>(effects_.front().rows()); }
    int outcome_count() const { return static_cast<int>(effects_.size()); }
    const std::vector<ComplexMatrix>& effects() const { return effects_; }
    const std::string& label() const { return label_; }

    const ComplexMatrix& effect(int index) const {  // index is 1-based
        require(index >= 1 && index <= outcome_count(), errc::index_out_of_range,
                "effect index " + std::to_string(index) + " outside 1.." +
                    std::to_string(outcome_count()));
        return effects_[static_cast<std::size_t>(index - 1)];
    }

  private:
    std::vector<ComplexMatrix> effects_;
    std::string label_;
};

// A measurement is either projective or a POVM; the majorization engine
// treats both through their effect lists.
using Measurement = std::variant<Observable, Povm>;

inline int dimension(const Measurement& m) {
    return std::visit([](const auto& v) { return v.dimension(); }, m);
}
inline int outcome_count(const Measurement& m) {
    return std::visit([](const auto& v) { return v.outcome_count(); }, m);
}
inline const std::string& label(const Measurement& m) {
    return std::visit([](const auto& v) -> const std::string& { return v.label(); }, m);
}
inline ComplexMatrix effect(const Measurement& m, int index) {  // 1-based
    if (const auto* obs = std::get_if<Observable>(&m)) return obs->projector(index);
    return std::get<Povm>(m).effect(index);
}
inline bool is_projective(const Measurement& m) { return std::holds_alternative<Observable>(m); }

/// State of the system: a descending spectrum, optionally with the full
/// density matrix when probability extraction is needed.
class DensityState {
  public:
    explicit DensityState(RealVector spectrum) : spectrum_(std::move(spectrum)) { check_spectrum(); }

    DensityState(RealVector spectrum, ComplexMatrix matrix)
        : spectrum_(std::move(spectrum)), matrix_(std::move(matrix)) {
        check_spectrum();
        require(matrix_->rows() == spectrum_.size() && matrix_->cols() == spectrum_.size(),
                errc::dimension_mismatch, "density matrix dimension must match spectrum length");
        require(spectral::is_hermitian(*matrix_), errc::schema_error, "density matrix not Hermitian");
        RealVector vals = spectral::eig_hermitian_values(*matrix_);
        require(vals(vals.size() - 1) >= -kTol.psd, errc::schema_error,
                "density matrix has a negative eigenvalue");
        require((vals - spectrum_).cwiseAbs().maxCoeff() <= kTol.spectrum_match, errc::invalid_spectrum,
                "density matrix eigenvalues do not match the declared spectrum");
    }

    static DensityState from_matrix(const ComplexMatrix& rho) {
        require(spectral::is_hermitian(rho), errc::schema_error, "density matrix not Hermitian");
        return DensityState(spectral::eig_hermitian_values(rho), rho);
    }

    static DensityState pure(const ComplexVector& amplitudes) {
        const double norm = amplitudes.norm();
        require(norm > 0.0, errc::invalid_spectrum, "pure state amplitudes are all zero");
        ComplexVector psi = amplitudes / norm;
        RealVector spectrum = RealVector::Zero(psi.size());
        spectrum(0) = 1.0;
        return DensityState(std::move(spectrum), ComplexMatrix(psi * psi.adjoint()));
    }

    int dimension() const { return static_cast<int>(spectrum_.size()); }
    const RealVector& spectrum() const { return spectrum_; }
    bool has_matrix() const { return matrix_.has_value(); }
    const ComplexMatrix& matrix() const {
        require(matrix_.has_value(), errc::missing_density_matrix,
                "operation needs the full density matrix");
        return *matrix_;
    }

  private:
    void check_spectrum() {
        require(spectrum_.size() > 0, errc::invalid_spectrum, "empty spectrum");
        double sum = 0.0;
        for (Eigen::Index i = 0; i < spectrum_.size(); ++i) {
            require(spectrum_(i) >= -kTol.probability_clamp, errc::invalid_spectrum,
                    "spectrum entries must be nonnegative");
            spectrum_(i) = std::max(spectrum_(i), 0.0);
            if (i > 0) {
                require(spectrum_(i) <= spectrum_(i - 1) + kTol.probability_clamp,
                        errc::invalid_spectrum, "spectrum must be sorted descending");
            }
            sum += spectrum_(i);
        }
        require(std::abs(sum - 1.0) <= kTol.spectrum_sum, errc::invalid_spectrum,
                "spectrum must sum to 1, got " + std::to_string(sum));
    }

    RealVector spectrum_;
    std::optional<ComplexMatrix> matrix_;
};

/// Measurement outcome distribution. Entries below -kTol.probability_clamp
/// are rejected; smaller negatives are clamped to zero.
class ProbabilityVector {
  public:
    explicit ProbabilityVector(RealVector probs) : probs_(std::move(probs)) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < probs_.size(); ++i) {
            require(probs_(i) >= -kTol.probability_clamp &&
                        probs_(i) <= 1.0 + kTol.probability_clamp,
                    errc::invalid_probability,
                    "probability entry " + std::to_string(probs_(i)) + " outside [0,1]");
            probs_(i) = std::clamp(probs_(i), 0.0, 1.0);
            sum += probs_(i);
        }
        require(std::abs(sum - 1.0) <= kTol.probability_sum, errc::invalid_probability,
                "probabilities must sum to 1, got " + std::to_string(sum));
    }

    int size() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_(i); }  // 0-based element access
    const RealVector& values() const { return probs_; }

  private:
    RealVector probs_;
};

/// Born-rule outcome distribution: p_i = <x_i|rho|x_i> for projective
/// measurements, Tr[E_i rho] for POVMs.
inline ProbabilityVector measure_probs(const Observable& obs, const DensityState& state) {
    require(obs.dimension() == state.dimension(), errc::dimension_mismatch,
            "observable and state dimensions differ");
    const ComplexMatrix& rho = state.matrix();
    RealVector probs(obs.dimension());
    for (int i = 0; i < obs.dimension(); ++i) {
        ComplexVector v = obs.basis().col(i);
        probs(i) = (v.adjoint() * rho * v).value().real();
    }
    return ProbabilityVector(std::move(probs));
}

inline ProbabilityVector measure_probs(const Povm& povm, const DensityState& state) {
    require(povm.dimension() == state.dimension(), errc::dimension_mismatch,
            "POVM and state dimensions differ");
    const ComplexMatrix& rho = state.matrix();
    RealVector probs(povm.outcome_count());
    for (int i = 0; i < povm.outcome_count(); ++i) {
        probs(i) = spectral::trace_with(povm.effect(i + 1), rho);
    }
    return ProbabilityVector(std::move(probs));
}

inline ProbabilityVector measure_probs(const Measurement& m, const DensityState& state) {
    return std::visit([&](const auto& v) { return measure_probs(v, state); }, m);
}

/// Sum of the selected projectors (or effects). Indices are 1-based outcome
/// labels; the empty set yields the zero matrix.
inline ComplexMatrix subset_operator(const Measurement& m, const std::vector<int>& indices) {
    const int n = dimension(m);
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    std::set<int> seen;
    for (int index : indices) {
        require(index >= 1 && index <= outcome_count(m), errc::index_out_of_range,
                "subset index " + std::to_string(index) + " outside 1.." +
                    std::to_string(outcome_count(m)));
        require(seen.insert(index).second, errc::duplicate_index,
                "subset index " + std::to_string(index) + " repeated");
        sum += effect(m, index);
    }
    return sum;
}

/// Tr[X_n rho]; agrees with the partial sum of measure_probs over the same
/// indices within kTol.partial_sum.
inline double partial_sum_check(const Measurement& m, const DensityState& state,
                                const std::vector<int>& indices) {
    require(dimension(m) == state.dimension(), errc::dimension_mismatch,
            "measurement and state dimensions differ");
    return spectral::trace_with(subset_operator(m, indices), state.matrix());
}

} // namespace majbound::quantum
