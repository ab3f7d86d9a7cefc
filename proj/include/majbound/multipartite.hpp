#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "majbound/entropic.hpp"
#include "majbound/majorization.hpp"
#include "majbound/quantum.hpp"
#include "majbound/spectral.hpp"

namespace majbound::multipartite {

using quantum::DensityState;
using quantum::Observable;
using quantum::ProbabilityVector;

inline constexpr double kInvTwoLn2 = 0.72134752044448170368; // 1/(2 ln 2)

/// Dense M-order tensor stored flat with the mode-1 index fastest:
/// flat = i1 + I1*(i2 + I2*(i3 + ...)). Element indices are 0-based; mode
/// numbers in the public API are 1-based.
template <class Scalar>
class Tensor {
  public:
    Tensor() = default;

    explicit Tensor(std::vector<int> dims) : dims_(std::move(dims)) {
        data_.assign(checked_size(dims_), Scalar{});
    }

    Tensor(std::vector<int> dims, std::vector<Scalar> values)
        : dims_(std::move(dims)), data_(std::move(values)) {
        require(data_.size() == checked_size(dims_), errc::dimension_mismatch,
                "flat value count does not match the tensor dimensions");
    }

    int order() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    int dim(int mode) const {  // 1-based
        require(mode >= 1 && mode <= order(), errc::mode_out_of_range,
                "mode " + std::to_string(mode) + " outside 1.." + std::to_string(order()));
        return dims_[static_cast<std::size_t>(mode - 1)];
    }
    std::size_t size() const { return data_.size(); }
    const std::vector<Scalar>& flat() const { return data_; }
    std::vector<Scalar>& flat() { return data_; }

    std::size_t offset(const std::vector<int>& index) const {
        std::size_t off = 0;
        std::size_t stride = 1;
        for (std::size_t j = 0; j < dims_.size(); ++j) {
            off += static_cast<std::size_t>(index[j]) * stride;
            stride *= static_cast<std::size_t>(dims_[j]);
        }
        return off;
    }

    void unflatten(std::size_t flat_index, std::vector<int>& index) const {
        index.resize(dims_.size());
        for (std::size_t j = 0; j < dims_.size(); ++j) {
            index[j] = static_cast<int>(flat_index % static_cast<std::size_t>(dims_[j]));
            flat_index /= static_cast<std::size_t>(dims_[j]);
        }
    }

    Scalar& at(const std::vector<int>& index) { return data_[offset(index)]; }
    const Scalar& at(const std::vector<int>& index) const { return data_[offset(index)]; }

    double frobenius_norm() const {
        double sum = 0.0;
        for (const Scalar& v : data_) sum += std::norm(Complex(v));
        return std::sqrt(sum);
    }

  private:
    static std::size_t checked_size(const std::vector<int>& dims) {
        require(!dims.empty(), errc::dimension_mismatch, "tensor needs at least one mode");
        std::size_t n = 1;
        for (int d : dims) {
            require(d >= 1, errc::dimension_mismatch, "tensor dimensions must be positive");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::vector<int> dims_;
    std::vector<Scalar> data_;
};

using TensorC = Tensor<Complex>;
using TensorR = Tensor<double>;

/// Mode-k unfolding with the cyclic column convention: the columns run over
/// the index tuple (i_{k+1}, ..., i_M, i_1, ..., i_{k-1}) read as a
/// mixed-radix number with i_{k+1} most significant and i_{k-1} fastest:
///   col = (((i_{k+1}) * I_{k+2} + i_{k+2}) * I_{k+3} + ...) ... + i_{k-1}.
template <class Scalar>
inline Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> unfold(
    const Tensor<Scalar>& t, int mode) {
    const int m = t.order();
    require(mode >= 1 && mode <= m, errc::mode_out_of_range,
            "mode " + std::to_string(mode) + " outside 1.." + std::to_string(m));
    const std::size_t rows = static_cast<std::size_t>(t.dim(mode));
    const std::size_t cols = t.size() / rows;

    std::vector<int> cyclic;  // 1-based modes in column order, most significant first
    for (int j = mode + 1; j <= m; ++j) cyclic.push_back(j);
    for (int j = 1; j < mode; ++j) cyclic.push_back(j);

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(rows, cols);
    std::vector<int> index;
    for (std::size_t f = 0; f < t.size(); ++f) {
        t.unflatten(f, index);
        std::size_t col = 0;
        for (int cm : cyclic) {
            col = col * static_cast<std::size_t>(t.dim(cm)) +
                  static_cast<std::size_t>(index[static_cast<std::size_t>(cm - 1)]);
        }
        out(static_cast<Eigen::Index>(index[static_cast<std::size_t>(mode - 1)]),
            static_cast<Eigen::Index>(col)) = t.flat()[f];
    }
    return out;
}

/// Mode-k product: contracts matrix a (rows x I_k) against mode k.
inline TensorC mode_product(const TensorC& t, const ComplexMatrix& a, int mode) {
    require(mode >= 1 && mode <= t.order(), errc::mode_out_of_range,
            "mode " + std::to_string(mode) + " outside 1.." + std::to_string(t.order()));
    require(a.cols() == t.dim(mode), errc::dimension_mismatch,
            "matrix columns must match the mode dimension");
    std::vector<int> dims = t.dims();
    dims[static_cast<std::size_t>(mode - 1)] = static_cast<int>(a.rows());
    TensorC out(dims);
    std::vector<int> index;
    for (std::size_t f = 0; f < t.size(); ++f) {
        t.unflatten(f, index);
        const int ik = index[static_cast<std::size_t>(mode - 1)];
        const Complex v = t.flat()[f];
        if (v == Complex(0.0, 0.0)) continue;
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            index[static_cast<std::size_t>(mode - 1)] = static_cast<int>(r);
            out.at(index) += a(r, ik) * v;
        }
        index[static_cast<std::size_t>(mode - 1)] = ik;
    }
    return out;
}

/// Normalized M-partite pure state held as its amplitude tensor.
class PureTensorState {
  public:
    explicit PureTensorState(TensorC amplitudes) : amplitudes_(std::move(amplitudes)) {
        require(amplitudes_.order() >= 2, errc::dimension_mismatch,
                "a multipartite state needs at least two modes");
        for (int d : amplitudes_.dims()) {
            require(d >= 2, errc::dimension_mismatch, "every mode dimension must be at least 2");
        }
        require(std::abs(amplitudes_.frobenius_norm() - 1.0) <= kTol.tensor_norm,
                errc::invalid_spectrum, "state amplitudes must have unit Frobenius norm");
    }

    int order() const { return amplitudes_.order(); }
    const std::vector<int>& dims() const { return amplitudes_.dims(); }
    int dim(int mode) const { return amplitudes_.dim(mode); }
    const TensorC& tensor() const { return amplitudes_; }

  private:
    TensorC amplitudes_;
};

/// Joint outcome distribution over all modes. Entries below the rounding
/// floor are rejected, tiny negatives are clamped.
class JointProbTensor {
  public:
    explicit JointProbTensor(TensorR probs) : probs_(std::move(probs)) {
        double sum = 0.0;
        for (double& v : probs_.flat()) {
            require(v >= -kTol.probability_clamp, errc::invalid_probability,
                    "joint probability entry is negative beyond rounding noise");
            v = std::max(v, 0.0);
            sum += v;
        }
        require(std::abs(sum - 1.0) <= kTol.joint_sum, errc::invalid_probability,
                "joint probabilities must sum to 1, got " + std::to_string(sum));
    }

    int order() const { return probs_.order(); }
    const std::vector<int>& dims() const { return probs_.dims(); }
    int dim(int mode) const { return probs_.dim(mode); }
    const TensorR& tensor() const { return probs_; }

  private:
    TensorR probs_;
};

struct HosvdResult {
    std::vector<ComplexMatrix> factors;        // per-mode unitaries u^{(k)}
    TensorC core;                              // all-orthogonal core tensor
    std::vector<RealVector> mode_singular_values;  // padded to the mode dimension
};

namespace detail {

// Fixes each column's phase so its largest-magnitude entry is real positive.
inline void fix_column_phases(ComplexMatrix& u) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        Eigen::Index argmax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            const double mag = std::abs(u(r, c));
            if (mag > best) {
                best = mag;
                argmax = r;
            }
        }
        if (best > 0.0) {
            const Complex phase = u(argmax, c) / best;
            u.col(c) *= std::conj(phase);
        }
    }
}

inline double joint_entropy_bits(const RealMatrix& joint) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.cols(); ++j) {
            h += entropic::entropy_term(std::max(joint(i, j), 0.0));
        }
    }
    return h;
}

inline void check_joint_matrix(const RealMatrix& joint) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.cols(); ++j) {
            require(joint(i, j) >= -kTol.probability_clamp, errc::invalid_probability,
                    "joint distribution entry is negative");
            sum += std::max(joint(i, j), 0.0);
        }
    }
    require(std::abs(sum - 1.0) <= kTol.joint_sum, errc::invalid_probability,
            "joint distribution must sum to 1");
}

} // namespace detail

/// Higher-order SVD: per-mode left singular bases and the all-orthogonal
/// core. Factor column phases are gauge-fixed (largest entry real positive).
inline HosvdResult hosvd(const PureTensorState& psi) {
    const int m = psi.order();
    HosvdResult out;
    out.factors.reserve(static_cast<std::size_t>(m));
    out.mode_singular_values.reserve(static_cast<std::size_t>(m));

    for (int k = 1; k <= m; ++k) {
        ComplexMatrix unfolding = unfold(psi.tensor(), k);
        spectral::SvdSystem svd = spectral::svd(unfolding);
        ComplexMatrix u = svd.left_vectors;
        detail::fix_column_phases(u);
        RealVector sigma = RealVector::Zero(psi.dim(k));
        sigma.head(svd.singular_values.size()) = svd.singular_values;
        out.factors.push_back(std::move(u));
        out.mode_singular_values.push_back(std::move(sigma));
    }

    TensorC core = psi.tensor();
    for (int k = 1; k <= m; ++k) {
        core = mode_product(core, ComplexMatrix(out.factors[static_cast<std::size_t>(k - 1)].adjoint()), k);
    }
    out.core = std::move(core);

    // Contract invariants: reconstruction, all-orthogonality, slice norms.
    TensorC rebuilt = out.core;
    for (int k = 1; k <= m; ++k) {
        rebuilt = mode_product(rebuilt, out.factors[static_cast<std::size_t>(k - 1)], k);
    }
    double err = 0.0;
    for (std::size_t f = 0; f < rebuilt.size(); ++f) {
        err = std::max(err, std::abs(rebuilt.flat()[f] - psi.tensor().flat()[f]));
    }
    require(err <= kTol.reconstruction, errc::internal_error, "HOSVD reconstruction error too large");

    for (int k = 1; k <= m; ++k) {
        ComplexMatrix slices = unfold(out.core, k);
        ComplexMatrix gram = slices * slices.adjoint();
        const RealVector& sigma = out.mode_singular_values[static_cast<std::size_t>(k - 1)];
        for (Eigen::Index a = 0; a < gram.rows(); ++a) {
            for (Eigen::Index b = 0; b < gram.cols(); ++b) {
                if (a == b) {
                    require(std::abs(gram(a, a).real() - sigma(a) * sigma(a)) <=
                                kTol.all_orthogonality,
                            errc::internal_error, "core slice norm does not match singular value");
                } else {
                    require(std::abs(gram(a, b)) <= kTol.all_orthogonality, errc::internal_error,
                            "core tensor is not all-orthogonal");
                }
            }
        }
    }
    return out;
}

/// One-particle reduced state rho^{(k)} = unfold_k(psi) unfold_k(psi)^dagger.
inline DensityState reduced_density(const PureTensorState& psi, int mode) {
    ComplexMatrix unfolding = unfold(psi.tensor(), mode);
    ComplexMatrix rho = unfolding * unfolding.adjoint();
    return DensityState::from_matrix(rho);
}

/// Joint outcome distribution for one projective observable per mode,
/// computed as |(prod_k u_k^dagger) psi|^2 and cross-checked against the
/// core-based route within kTol.route_agreement.
inline JointProbTensor joint_prob(const PureTensorState& psi,
                                  const std::vector<Observable>& observables) {
    const int m = psi.order();
    require(static_cast<int>(observables.size()) == m, errc::dimension_mismatch,
            "need exactly one observable per mode");
    for (int k = 1; k <= m; ++k) {
        require(observables[static_cast<std::size_t>(k - 1)].dimension() == psi.dim(k),
                errc::dimension_mismatch,
                "observable dimension does not match mode " + std::to_string(k));
    }

    TensorC rotated = psi.tensor();
    for (int k = 1; k <= m; ++k) {
        rotated = mode_product(
            rotated, ComplexMatrix(observables[static_cast<std::size_t>(k - 1)].basis().adjoint()), k);
    }
    TensorR probs(rotated.dims());
    for (std::size_t f = 0; f < rotated.size(); ++f) {
        probs.flat()[f] = std::norm(rotated.flat()[f]);
    }

    // Second route through the core tensor.
    HosvdResult h = hosvd(psi);
    TensorC core_route = h.core;
    for (int k = 1; k <= m; ++k) {
        ComplexMatrix b = observables[static_cast<std::size_t>(k - 1)].basis().adjoint() *
                          h.factors[static_cast<std::size_t>(k - 1)];
        core_route = mode_product(core_route, b, k);
    }
    double disagreement = 0.0;
    for (std::size_t f = 0; f < core_route.size(); ++f) {
        disagreement = std::max(disagreement,
                                std::abs(std::norm(core_route.flat()[f]) - probs.flat()[f]));
    }
    require(disagreement <= kTol.route_agreement, errc::internal_error,
            "joint probability routes disagree beyond tolerance");

    return JointProbTensor(std::move(probs));
}

/// Distribution of the mode-k outcome, all other modes summed out.
inline ProbabilityVector marginal(const JointProbTensor& p, int mode) {
    require(mode >= 1 && mode <= p.order(), errc::mode_out_of_range,
            "mode " + std::to_string(mode) + " outside 1.." + std::to_string(p.order()));
    RealVector out = RealVector::Zero(p.dim(mode));
    std::vector<int> index;
    for (std::size_t f = 0; f < p.tensor().size(); ++f) {
        p.tensor().unflatten(f, index);
        out(index[static_cast<std::size_t>(mode - 1)]) += p.tensor().flat()[f];
    }
    return ProbabilityVector(std::move(out));
}

/// Distribution of everything except mode k, flattened in the unfolding's
/// column order.
inline ProbabilityVector comarginal(const JointProbTensor& p, int mode) {
    RealMatrix unfolding = unfold(p.tensor(), mode);
    RealVector out = unfolding.colwise().sum().transpose();
    return ProbabilityVector(std::move(out));
}

/// Bipartite view of the joint distribution between mode k and the rest.
inline RealMatrix unfolded_joint(const JointProbTensor& p, int mode) {
    return unfold(p.tensor(), mode);
}

/// Shannon mutual information of a bipartite joint distribution, in bits.
inline double mutual_information(const RealMatrix& joint) {
    detail::check_joint_matrix(joint);
    RealVector p = joint.rowwise().sum();
    RealVector q = joint.colwise().sum().transpose();
    double info = 0.0;
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.cols(); ++j) {
            const double v = joint(i, j);
            if (v > 0.0) info += v * std::log2(v / (p(i) * q(j)));
        }
    }
    return std::max(info, 0.0);
}

/// L1 distance between the joint distribution and the product of its
/// marginals.
inline double correlation_distance(const RealMatrix& joint) {
    detail::check_joint_matrix(joint);
    RealVector p = joint.rowwise().sum();
    RealVector q = joint.colwise().sum().transpose();
    double dist = 0.0;
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.cols(); ++j) {
            dist += std::abs(joint(i, j) - p(i) * q(j));
        }
    }
    return dist;
}

/// Rank-one bound on the mutual information: (||P||_F^2 - sigma_1^2)/(2 ln 2).
inline double lemma2_bound(const RealMatrix& joint) {
    detail::check_joint_matrix(joint);
    const double frob2 = joint.squaredNorm();
    const double sigma1 = spectral::top_singular_value(joint);
    return kInvTwoLn2 * std::max(frob2 - sigma1 * sigma1, 0.0);
}

/// Checks that the mode-k outcome distribution is majorized by the squared
/// mode-k singular values.
inline bool marginal_majorization_check(const PureTensorState& psi, int mode,
                                        const Observable& observable) {
    ProbabilityVector p = quantum::measure_probs(observable, reduced_density(psi, mode));
    spectral::SvdSystem svd = spectral::svd(unfold(psi.tensor(), mode));
    std::vector<double> sigma2(static_cast<std::size_t>(psi.dim(mode)), 0.0);
    for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i) {
        sigma2[static_cast<std::size_t>(i)] = svd.singular_values(i) * svd.singular_values(i);
    }
    return majorization::majorizes(majorization::MajorizationVector(p.values()),
                                   majorization::MajorizationVector(std::move(sigma2)));
}

struct Prop2Record {
    double lhs = 0.0;       // H(X|Z) + H(Y|W)
    double rhs = 0.0;       // H(X) + H(Y) - I_AB
    double i_ab = 0.0;      // I(P) + I(Q)
    double lemma_lower = 0.0;
    double h_x = 0.0, h_y = 0.0;
    double h_x_given_z = 0.0, h_y_given_w = 0.0;
    double i_p = 0.0, i_q = 0.0;
    double residual = 0.0;  // |lhs - rhs|
};

/// Conditional-entropy identity for a bipartite state. The first pair (x, z)
/// and second pair (y, w) each consist of an observable on particle A and
/// its conditioning partner on particle B, matching the worked pairing of
/// the joint distributions P = joint(x, z) and Q = joint(y, w).
inline Prop2Record prop2_identity(const PureTensorState& psi, const Observable& x,
                                  const Observable& z, const Observable& y,
                                  const Observable& w) {
    require(psi.order() == 2, errc::dimension_mismatch, "prop2_identity needs a bipartite state");
    RealMatrix pm = unfolded_joint(joint_prob(psi, {x, z}), 1);
    RealMatrix qm = unfolded_joint(joint_prob(psi, {y, w}), 1);

    Prop2Record rec;
    const double h_p = detail::joint_entropy_bits(pm);
    const double h_q = detail::joint_entropy_bits(qm);
    const RealVector px = pm.rowwise().sum();
    const RealVector py = qm.rowwise().sum();
    const RealVector pz = pm.colwise().sum().transpose();
    const RealVector pw = qm.colwise().sum().transpose();
    rec.h_x = entropic::entropy_bits(px);
    rec.h_y = entropic::entropy_bits(py);
    const double h_z = entropic::entropy_bits(pz);
    const double h_w = entropic::entropy_bits(pw);
    rec.h_x_given_z = h_p - h_z;
    rec.h_y_given_w = h_q - h_w;
    rec.i_p = mutual_information(pm);
    rec.i_q = mutual_information(qm);
    rec.i_ab = rec.i_p + rec.i_q;
    rec.lhs = rec.h_x_given_z + rec.h_y_given_w;
    rec.rhs = rec.h_x + rec.h_y - rec.i_ab;
    rec.residual = std::abs(rec.lhs - rec.rhs);
    rec.lemma_lower = lemma2_bound(pm) + lemma2_bound(qm);
    require(rec.residual <= kTol.identity_residual, errc::internal_error,
            "conditional-entropy identity residual too large");
    return rec;
}

struct MemoryRecord {
    double c_s = 0.0;                  // overlap bound for the two observables
    double conditional_entropy = 0.0;  // S(A|B), negative for entangled pure states
    double value = 0.0;                // c_s + S(A|B)
};

/// Quantum-memory comparator c_s + S(A|B) for two observables on particle A
/// of a bipartite pure state; S(A|B) = -S(rho_B) since psi is pure.
inline MemoryRecord memory_comparator(const PureTensorState& psi, const Observable& x,
                                      const Observable& y) {
    require(psi.order() == 2, errc::dimension_mismatch, "memory_comparator needs a bipartite state");
    require(x.dimension() == psi.dim(1) && y.dimension() == psi.dim(1), errc::dimension_mismatch,
            "both observables must act on particle A");
    MemoryRecord rec;
    rec.c_s = entropic::maassen_uffink_bound(x, y);
    rec.conditional_entropy = -entropic::von_neumann_entropy(reduced_density(psi, 2).spectrum());
    rec.value = rec.c_s + rec.conditional_entropy;
    return rec;
}

struct Corollary2Record {
    double lhs = 0.0;  // H(X|Y,Z)
    double rhs = 0.0;  // H(X) + I(Y;Z) - T(X;Y;Z)
    double total_correlation = 0.0;
    double pair_mi = 0.0;  // I(Y;Z)
    double h_x = 0.0;
    double residual = 0.0;
};

/// Tripartite conditional-entropy identity through the total correlation.
inline Corollary2Record corollary2_identity(const PureTensorState& psi, const Observable& x,
                                            const Observable& y, const Observable& z) {
    require(psi.order() == 3, errc::dimension_mismatch, "corollary2_identity needs three modes");
    JointProbTensor p = joint_prob(psi, {x, y, z});
    ProbabilityVector p1 = marginal(p, 1);
    ProbabilityVector p2 = marginal(p, 2);
    ProbabilityVector p3 = marginal(p, 3);

    Corollary2Record rec;
    std::vector<int> index;
    double t = 0.0;
    for (std::size_t f = 0; f < p.tensor().size(); ++f) {
        const double v = p.tensor().flat()[f];
        if (v <= 0.0) continue;
        p.tensor().unflatten(f, index);
        t += v * std::log2(v / (p1[index[0]] * p2[index[1]] * p3[index[2]]));
    }
    rec.total_correlation = std::max(t, 0.0);

    RealMatrix yz = RealMatrix::Zero(p.dim(2), p.dim(3));
    for (std::size_t f = 0; f < p.tensor().size(); ++f) {
        p.tensor().unflatten(f, index);
        yz(index[1], index[2]) += p.tensor().flat()[f];
    }
    rec.pair_mi = mutual_information(yz);
    rec.h_x = entropic::shannon_entropy(p1);

    const double h_joint = entropic::entropy_bits(p.tensor().flat());
    const double h_yz = detail::joint_entropy_bits(yz);
    rec.lhs = h_joint - h_yz;
    rec.rhs = rec.h_x + rec.pair_mi - rec.total_correlation;
    rec.residual = std::abs(rec.lhs - rec.rhs);
    require(rec.residual <= kTol.identity_residual, errc::internal_error,
            "total-correlation identity residual too large");
    return rec;
}

} // namespace majbound::multipartite
