#pragma once

#include <cstddef>

namespace majbound {

inline constexpr const char* kLibraryVersion = "0.1.0";

// All numeric tolerances live here so reports can embed the exact set a run
// used. Each entry is an absolute bound unless noted.
struct Tolerances {
    double hermiticity = 1e-9;        // ||A - A^dagger||_max precondition
    double unitarity = 1e-10;         // ||U^dagger U - I||_max
    double reconstruction = 1e-9;     // eigen/SVD/HOSVD rebuild error
    double spectrum_sum = 1e-10;      // |sum(lambda) - 1|
    double spectrum_match = 1e-8;     // declared spectrum vs matrix eigenvalues
    double probability_sum = 1e-9;    // |sum(p) - 1|
    double probability_clamp = 1e-12; // negatives above this are rounding noise
    double psd = 1e-10;               // min eigenvalue of an effect
    double majorization = 1e-9;       // prefix-sum slack and total equality
    double saturation = 1e-9;         // t saturation against observable count
    double argmax_tie = 1e-9;         // tied maximizer detection
    double partial_sum = 1e-10;       // trace route vs probability route
    double identity_residual = 1e-9;  // exact information identities
    double route_agreement = 1e-10;   // joint-probability dual route
    double all_orthogonality = 1e-9;  // core tensor slice inner products
    double tensor_norm = 1e-10;       // |‖psi‖_F - 1|
    double joint_sum = 1e-9;          // |sum(P) - 1|
};

inline constexpr Tolerances kTol{};

// Guard on the number of operator sums the subset enumeration may visit.
inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

} // namespace majbound
