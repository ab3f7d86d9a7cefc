#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace majbound {

// Every failure mode the library reports. The CLI maps these onto process
// exit codes (input errors -> 2, resource caps -> 3, verification -> 4).
enum class errc {
    not_square,
    not_hermitian,
    convergence_failure,
    dimension_mismatch,
    missing_density_matrix,
    invalid_probability,
    invalid_spectrum,
    index_out_of_range,
    duplicate_index,
    mu_out_of_range,
    combinatorial_blowup,
    mode_out_of_range,
    out_of_range,
    dimension_too_large,
    schema_error,
    verification_failure,
    internal_error,
};

inline const char* to_string(errc code) {
    switch (code) {
        case errc::not_square: return "not_square";
        case errc::not_hermitian: return "not_hermitian";
        case errc::convergence_failure: return "convergence_failure";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::missing_density_matrix: return "missing_density_matrix";
        case errc::invalid_probability: return "invalid_probability";
        case errc::invalid_spectrum: return "invalid_spectrum";
        case errc::index_out_of_range: return "index_out_of_range";
        case errc::duplicate_index: return "duplicate_index";
        case errc::mu_out_of_range: return "mu_out_of_range";
        case errc::combinatorial_blowup: return "combinatorial_blowup";
        case errc::mode_out_of_range: return "mode_out_of_range";
        case errc::out_of_range: return "out_of_range";
        case errc::dimension_too_large: return "dimension_too_large";
        case errc::schema_error: return "schema_error";
        case errc::verification_failure: return "verification_failure";
        case errc::internal_error: return "internal_error";
    }
    return "unknown";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace majbound
