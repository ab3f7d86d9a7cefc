#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "majbound/multipartite.hpp"
#include "majbound/oracle.hpp"
#include "majbound/quantum.hpp"

namespace majbound::io {

using nlohmann::json;

// Complex scalars are [re, im] pairs; matrices are row-major entry lists;
// tensors are flat amplitude lists with the mode-1 index fastest.

inline json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(errc::schema_error, "complex entries must be [re, im] number pairs");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(to_json(m(r, c)));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
        fail(errc::schema_error, "matrix needs rows, cols and a row-major entries list");
    }
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& entries = j.at("entries");
    if (rows <= 0 || cols <= 0 || !entries.is_array() ||
        entries.size() != static_cast<std::size_t>(rows * cols)) {
        fail(errc::schema_error, "matrix entry count must equal rows*cols");
    }
    ComplexMatrix m(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(entries[i++]);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            require(std::isfinite(m(r, c).real()) && std::isfinite(m(r, c).imag()),
                    errc::schema_error, "matrix entries must be finite");
        }
    }
    return m;
}

inline json to_json(const RealVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline RealVector real_vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) fail(errc::schema_error, "expected a nonempty number array");
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(errc::schema_error, "expected a number array");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

inline json to_json(const multipartite::TensorC& t) {
    json amps = json::array();
    for (const Complex& v : t.flat()) amps.push_back(to_json(v));
    return json{{"dims", t.dims()}, {"amplitudes", std::move(amps)}};
}

inline json to_json(const multipartite::TensorR& t) {
    json values = json::array();
    for (double v : t.flat()) values.push_back(v);
    return json{{"dims", t.dims()}, {"values", std::move(values)}};
}

inline multipartite::PureTensorState tensor_state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("amplitudes")) {
        fail(errc::schema_error, "tensor needs dims and a flat amplitudes list (mode-1 fastest)");
    }
    std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    const json& amps = j.at("amplitudes");
    std::vector<Complex> flat;
    flat.reserve(amps.size());
    for (const auto& a : amps) flat.push_back(complex_from_json(a));
    try {
        return multipartite::PureTensorState(multipartite::TensorC(std::move(dims), std::move(flat)));
    } catch (const error& e) {
        fail(errc::schema_error, std::string("invalid tensor state: ") + e.what());
    }
}

inline quantum::Measurement measurement_from_json(const json& j) {
    if (!j.is_object()) fail(errc::schema_error, "each observable must be an object");
    const std::string label = j.value("label", std::string{});
    try {
        if (j.contains("basis")) {
            std::optional<RealVector> eigenvalues;
            if (j.contains("eigenvalues")) eigenvalues = real_vector_from_json(j.at("eigenvalues"));
            return quantum::Observable(matrix_from_json(j.at("basis")), label,
                                       std::move(eigenvalues));
        }
        if (j.contains("effects")) {
            std::vector<ComplexMatrix> effects;
            for (const auto& e : j.at("effects")) effects.push_back(matrix_from_json(e));
            return quantum::Povm(std::move(effects), label);
        }
    } catch (const error& e) {
        if (e.code() == errc::schema_error) throw;
        fail(errc::schema_error, std::string("invalid observable '") + label + "': " + e.what());
    }
    fail(errc::schema_error, "observable needs either a basis matrix or an effects list");
}

struct Options {
    std::uint64_t seed = 20240601;
    std::size_t cap = kDefaultEnumerationCap;
    double resolution = M_PI / 400.0;
    int samples = 200;
    int sweep_samples = 100000;  // sampled conjecture-consistency sweep in verify
    double mutate_s = 0.0;       // shrink applied to t_1 for mutation checks
    double tolerance = kTol.majorization;
};

inline Options options_from_json(const json& j) {
    Options opt;
    if (j.is_null()) return opt;
    if (!j.is_object()) fail(errc::schema_error, "options must be an object");
    opt.seed = j.value("seed", opt.seed);
    opt.cap = j.value("cap", opt.cap);
    opt.resolution = j.value("resolution", opt.resolution);
    opt.samples = j.value("samples", opt.samples);
    opt.sweep_samples = j.value("sweep_samples", opt.sweep_samples);
    opt.mutate_s = j.value("mutate_s", opt.mutate_s);
    opt.tolerance = j.value("tolerance", opt.tolerance);
    require(opt.samples >= 1 && opt.sweep_samples >= 1, errc::schema_error,
            "sample counts must be positive");
    require(opt.resolution > 0.0, errc::schema_error, "resolution must be positive");
    return opt;
}

inline json to_json(const Options& o) {
    return json{{"seed", o.seed},          {"cap", o.cap},
                {"resolution", o.resolution}, {"samples", o.samples},
                {"sweep_samples", o.sweep_samples}, {"mutate_s", o.mutate_s},
                {"tolerance", o.tolerance}};
}

struct ProblemFile {
    std::string version;
    std::vector<quantum::Measurement> observables;
    std::optional<RealVector> spectrum;
    std::optional<quantum::DensityState> state;  // present when a density matrix was given
    std::optional<multipartite::PureTensorState> tensor;
    Options options;
    json raw;

    RealVector require_spectrum() const {
        if (state) return state->spectrum();
        require(spectrum.has_value(), errc::schema_error, "problem needs a state spectrum");
        return *spectrum;
    }

    const multipartite::PureTensorState& require_tensor() const {
        require(tensor.has_value(), errc::schema_error, "problem needs an amplitude tensor");
        return *tensor;
    }
};

inline ProblemFile parse_problem(const json& j) {
    if (!j.is_object()) fail(errc::schema_error, "problem file must be a JSON object");
    ProblemFile p;
    p.raw = j;
    p.version = j.value("version", std::string{"1"});
    if (j.contains("observables")) {
        if (!j.at("observables").is_array()) fail(errc::schema_error, "observables must be a list");
        for (const auto& o : j.at("observables")) {
            p.observables.push_back(measurement_from_json(o));
        }
    }
    if (j.contains("state")) {
        const json& s = j.at("state");
        if (!s.is_object()) fail(errc::schema_error, "state must be an object");
        std::optional<RealVector> spectrum;
        if (s.contains("spectrum")) spectrum = real_vector_from_json(s.at("spectrum"));
        try {
            if (s.contains("density_matrix")) {
                ComplexMatrix rho = matrix_from_json(s.at("density_matrix"));
                p.state = spectrum ? quantum::DensityState(*spectrum, std::move(rho))
                                   : quantum::DensityState::from_matrix(rho);
                p.spectrum = p.state->spectrum();
            } else if (spectrum) {
                quantum::DensityState check(*spectrum);  // validates ordering and the sum
                p.spectrum = check.spectrum();
            }
            if (s.contains("tensor")) p.tensor = tensor_state_from_json(s.at("tensor"));
        } catch (const error& e) {
            if (e.code() == errc::schema_error) throw;
            fail(errc::schema_error, std::string("invalid state: ") + e.what());
        }
    }
    p.options = options_from_json(j.contains("options") ? j.at("options") : json{});
    return p;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::schema_error, "cannot open input file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(errc::schema_error, std::string("malformed JSON: ") + e.what());
    }
    return j;
}

inline ProblemFile load_problem(const std::string& path) {
    return parse_problem(read_json_file(path));
}

/// FNV-1a 64-bit digest of the canonical (sorted-key) dump of the input.
inline std::string digest(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

inline json tolerances_json() {
    return json{{"hermiticity", kTol.hermiticity},
                {"unitarity", kTol.unitarity},
                {"reconstruction", kTol.reconstruction},
                {"spectrum_sum", kTol.spectrum_sum},
                {"spectrum_match", kTol.spectrum_match},
                {"probability_sum", kTol.probability_sum},
                {"probability_clamp", kTol.probability_clamp},
                {"psd", kTol.psd},
                {"majorization", kTol.majorization},
                {"saturation", kTol.saturation},
                {"argmax_tie", kTol.argmax_tie},
                {"partial_sum", kTol.partial_sum},
                {"identity_residual", kTol.identity_residual},
                {"route_agreement", kTol.route_agreement},
                {"all_orthogonality", kTol.all_orthogonality},
                {"tensor_norm", kTol.tensor_norm},
                {"joint_sum", kTol.joint_sum}};
}

/// Reports must not leak NaN or infinities; nlohmann would serialize them as
/// null, so they are rejected before emission.
inline void check_finite(const json& j) {
    if (j.is_number_float()) {
        require(std::isfinite(j.get<double>()), errc::internal_error,
                "non-finite number in report");
    } else if (j.is_array() || j.is_object()) {
        for (const auto& child : j) check_finite(child);
    }
}

} // namespace majbound::io
