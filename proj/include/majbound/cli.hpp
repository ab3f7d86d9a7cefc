#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "majbound/io.hpp"

namespace majbound::cli {

using io::json;
using io::ProblemFile;

namespace detail {

inline const quantum::Observable& as_observable(const quantum::Measurement& m,
                                                const std::string& role) {
    const auto* obs = std::get_if<quantum::Observable>(&m);
    require(obs != nullptr, errc::schema_error,
            "the " + role + " observable must be projective (a basis, not a POVM)");
    return *obs;
}

inline json witness_to_json(const majorization::TValue& t) {
    json maximizers = json::array();
    for (const auto& w : t.maximizers) {
        json subsets = json::array();
        for (const auto& s : w.subsets) subsets.push_back(s);
        maximizers.push_back(json{{"composition", w.composition},
                                  {"subsets", std::move(subsets)},
                                  {"operator_eigenvalues", io::to_json(w.eigensystem.eigenvalues)}});
    }
    return json{{"mu", t.mu},
                {"value", t.value},
                {"tie_count", t.maximizers.size()},
                {"maximizers", std::move(maximizers)}};
}

inline json svector_to_json(const majorization::SVector& s) {
    json witnesses = json::array();
    for (const auto& t : s.witnesses) witnesses.push_back(witness_to_json(t));
    return json{{"observable_count", s.observable_count},
                {"components", s.components},
                {"t_values", s.t_values},
                {"witnesses", std::move(witnesses)}};
}

inline json distributions_to_json(const std::vector<quantum::ProbabilityVector>& dists) {
    json out = json::array();
    for (const auto& d : dists) out.push_back(io::to_json(d.values()));
    return out;
}

inline json candidates_to_json(const entropic::EntropyBoundReport& report) {
    json out = json::array();
    for (const auto& c : report.candidates) {
        json subsets = json::array();
        for (const auto& s : c.subsets) subsets.push_back(s);
        out.push_back(json{{"mu", c.mu},
                           {"composition", c.composition},
                           {"subsets", std::move(subsets)},
                           {"entropy_sum", c.entropy_sum},
                           {"distributions", distributions_to_json(c.distributions)}});
    }
    return out;
}

// The Maassen-Uffink comparator B_MU + H(spectrum); present when the first
// two measurements are projective with matching dimension.
inline std::optional<json> comparator_json(const std::vector<quantum::Measurement>& observables,
                                           const RealVector& spectrum) {
    if (observables.size() < 2) return std::nullopt;
    const auto* a = std::get_if<quantum::Observable>(&observables[0]);
    const auto* b = std::get_if<quantum::Observable>(&observables[1]);
    if (a == nullptr || b == nullptr || a->dimension() != b->dimension()) return std::nullopt;
    const double b_mu = entropic::maassen_uffink_bound(*a, *b);
    const double h_a = entropic::von_neumann_entropy(spectrum);
    return json{{"maassen_uffink", b_mu}, {"state_entropy", h_a}, {"total", b_mu + h_a}};
}

inline json prop2_to_json(const multipartite::Prop2Record& r) {
    return json{{"lhs", r.lhs},
                {"rhs", r.rhs},
                {"i_ab", r.i_ab},
                {"lemma_lower", r.lemma_lower},
                {"h_x", r.h_x},
                {"h_y", r.h_y},
                {"h_x_given_z", r.h_x_given_z},
                {"h_y_given_w", r.h_y_given_w},
                {"i_p", r.i_p},
                {"i_q", r.i_q},
                {"residual", r.residual}};
}

inline json corollary2_to_json(const multipartite::Corollary2Record& r) {
    return json{{"lhs", r.lhs},
                {"rhs", r.rhs},
                {"total_correlation", r.total_correlation},
                {"pair_mi", r.pair_mi},
                {"h_x", r.h_x},
                {"residual", r.residual}};
}

inline json cmd_svector(const ProblemFile& p) {
    require(!p.observables.empty(), errc::schema_error, "svector needs observables");
    majorization::SVector s =
        majorization::s_vector(p.observables, p.require_spectrum(), p.options.cap);
    return json{{"s", svector_to_json(s)}};
}

inline json cmd_entropy_bound(const ProblemFile& p) {
    require(!p.observables.empty(), errc::schema_error, "entropy-bound needs observables");
    const RealVector spectrum = p.require_spectrum();
    entropic::EntropyBoundReport report =
        entropic::conjecture_bound(p.observables, spectrum, p.options.cap);
    json out{{"h_s", report.h_s},
             {"conjecture_bound", report.conjecture_bound},
             {"cutoff", report.cutoff},
             {"log_base", 2},
             {"best_candidate", report.best_index},
             {"candidates", candidates_to_json(report)},
             {"s", svector_to_json(report.s)}};
    if (auto comparator = comparator_json(p.observables, spectrum)) {
        out["comparator"] = std::move(*comparator);
    }
    return out;
}

inline std::vector<quantum::Observable> mode_observables(const ProblemFile& p, int order) {
    require(static_cast<int>(p.observables.size()) >= order, errc::schema_error,
            "need one projective observable per tensor mode");
    std::vector<quantum::Observable> out;
    for (int k = 0; k < order; ++k) {
        out.push_back(as_observable(p.observables[static_cast<std::size_t>(k)],
                                    "mode-" + std::to_string(k + 1)));
    }
    return out;
}

inline json cmd_multipartite(const ProblemFile& p, const std::string& op) {
    const multipartite::PureTensorState& psi = p.require_tensor();
    if (op == "hosvd") {
        multipartite::HosvdResult h = multipartite::hosvd(psi);
        json sigmas = json::array();
        json factors = json::array();
        json spectra = json::array();
        for (int k = 1; k <= psi.order(); ++k) {
            sigmas.push_back(io::to_json(h.mode_singular_values[static_cast<std::size_t>(k - 1)]));
            factors.push_back(io::to_json(h.factors[static_cast<std::size_t>(k - 1)]));
            spectra.push_back(io::to_json(multipartite::reduced_density(psi, k).spectrum()));
        }
        return json{{"mode_singular_values", std::move(sigmas)},
                    {"factors", std::move(factors)},
                    {"core", io::to_json(h.core)},
                    {"reduced_spectra", std::move(spectra)}};
    }
    if (op == "joint") {
        std::vector<quantum::Observable> obs = mode_observables(p, psi.order());
        multipartite::JointProbTensor joint = multipartite::joint_prob(psi, obs);
        json marginals = json::array();
        json per_mode = json::array();
        for (int k = 1; k <= joint.order(); ++k) {
            marginals.push_back(io::to_json(multipartite::marginal(joint, k).values()));
            RealMatrix unfolded = multipartite::unfolded_joint(joint, k);
            per_mode.push_back(json{{"mode", k},
                                    {"mutual_information", multipartite::mutual_information(unfolded)},
                                    {"correlation_distance", multipartite::correlation_distance(unfolded)},
                                    {"lemma2_bound", multipartite::lemma2_bound(unfolded)}});
        }
        return json{{"joint", io::to_json(joint.tensor())},
                    {"marginals", std::move(marginals)},
                    {"per_mode", std::move(per_mode)}};
    }
    if (op == "prop2") {
        require(psi.order() == 2, errc::schema_error, "prop2 needs a bipartite tensor");
        require(p.observables.size() >= 4, errc::schema_error,
                "prop2 needs observables [x_on_A, z_on_B, y_on_A, w_on_B]");
        multipartite::Prop2Record rec = multipartite::prop2_identity(
            psi, detail::as_observable(p.observables[0], "x"),
            detail::as_observable(p.observables[1], "z"),
            detail::as_observable(p.observables[2], "y"),
            detail::as_observable(p.observables[3], "w"));
        return json{{"prop2", prop2_to_json(rec)}};
    }
    if (op == "memory") {
        require(psi.order() == 2, errc::schema_error, "memory needs a bipartite tensor");
        require(p.observables.size() >= 2, errc::schema_error,
                "memory needs two observables on particle A");
        multipartite::MemoryRecord rec = multipartite::memory_comparator(
            psi, detail::as_observable(p.observables[0], "first"),
            detail::as_observable(p.observables[1], "second"));
        return json{{"memory",
                     json{{"c_s", rec.c_s},
                          {"conditional_entropy", rec.conditional_entropy},
                          {"value", rec.value}}}};
    }
    if (op == "corollary2") {
        require(psi.order() == 3, errc::schema_error, "corollary2 needs a tripartite tensor");
        std::vector<quantum::Observable> obs = mode_observables(p, 3);
        multipartite::Corollary2Record rec =
            multipartite::corollary2_identity(psi, obs[0], obs[1], obs[2]);
        return json{{"corollary2", corollary2_to_json(rec)}};
    }
    fail(errc::schema_error, "unknown multipartite operation '" + op + "'");
}

struct VerifyOutcome {
    json outputs;
    std::vector<std::string> violations;
};

inline VerifyOutcome cmd_verify(const ProblemFile& p) {
    VerifyOutcome out;
    json checks = json::object();
    const io::Options& opt = p.options;

    if (!p.observables.empty() && (p.spectrum || p.state)) {
        const RealVector spectrum = p.require_spectrum();
        majorization::SVector s = majorization::s_vector(p.observables, spectrum, opt.cap);
        std::vector<double> bound_components = s.components;
        if (opt.mutate_s > 0.0) bound_components[0] -= opt.mutate_s;
        majorization::MajorizationVector bound(bound_components);

        oracle::SamplingConfig cfg;
        cfg.seed = opt.seed;
        cfg.n_samples = opt.samples;
        cfg.tolerance = opt.tolerance;
        oracle::DominanceReport dom = oracle::dominance_trial(p.observables, spectrum, cfg, bound);
        checks["dominance"] = json{{"samples", dom.samples},
                                   {"violations", dom.violations},
                                   {"worst_slack", dom.worst_slack},
                                   {"mutated", opt.mutate_s > 0.0}};
        if (dom.violations > 0) {
            out.violations.push_back("dominance: " + std::to_string(dom.violations) + " of " +
                                     std::to_string(dom.samples) +
                                     " sampled states escaped the majorant (worst slack " +
                                     std::to_string(dom.worst_slack) + ")");
        }

        entropic::EntropyBoundReport bound_report =
            entropic::conjecture_bound(p.observables, spectrum, opt.cap);
        checks["entropy_bound"] = json{{"h_s", bound_report.h_s},
                                       {"conjecture_bound", bound_report.conjecture_bound},
                                       {"cutoff", bound_report.cutoff}};

        oracle::SamplingConfig sweep = cfg;
        sweep.n_samples = opt.sweep_samples;
        oracle::SampledMinimum sampled =
            oracle::min_entropy_sampled(p.observables, spectrum, sweep);
        const bool sampled_beats = sampled.value < bound_report.conjecture_bound - 1e-6;
        checks["sampled_minimum"] = json{{"samples", sweep.n_samples},
                                         {"value", sampled.value},
                                         {"beats_conjecture", sampled_beats}};
        if (sampled_beats) {
            out.violations.push_back("conjecture: sampled state " +
                                     std::to_string(sampled.at_sample) + " reaches entropy sum " +
                                     std::to_string(sampled.value) + " below the candidate bound " +
                                     std::to_string(bound_report.conjecture_bound));
        }

        const int dim = quantum::dimension(p.observables.front());
        const bool pure = spectrum(0) >= 1.0 - kTol.spectrum_sum;
        if (dim <= 3 && p.observables.size() <= 3 && (dim == 2 || pure)) {
            const double grid = oracle::min_entropy_grid(p.observables, spectrum, opt.resolution);
            const bool grid_beats = grid < bound_report.conjecture_bound - 2e-3;
            checks["grid_minimum"] =
                json{{"resolution", opt.resolution}, {"value", grid}, {"beats_conjecture", grid_beats}};
            if (grid_beats) {
                out.violations.push_back(
                    "conjecture: grid search reaches entropy sum " + std::to_string(grid) +
                    " below the candidate bound " +
                    std::to_string(bound_report.conjecture_bound));
            }
        }
    }

    if (p.tensor) {
        const multipartite::PureTensorState& psi = *p.tensor;
        multipartite::hosvd(psi);  // throws if the HOSVD contract fails
        json tensor_checks{{"hosvd", "ok"}};
        if (static_cast<int>(p.observables.size()) >= psi.order()) {
            bool all_projective = true;
            for (int k = 0; k < psi.order(); ++k) {
                if (!quantum::is_projective(p.observables[static_cast<std::size_t>(k)])) {
                    all_projective = false;
                }
            }
            if (all_projective) {
                std::vector<quantum::Observable> obs = mode_observables(p, psi.order());
                multipartite::JointProbTensor joint = multipartite::joint_prob(psi, obs);
                int pinsker_failures = 0;
                int majorization_failures = 0;
                for (int k = 1; k <= psi.order(); ++k) {
                    RealMatrix unfolded = multipartite::unfolded_joint(joint, k);
                    const double info = multipartite::mutual_information(unfolded);
                    const double dist = multipartite::correlation_distance(unfolded);
                    const double lemma = multipartite::lemma2_bound(unfolded);
                    const double pinsker = multipartite::kInvTwoLn2 * dist * dist;
                    if (info < pinsker - 1e-10 || pinsker < lemma - 1e-10) ++pinsker_failures;
                    if (!multipartite::marginal_majorization_check(
                            psi, k, obs[static_cast<std::size_t>(k - 1)])) {
                        ++majorization_failures;
                    }
                }
                tensor_checks["pinsker_failures"] = pinsker_failures;
                tensor_checks["marginal_majorization_failures"] = majorization_failures;
                if (pinsker_failures > 0) {
                    out.violations.push_back("lemma2: information chain violated on the input tensor");
                }
                if (majorization_failures > 0) {
                    out.violations.push_back(
                        "lemma2: marginal escapes the squared singular values on the input tensor");
                }
            }
        }
        checks["tensor"] = std::move(tensor_checks);
    }

    // Seeded identity battery on random states and bases, independent of the
    // problem's own state.
    {
        oracle::SeededRng rng(oracle::derive_seed(opt.seed, 0xB477E5ULL));
        const int rounds = std::min(opt.samples, 100);
        double worst_prop2 = 0.0;
        double worst_cor2 = 0.0;
        int majorization_failures = 0;
        for (int i = 0; i < rounds; ++i) {
            multipartite::PureTensorState pair = oracle::sample_pure_tensor(rng, {2, 2});
            quantum::Observable x(oracle::sample_unitary(rng, 2));
            quantum::Observable z(oracle::sample_unitary(rng, 2));
            quantum::Observable y(oracle::sample_unitary(rng, 2));
            quantum::Observable w(oracle::sample_unitary(rng, 2));
            worst_prop2 =
                std::max(worst_prop2, multipartite::prop2_identity(pair, x, z, y, w).residual);

            multipartite::PureTensorState triple = oracle::sample_pure_tensor(rng, {2, 2, 2});
            quantum::Observable a(oracle::sample_unitary(rng, 2));
            quantum::Observable b(oracle::sample_unitary(rng, 2));
            quantum::Observable c(oracle::sample_unitary(rng, 2));
            worst_cor2 =
                std::max(worst_cor2, multipartite::corollary2_identity(triple, a, b, c).residual);
            if (!multipartite::marginal_majorization_check(triple, 1, a)) ++majorization_failures;
        }
        checks["identity_battery"] = json{{"rounds", rounds},
                                          {"worst_prop2_residual", worst_prop2},
                                          {"worst_corollary2_residual", worst_cor2},
                                          {"marginal_majorization_failures", majorization_failures}};
        if (worst_prop2 > kTol.identity_residual || worst_cor2 > kTol.identity_residual) {
            out.violations.push_back("identities: residual above tolerance in the random battery");
        }
        if (majorization_failures > 0) {
            out.violations.push_back("lemma2: marginal majorization failed in the random battery");
        }
    }

    out.outputs = json{{"checks", std::move(checks)},
                       {"violations", out.violations},
                       {"passed", out.violations.empty()}};
    return out;
}

} // namespace detail

inline int exit_code_for(const error& e) {
    switch (e.code()) {
        case errc::combinatorial_blowup: return 3;
        case errc::verification_failure: return 4;
        default: return 2;
    }
}

/// Entry point shared by the binary and the in-process CLI tests. args does
/// not include the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"optimal majorization and entropic uncertainty bounds"};
    app.require_subcommand(1);

    std::string input, output, mp_op;
    std::uint64_t seed = 0;
    std::uint64_t cap = 0;
    double resolution = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "problem file (JSON)")->required();
        cmd->add_option("--output", output, "write the report here instead of stdout");
        cmd->add_option("--seed", seed, "override the problem seed");
        cmd->add_option("--cap", cap, "override the enumeration cap");
        cmd->add_option("--resolution", resolution, "override the grid resolution");
    };

    CLI::App* sv = app.add_subcommand("svector", "optimal majorant and its witnesses");
    CLI::App* eb = app.add_subcommand("entropy-bound", "entropy bound and candidate table");
    CLI::App* mp = app.add_subcommand("multipartite", "tensor-state analyses");
    mp->add_option("op", mp_op, "one of hosvd|joint|prop2|memory|corollary2")
        ->required()
        ->check(CLI::IsMember({"hosvd", "joint", "prop2", "memory", "corollary2"}));
    CLI::App* vf = app.add_subcommand("verify", "run the oracle suites against the problem");
    for (CLI::App* cmd : {sv, eb, mp, vf}) add_common(cmd);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        ProblemFile problem = io::load_problem(input);
        if (sv->count("--seed") || eb->count("--seed") || mp->count("--seed") ||
            vf->count("--seed")) {
            problem.options.seed = seed;
        }
        if (sv->count("--cap") || eb->count("--cap") || mp->count("--cap") || vf->count("--cap")) {
            problem.options.cap = static_cast<std::size_t>(cap);
        }
        if (sv->count("--resolution") || eb->count("--resolution") || mp->count("--resolution") ||
            vf->count("--resolution")) {
            problem.options.resolution = resolution;
        }

        std::string command;
        json outputs;
        std::vector<std::string> violations;
        if (sv->parsed()) {
            command = "svector";
            outputs = detail::cmd_svector(problem);
        } else if (eb->parsed()) {
            command = "entropy-bound";
            outputs = detail::cmd_entropy_bound(problem);
        } else if (mp->parsed()) {
            command = "multipartite";
            outputs = detail::cmd_multipartite(problem, mp_op);
        } else {
            command = "verify";
            detail::VerifyOutcome outcome = detail::cmd_verify(problem);
            outputs = std::move(outcome.outputs);
            violations = std::move(outcome.violations);
        }

        json report{{"command", command},
                    {"input_digest", io::digest(problem.raw)},
                    {"library_version", kLibraryVersion},
                    {"seed", problem.options.seed},
                    {"options", io::to_json(problem.options)},
                    {"tolerances", io::tolerances_json()},
                    {"outputs", std::move(outputs)}};
        if (mp->parsed()) report["subcommand"] = mp_op;
        io::check_finite(report);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        report["timings"] = json{{"elapsed_seconds", elapsed}};

        const std::string text = report.dump(2) + "\n";
        if (!output.empty()) {
            std::ofstream file(output);
            require(file.good(), errc::schema_error, "cannot open output file " + output);
            file << text;
        } else {
            out << text;
        }

        if (!violations.empty()) {
            for (const auto& v : violations) err << "violation: " << v << "\n";
            return 4;
        }
        return 0;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace majbound::cli
