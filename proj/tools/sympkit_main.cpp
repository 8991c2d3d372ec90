// sympkit — batch front-end over the symplectic-system analysis library.
//
//   sympkit <command> --config <path> [--out <path>] [--format json|csv]
//
// Commands: validate, definiteness, weyl, green-solve, deficiency.
// Exit codes: 0 analysis passed, 1 analysis-level failure/violation,
// 2 usage or configuration errors. SYMPKIT_THREADS caps the per-lambda
// parallelism; output assembly is sequential and deterministic.

#include "sympkit/config.hpp"
#include "sympkit/definiteness.hpp"
#include "sympkit/linalg.hpp"
#include "sympkit/relations.hpp"
#include "sympkit/reporting.hpp"
#include "sympkit/weyl_green.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

namespace {

using namespace sympkit;

int thread_cap() {
    if (const char* raw = std::getenv("SYMPKIT_THREADS")) {
        const int parsed = std::atoi(raw);
        if (parsed >= 1) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic parallel map: results land by index, first exception rethrown.
void parallel_for(int count, const std::function<void(int)>& body) {
    const int workers = std::min(thread_cap(), std::max(count, 1));
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

struct CommandResult {
    Json report;
    bool pass{true};
};

void require_nonreal_lambdas(const RunConfig& config) {
    if (config.lambdas.empty())
        throw ConfigError("this command needs a nonempty lambda list");
    for (const Complex& lambda : config.lambdas)
        if (lambda.imag() == 0.0)
            throw ConfigError("real lambda rejected: disk quantities need Im(lambda) != 0");
}

std::vector<int> default_N_list(const SymplecticSystem& sys, const RunConfig& config) {
    if (!config.N_list.empty()) return config.N_list;
    const int hi = sys.horizon();
    const int lo = std::max(1, hi / 2);
    return lo < hi ? std::vector<int>{lo, hi} : std::vector<int>{hi};
}

CommandResult cmd_validate(const RunConfig& config) {
    const SymplecticSystem& sys = *config.system;
    const ValidationReport report = validate_hypotheses(sys);
    const double tol = sys.tolerances().structural_tol;

    CommandResult result;
    result.pass = report.pass;
    Json checks = Json::array();
    checks.push_back(json_check("symplectic_identity", report.max_symplectic <= tol,
                                report.max_symplectic));
    checks.push_back(json_check("weight_hermitian", report.max_weight_hermitian <= tol,
                                report.max_weight_hermitian));
    checks.push_back(json_check("weight_isotropic", report.max_weight_isotropic <= tol,
                                report.max_weight_isotropic));
    checks.push_back(json_check("weight_semidefinite",
                                report.min_weight_eig >= -sys.tolerances().psd_tol,
                                std::max(0.0, -report.min_weight_eig)));
    checks.push_back(json_check("weight_roundtrip", report.max_v_roundtrip <= tol,
                                report.max_v_roundtrip));
    result.report["checks"] = std::move(checks);
    if (!report.pass) result.report["first_violation"] = report.first_violation;

    Json per_k = Json::array();
    for (const HypothesisCheck& check : report.per_k) {
        Json row;
        row["k"] = check.k;
        row["symplectic"] = check.symplectic;
        row["weight_hermitian"] = check.weight_hermitian;
        row["weight_isotropic"] = check.weight_isotropic;
        row["weight_min_eig"] = check.weight_min_eig;
        row["weight_roundtrip"] = check.v_roundtrip;
        row["pass"] = check.pass;
        per_k.push_back(std::move(row));
    }
    result.report["per_k"] = std::move(per_k);
    return result;
}

CommandResult cmd_definiteness(const RunConfig& config) {
    const SymplecticSystem& sys = *config.system;
    const IndexRange interval = config.interval.value_or(IndexRange{0, sys.horizon()});
    if (interval.empty() || interval.lo != 0 || interval.hi > sys.horizon())
        throw ConfigError("definiteness: interval must be a prefix [0, m] inside the horizon");
    const Complex probe = config.lambdas.empty() ? Complex(0, 0) : config.lambdas.front();

    CommandResult result;
    Json prefix_ranks = Json::array();
    for (int m = 0; m <= interval.hi; ++m) {
        Json row;
        row["m"] = m;
        row["rank"] = gram_phi(sys, probe, {0, m}).rank;
        prefix_ranks.push_back(std::move(row));
    }
    result.report["rank_per_prefix"] = std::move(prefix_ranks);

    const auto [max_interval, max_rank] = maximal_rank_interval(sys, interval.hi);
    result.report["maximal_rank_interval"] = Json::array({max_interval.lo, max_interval.hi});
    result.report["rank"] = max_rank;

    const DefinitenessCertificate cert = is_definite(sys, interval, probe);
    result.report["definite"] = cert.definite;
    result.report["gram_eigenvalues"] = json_real_vector(cert.eigenvalues);
    if (cert.kernel_vector) {
        result.report["kernel_vector"] = json_matrix(*cert.kernel_vector);
        result.report["kernel_semi_norm"] = cert.kernel_semi_norm;
    }

    // lambda-independence of the kernel across the probe list, when given
    if (config.lambdas.size() >= 2) {
        const KernelComparison cmp = kernel_lambda_independence(sys, interval, config.lambdas);
        result.report["kernel_lambda_independent"] = cmp.consistent;
        result.report["kernel_max_principal_angle"] = cmp.max_principal_angle;
        if (!cmp.consistent) result.pass = false;
    }

    // block-form sufficient condition, reported when the layout is recoverable
    bool fired = false;
    Json block_check;
    if (config.l_index) {
        try {
            fired = block_sufficient_definite(sys, *config.l_index);
            block_check["l"] = *config.l_index;
            block_check["fired"] = fired;
        } catch (const StructureError&) {
            block_check["l"] = *config.l_index;
            block_check["detectable"] = false;
        }
    } else {
        for (int l = 1; l <= interval.hi && !fired; ++l) {
            try {
                if (block_sufficient_definite(sys, l)) {
                    fired = true;
                    block_check["l"] = l;
                    block_check["fired"] = true;
                }
            } catch (const StructureError&) {
                break;  // layout not recoverable; nothing to scan
            }
        }
        if (!fired) block_check["fired"] = false;
    }
    result.report["sufficient_condition"] = std::move(block_check);
    // the sufficient condition must never contradict the Gram verdict
    if (fired && !cert.definite) result.pass = false;
    return result;
}

CommandResult cmd_weyl(const RunConfig& config) {
    require_nonreal_lambdas(config);
    const SymplecticSystem& sys = *config.system;
    const std::vector<int> N_list = default_N_list(sys, config);
    const std::optional<AlphaMatrix> alpha =
        config.alpha ? std::optional<AlphaMatrix>(AlphaMatrix(*config.alpha)) : std::nullopt;
    const std::optional<AlphaMatrix> beta =
        config.beta ? std::optional<AlphaMatrix>(AlphaMatrix(*config.beta)) : std::nullopt;

    const int count = static_cast<int>(config.lambdas.size());
    std::vector<Json> sections(static_cast<std::size_t>(count));
    std::vector<bool> passes(static_cast<std::size_t>(count), true);

    parallel_for(count, [&](int i) {
        const Complex lambda = config.lambdas[static_cast<std::size_t>(i)];
        const WeylState state = approx_half_line_M(sys, lambda, N_list, beta, alpha);
        const WeylState state_conj = approx_half_line_M(sys, std::conj(lambda), N_list, beta, alpha);
        const double symmetry = frob(state.M.adjoint() - state_conj.M);

        Json section;
        section["lambda"] = json_complex(lambda);
        Json trace = Json::array();
        bool all_in_disk = true;
        for (const WeylIterate& it : state.trace) {
            Json row;
            row["N"] = it.N;
            row["boundary_solvable"] = it.boundary_solvable;
            if (it.boundary_solvable) {
                row["M"] = json_matrix(it.M);
                row["drift"] = it.drift_from_prev;
                row["max_disk_eigenvalue"] = it.max_disk_eigenvalue;
                row["in_disk"] = it.in_disk;
                all_in_disk = all_in_disk && it.in_disk;
            }
            trace.push_back(std::move(row));
        }
        section["trace"] = std::move(trace);
        section["M_plus"] = json_matrix(state.M);
        section["final_drift"] = state.final_drift;
        Json ek = Json::array();
        for (std::size_t s = 0; s < state.Ek_samples.size(); ++s) {
            Json row;
            row["N"] = N_list[s];
            row["eigenvalues"] = json_real_vector(hermitian_eigenvalues(state.Ek_samples[s]));
            ek.push_back(std::move(row));
        }
        section["E_N_eigenvalues"] = std::move(ek);

        const double symmetry_tol = 1e-8 * std::max(1.0, frob(state.M));
        Json checks = Json::array();
        checks.push_back(json_check("iterates_in_disk", all_in_disk, 0.0));
        checks.push_back(json_check("adjoint_symmetry", symmetry <= symmetry_tol, symmetry));
        // Nevanlinna sign: delta * Im M_plus >= 0
        const Matrix imag_part =
            (state.M - state.M.adjoint()) / Complex(0.0, 2.0);
        const double sign_floor = static_cast<double>(state.delta) * min_eigenvalue(imag_part);
        checks.push_back(json_check("nevanlinna_sign",
                                    sign_floor >= -sys.tolerances().psd_tol *
                                                      std::max(1.0, frob(imag_part)),
                                    std::max(0.0, -sign_floor)));
        bool ok = true;
        for (const auto& check : checks) ok = ok && check["status"] == "pass";
        section["checks"] = std::move(checks);
        sections[static_cast<std::size_t>(i)] = std::move(section);
        passes[static_cast<std::size_t>(i)] = ok;
    });

    CommandResult result;
    Json list = Json::array();
    for (int i = 0; i < count; ++i) {
        result.pass = result.pass && passes[static_cast<std::size_t>(i)];
        list.push_back(std::move(sections[static_cast<std::size_t>(i)]));
    }
    result.report["weyl"] = std::move(list);
    return result;
}

CommandResult cmd_green_solve(const RunConfig& config) {
    require_nonreal_lambdas(config);
    const SymplecticSystem& sys = *config.system;
    if (config.forcing.empty())
        throw ConfigError("green-solve: missing forcing sequence \"f\"");
    const int boundary = config.boundary_index.value_or(sys.horizon());
    if (static_cast<int>(config.forcing.size()) > boundary + 1)
        throw ConfigError("green-solve: forcing longer than the solve range");
    const AlphaMatrix alpha = config.alpha ? AlphaMatrix(*config.alpha)
                                           : AlphaMatrix::canonical(sys.half_dim());
    const std::optional<AlphaMatrix> beta =
        config.beta ? std::optional<AlphaMatrix>(AlphaMatrix(*config.beta)) : std::nullopt;

    std::vector<Matrix> f_values;
    f_values.reserve(config.forcing.size());
    for (const Vector& fk : config.forcing) f_values.push_back(fk);
    const TrajectorySequence f(0, std::move(f_values), Complex(0, 0));

    const int count = static_cast<int>(config.lambdas.size());
    std::vector<Json> sections(static_cast<std::size_t>(count));
    std::vector<bool> passes(static_cast<std::size_t>(count), true);

    parallel_for(count, [&](int i) {
        const Complex lambda = config.lambdas[static_cast<std::size_t>(i)];
        const GreenTable table = GreenTable::build(sys, lambda, alpha, boundary, beta);
        const TrajectorySequence z = zhat(table, f);

        const IndexRange full{0, table.last()};
        const IndexRange f_window{0, std::min(f.last(), table.last())};
        const double z_norm = semi_norm(sys, z, full);
        const double f_norm = semi_norm(sys, f, f_window);
        const double bound = f_norm / std::abs(lambda.imag());
        const double rec_residual = recursion_residual(sys, lambda, z, &f);
        const double alpha_z0 = frob(alpha.value() * z.at(0));
        const double scale = std::max(1.0, z_norm);

        Json section;
        section["lambda"] = json_complex(lambda);
        section["pairing_mismatch"] = table.pairing_mismatch();
        section["z_hat_norm"] = z_norm;
        section["f_norm"] = f_norm;
        section["norm_bound"] = bound;
        section["norm_margin"] = bound - z_norm;

        Json checks = Json::array();
        checks.push_back(json_check("recursion_residual", rec_residual <= 1e-8 * scale,
                                    rec_residual));
        checks.push_back(json_check("alpha_z0", alpha_z0 <= 1e-10 * scale, alpha_z0));
        checks.push_back(json_check("norm_bound", z_norm <= bound + 1e-12 * scale,
                                    std::max(0.0, z_norm - bound)));

        Json z_payload = Json::array();
        for (int k = 0; k <= z.last(); ++k) z_payload.push_back(json_matrix(z.at(k)));
        section["z_hat"] = std::move(z_payload);

        if (config.v) {
            const TrajectorySequence y = yhat(table, *config.v, f);
            const double y_norm = semi_norm(sys, y, full);
            const TrajectorySequence xv = [&] {
                std::vector<Matrix> values;
                for (int k = 0; k <= table.last(); ++k)
                    values.push_back(table.X_plus().at(k) * (*config.v));
                return TrajectorySequence(0, std::move(values), lambda);
            }();
            const double xv_norm = semi_norm(sys, xv, full);
            const double y_bound = bound + xv_norm;
            const double alpha_y0 = frob(alpha.value() * y.at(0) - *config.v);
            const double y_rec = recursion_residual(sys, lambda, y, &f);
            checks.push_back(json_check("y_recursion_residual",
                                        y_rec <= 1e-8 * std::max(1.0, y_norm), y_rec));
            checks.push_back(json_check("alpha_y0_equals_v",
                                        alpha_y0 <= 1e-10 * std::max(1.0, y_norm), alpha_y0));
            checks.push_back(json_check("y_norm_bound", y_norm <= y_bound + 1e-12 * scale,
                                        std::max(0.0, y_norm - y_bound)));
            section["y_hat_norm"] = y_norm;
            section["y_norm_bound"] = y_bound;
            Json y_payload = Json::array();
            for (int k = 0; k <= y.last(); ++k) y_payload.push_back(json_matrix(y.at(k)));
            section["y_hat"] = std::move(y_payload);
        }

        bool ok = true;
        for (const auto& check : checks) ok = ok && check["status"] == "pass";
        section["checks"] = std::move(checks);
        sections[static_cast<std::size_t>(i)] = std::move(section);
        passes[static_cast<std::size_t>(i)] = ok;
    });

    CommandResult result;
    Json list = Json::array();
    for (int i = 0; i < count; ++i) {
        result.pass = result.pass && passes[static_cast<std::size_t>(i)];
        list.push_back(std::move(sections[static_cast<std::size_t>(i)]));
    }
    result.report["green_solve"] = std::move(list);
    return result;
}

CommandResult cmd_deficiency(const RunConfig& config) {
    require_nonreal_lambdas(config);
    const SymplecticSystem& sys = *config.system;
    const IndexRange interval = config.interval.value_or(maximal_rank_interval(sys, sys.horizon()).first);
    const DeficiencyReport report = deficiency_consistency(
        sys, config.lambdas, interval, default_N_list(sys, config), config.growth_ratio_threshold);

    CommandResult result;
    result.report["interval"] = Json::array({interval.lo, interval.hi});
    result.report["rank_phi"] = report.rank_phi;
    result.report["gap"] = report.gap;
    Json samples = Json::array();
    for (const DeficiencySample& s : report.samples) {
        Json row;
        row["lambda"] = json_complex(s.lambda);
        row["d"] = s.d;
        row["d_tilde"] = s.d_tilde;
        row["growth_ratios"] = [&] {
            Json arr = Json::array();
            for (double r : s.classification.growth_ratios) arr.push_back(r);
            return arr;
        }();
        row["allowed_ratio"] = s.classification.allowed_ratio;
        row["dynamic_range"] = s.classification.dynamic_range;
        samples.push_back(std::move(row));
    }
    result.report["samples"] = std::move(samples);

    Json checks = Json::array();
    checks.push_back(json_check("d_tilde_nonnegative", report.d_tilde_nonnegative, 0.0));
    checks.push_back(json_check("gap_constant", report.gap_constant, 0.0));
    checks.push_back(json_check("half_plane_constant", report.half_plane_constant, 0.0));
    checks.push_back(json_check("definite_implies_equal", report.definite_implies_equal, 0.0));
    bool in_bounds = true;
    for (const DeficiencySample& s : report.samples)
        in_bounds = in_bounds && s.d >= sys.half_dim() && s.d <= sys.dim();
    checks.push_back(json_check("count_within_bounds", in_bounds, 0.0));
    result.pass = report.d_tilde_nonnegative && report.gap_constant &&
                  report.half_plane_constant && report.definite_implies_equal && in_bounds;
    result.report["checks"] = std::move(checks);
    return result;
}

int run(int argc, char** argv) {
    CLI::App app{"sympkit — discrete symplectic system analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;

    const std::vector<std::pair<std::string, CommandResult (*)(const RunConfig&)>> commands = {
        {"validate", cmd_validate},
        {"definiteness", cmd_definiteness},
        {"weyl", cmd_weyl},
        {"green-solve", cmd_green_solve},
        {"deficiency", cmd_deficiency},
    };

    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_path, "output path (default: config, then stdout)");
        sub->add_option("--format", format, "json | csv (default: config, then json)")
            ->check(CLI::IsMember({"json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    }

    try {
        const RunConfig config = load_run_config(config_path);
        const CommandResult result = [&] {
            for (const auto& [name, fn] : commands)
                if (app.get_subcommand(name)->parsed()) {
                    CommandResult r = fn(config);
                    Json doc;
                    doc["command"] = name;
                    doc["config"] = config.echo;
                    for (auto it = r.report.begin(); it != r.report.end(); ++it)
                        doc[it.key()] = it.value();
                    doc["pass"] = r.pass;
                    r.report = std::move(doc);
                    return r;
                }
            throw ConfigError("no command selected");
        }();

        const std::string chosen_format = !format.empty() ? format : config.format;
        const std::string text = chosen_format == "csv" ? to_csv_string(result.report)
                                                        : to_json_string(result.report);
        const std::string target = !out_path.empty()
                                       ? out_path
                                       : config.out_path.value_or(std::string{});
        if (!target.empty()) {
            std::ofstream out(target, std::ios::binary);
            if (!out) {
                std::cerr << "sympkit: cannot open output path: " << target << "\n";
                return 2;
            }
            out << text;
        } else {
            std::cout << text;
        }
        return result.pass ? 0 : 1;
    } catch (const ConfigError& err) {
        std::cerr << "sympkit: config error: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "sympkit: config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "sympkit: analysis error: " << err.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
