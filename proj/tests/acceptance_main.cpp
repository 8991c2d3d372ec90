// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each suite pins its tolerances in code; desk scale (n <= 4, N <= 500).

#include "sympkit/definiteness.hpp"
#include "sympkit/linalg.hpp"
#include "sympkit/relations.hpp"
#include "sympkit/weyl_green.hpp"

#include "support/random_systems.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

using namespace sympkit;
using testkit::Rng;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", index, name,
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3g", value);
    return buffer;
}

// ---------------------------------------------------------------- criterion 1

void structural_suite() {
    Rng rng(1001);
    double max_identity = 0.0;
    double max_det = 0.0;
    testkit::SystemParams params;
    params.horizon = 6;
    params.shear_scale = 0.4;
    params.weight_scale = 0.4;
    for (int trial = 0; trial < 50; ++trial) {
        params.n = 1 + trial % 4;
        const SymplecticSystem sys = testkit::random_system(rng, params);
        for (int probe = 0; probe < 20; ++probe) {
            const Complex lambda = testkit::random_unit_disk(rng, 10.0);
            for (int k = 0; k <= sys.horizon(); ++k) {
                const Matrix s = sys.s_lambda(k, lambda);
                const Matrix s_conj = sys.s_lambda(k, std::conj(lambda));
                max_identity = std::max(
                    max_identity, frob(s_conj.adjoint() * sys.J() * s - sys.J()));
                max_det = std::max(max_det, std::abs(std::abs(s.determinant()) - 1.0));
            }
        }
    }
    const bool pass = max_identity <= 1e-10 && max_det <= 1e-8;
    report(1, "structural suite (50 systems x 20 lambda)", pass,
           "max ||S*(conj)JS - J|| = " + fmt(max_identity) +
               ", max ||det|-1| = " + fmt(max_det));
}

// ---------------------------------------------------------------- criterion 2

void identity_suite() {
    Rng rng(2002);
    const int N = 200;
    double max_wronskian = 0.0;
    double max_lagrange = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 2;
        const SymplecticSystem sys = testkit::mild_random_system(rng, n, N);
        const Complex lambda = testkit::random_unit_disk(rng, 1.0);
        const Complex nu = testkit::random_unit_disk(rng, 1.0);

        const TrajectorySequence z = transfer(
            sys, lambda, testkit::random_matrix(rng, 2 * n, 1, 1.0), 0, N);
        const TrajectorySequence u = transfer(
            sys, std::conj(lambda), testkit::random_matrix(rng, 2 * n, 1, 1.0), 0, N);
        max_wronskian = std::max(max_wronskian, wronskian_residual(sys, z, u));

        std::vector<Matrix> f_values, g_values;
        for (int k = 0; k < N; ++k) {
            f_values.push_back(testkit::random_matrix(rng, 2 * n, 1, 1.0));
            g_values.push_back(testkit::random_matrix(rng, 2 * n, 1, 1.0));
        }
        const TrajectorySequence f(0, f_values, lambda);
        const TrajectorySequence g(0, g_values, nu);
        const TrajectorySequence zf = solve_ivp_nonhom(
            sys, lambda, f, testkit::random_matrix(rng, 2 * n, 1, 1.0));
        const TrajectorySequence ug = solve_ivp_nonhom(
            sys, nu, g, testkit::random_matrix(rng, 2 * n, 1, 1.0));
        max_lagrange = std::max(max_lagrange, lagrange_residual(sys, zf, &f, ug, &g).max_abs);
    }
    const bool pass = max_wronskian <= 1e-8 && max_lagrange <= 1e-8;
    report(2, "identity suite (N = 200)", pass,
           "max Wronskian residual = " + fmt(max_wronskian) +
               ", max Lagrange residual = " + fmt(max_lagrange));
}

// ---------------------------------------------------------------- criterion 3

void definiteness_suite() {
    bool pass = true;
    std::ostringstream detail;

    const SymplecticSystem free_sl = testkit::free_sturm_liouville(12);
    const DefinitenessCertificate free_cert = is_definite(free_sl, {0, 2}, Complex(0, 1));
    pass = pass && free_cert.definite && free_cert.rank == 2;
    detail << "free SL rank([0,2]) = " << free_cert.rank;

    const SymplecticSystem example = testkit::non_operator_example(12);
    const DefinitenessCertificate ex_cert = is_definite(example, {0, 12}, Complex(0, 1));
    bool kernel_ok = false;
    if (ex_cert.kernel_vector)
        kernel_ok = std::abs(std::abs((*ex_cert.kernel_vector)(1)) - 1.0) <= 1e-8 &&
                    std::abs((*ex_cert.kernel_vector)(0)) <= 1e-8;
    pass = pass && !ex_cert.definite && ex_cert.rank == 1 && kernel_ok;
    detail << "; non-operator example rank = " << ex_cert.rank
           << ", kernel along (0,1): " << (kernel_ok ? "yes" : "no");

    // rank phi identical across 10 random lambda probes
    Rng rng(3003);
    bool rank_stable = true;
    const SymplecticSystem coupled = testkit::coupled_channels(8);
    for (const SymplecticSystem* sys : {&free_sl, &example, &coupled}) {
        const int base_rank = gram_phi(*sys, Complex(0, 0), {0, 6}).rank;
        for (int probe = 0; probe < 10; ++probe) {
            const Complex lambda = testkit::random_unit_disk(rng, 2.0);
            rank_stable = rank_stable && gram_phi(*sys, lambda, {0, 6}).rank == base_rank;
        }
    }
    pass = pass && rank_stable;
    detail << "; rank stable over 10 lambda: " << (rank_stable ? "yes" : "no");

    // sufficient condition implies the gram verdict wherever it fires
    bool implication = true;
    int fired_count = 0;
    const std::vector<double> zeros(13, 0.0), ones(13, 1.0);
    const SymplecticSystem no_weight = from_sturm_liouville(ones, zeros, zeros);
    for (const SymplecticSystem* sys : {&free_sl, &example, &coupled, &no_weight}) {
        for (int l = 1; l <= 3; ++l) {
            bool fired = false;
            try {
                fired = block_sufficient_definite(*sys, l);
            } catch (const StructureError&) {
                continue;
            }
            if (fired) {
                ++fired_count;
                implication =
                    implication && is_definite(*sys, {0, l + 1}, Complex(0, 0)).definite;
            }
        }
    }
    pass = pass && implication && fired_count > 0;
    detail << "; sufficient condition fired " << fired_count << "x, implication holds: "
           << (implication ? "yes" : "no");

    report(3, "definiteness suite", pass, detail.str());
}

// ---------------------------------------------------------------- criterion 4

void green_suite() {
    const int N = 200;
    const SymplecticSystem sys = testkit::free_sturm_liouville(N);
    const Complex lambda(0, 1);
    const AlphaMatrix alpha = AlphaMatrix::canonical(1);

    const WeylState state = approx_half_line_M(sys, lambda, {100, 200});
    const double drift = state.final_drift;

    const GreenTable table = GreenTable::build(sys, lambda, alpha, N);
    double max_i = 0.0, max_ii = 0.0, max_iv = 0.0;
    for (int k = 0; k < 30; ++k) {
        for (int l = 0; l < 30; ++l)
            if (k != l)
                max_i = std::max(max_i,
                                 frob(table.entry(k, l).adjoint() - table.entry_bar(l, k)));
        max_ii = std::max(
            max_ii, frob(table.entry(k, k).adjoint() - table.entry_bar(k, k) - sys.J()));
        max_iv = std::max(max_iv, frob(table.entry(k, k) -
                                       sys.s_lambda(k, lambda) * table.entry(k + 1, k) +
                                       sys.J()));
    }
    const bool pass = drift <= 1e-6 && max_i <= 1e-6 && max_ii <= 1e-6 && max_iv <= 1e-6;
    report(4, "green suite (30x30 grid, lambda = i)", pass,
           "M drift(100->200) = " + fmt(drift) + ", residuals (i) " + fmt(max_i) + ", (ii) " +
               fmt(max_ii) + ", (iv) " + fmt(max_iv));
}

// ---------------------------------------------------------------- criterion 5

void nonhomogeneous_suite() {
    Rng rng(5005);
    const int N = 200;
    const SymplecticSystem sys = testkit::free_sturm_liouville(N);
    const Complex lambda(0, 1);
    const AlphaMatrix alpha = AlphaMatrix::canonical(1);
    const GreenTable table = GreenTable::build(sys, lambda, alpha, N);
    const IndexRange full{0, N};

    double max_recursion = 0.0, max_alpha_z0 = 0.0, worst_margin = 1e300;
    double max_alpha_y0 = 0.0;
    bool y_bound_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Matrix> f_values;
        for (int k = 0; k < N; ++k) f_values.push_back(testkit::random_matrix(rng, 2, 1, 1.0));
        f_values.push_back(Matrix::Zero(2, 1));
        const TrajectorySequence f(0, f_values, lambda);

        const TrajectorySequence z = zhat(table, f);
        max_recursion = std::max(max_recursion, recursion_residual(sys, lambda, z, &f));
        max_alpha_z0 = std::max(max_alpha_z0, frob(alpha.value() * z.at(0)));
        const double bound = semi_norm(sys, f, full) / std::abs(lambda.imag());
        worst_margin = std::min(worst_margin, bound - semi_norm(sys, z, full));

        const Vector v = testkit::random_matrix(rng, 1, 1, 1.0);
        const TrajectorySequence y = yhat(table, v, f);
        max_alpha_y0 = std::max(max_alpha_y0, frob(alpha.value() * y.at(0) - v));
        std::vector<Matrix> xv_values;
        for (int k = 0; k <= N; ++k) xv_values.push_back(table.X_plus().at(k) * v);
        const TrajectorySequence xv(0, xv_values, lambda);
        y_bound_ok = y_bound_ok &&
                     semi_norm(sys, y, full) <=
                         bound + semi_norm(sys, xv, full) + 1e-10;
    }
    const bool pass = max_recursion <= 1e-8 && max_alpha_z0 <= 1e-10 && worst_margin >= 0.0 &&
                      max_alpha_y0 <= 1e-10 && y_bound_ok;
    report(5, "nonhomogeneous suite (20 random f)", pass,
           "max recursion = " + fmt(max_recursion) + ", max |alpha z0| = " + fmt(max_alpha_z0) +
               ", min bound margin = " + fmt(worst_margin) +
               ", max |alpha y0 - v| = " + fmt(max_alpha_y0));
}

// ---------------------------------------------------------------- criterion 6

void relation_suite() {
    bool pass = true;
    std::ostringstream detail;

    // preimage construction on the non-definite example
    {
        const SymplecticSystem sys = testkit::non_operator_example(12);
        const Complex lambda(0, 1);
        TrajectorySequence g = TrajectorySequence::zero(0, 12, 2, 1, lambda);
        g.at(0)(0, 0) = 1.0;
        g.at(1)(0, 0) = -1.0;
        const TrajectorySequence z = preimage_construction(sys, lambda, g);
        double l_residual = 0.0;
        const TrajectorySequence Lz = apply_L(sys, z);
        for (int k = 0; k < 12; ++k)
            l_residual = std::max(
                l_residual,
                frob(Lz.at(k) - lambda * sys.Psi(k) * z.at(k) - sys.Psi(k) * g.at(k)));
        double tail = 0.0;
        for (int k = 2; k <= 12; ++k) tail = std::max(tail, frob(z.at(k)));
        pass = pass && frob(z.at(0)) <= 1e-9 && tail <= 1e-9 && l_residual <= 1e-9;
        detail << "preimage: |z0| = " << fmt(frob(z.at(0))) << ", tail = " << fmt(tail)
               << ", L-residual = " << fmt(l_residual);
    }

    // multivalued witnesses reproduced exactly
    {
        const SymplecticSystem example = testkit::non_operator_example(10);
        const auto w1 = multivalued_witness(example);
        bool ok1 = w1.has_value();
        if (ok1) {
            ok1 = ok1 && frob(w1->f.at(0) - (Matrix(2, 1) << 1.0, 0.0).finished()) <= 1e-9;
            ok1 = ok1 && frob(w1->z.at(0)) <= 1e-9;
            for (int k = 1; k <= 10; ++k)
                ok1 = ok1 && frob(w1->z.at(k) - (Matrix(2, 1) << 0.0, -1.0).finished()) <= 1e-9;
        }
        const SymplecticSystem free_sl = testkit::free_sturm_liouville(10);
        const auto w2 = multivalued_witness(free_sl);
        bool ok2 = w2.has_value();
        if (ok2) {
            ok2 = ok2 && frob(w2->f.at(0) - (Matrix(2, 1) << 1.0, 0.0).finished()) <= 1e-9;
            ok2 = ok2 && frob(w2->z.at(0) - (Matrix(2, 1) << 0.0, 1.0).finished()) <= 1e-9;
            for (int k = 1; k <= 10; ++k) ok2 = ok2 && frob(w2->z.at(k)) <= 1e-9;
        }
        pass = pass && ok1 && ok2;
        detail << "; witnesses exact: example " << (ok1 ? "yes" : "no") << ", free SL "
               << (ok2 ? "yes" : "no");
    }

    // deficiency identity over both half-planes
    {
        const std::vector<Complex> samples{Complex(0, 1),  Complex(0, -1), Complex(0, 2),
                                           Complex(0, -2), Complex(1, 1),  Complex(1, -1)};
        const SymplecticSystem free_sl = testkit::free_sturm_liouville(16);
        const SymplecticSystem example = testkit::non_operator_example(16);
        bool ok = true;
        for (const SymplecticSystem* sys : {&free_sl, &example}) {
            const auto [interval, rank] = maximal_rank_interval(*sys, 8);
            const DeficiencyReport rep =
                deficiency_consistency(*sys, samples, interval, {8, 12}, 1.01);
            ok = ok && rep.d_tilde_nonnegative && rep.gap_constant && rep.half_plane_constant &&
                 rep.definite_implies_equal;
            for (const DeficiencySample& s : rep.samples)
                ok = ok && (s.d - s.d_tilde == rep.gap);
        }
        pass = pass && ok;
        detail << "; deficiency identity: " << (ok ? "holds" : "violated");
    }

    report(6, "relation suite", pass, detail.str());
}

// ---------------------------------------------------------------- criterion 7

void bounds_suite() {
    const std::vector<Complex> samples{Complex(0, 1),  Complex(0, -1), Complex(0, 2),
                                       Complex(0, -2), Complex(1, 1),  Complex(1, -1)};
    bool pass = true;
    std::ostringstream detail;
    const struct {
        const char* name;
        SymplecticSystem sys;
        std::vector<int> probes;
    } cases[] = {
        {"free SL", testkit::free_sturm_liouville(16), {8, 12}},
        {"non-operator example", testkit::non_operator_example(16), {8, 12}},
        {"truncated weight", testkit::truncated_weight_sl(30, 10), {15, 25}},
        {"coupled channels", testkit::coupled_channels(16), {8, 12}},
    };
    for (const auto& c : cases) {
        int lo = 2 * c.sys.half_dim(), hi = 0;
        for (const Complex& lambda : samples) {
            const int d = count_square_summable(c.sys, lambda, c.probes, 1.01).count;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            pass = pass && d >= c.sys.half_dim() && d <= 2 * c.sys.half_dim();
        }
        detail << c.name << " d in [" << lo << ", " << hi << "] (n = " << c.sys.half_dim()
               << "); ";
    }
    report(7, "bounds suite (n <= d <= 2n)", pass, detail.str());
}

// ---------------------------------------------------------------- criterion 8

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string command = std::string(SYMPKIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(command.c_str()));
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void cli_suite() {
    bool pass = true;
    std::ostringstream detail;
    const struct {
        const char* command;
        const char* config;
    } cases[] = {
        {"validate", "free_sl.json"},
        {"definiteness", "non_operator.json"},
        {"green-solve", "coupled_channels.json"},
    };
    for (const auto& c : cases) {
        const fs::path config = fs::path(SYMPKIT_CONFIG_DIR) / c.config;
        const fs::path out_a = fs::temp_directory_path() / "sympkit_acc_a.json";
        const fs::path out_b = fs::temp_directory_path() / "sympkit_acc_b.json";
        const std::string base = std::string(c.command) + " --config " + config.string();
        const int code_a = run_cli(base + " --out " + out_a.string());
        const int code_b = run_cli(base + " --out " + out_b.string());
        const bool identical = slurp(out_a) == slurp(out_b) && !slurp(out_a).empty();
        pass = pass && code_a == 0 && code_b == 0 && identical;
        detail << c.command << ": exit " << code_a << ", byte-identical "
               << (identical ? "yes" : "no") << "; ";
        fs::remove(out_a);
        fs::remove(out_b);
    }

    const fs::path bad = fs::temp_directory_path() / "sympkit_acc_bad.json";
    {
        std::ofstream out(bad);
        out << "{ broken";
    }
    const int parse_code = run_cli("validate --config " + bad.string());
    fs::remove(bad);
    const fs::path violating = fs::temp_directory_path() / "sympkit_acc_violating.json";
    {
        std::ofstream out(violating);
        out << R"({"system": {"kind": "constant", "horizon": 2,
                 "S": [[[1,0],[0,0]],[[0,0],[1,0]]],
                 "Psi": [[[-1,0],[0,0]],[[0,0],[0,0]]]}})";
    }
    const int violation_code = run_cli("validate --config " + violating.string());
    fs::remove(violating);
    pass = pass && parse_code == 2 && violation_code == 1;
    detail << "parse error exit " << parse_code << ", violation exit " << violation_code;

    report(8, "CLI suite (golden configs)", pass, detail.str());
}

} // namespace

int main() {
    structural_suite();
    identity_suite();
    definiteness_suite();
    green_suite();
    nonhomogeneous_suite();
    relation_suite();
    bounds_suite();
    cli_suite();
    if (g_failures == 0)
        std::printf("acceptance: all 8 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
