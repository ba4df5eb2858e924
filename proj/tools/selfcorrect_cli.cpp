// Experiment runner: seeded, reproducible runs of the boosting reductions
// against planted oracles, with CSV trial data and versioned JSON reports.
//
// Exit codes: 0 ok, 1 soundness violation (a verified output disagreed with
// ground truth), 2 infeasible parameters.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "selfcorrect/domain.hpp"
#include "selfcorrect/linear_ds.hpp"
#include "selfcorrect/mm_boost.hpp"
#include "selfcorrect/omv.hpp"
#include "selfcorrect/rm.hpp"
#include "selfcorrect/poly.hpp"
#include "selfcorrect/verify.hpp"

using json = nlohmann::ordered_json;
using namespace selfcorrect;

namespace {

constexpr int kSchemaVersion = 1;
constexpr std::uint64_t kTagTrial = 101;
constexpr std::uint64_t kTagSetup = 102;

struct CommonOpts {
    std::uint64_t seed = 1;
    std::string out_dir;
    unsigned jobs = 1;
};

std::filesystem::path resolve_out_dir(const CommonOpts& opts) {
    if (!opts.out_dir.empty()) return opts.out_dir;
    if (const char* env = std::getenv("SELFCORRECT_OUT_DIR")) return env;
    return ".";
}

void write_report(const CommonOpts& opts, const std::string& name, json& report) {
    report["schema_version"] = kSchemaVersion;
    auto dir = resolve_out_dir(opts);
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / (name + "_report.json"));
    out << report.dump(2) << '\n';
    std::cout << report.dump(2) << std::endl;
}

// deterministic trial-parallel map: each trial derives its own generator
template <typename Fn>
void run_trials(std::size_t count, unsigned jobs, Fn&& fn) {
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

// coset-union set with density >= target, codim chosen so the quotient has
// at least 8 cells (granularity <= 1/8 of the target)
planted::PlantedGoodSet approx_coset_set(const PrimeField& ctx, std::size_t n, double target,
                                         Rng& rng) {
    std::size_t codim = 1;
    double cells = static_cast<double>(ctx.p());
    while (cells < 8.0 && codim < n) {
        ++codim;
        cells *= static_cast<double>(ctx.p());
    }
    auto labels = static_cast<std::size_t>(std::ceil(target * cells - 1e-9));
    labels = std::max<std::size_t>(1, std::min(labels, static_cast<std::size_t>(cells)));
    return planted::PlantedGoodSet::random_coset_union(ctx, n, codim, labels, rng);
}

int run_experiment_mm(const CommonOpts& opts, Felt p, std::size_t n, double alpha,
                      const std::string& kind, std::size_t trials, const std::string& out_csv) {
    PrimeField ctx(p);
    Rng setup = make_rng(derive_seed(opts.seed, kTagSetup));
    const double side = std::sqrt(alpha);

    std::optional<planted::MatMulOracle> small_oracle;
    std::optional<planted::PlantedGoodSet> pair_set; // large-field structure
    bool large = kind == "large" || (kind == "auto" && mm::uses_large_field_path(ctx, alpha));
    if (kind == "large" && !mm::uses_large_field_path(ctx, alpha))
        throw std::invalid_argument("large-field path needs p * alpha >= 2 and p >= 3");
    if (large) {
        pair_set = approx_coset_set(ctx, 2 * n * n, alpha, setup);
    } else {
        auto good_a = approx_coset_set(ctx, n * n, side, setup);
        planted::ConditionalRule rule{approx_coset_set(ctx, n * n, side, setup), true,
                                      derive_seed(opts.seed, 3)};
        small_oracle.emplace(ctx, good_a, rule, derive_seed(opts.seed, 4));
    }

    mm::MatMulOracleFn alg;
    if (large) {
        alg = [&, seed = derive_seed(opts.seed, 5)](const FieldMat& a, const FieldMat& b) {
            FieldVec flat = a.data();
            flat.insert(flat.end(), b.data().begin(), b.data().end());
            FieldMat exact = mat_mul(ctx, a, b);
            if (pair_set->contains(flat)) return exact;
            return planted::corrupt_mat(ctx, std::move(exact), planted::hash_vec(seed, flat));
        };
    } else {
        alg = [&](const FieldMat& a, const FieldMat& b) { return small_oracle->call(a, b); };
    }

    struct Row {
        bool success = false;
        std::size_t reps = 0;
        long long wall_us = 0;
        bool sound = true;
    };
    std::vector<Row> rows(trials);
    std::atomic<bool> soundness_ok{true};
    run_trials(trials, opts.jobs, [&](std::size_t i) {
        Rng rng = make_rng(derive_seed(opts.seed, kTagTrial, i));
        FieldMat a = random_mat(ctx, n, n, rng);
        FieldMat b = random_mat(ctx, n, n, rng);
        auto start = std::chrono::steady_clock::now();
        mm::MmBoostResult result;
        if (kind == "small")
            result = mm::boost_mm_small_field(alg, ctx, a, b, alpha, 0.1, rng);
        else if (kind == "large")
            result = mm::boost_mm_large_field(alg, ctx, a, b, alpha, 0.1, rng);
        else
            result = mm::boost_mm(alg, ctx, a, b, alpha, 0.1, rng);
        auto end = std::chrono::steady_clock::now();
        Row& row = rows[i];
        row.wall_us =
            std::chrono::duration_cast<std::chrono::microseconds>(end - start).count();
        row.reps = result.trials_used;
        row.success = result.product.has_value();
        if (result.product && *result.product != mat_mul(ctx, a, b)) {
            row.sound = false;
            soundness_ok = false;
        }
    });

    std::ofstream csv(out_csv.empty() ? (resolve_out_dir(opts) / "mm.csv").string() : out_csv);
    csv << "trial,success,repetitions_used,wall_time\n";
    std::size_t successes = 0, total_reps = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        csv << i << ',' << (rows[i].success ? 1 : 0) << ',' << rows[i].reps << ','
            << rows[i].wall_us << '\n';
        successes += rows[i].success ? 1 : 0;
        total_reps += rows[i].reps;
    }

    std::vector<std::size_t> reps;
    for (const auto& r : rows) reps.push_back(r.reps);
    std::sort(reps.begin(), reps.end());

    json report;
    report["command"] = "experiment mm";
    report["params"] = {{"p", p},     {"n", n},       {"alpha", alpha},
                        {"kind", kind}, {"trials", trials}, {"seed", opts.seed}};
    report["results"] = {
        {"successes", successes},
        {"soundness_violations", soundness_ok ? 0 : 1},
        {"median_repetitions", reps.empty() ? 0 : reps[reps.size() / 2]},
        {"mean_repetitions",
         trials ? static_cast<double>(total_reps) / static_cast<double>(trials) : 0.0},
        {"reference_curve_exp_minus_ln5", std::exp(-std::pow(std::log(1.0 / alpha), 5.0))},
    };
    write_report(opts, "mm", report);
    return soundness_ok ? 0 : 1;
}

int run_experiment_linear_ds(const CommonOpts& opts, Felt p, std::size_t n, std::size_t m,
                             double alpha, double delta, const std::string& dump_matrix) {
    PrimeField ctx(p);
    VectorDomain dom(ctx, n); // validates enumerability for the exhaustive basis
    if (dom.size() > (std::uint64_t(1) << 22))
        throw std::invalid_argument("linear-ds experiment needs p^n <= 2^22");
    Rng setup = make_rng(derive_seed(opts.seed, kTagSetup));
    FieldMat a = random_mat(ctx, m, n, setup);
    if (!dump_matrix.empty()) {
        std::ofstream fixture(dump_matrix);
        write_matrix(fixture, ctx, a);
    }
    auto good = approx_coset_set(ctx, n, alpha, setup);
    planted::LinearDsOracle oracle(ctx, a, good, derive_seed(opts.seed, 6));
    auto basis = lds::lds_good_set_basis(oracle);

    const std::size_t inputs = 50;
    std::size_t preprocessed = 0, exact_answers = 0, total_answers = 0;
    json per_input = json::array();
    for (std::size_t i = 0; i < inputs; ++i) {
        Rng rng = make_rng(derive_seed(opts.seed, kTagTrial, i));
        FieldVec x = random_vec(ctx, n, rng);
        auto state = lds::lds_preprocess(oracle, x, basis, delta, rng);
        json row;
        row["input"] = i;
        row["preprocessed"] = state.has_value();
        if (state) {
            ++preprocessed;
            std::size_t exact = 0;
            for (std::size_t q = 0; q < m; ++q) {
                ++total_answers;
                if (lds::lds_query(*state, q) == inner_product(ctx, a.row(q), x)) {
                    ++exact;
                    ++exact_answers;
                }
            }
            row["exact_queries"] = exact;
            row["state_cells"] = state->serialized_size_cells();
            row["shift_support"] = state->shift.support.size();
        }
        per_input.push_back(row);
    }

    json report;
    report["command"] = "experiment linear-ds";
    report["params"] = {{"p", p},         {"n", n},     {"m", m},
                        {"alpha", alpha}, {"delta", delta}, {"seed", opts.seed}};
    report["results"] = {{"inputs", inputs},
                         {"preprocessed", preprocessed},
                         {"exact_answers", exact_answers},
                         {"total_answers", total_answers},
                         {"basis_t", basis.t()},
                         {"per_input", per_input}};
    write_report(opts, "linear_ds", report);
    return (total_answers == exact_answers) ? 0 : 1;
}

int run_experiment_omv(const CommonOpts& opts, Felt p, std::size_t n, double alpha,
                       double delta, std::size_t queries) {
    PrimeField ctx(p);
    VectorDomain xdom(ctx, n);
    if (xdom.size() > (std::uint64_t(1) << 22))
        throw std::invalid_argument("omv experiment needs p^n <= 2^22 for the component sweep");
    Rng setup = make_rng(derive_seed(opts.seed, kTagSetup));
    const double side = std::sqrt(alpha);
    auto z = approx_coset_set(ctx, n * n, side, setup);
    planted::ConditionalRule x_rule{approx_coset_set(ctx, n, side, setup), true,
                                    derive_seed(opts.seed, 7)};
    planted::OmvOracle oracle(ctx, n, z, x_rule, derive_seed(opts.seed, 8));
    omv::OmvConfig config;
    config.backend = omv::MatrixBasisBackend::hint;
    config.matrix_basis_hint = z.constraint_rows();

    struct Row {
        bool success = false;
        bool wrong = false;
        std::size_t resamples = 0;
        std::size_t checks = 0;
    };
    std::vector<Row> rows(queries);
    run_trials(queries, opts.jobs, [&](std::size_t i) {
        Rng rng = make_rng(derive_seed(opts.seed, kTagTrial, i));
        FieldMat m = random_mat(ctx, n, n, rng);
        auto state = omv_preprocess(oracle, m, alpha, delta, rng, config);
        if (!state) return;
        FieldVec x = random_vec(ctx, n, rng);
        omv::OmvQueryStats stats;
        auto y = omv_query(oracle, *state, x, alpha, delta, rng, &stats, config);
        Row& row = rows[i];
        row.resamples =
            stats.resamples[0] + stats.resamples[1] + stats.resamples[2] + stats.resamples[3];
        row.checks = stats.checks_per_answer;
        if (!y) return;
        row.success = true;
        row.wrong = *y != mat_vec(ctx, m, x);
    });

    std::ofstream csv(resolve_out_dir(opts) / "omv.csv");
    csv << "query,success,resamples,checks\n";
    std::size_t wrong = 0, failed = 0, done = 0;
    for (std::size_t i = 0; i < queries; ++i) {
        const Row& row = rows[i];
        csv << i << ',' << (row.success ? 1 : 0) << ',' << row.resamples << ',' << row.checks
            << '\n';
        if (!row.success) ++failed;
        else ++done;
        if (row.wrong) ++wrong;
    }

    json report;
    report["command"] = "experiment omv";
    report["params"] = {{"p", p},         {"n", n},           {"alpha", alpha},
                        {"delta", delta}, {"queries", queries}, {"seed", opts.seed}};
    report["results"] = {{"answered", done},
                         {"budget_failures", failed},
                         {"wrong_outputs", wrong},
                         {"failure_rate", queries ? static_cast<double>(failed) /
                                                        static_cast<double>(queries)
                                                  : 0.0}};
    write_report(opts, "omv", report);
    return wrong == 0 ? 0 : 1;
}

int run_experiment_rm(const CommonOpts& opts, Felt p, std::size_t m, std::size_t d,
                      double alpha, double delta, std::size_t queries,
                      const std::string& dump_poly) {
    PrimeField ctx(p);
    if (alpha <= 2.0 * std::sqrt(static_cast<double>(d) / static_cast<double>(p)))
        throw std::invalid_argument("rm experiment needs alpha > 2 sqrt(d/p)");
    const std::size_t n_coeff = monomial_count(m, d);
    Rng setup = make_rng(derive_seed(opts.seed, kTagSetup));
    const double side = std::sqrt(alpha);

    auto z = approx_coset_set(ctx, n_coeff, side, setup);
    FieldVec x_row;
    do {
        x_row = random_vec(ctx, m, setup);
    } while (is_zero_vec(x_row));
    auto labels_count = static_cast<std::size_t>(
        std::ceil(side * static_cast<double>(p) - 1e-9));
    std::vector<FieldVec> x_labels;
    for (std::size_t v = 0; v < labels_count; ++v)
        x_labels.push_back(FieldVec{static_cast<Felt>(v)});
    planted::ConditionalRule x_rule{
        planted::PlantedGoodSet::coset_union(ctx, m, {x_row}, x_labels), true,
        derive_seed(opts.seed, 9)};
    planted::RmOracle oracle(ctx, m, d, z, x_rule, derive_seed(opts.seed, 10));
    rm::RmConfig config;
    config.backend = rm::CoeffBasisBackend::hint;
    config.coeff_basis_hint = z.constraint_rows();

    struct Row {
        bool ok = false;
        bool explicit_failure = false;
        long long wall_us = 0;
    };
    std::vector<Row> rows(queries);
    run_trials(queries, opts.jobs, [&](std::size_t i) {
        Rng rng = make_rng(derive_seed(opts.seed, kTagTrial, i));
        FieldVec coeffs = random_vec(ctx, n_coeff, rng);
        if (i == 0 && !dump_poly.empty()) {
            std::ofstream fixture(dump_poly);
            write_coeff_vector(fixture, ctx, m, d, coeffs);
        }
        auto start = std::chrono::steady_clock::now();
        Row& row = rows[i];
        auto state = rm::rm_preprocess_full(oracle, coeffs, alpha, delta, rng, config);
        if (state) {
            FieldVec x = random_vec(ctx, m, rng);
            auto got = rm::rm_query_full(oracle, *state, x, rng, config);
            if (got) row.ok = *got == eval_coeff_vector(ctx, m, d, coeffs, x);
            else row.explicit_failure = true;
        } else {
            row.explicit_failure = true;
        }
        auto end = std::chrono::steady_clock::now();
        row.wall_us =
            std::chrono::duration_cast<std::chrono::microseconds>(end - start).count();
    });

    std::ofstream csv(resolve_out_dir(opts) / "rm.csv");
    csv << "query,success,wall_time\n";
    std::size_t correct = 0, failures = 0;
    for (std::size_t i = 0; i < queries; ++i) {
        if (rows[i].ok) ++correct;
        if (rows[i].explicit_failure) ++failures;
        csv << i << ',' << (rows[i].ok ? 1 : 0) << ',' << rows[i].wall_us << '\n';
    }

    json report;
    report["command"] = "experiment rm";
    report["params"] = {{"p", p},         {"m", m},           {"d", d},
                        {"alpha", alpha}, {"delta", delta},   {"queries", queries},
                        {"seed", opts.seed}};
    report["results"] = {{"correct", correct},
                         {"explicit_failures", failures},
                         {"success_rate", queries ? static_cast<double>(correct) /
                                                        static_cast<double>(queries)
                                                  : 0.0}};
    write_report(opts, "rm", report);
    return 0;
}

int run_bogolyubov_verify(const CommonOpts& opts, Felt p, std::size_t n, double density,
                          bool quasipoly) {
    PrimeField ctx(p);
    VectorDomain dom(ctx, n);
    if (dom.size() > (std::uint64_t(1) << 22))
        throw std::invalid_argument("bogolyubov verify needs p^n <= 2^22");
    // achievable coset-union density
    std::size_t codim = 1;
    double cells = static_cast<double>(p);
    while (codim < 4 &&
           std::abs(density * cells - std::round(density * cells)) > 1e-9 && codim < n) {
        ++codim;
        cells *= static_cast<double>(p);
    }
    double want = density * cells;
    if (std::abs(want - std::round(want)) > 1e-9)
        throw std::invalid_argument("density not achievable as a coset union within codim 4");
    Rng setup = make_rng(derive_seed(opts.seed, kTagSetup));
    auto x = planted::PlantedGoodSet::random_coset_union(
        ctx, n, codim, static_cast<std::size_t>(std::llround(want)), setup);

    auto scan = fourier::scan_spectrum_exact(x.indicator(), dom, std::pow(density, 1.5));
    auto basis = fourier::build_correction_basis(ctx, scan.spectrum);
    double parseval_gap = std::abs(scan.parseval_total - scan.spectrum.alpha);
    double bound = 1.0 / (density * density);

    // Monte-Carlo decomposition success on kernel samples
    auto oracle = x.membership_oracle();
    Rng rng = make_rng(derive_seed(opts.seed, kTagTrial));
    const int vectors = 20, tries = 2000;
    double worst_rate = 1.0;
    for (int v = 0; v < vectors; ++v) {
        FieldVec target = fourier::sample_in_kernel(ctx, basis, n, rng);
        int hit = 0;
        for (int t = 0; t < tries; ++t) {
            if (fourier::sample_decomposition(ctx, target, basis, oracle, 1, rng)) ++hit;
        }
        worst_rate = std::min(worst_rate, static_cast<double>(hit) / tries);
    }
    double alpha5 = std::pow(density, 5.0);

    json report;
    report["command"] = "bogolyubov verify";
    report["params"] = {{"p", p}, {"n", n}, {"density", density}, {"seed", opts.seed},
                        {"quasipoly", quasipoly}};
    report["results"] = {{"spectrum_size", scan.spectrum.size()},
                         {"spectrum_bound_1_over_alpha2", bound},
                         {"spectrum_within_bound",
                          static_cast<double>(scan.spectrum.size()) <= bound},
                         {"codim", basis.t()},
                         {"parseval_gap", parseval_gap},
                         {"parseval_ok", parseval_gap <= 1e-6},
                         {"worst_decomposition_rate", worst_rate},
                         {"alpha_pow5_bound", alpha5},
                         {"decomposition_within_bound", worst_rate >= alpha5}};

    if (quasipoly) {
        if (dom.size() > (std::uint64_t(1) << 18))
            throw std::invalid_argument("quasipoly path needs p^n <= 2^18");
        auto result = fourier::quasipoly_subspace(x.indicator(), density, dom);
        report["results"]["quasipoly"] = {{"codim", result.codim},
                                          {"xcs_density", result.xcs_density},
                                          {"codim_within_bound", result.codim_within_bound},
                                          {"chang_within_bound", result.chang_within_bound}};
    }
    write_report(opts, "bogolyubov", report);

    bool ok = parseval_gap <= 1e-6 && static_cast<double>(scan.spectrum.size()) <= bound;
    return ok ? 0 : 1;
}

int run_bias_measure(const CommonOpts& opts, Felt p, std::size_t n, double c) {
    PrimeField ctx(p);
    if (!verify::bias_exhaustive_feasible(n, ctx))
        throw std::invalid_argument("bias measure: exhaustive sweep needs n log2(p) <= 24");
    Rng rng = make_rng(derive_seed(opts.seed, kTagTrial));
    auto s = verify::generate_small_bias_set(n, ctx, c, rng);
    double bias = s.measured_bias ? *s.measured_bias : verify::measure_bias(s, ctx);

    json report;
    report["command"] = "bias measure";
    report["params"] = {{"p", p}, {"n", n}, {"c", c}, {"seed", opts.seed}};
    report["results"] = {{"size", s.size()}, {"bias", bias}, {"target", s.target_bias}};
    write_report(opts, "bias", report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-field self-correction toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    CommonOpts common;
    app.add_option("--seed", common.seed, "global seed; trials derive their own generators");
    app.add_option("--out-dir", common.out_dir,
                   "report directory (default $SELFCORRECT_OUT_DIR or .)");
    app.add_option("--jobs", common.jobs, "trial-level parallelism");

    auto* experiment = app.add_subcommand("experiment", "run a reduction end to end");
    experiment->fallthrough();
    Felt p = 2;
    std::size_t n = 8, m_rows = 16, m_vars = 2, degree = 5, trials = 100, queries = 50;
    double alpha = 0.5, delta = 0.1;
    std::string kind = "auto", out_csv;

    auto* mm_cmd = experiment->add_subcommand("mm", "matrix multiplication booster");
    mm_cmd->fallthrough();
    mm_cmd->add_option("--p", p)->required();
    mm_cmd->add_option("--n", n)->required();
    mm_cmd->add_option("--alpha", alpha)->required();
    mm_cmd->add_option("--kind", kind)->check(CLI::IsMember({"small", "large", "auto"}));
    mm_cmd->add_option("--trials", trials);
    mm_cmd->add_option("--out", out_csv, "CSV path (default <out-dir>/mm.csv)");

    auto* lds_cmd = experiment->add_subcommand("linear-ds", "linear data-structure reduction");
    lds_cmd->fallthrough();
    lds_cmd->add_option("--p", p)->required();
    lds_cmd->add_option("--n", n)->required();
    lds_cmd->add_option("--m", m_rows)->required();
    lds_cmd->add_option("--alpha", alpha)->required();
    lds_cmd->add_option("--delta", delta);
    std::string dump_matrix;
    lds_cmd->add_option("--dump-matrix", dump_matrix, "write the problem matrix fixture");

    auto* omv_cmd = experiment->add_subcommand("omv", "online matrix-vector reduction");
    omv_cmd->fallthrough();
    omv_cmd->add_option("--p", p)->required();
    omv_cmd->add_option("--n", n)->required();
    omv_cmd->add_option("--alpha", alpha)->required();
    omv_cmd->add_option("--delta", delta);
    omv_cmd->add_option("--queries", queries);

    auto* rm_cmd = experiment->add_subcommand("rm", "polynomial evaluation reduction");
    rm_cmd->fallthrough();
    rm_cmd->add_option("--p", p)->required();
    rm_cmd->add_option("--m", m_vars)->required();
    rm_cmd->add_option("--d", degree)->required();
    rm_cmd->add_option("--alpha", alpha)->required();
    rm_cmd->add_option("--delta", delta);
    rm_cmd->add_option("--queries", queries);
    std::string dump_poly;
    rm_cmd->add_option("--dump-poly", dump_poly, "write the first coefficient-vector fixture");

    auto* bogolyubov = app.add_subcommand("bogolyubov", "additive-combinatorics audits");
    bogolyubov->fallthrough();
    auto* bogo_verify = bogolyubov->add_subcommand("verify", "spectrum and decomposition audit");
    bogo_verify->fallthrough();
    double density = 0.25;
    bool quasipoly = false;
    bogo_verify->add_option("--p", p)->required();
    bogo_verify->add_option("--n", n)->required();
    bogo_verify->add_option("--density", density)->required();
    bogo_verify->add_flag("--quasipoly", quasipoly);

    auto* bias = app.add_subcommand("bias", "small-bias sample spaces");
    bias->fallthrough();
    auto* bias_measure = bias->add_subcommand("measure", "exhaustive bias of a random set");
    bias_measure->fallthrough();
    double bias_c = verify::kDefaultBiasConstant;
    bias_measure->add_option("--p", p)->required();
    bias_measure->add_option("--n", n)->required();
    bias_measure->add_option("--c", bias_c);

    CLI11_PARSE(app, argc, argv);

    try {
        if (mm_cmd->parsed()) return run_experiment_mm(common, p, n, alpha, kind, trials, out_csv);
        if (lds_cmd->parsed())
            return run_experiment_linear_ds(common, p, n, m_rows, alpha, delta, dump_matrix);
        if (omv_cmd->parsed()) return run_experiment_omv(common, p, n, alpha, delta, queries);
        if (rm_cmd->parsed())
            return run_experiment_rm(common, p, m_vars, degree, alpha, delta, queries, dump_poly);
        if (bogo_verify->parsed()) return run_bogolyubov_verify(common, p, n, density, quasipoly);
        if (bias_measure->parsed()) return run_bias_measure(common, p, n, bias_c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "infeasible parameters: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    std::cerr << "no subcommand executed" << std::endl;
    return 2;
}
