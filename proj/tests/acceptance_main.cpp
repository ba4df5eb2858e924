// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned in code; seeds are fixed so runs are
// reproducible bit-for-bit.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "selfcorrect/domain.hpp"
#include "selfcorrect/linear_ds.hpp"
#include "selfcorrect/mm_boost.hpp"
#include "selfcorrect/omv.hpp"
#include "selfcorrect/rm.hpp"
#include "selfcorrect/verify.hpp"

using namespace selfcorrect;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double binom_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

FieldMat rank_one_error(const PrimeField& ctx, std::size_t n, Rng& rng) {
    FieldVec u, v;
    do {
        u = random_vec(ctx, n, rng);
    } while (is_zero_vec(u));
    do {
        v = random_vec(ctx, n, rng);
    } while (is_zero_vec(v));
    FieldMat e(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e.at(i, j) = ctx.mul(u[i], v[j]);
    return e;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion_freivalds() {
    PrimeField f2(2);
    const std::size_t n = 8;
    const int trials = 10000;
    Rng rng = make_rng(1001);

    int correct_accepted = 0;
    for (int t = 0; t < trials; ++t) {
        FieldMat a = random_mat(f2, n, n, rng);
        FieldMat b = random_mat(f2, n, n, rng);
        if (verify::freivalds_verify(f2, a, b, mat_mul(f2, a, b), 10, rng)) ++correct_accepted;
    }

    // enumeration oracle: rank-1 errors are caught by exactly half of all v
    FieldMat a0 = random_mat(f2, n, n, rng);
    FieldMat e0 = rank_one_error(f2, n, rng);
    VectorDomain dom(f2, n);
    std::uint64_t catching = 0;
    for (std::uint64_t i = 0; i < dom.size(); ++i)
        if (!is_zero_vec(mat_vec(f2, e0, dom.decode(i)))) ++catching;
    bool enumeration_half = catching * 2 == dom.size();

    int wrong_accepted = 0;
    int single_round_rejections = 0;
    for (int t = 0; t < trials; ++t) {
        FieldMat a = random_mat(f2, n, n, rng);
        FieldMat b = random_mat(f2, n, n, rng);
        FieldMat wrong = mat_add(f2, mat_mul(f2, a, b), rank_one_error(f2, n, rng));
        if (verify::freivalds_verify(f2, a, b, wrong, 10, rng)) ++wrong_accepted;
        if (!verify::freivalds_verify(f2, a, b, wrong, 1, rng)) ++single_round_rejections;
    }
    double wrong_rate = static_cast<double>(wrong_accepted) / trials;
    double round_rate = static_cast<double>(single_round_rejections) / trials;

    Outcome out;
    out.pass = correct_accepted == trials && wrong_rate <= 2.0 / 1024.0 &&
               round_rate >= 0.48 && round_rate <= 0.52 && enumeration_half;
    std::ostringstream os;
    os << "correct accepted " << correct_accepted << "/" << trials << ", wrong accept rate "
       << wrong_rate << " (bound " << 2.0 / 1024.0 << "), per-round rejection " << round_rate
       << " in [0.48,0.52], enumerated catch fraction exactly 1/2: "
       << (enumeration_half ? "yes" : "no");
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_bogolyubov() {
    PrimeField f2(2);
    const std::size_t n = 12;
    const double alpha = 0.25;

    bool spectra_ok = true;
    double worst_parseval = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng = make_rng(derive_seed(1002, seed));
        auto x = planted::PlantedGoodSet::random_coset_union(f2, n, 2, 1, rng);
        VectorDomain dom(f2, n);
        auto scan = fourier::scan_spectrum_exact(x.indicator(), dom, std::pow(alpha, 1.5));
        spectra_ok = spectra_ok && scan.spectrum.size() <= 16;
        worst_parseval = std::max(worst_parseval,
                                  std::abs(scan.parseval_total - scan.spectrum.alpha));
    }

    Rng rng = make_rng(1003);
    auto x = planted::PlantedGoodSet::random_coset_union(f2, n, 2, 1, rng);
    VectorDomain dom(f2, n);
    auto spectrum = fourier::compute_spectrum_exact(x.indicator(), dom, std::pow(alpha, 1.5));
    auto basis = fourier::build_correction_basis(f2, spectrum);
    auto oracle = x.membership_oracle();

    const int samples = 100000;
    const double bound = std::pow(2.0, -10.0);
    const double threshold = bound - 3.0 * binom_sigma(bound, samples);
    double worst_rate = 1.0;
    for (int v = 0; v < 50; ++v) {
        FieldVec target = fourier::sample_in_kernel(f2, basis, n, rng);
        int hits = 0;
        for (int s = 0; s < samples; ++s) {
            if (fourier::sample_decomposition(f2, target, basis, oracle, 1, rng)) ++hits;
        }
        worst_rate = std::min(worst_rate, static_cast<double>(hits) / samples);
    }

    Outcome out;
    out.pass = spectra_ok && worst_parseval <= 1e-6 && worst_rate >= threshold;
    std::ostringstream os;
    os << "|R| <= 16 on all instances: " << (spectra_ok ? "yes" : "no")
       << ", worst Parseval gap " << worst_parseval << " (tol 1e-6)"
       << ", worst decomposition rate " << worst_rate << " >= " << threshold
       << " (alpha^5 = " << bound << " minus 3 sigma)";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion_sparse_shift() {
    std::size_t violations = 0;

    { // exhaustive over F_2^12
        PrimeField f2(2);
        const std::size_t n = 12;
        Rng rng = make_rng(1004);
        auto x = planted::PlantedGoodSet::random_coset_union(f2, n, 2, 1, rng);
        VectorDomain dom(f2, n);
        auto basis = fourier::build_correction_basis(
            f2, fourier::compute_spectrum_exact(x.indicator(), dom, std::pow(0.25, 1.5)));
        for (std::uint64_t i = 0; i < dom.size(); ++i) {
            FieldVec y = dom.decode(i);
            auto s = fourier::sparse_shift(f2, y, basis);
            if (!fourier::in_subspace(f2, vec_sub(f2, y, s.dense()), basis)) ++violations;
            if (fourier::in_subspace(f2, y, basis) && !s.support.empty()) ++violations;
        }
    }
    { // random sweep over F_3^7
        PrimeField f3(3);
        const std::size_t n = 7;
        Rng rng = make_rng(1005);
        auto x = planted::PlantedGoodSet::random_coset_union(f3, n, 2, 2, rng);
        VectorDomain dom(f3, n);
        double alpha = x.density();
        auto basis = fourier::build_correction_basis(
            f3, fourier::compute_spectrum_exact(x.indicator(), dom, std::pow(alpha, 1.5)));
        for (int i = 0; i < 10000; ++i) {
            FieldVec y = random_vec(f3, n, rng);
            auto s = fourier::sparse_shift(f3, y, basis);
            if (!fourier::in_subspace(f3, vec_sub(f3, y, s.dense()), basis)) ++violations;
        }
        for (int i = 0; i < 2000; ++i) {
            FieldVec v = fourier::sample_in_kernel(f3, basis, n, rng);
            if (!fourier::sparse_shift(f3, v, basis).support.empty()) ++violations;
        }
    }

    Outcome out;
    out.pass = violations == 0;
    out.detail = "violations " + std::to_string(violations) +
                 " over exhaustive F_2^12 plus 10^4 random points of F_3^7 (zero tolerance)";
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_low_rank_landing() {
    PrimeField f2(2);
    const std::size_t n = 6;
    Rng rng = make_rng(1006);
    std::vector<FieldVec> constraints;
    do {
        constraints = {random_vec(f2, n * n, rng), random_vec(f2, n * n, rng)};
    } while (rref_with_pivots(f2, constraints).rank != 2);
    FieldMat a = random_mat(f2, n, n, rng);

    const int samples = 100000;
    int landed = 0;
    for (int s = 0; s < samples; ++s) {
        auto shift = mm::sample_low_rank_shift(f2, n, 4, rng);
        FieldVec m = shift.dense(f2).data();
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = f2.add(m[i], a.data()[i]);
        if (inner_product(f2, m, constraints[0]) == 0 &&
            inner_product(f2, m, constraints[1]) == 0)
            ++landed;
    }
    double rate = static_cast<double>(landed) / samples;
    double bound = 1.0 / 8.0;
    double threshold = bound - 3.0 * binom_sigma(bound, samples);

    Outcome out;
    out.pass = rate >= threshold;
    std::ostringstream os;
    os << "Pr[M in V] = " << rate << " >= " << threshold << " (bound 1/8 minus 3 sigma, 10^5 samples)";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion_algorithm1() {
    PrimeField f2(2);
    const std::size_t n = 8;
    const double alpha = 0.3;
    Rng setup = make_rng(1007);
    // planted joint density 3/8 >= alpha: X half the matrices (codim-1
    // subgroup), Y three of four cosets shifted per input
    auto good_a = planted::PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, setup);
    planted::ConditionalRule rule{
        planted::PlantedGoodSet::random_coset_union(f2, n * n, 2, 3, setup), true, 2077};
    planted::MatMulOracle oracle(f2, good_a, rule, 2078);
    mm::MatMulOracleFn alg = [&](const FieldMat& x, const FieldMat& y) {
        return oracle.call(x, y);
    };

    const int cases = 100;
    int correct = 0, wrong = 0;
    std::vector<std::size_t> reps;
    Rng rng = make_rng(1008);
    for (int c = 0; c < cases; ++c) {
        FieldMat a = random_mat(f2, n, n, rng);
        FieldMat b = random_mat(f2, n, n, rng);
        auto result = mm::boost_mm_small_field(alg, f2, a, b, alpha, 0.1, rng);
        if (!result.product) continue;
        reps.push_back(result.trials_used);
        if (*result.product == mat_mul(f2, a, b)) ++correct;
        else ++wrong;
    }
    std::sort(reps.begin(), reps.end());
    std::size_t median = reps.empty() ? 0 : reps[reps.size() / 2];

    Outcome out;
    out.pass = correct == cases && wrong == 0;
    std::ostringstream os;
    os << correct << "/" << cases << " worst-case pairs exact, wrong outputs " << wrong
       << ", median trials-to-success " << median << " (reference curve exp(-ln^5(1/alpha)) = "
       << std::exp(-std::pow(std::log(1.0 / alpha), 5.0)) << ")";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_algorithm2() {
    PrimeField f257(257);
    const std::size_t n = 6;
    const double alpha = 0.5;
    Rng setup = make_rng(1009);
    // good pairs: 129 of 257 labels of one linear functional on (A, B);
    // every non-parallel line then carries good density 129/257 ~ alpha
    std::vector<FieldVec> row{random_vec(f257, 2 * n * n, setup)};
    std::vector<FieldVec> labels;
    for (Felt v = 0; v < 129; ++v) labels.push_back(FieldVec{v});
    auto good_pairs = planted::PlantedGoodSet::coset_union(f257, 2 * n * n, row, labels);
    mm::MatMulOracleFn alg = [&](const FieldMat& a, const FieldMat& b) {
        FieldVec flat = a.data();
        flat.insert(flat.end(), b.data().begin(), b.data().end());
        FieldMat exact = mat_mul(f257, a, b);
        if (good_pairs.contains(flat)) return exact;
        return planted::corrupt_mat(f257, std::move(exact), planted::hash_vec(31, flat));
    };

    const int cases = 100;
    int correct = 0, wrong = 0;
    std::size_t total_trials = 0;
    Rng rng = make_rng(1010);
    for (int c = 0; c < cases; ++c) {
        FieldMat a = random_mat(f257, n, n, rng);
        FieldMat b = random_mat(f257, n, n, rng);
        auto result = mm::boost_mm_large_field(alg, f257, a, b, alpha, 0.1, rng);
        if (!result.product) continue;
        total_trials += result.trials_used;
        if (*result.product == mat_mul(f257, a, b)) ++correct;
        else ++wrong;
    }
    double per_trial = total_trials ? static_cast<double>(correct) /
                                          static_cast<double>(total_trials)
                                    : 0.0;
    double bound = std::pow(alpha, 4.0) / 32.0;
    double threshold = bound - 3.0 * binom_sigma(bound, static_cast<double>(total_trials));

    Outcome out;
    out.pass = correct == cases && wrong == 0 && per_trial >= threshold;
    std::ostringstream os;
    os << correct << "/" << cases << " pairs exact, wrong outputs " << wrong
       << ", per-trial success " << per_trial << " >= " << threshold
       << " (alpha^4/32 minus 3 sigma)";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion_linear_ds() {
    PrimeField f2(2);
    const std::size_t n = 10, m = 16;
    Rng setup = make_rng(1011);
    FieldMat a = random_mat(f2, m, n, setup);
    auto good = planted::PlantedGoodSet::random_coset_union(f2, n, 2, 1, setup); // 1/4
    planted::LinearDsOracle oracle(f2, a, good, 2079);
    auto basis = lds::lds_good_set_basis(oracle);

    const int inputs = 50;
    int preprocessed = 0;
    std::size_t inexact = 0, accounting_violations = 0;
    Rng rng = make_rng(1012);
    for (int c = 0; c < inputs; ++c) {
        FieldVec x = random_vec(f2, n, rng);
        auto state = lds::lds_preprocess(oracle, x, basis, 0.1, rng);
        if (!state) continue;
        ++preprocessed;
        for (std::size_t i = 0; i < m; ++i) {
            if (lds::lds_query(*state, i) != inner_product(f2, a.row(i), x)) ++inexact;
        }
        std::size_t expect = 4 * (n + 1) + 2 * state->shift.support.size() + 4;
        if (state->serialized_size_cells() != expect) ++accounting_violations;
    }

    Outcome out;
    out.pass = preprocessed >= 45 && inexact == 0 && accounting_violations == 0;
    std::ostringstream os;
    os << "preprocessed " << preprocessed << "/50 (need >= 45), inexact answers " << inexact
       << " (zero tolerance), space-accounting violations " << accounting_violations;
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_omv() {
    PrimeField f2(2);
    const std::size_t n = 8;
    const double alpha = 0.25, delta = 0.1;
    Rng setup = make_rng(1013);
    auto z = planted::PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, setup); // 1/2
    planted::ConditionalRule x_rule{
        planted::PlantedGoodSet::random_coset_union(f2, n, 1, 1, setup), true, 2080};
    planted::OmvOracle oracle(f2, n, z, x_rule, 2081);
    omv::OmvConfig config;
    config.backend = omv::MatrixBasisBackend::hint;
    config.matrix_basis_hint = z.constraint_rows();

    const int cases = 50;
    int wrong = 0, failures = 0;
    Rng rng = make_rng(1014);
    std::optional<omv::OmvState> last_state;
    for (int c = 0; c < cases; ++c) {
        FieldMat m = random_mat(f2, n, n, rng);
        auto state = omv_preprocess(oracle, m, alpha, delta, rng, config);
        if (!state) {
            ++failures;
            continue;
        }
        FieldVec x = random_vec(f2, n, rng);
        auto y = omv_query(oracle, *state, x, alpha, delta, rng, nullptr, config);
        if (!y) {
            ++failures;
        } else if (*y != mat_vec(f2, m, x)) {
            ++wrong;
        }
        last_state = std::move(state);
    }

    // per-sample catch rate of the small-bias verification on planted wrong answers
    double catch_rate = 0.0;
    if (last_state) {
        const auto& comp = last_state->components[0];
        int caught = 0;
        const int probes = 20000;
        for (int t = 0; t < probes; ++t) {
            FieldVec x = random_vec(f2, n, rng);
            FieldVec bad = planted::corrupt_vec(f2, mat_vec(f2, comp.m, x),
                                                planted::hash_vec(t, x));
            if (!verify::verify_matvec_claim(f2, comp.bias_pairs, x, bad, 1, rng)) ++caught;
        }
        catch_rate = static_cast<double>(caught) / probes;
    }

    auto bias_set = verify::generate_small_bias_set(n, f2, verify::kDefaultBiasConstant, rng);
    double bias = verify::measure_bias(bias_set, f2);

    Outcome out;
    double failure_rate = static_cast<double>(failures) / cases;
    out.pass = wrong == 0 && failure_rate <= 0.1 && catch_rate >= 0.38 && bias <= 0.1;
    std::ostringstream os;
    os << "wrong outputs " << wrong << ", failure rate " << failure_rate
       << " (<= 0.1), catch rate " << catch_rate << " (>= 0.38), exhaustive bias " << bias
       << " (<= 0.1)";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion_rm_lists() {
    PrimeField f11(11);
    Rng rng = make_rng(1015);
    std::size_t decode_failures = 0, decodes = 0;

    // unique decoding radius floor((11-3)/2) = 4: every error support, with
    // complete value coverage at weight <= 2 and four keyed assignments per
    // larger support
    for (int cw = 0; cw < 20; ++cw) {
        UnivariatePoly truth{random_vec(f11, 3, rng)};
        std::vector<Felt> clean(11);
        for (Felt r = 0; r < 11; ++r) clean[static_cast<std::size_t>(r)] = truth.eval(f11, r);

        const auto check = [&](const std::vector<Felt>& received) {
            ++decodes;
            auto got = rm::unique_decode_line(f11, received, 2, rng);
            if (!got || got->coeffs != truth.coeffs) ++decode_failures;
        };

        for (std::size_t i = 0; i < 11; ++i) { // weight 0 and 1
            if (i == 0) check(clean);
            for (Felt v = 1; v < 11; ++v) {
                auto received = clean;
                received[i] = f11.add(received[i], v);
                check(received);
            }
        }
        for (std::size_t i = 0; i < 11; ++i) { // weight 2, all values
            for (std::size_t j = i + 1; j < 11; ++j) {
                for (Felt vi = 1; vi < 11; ++vi) {
                    for (Felt vj = 1; vj < 11; ++vj) {
                        auto received = clean;
                        received[i] = f11.add(received[i], vi);
                        received[j] = f11.add(received[j], vj);
                        check(received);
                    }
                }
            }
        }
        // weights 3 and 4: every support, keyed value assignments
        std::vector<std::vector<std::size_t>> supports;
        for (std::size_t i = 0; i < 11; ++i)
            for (std::size_t j = i + 1; j < 11; ++j)
                for (std::size_t k = j + 1; k < 11; ++k) {
                    supports.push_back({i, j, k});
                    for (std::size_t l = k + 1; l < 11; ++l) supports.push_back({i, j, k, l});
                }
        for (const auto& support : supports) {
            for (std::uint64_t assign = 0; assign < 4; ++assign) {
                auto received = clean;
                std::uint64_t h = derive_seed(2082, cw * 4 + assign, decodes);
                for (std::size_t pos : support) {
                    received[pos] = f11.add(received[pos], 1 + static_cast<Felt>(h % 10));
                    h = detail::splitmix64(h);
                }
                check(received);
            }
        }
    }

    // list decoding: planted two-codeword mixtures at agreement ~1/2
    PrimeField f101(101);
    Rng rng2 = make_rng(1016);
    int list_exact_two = 0;
    const int lines = 100;
    for (int line = 0; line < lines; ++line) {
        UnivariatePoly q1{random_vec(f101, 6, rng2)};
        UnivariatePoly q2{random_vec(f101, 6, rng2)};
        while (q2.coeffs == q1.coeffs) q2.coeffs = random_vec(f101, 6, rng2);
        std::vector<Felt> received(101);
        for (Felt r = 0; r < 101; ++r)
            received[static_cast<std::size_t>(r)] = (r % 2 == 0 ? q1 : q2).eval(f101, r);
        auto list = rm::list_decode_line(f101, received, 5, 0.25, rng2);
        bool has1 = false, has2 = false;
        for (const auto& c : list.candidates) {
            has1 = has1 || c.coeffs == q1.coeffs;
            has2 = has2 || c.coeffs == q2.coeffs;
        }
        if (list.candidates.size() == 2 && has1 && has2) ++list_exact_two;
    }

    Outcome out;
    out.pass = decode_failures == 0 && list_exact_two == lines;
    std::ostringstream os;
    os << decodes << " unique decodes within radius 4, failures " << decode_failures
       << " (complete values at weight <= 2, every support at 3-4); mixture lines with list"
       << " exactly {q1, q2}: " << list_exact_two << "/" << lines << " (bound 2/alpha = 4)";
    out.detail = os.str();
    return out;
}

// --------------------------------------------------------------- criterion 10
Outcome criterion_rm_pipeline() {
    PrimeField ctx(101);
    const std::size_t m = 2, d = 5;
    const std::size_t n_coeff = monomial_count(m, d);
    const double alpha = 0.5;
    Rng setup = make_rng(1017);

    // planted: Z = 72/101 labels of one coefficient functional; X_q = 72
    // of 101 parallel lines in the query plane, shifted by a hash of q
    std::vector<FieldVec> z_row{random_vec(ctx, n_coeff, setup)};
    std::vector<FieldVec> z_labels;
    for (Felt v = 0; v < 72; ++v) z_labels.push_back(FieldVec{v});
    auto z = planted::PlantedGoodSet::coset_union(ctx, n_coeff, z_row, z_labels);
    FieldVec x_row;
    do {
        x_row = random_vec(ctx, m, setup);
    } while (is_zero_vec(x_row));
    std::vector<FieldVec> x_labels;
    for (Felt v = 0; v < 72; ++v) x_labels.push_back(FieldVec{v});
    planted::ConditionalRule x_rule{planted::PlantedGoodSet::coset_union(ctx, m, {x_row}, x_labels),
                                    true, 2083};
    planted::RmOracle oracle(ctx, m, d, z, x_rule, 2084);
    rm::RmConfig config;
    config.backend = rm::CoeffBasisBackend::hint;
    config.coeff_basis_hint = z.constraint_rows();

    // perfect-oracle control: exact on 10^3 queries
    auto all_good = planted::PlantedGoodSet::from_predicate(
        ctx, n_coeff, [](const FieldVec&) { return true; }, 1.0);
    planted::ConditionalRule all_rule{planted::PlantedGoodSet::full_space(ctx, m), false, 0};
    planted::RmOracle perfect(ctx, m, d, all_good, all_rule, 2085);
    rm::RmConfig perfect_config;
    Rng prng = make_rng(1018);
    std::size_t perfect_exact = 0;
    const int perfect_queries = 1000;
    for (int grp = 0; grp < 5; ++grp) {
        FieldVec coeffs = random_vec(ctx, n_coeff, prng);
        auto state = rm::rm_preprocess_full(perfect, coeffs, 1.0, 0.1, prng, perfect_config);
        if (!state) continue;
        for (int q = 0; q < perfect_queries / 5; ++q) {
            FieldVec x = random_vec(ctx, m, prng);
            auto got = rm::rm_query_full(perfect, *state, x, prng, perfect_config);
            if (got && *got == eval_coeff_vector(ctx, m, d, coeffs, x)) ++perfect_exact;
        }
    }

    // planted runs: worst-case success over 10^3 random (q, x)
    Rng rng = make_rng(1019);
    std::size_t correct = 0;
    const int queries = 1000;
    const int queries_per_poly = 10;
    for (int grp = 0; grp < queries / queries_per_poly; ++grp) {
        FieldVec coeffs = random_vec(ctx, n_coeff, rng);
        auto state = rm::rm_preprocess_full(oracle, coeffs, alpha, 0.1, rng, config);
        if (!state) continue;
        for (int q = 0; q < queries_per_poly; ++q) {
            FieldVec x = random_vec(ctx, m, rng);
            auto got = rm::rm_query_full(oracle, *state, x, rng, config);
            if (got && *got == eval_coeff_vector(ctx, m, d, coeffs, x)) ++correct;
        }
    }
    double success = static_cast<double>(correct) / queries;

    // measured gamma: per-point failure of the corrected layer
    std::size_t layer_wrong = 0;
    const int gamma_samples = 400;
    {
        FieldVec coeffs = random_vec(ctx, n_coeff, rng);
        auto state = rm::rm_preprocess_full(oracle, coeffs, alpha, 0.1, rng, config);
        if (state) {
            for (int s = 0; s < gamma_samples; ++s) {
                FieldVec zpt = random_vec(ctx, m, rng);
                Felt acc = eval_coeff_support(ctx, m, d, state->sparse_coeffs, zpt);
                bool valid = true;
                for (std::size_t i = 0; i < 4 && valid; ++i) {
                    auto part = rm::rm_highagreement_query(oracle, state->components[i], zpt,
                                                           alpha, rng, config);
                    if (!part) valid = false;
                    else acc = state->signs[i] > 0 ? ctx.add(acc, *part) : ctx.sub(acc, *part);
                }
                if (!valid || acc != eval_coeff_vector(ctx, m, d, coeffs, zpt)) ++layer_wrong;
            }
        } else {
            layer_wrong = gamma_samples;
        }
    }
    double gamma = static_cast<double>(layer_wrong) / gamma_samples;

    // reference-point claim audit: E_w[Pr_x[truth on the line is in Q]]
    std::size_t in_list = 0;
    const int audit_samples = 300;
    {
        FieldVec coeffs;
        do {
            coeffs = random_vec(ctx, n_coeff, rng);
        } while (!z.contains(coeffs));
        for (int s = 0; s < audit_samples; ++s) {
            FieldVec w = random_vec(ctx, m, rng);
            FieldVec xpt;
            do {
                xpt = random_vec(ctx, m, rng);
            } while (xpt == w);
            auto line = rm::LinePoints::through(ctx, xpt, w);
            std::vector<Felt> received;
            received.reserve(101);
            for (const auto& zp : line.points) received.push_back(oracle.call(coeffs, zp));
            auto truth_line = rm::restrict_to_line(ctx, m, d, coeffs, line);
            auto list = rm::list_decode_line(ctx, received, d, alpha / 2.0, rng,
                                             config.inner_list_budget);
            for (const auto& c : list.candidates) {
                if (c.coeffs == truth_line.coeffs) {
                    ++in_list;
                    break;
                }
            }
        }
    }
    double audit = static_cast<double>(in_list) / audit_samples;
    double audit_bound = 1.0 - 4.0 / (101.0 * alpha);
    double audit_threshold = audit_bound - 3.0 * binom_sigma(audit_bound, audit_samples);

    Outcome out;
    out.pass = perfect_exact == perfect_queries && success >= 0.8 && gamma <= 0.05 &&
               audit >= audit_threshold;
    std::ostringstream os;
    os << "perfect-oracle exact " << perfect_exact << "/" << perfect_queries
       << ", planted success " << success << " (>= 0.8), measured gamma " << gamma
       << " (<= 0.05, target 1-4*gamma), reference audit " << audit << " >= "
       << audit_threshold << " (1 - 4/(p alpha) minus 3 sigma)";
    out.detail = os.str();
    return out;
}

// --------------------------------------------------------------- criterion 11
Outcome criterion_quasipoly() {
    PrimeField f2(2);
    const std::size_t n = 10;
    Rng rng = make_rng(1020);
    auto x = planted::PlantedGoodSet::random_coset_union(f2, n, 1, 1, rng); // index-2 subgroup
    VectorDomain dom(f2, n);
    auto indicator = x.indicator();

    auto result = fourier::quasipoly_subspace(indicator, 0.5, dom);
    auto basis = fourier::build_correction_basis(f2, result.constraints);
    bool v_equals_x = result.codim == 1;
    for (std::uint64_t i = 0; i < dom.size() && v_equals_x; ++i) {
        FieldVec v = dom.decode(i);
        v_equals_x = fourier::in_subspace(f2, v, basis) == indicator(v);
    }

    auto d_set = fourier::PopularDifferenceSet::exhaustive(indicator, dom);
    bool d_equals_x = true;
    for (std::uint64_t i = 0; i < dom.size() && d_equals_x; ++i) {
        FieldVec v = dom.decode(i);
        d_equals_x = d_set.contains(v) == indicator(v);
    }

    auto params = fourier::CrootSisaskParams::from_alpha(0.5);
    std::size_t member_hits = 0, member_total = 0;
    std::size_t reject_hits = 0, reject_total = 0;
    for (std::uint64_t i = 0; i < dom.size(); ++i) {
        FieldVec v = dom.decode(i);
        if (indicator(v)) {
            ++member_total;
            if (fourier::croot_sisask_membership(v, indicator, d_set, params, 0, rng))
                ++member_hits;
        }
    }
    for (int s = 0; s < 50; ++s) {
        FieldVec v;
        do {
            v = random_vec(f2, n, rng);
        } while (indicator(v));
        ++reject_total;
        if (!fourier::croot_sisask_membership(v, indicator, d_set, params, 0, rng))
            ++reject_hits;
    }
    double reject_accuracy = static_cast<double>(reject_hits) / reject_total;

    Outcome out;
    out.pass = v_equals_x && d_equals_x && member_hits == member_total &&
               reject_accuracy >= 0.9;
    std::ostringstream os;
    os << "V = X (codim 1): " << (v_equals_x ? "yes" : "no")
       << ", D = X exactly: " << (d_equals_x ? "yes" : "no") << ", members accepted "
       << member_hits << "/" << member_total << ", non-member rejection accuracy "
       << reject_accuracy << " (>= 0.9), codim bound ok: "
       << (result.codim_within_bound ? "yes" : "no") << ", Chang bound ok: "
       << (result.chang_within_bound ? "yes" : "no");
    out.detail = os.str();
    return out;
}

struct Criterion {
    int number;
    const char* name;
    double budget_seconds;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "Freivalds soundness/completeness", 5, criterion_freivalds},
    {2, "probabilistic local-correction subspace", 60, criterion_bogolyubov},
    {3, "sparse shift exactness", 60, criterion_sparse_shift},
    {4, "low-rank shift landing", 30, criterion_low_rank_landing},
    {5, "small-field matrix product booster", 600, criterion_algorithm1},
    {6, "large-field matrix product booster", 300, criterion_algorithm2},
    {7, "linear data-structure reduction", 300, criterion_linear_ds},
    {8, "online matrix-vector reduction", 600, criterion_omv},
    {9, "line decoding machinery", 120, criterion_rm_lists},
    {10, "polynomial evaluation pipeline", 900, criterion_rm_pipeline},
    {11, "quasi-polynomial subspace demonstrator", 600, criterion_quasipoly},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    bool all_pass = true;
    for (const auto& criterion : kCriteria) {
        if (only && criterion.number != only) continue;
        auto start = std::chrono::steady_clock::now();
        Outcome outcome = criterion.run();
        auto end = std::chrono::steady_clock::now();
        double seconds = std::chrono::duration<double>(end - start).count();
        bool in_budget = seconds < criterion.budget_seconds;
        bool pass = outcome.pass && in_budget;
        all_pass = all_pass && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion.number << " ("
                  << criterion.name << "): " << outcome.detail << " [" << std::fixed
                  << std::setprecision(1) << seconds << "s / budget "
                  << criterion.budget_seconds << "s]" << std::endl;
    }
    return all_pass ? 0 : 1;
}
