#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selfcorrect/domain.hpp"
#include "selfcorrect/omv.hpp"

using namespace selfcorrect;
using namespace selfcorrect::omv;
using selfcorrect::planted::ConditionalRule;
using selfcorrect::planted::OmvOracle;
using selfcorrect::planted::PlantedGoodSet;

namespace {

struct Fixture {
    PrimeField ctx;
    OmvOracle oracle;
    OmvConfig config;

    static Fixture make(std::size_t n, std::uint64_t seed) {
        PrimeField ctx(2);
        Rng rng = make_rng(seed);
        // Z: codim-1 subgroup of matrix space (density 1/2); X_M: shifted
        // codim-1 coset of vector space (density 1/2); joint rate 1/4
        auto z = PlantedGoodSet::random_coset_union(ctx, n * n, 1, 1, rng);
        ConditionalRule x_rule{PlantedGoodSet::random_coset_union(ctx, n, 1, 1, rng), true,
                               derive_seed(seed, 2)};
        OmvOracle oracle(ctx, n, z, x_rule, derive_seed(seed, 3));
        OmvConfig config;
        config.backend = MatrixBasisBackend::hint;
        config.matrix_basis_hint = z.constraint_rows();
        return Fixture{ctx, std::move(oracle), std::move(config)};
    }
};

} // namespace

TEST_CASE("query budget and check-count formulas") {
    CHECK(omv_query_budget(0.25, 0.1) == 35898);
    CHECK(omv_check_count(0.25, 0.1) == 32);
    CHECK(omv_query_budget(1.0, 0.5) == 23);
}

TEST_CASE("preprocess decomposes M into certified components plus a sparse shift") {
    const std::size_t n = 4;
    auto fx = Fixture::make(n, 80);
    Rng rng = make_rng(81);
    FieldMat m = random_mat(fx.ctx, n, n, rng);
    auto state = omv_preprocess(fx.oracle, m, 0.25, 0.1, rng, fx.config);
    REQUIRE(state.has_value());

    // decomposition identity M = M1 + M2 - M3 - M4 + U
    FieldVec sum(n * n, 0);
    for (std::size_t i = 0; i < 4; ++i) {
        FieldVec flat = OmvOracle::flatten(state->components[i].m);
        sum = state->signs[i] > 0 ? vec_add(fx.ctx, sum, flat) : vec_sub(fx.ctx, sum, flat);
    }
    sum = vec_add(fx.ctx, sum, state->shift.dense());
    CHECK(sum == OmvOracle::flatten(m));

    for (const auto& comp : state->components) {
        CHECK(fx.oracle.z_set().contains(OmvOracle::flatten(comp.m)));
        CHECK(comp.measured_density == doctest::Approx(0.5));
        CHECK(comp.basis.t() == 1);
        CHECK(comp.bias_pairs.size() == verify::small_bias_size(n, fx.ctx,
                                                                fx.config.bias_constant));
        // pair table consistency: e M_i recomputable
        for (const auto& [e, em] : comp.bias_pairs)
            CHECK(em == vec_mat(fx.ctx, e, comp.m));
    }
    CHECK(state->shift.support.size() <= 1);
}

TEST_CASE("U x from the sparse support matches the dense product") {
    const std::size_t n = 4;
    auto fx = Fixture::make(n, 82);
    Rng rng = make_rng(83);
    FieldMat m = random_mat(fx.ctx, n, n, rng);
    auto state = omv_preprocess(fx.oracle, m, 0.25, 0.1, rng, fx.config);
    REQUIRE(state.has_value());
    FieldMat u = OmvOracle::unflatten(state->shift.dense(), n);
    VectorDomain dom(fx.ctx, n);
    for (std::uint64_t i = 0; i < dom.size(); ++i) {
        FieldVec x = dom.decode(i);
        CHECK(state->apply_shift(fx.ctx, x) == mat_vec(fx.ctx, u, x));
    }
}

TEST_CASE("query returns exactly Mx on worst-case inputs") {
    const std::size_t n = 4;
    auto fx = Fixture::make(n, 84);
    Rng rng = make_rng(85);
    int failures = 0;
    for (int rep = 0; rep < 6; ++rep) {
        FieldMat m = random_mat(fx.ctx, n, n, rng);
        auto state = omv_preprocess(fx.oracle, m, 0.25, 0.1, rng, fx.config);
        REQUIRE(state.has_value());
        for (int q = 0; q < 10; ++q) {
            FieldVec x = random_vec(fx.ctx, n, rng);
            OmvQueryStats stats;
            auto y = omv_query(fx.oracle, *state, x, 0.25, 0.1, rng, &stats, fx.config);
            if (!y) {
                ++failures;
                continue;
            }
            CHECK(*y == mat_vec(fx.ctx, m, x));
            CHECK(stats.checks_per_answer == 32);
        }
    }
    CHECK(failures <= 2);
}

TEST_CASE("query handles x = 0 and perfect oracles") {
    const std::size_t n = 3;
    PrimeField f2(2);
    Rng rng = make_rng(86);
    // an always-good oracle: Z and X rules cover everything
    auto z = PlantedGoodSet::from_predicate(f2, n * n, [](const FieldVec&) { return true; },
                                            1.0);
    ConditionalRule x_rule{PlantedGoodSet::full_space(f2, n), false, 0};
    OmvOracle oracle(f2, n, z, x_rule, 1);
    OmvConfig config; // empty hint -> t = 0 basis
    FieldMat m = random_mat(f2, n, n, rng);
    auto state = omv_preprocess(oracle, m, 1.0, 0.1, rng, config);
    REQUIRE(state.has_value());
    CHECK(state->decomposition_tries == 1);
    CHECK(state->shift.support.empty());

    auto zero = omv_query(oracle, *state, FieldVec(n, 0), 1.0, 0.1, rng, nullptr, config);
    REQUIRE(zero.has_value());
    CHECK(is_zero_vec(*zero));
    for (int rep = 0; rep < 10; ++rep) {
        FieldVec x = random_vec(f2, n, rng);
        auto y = omv_query(oracle, *state, x, 1.0, 0.1, rng, nullptr, config);
        REQUIRE(y.has_value());
        CHECK(*y == mat_vec(f2, m, x));
    }
}

TEST_CASE("exact matrix-level backend agrees with the planted hint on a tiny instance") {
    const std::size_t n = 3;
    PrimeField f2(2);
    Rng rng = make_rng(87);
    auto z = PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, rng);
    ConditionalRule x_rule{PlantedGoodSet::random_coset_union(f2, n, 1, 1, rng), true, 5};
    OmvOracle oracle(f2, n, z, x_rule, 6);

    OmvConfig exact_config;
    exact_config.backend = MatrixBasisBackend::exact;
    FieldMat m = random_mat(f2, n, n, rng);
    auto state = omv_preprocess(oracle, m, 0.25, 0.1, rng, exact_config);
    REQUIRE(state.has_value());
    // the exact backend recovers the planted constraint: shift support <= 1
    CHECK(state->shift.support.size() <= 1);
    for (const auto& comp : state->components)
        CHECK(z.contains(OmvOracle::flatten(comp.m)));
    for (int q = 0; q < 5; ++q) {
        FieldVec x = random_vec(f2, n, rng);
        auto y = omv_query(oracle, *state, x, 0.25, 0.1, rng, nullptr, exact_config);
        REQUIRE(y.has_value());
        CHECK(*y == mat_vec(f2, m, x));
    }
}

TEST_CASE("preprocess surfaces budget exhaustion on an all-bad oracle") {
    const std::size_t n = 3;
    PrimeField f2(2);
    Rng rng = make_rng(180);
    // Z rejects everything: the oracle corrupts every call, so O_Z never
    // certifies a candidate
    auto z = PlantedGoodSet::from_predicate(f2, n * n, [](const FieldVec&) { return false; },
                                            0.0);
    ConditionalRule x_rule{PlantedGoodSet::full_space(f2, n), false, 0};
    OmvOracle oracle(f2, n, z, x_rule, 19);
    OmvConfig config;
    config.decomposition_constant = 1e-6; // shrink the try budget to a handful
    auto state = omv_preprocess(oracle, random_mat(f2, n, n, rng), 0.25, 0.1, rng, config);
    CHECK_FALSE(state.has_value());
}

TEST_CASE("small-bias verification catches planted wrong component answers") {
    const std::size_t n = 8;
    auto fx = Fixture::make(n, 88);
    Rng rng = make_rng(89);
    FieldMat m = random_mat(fx.ctx, n, n, rng);
    auto state = omv_preprocess(fx.oracle, m, 0.25, 0.1, rng, fx.config);
    REQUIRE(state.has_value());
    const auto& comp = state->components[0];

    int caught = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        FieldVec x = random_vec(fx.ctx, n, rng);
        FieldVec wrong = planted::corrupt_vec(fx.ctx, mat_vec(fx.ctx, comp.m, x),
                                              planted::hash_vec(t, x));
        if (!verify::verify_matvec_claim(fx.ctx, comp.bias_pairs, x, wrong, 1, rng)) ++caught;
    }
    double rate = static_cast<double>(caught) / trials;
    CHECK(rate >= 0.38);
}
