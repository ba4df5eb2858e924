#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "selfcorrect/domain.hpp"
#include "selfcorrect/planted.hpp"
#include "selfcorrect/poly.hpp"

using namespace selfcorrect;
using namespace selfcorrect::planted;

TEST_CASE("coset union densities are exact") {
    PrimeField f2(2);
    Rng rng = make_rng(20);
    auto x = PlantedGoodSet::random_coset_union(f2, 8, 2, 1, rng);
    CHECK(x.density() == doctest::Approx(0.25));

    // counting over the domain matches the declared density exactly
    VectorDomain dom(f2, 8);
    std::size_t members = 0;
    for (std::uint64_t i = 0; i < dom.size(); ++i)
        if (x.contains(dom.decode(i))) ++members;
    CHECK(static_cast<double>(members) / static_cast<double>(dom.size()) ==
          doctest::Approx(x.density()));

    auto full = PlantedGoodSet::full_space(f2, 8);
    CHECK(full.density() == 1.0);
    CHECK(full.contains(dom.decode(17)));
}

TEST_CASE("random dense set rounding rule") {
    PrimeField f2(2);
    Rng rng = make_rng(21);
    auto x = PlantedGoodSet::random_dense(f2, 8, 0.3, rng);
    // |X| = ceil(0.3 * 256) = 77
    CHECK(x.density() == doctest::Approx(77.0 / 256.0));
    VectorDomain dom(f2, 8);
    std::size_t members = 0;
    for (std::uint64_t i = 0; i < dom.size(); ++i)
        if (x.contains(dom.decode(i))) ++members;
    CHECK(members == 77);
}

TEST_CASE("unachievable coset density is rejected") {
    PrimeField f2(2);
    Rng rng = make_rng(22);
    GoodSetParams params;
    params.codim = 2;
    params.n_labels = 0;
    params.target_alpha = 0.3; // 0.3 * 4 not integral
    CHECK_THROWS(make_planted_good_set(GoodSetKind::subspace_coset_union, params, f2, 8, rng));
    params.target_alpha = 0.25;
    auto x = make_planted_good_set(GoodSetKind::subspace_coset_union, params, f2, 8, rng);
    CHECK(x.density() == doctest::Approx(0.25));
}

TEST_CASE("manifest round trip reproduces membership") {
    PrimeField f3(3);
    Rng rng = make_rng(23);
    auto x = PlantedGoodSet::random_coset_union(f3, 5, 2, 3, rng);
    auto y = PlantedGoodSet::from_manifest(x.manifest());
    CHECK(y.density() == doctest::Approx(x.density()));
    VectorDomain dom(f3, 5);
    for (std::uint64_t i = 0; i < dom.size(); ++i) {
        FieldVec v = dom.decode(i);
        CHECK(x.contains(v) == y.contains(v));
    }

    auto d = PlantedGoodSet::random_dense(f3, 4, 0.2, rng);
    auto d2 = PlantedGoodSet::from_manifest(d.manifest());
    for (std::uint64_t i = 0; i < 81; ++i) {
        FieldVec v = VectorDomain(f3, 4).decode(i);
        CHECK(d.contains(v) == d2.contains(v));
    }
}

TEST_CASE("corruption is deterministic and never equals the exact answer") {
    PrimeField f2(2);
    Rng rng = make_rng(24);
    for (int rep = 0; rep < 10000; ++rep) {
        FieldVec v = random_vec(f2, 6, rng);
        std::uint64_t h = hash_vec(99, v);
        FieldVec c1 = corrupt_vec(f2, v, h);
        FieldVec c2 = corrupt_vec(f2, v, h);
        CHECK(c1 == c2);
        CHECK(c1 != v);
    }
    PrimeField f257(257);
    for (int rep = 0; rep < 1000; ++rep) {
        Felt x = static_cast<Felt>(bounded_uniform(rng, 257));
        CHECK(corrupt_scalar(f257, x, rep) != x);
    }
}

TEST_CASE("matmul oracle: good pairs exact, bad pairs corrupted") {
    PrimeField f2(2);
    const std::size_t n = 4;
    Rng rng = make_rng(25);
    auto good_a = PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, rng);
    ConditionalRule rule{PlantedGoodSet::random_coset_union(f2, n * n, 2, 3, rng), true, 7};
    MatMulOracle oracle(f2, good_a, rule, 42);

    int seen_good = 0, seen_bad = 0;
    for (int rep = 0; rep < 400; ++rep) {
        FieldMat a = random_mat(f2, n, n, rng);
        FieldMat b = random_mat(f2, n, n, rng);
        FieldMat out = oracle.call(a, b);
        FieldMat exact = mat_mul(f2, a, b);
        if (oracle.is_good(a, b)) {
            CHECK(out == exact);
            ++seen_good;
        } else {
            CHECK(out != exact);
            ++seen_bad;
        }
    }
    CHECK(seen_good > 0);
    CHECK(seen_bad > 0);
}

TEST_CASE("matmul oracle density audit within 3 sigma") {
    PrimeField f2(2);
    const std::size_t n = 4;
    Rng rng = make_rng(26);
    auto good_a = PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, rng); // 1/2
    ConditionalRule rule{PlantedGoodSet::random_coset_union(f2, n * n, 2, 3, rng), true, 7};
    MatMulOracle oracle(f2, good_a, rule, 43);
    const double declared = oracle.joint_density(); // 1/2 * 3/4
    CHECK(declared == doctest::Approx(0.375));

    const int trials = 100000;
    int good = 0;
    for (int t = 0; t < trials; ++t) {
        FieldMat a = random_mat(f2, n, n, rng);
        FieldMat b = random_mat(f2, n, n, rng);
        if (oracle.call(a, b) == mat_mul(f2, a, b)) ++good;
    }
    double rate = static_cast<double>(good) / trials;
    double sigma = std::sqrt(declared * (1 - declared) / trials);
    CHECK(std::abs(rate - declared) <= 3 * sigma);
}

TEST_CASE("linear ds oracle semantics") {
    PrimeField f2(2);
    Rng rng = make_rng(27);
    FieldMat a = random_mat(f2, 6, 5, rng);
    auto good = PlantedGoodSet::random_coset_union(f2, 5, 1, 1, rng);
    LinearDsOracle ds(f2, a, good, 5);

    int good_count = 0, bad_count = 0;
    for (int rep = 0; rep < 200; ++rep) {
        FieldVec x = random_vec(f2, 5, rng);
        auto state = ds.preprocess(x);
        bool all_right = true;
        for (std::size_t i = 0; i < 6; ++i) {
            Felt exact = inner_product(f2, a.row(i), x);
            Felt got = ds.query(state, i);
            all_right = all_right && got == exact;
            if (good.contains(x)) {
                CHECK(got == exact);
            } else {
                CHECK(got != exact); // every query corrupted on bad inputs
            }
        }
        (good.contains(x) ? good_count : bad_count) += 1;
        CHECK(all_right == good.contains(x));
    }
    CHECK(good_count > 0);
    CHECK(bad_count > 0);
    CHECK_THROWS(ds.query(ds.preprocess(FieldVec(5, 0)), 6));
}

TEST_CASE("omv oracle joint rate equals z-density times per-input rate") {
    PrimeField f2(2);
    const std::size_t n = 4;
    Rng rng = make_rng(28);
    auto z = PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, rng); // 1/2
    ConditionalRule x_rule{PlantedGoodSet::random_coset_union(f2, n, 1, 1, rng), true, 9};
    OmvOracle oracle(f2, n, z, x_rule, 44);

    // per-good-input success is exactly 1/2 by counting
    VectorDomain xdom(f2, n);
    FieldMat m(n, n);
    Rng search = make_rng(29);
    do {
        m = random_mat(f2, n, n, search);
    } while (!z.contains(OmvOracle::flatten(m)));
    auto state = oracle.preprocess(m);
    std::size_t correct = 0;
    for (std::uint64_t i = 0; i < xdom.size(); ++i) {
        FieldVec x = xdom.decode(i);
        if (oracle.query(state, x) == mat_vec(f2, m, x)) ++correct;
    }
    CHECK(correct == xdom.size() / 2);

    // joint audit
    const int trials = 50000;
    int good = 0;
    for (int t = 0; t < trials; ++t) {
        FieldMat mm = random_mat(f2, n, n, rng);
        FieldVec x = random_vec(f2, n, rng);
        if (oracle.call(mm, x) == mat_vec(f2, mm, x)) ++good;
    }
    double rate = static_cast<double>(good) / trials;
    double sigma = std::sqrt(0.25 * 0.75 / trials);
    CHECK(std::abs(rate - 0.25) <= 3 * sigma);
}

TEST_CASE("rm oracle: good polynomials answer exactly on X_q") {
    PrimeField f101(101);
    const std::size_t m = 2, d = 3;
    const std::size_t n_coeff = monomial_count(m, d);
    CHECK(n_coeff == 10);
    Rng rng = make_rng(30);
    auto z = PlantedGoodSet::random_coset_union(f101, n_coeff, 1, 51, rng);
    ConditionalRule x_rule{PlantedGoodSet::random_coset_union(f101, m, 1, 51, rng), true, 11};
    RmOracle oracle(f101, m, d, z, x_rule, 45);

    int exact_hits = 0, corrupt_hits = 0;
    for (int rep = 0; rep < 500; ++rep) {
        FieldVec q = random_vec(f101, n_coeff, rng);
        FieldVec x = random_vec(f101, m, rng);
        Felt truth = eval_coeff_vector(f101, m, d, q, x);
        Felt got = oracle.call(q, x);
        bool good = z.contains(q) && x_rule.contains(q, x);
        if (good) {
            CHECK(got == truth);
            ++exact_hits;
        } else {
            CHECK(got != truth);
            ++corrupt_hits;
        }
    }
    CHECK(exact_hits > 0);
    CHECK(corrupt_hits > 0);
}

TEST_CASE("linear ds oracle density audit within 3 sigma") {
    PrimeField f2(2);
    Rng rng = make_rng(260);
    FieldMat a = random_mat(f2, 4, 8, rng);
    auto good = PlantedGoodSet::random_coset_union(f2, 8, 2, 1, rng); // 1/4
    LinearDsOracle ds(f2, a, good, 15);
    const int trials = 100000;
    int all_correct = 0;
    for (int t = 0; t < trials; ++t) {
        FieldVec x = random_vec(f2, 8, rng);
        auto state = ds.preprocess(x);
        bool ok = true;
        for (std::size_t i = 0; i < 4 && ok; ++i)
            ok = ds.query(state, i) == inner_product(f2, a.row(i), x);
        if (ok) ++all_correct;
    }
    double rate = static_cast<double>(all_correct) / trials;
    double sigma = std::sqrt(0.25 * 0.75 / trials);
    CHECK(std::abs(rate - 0.25) <= 3 * sigma);
}

TEST_CASE("rm oracle joint rate audit within 3 sigma") {
    PrimeField f101(101);
    const std::size_t m = 2, d = 3;
    const std::size_t n_coeff = monomial_count(m, d);
    Rng rng = make_rng(261);
    auto z = PlantedGoodSet::random_coset_union(f101, n_coeff, 1, 51, rng);
    ConditionalRule x_rule{PlantedGoodSet::random_coset_union(f101, m, 1, 51, rng), true, 16};
    RmOracle oracle(f101, m, d, z, x_rule, 17);
    const double declared = (51.0 / 101.0) * (51.0 / 101.0);
    const int trials = 40000;
    int good = 0;
    for (int t = 0; t < trials; ++t) {
        FieldVec q = random_vec(f101, n_coeff, rng);
        FieldVec x = random_vec(f101, m, rng);
        if (oracle.call(q, x) == eval_coeff_vector(f101, m, d, q, x)) ++good;
    }
    double rate = static_cast<double>(good) / trials;
    double sigma = std::sqrt(declared * (1 - declared) / trials);
    CHECK(std::abs(rate - declared) <= 3 * sigma);
}

TEST_CASE("membership oracle O_Z two-sided behaviour") {
    // binomial-tail oracle: with per-probe match rate exactly alpha/2 = 0.25
    // and 256 trials, acceptance needs >= ceil(256/6) matches
    const double alpha = 0.5;
    const std::size_t trials = 256;
    const double threshold = alpha / 3.0 * trials; // 42.67
    double tail = 0.0;
    for (std::size_t k = static_cast<std::size_t>(std::ceil(threshold)); k <= trials; ++k) {
        double logc = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(trials - k + 1.0);
        tail += std::exp(logc + k * std::log(0.25) + (trials - k) * std::log(0.75));
    }
    CHECK(tail > 2.0 / 3.0); // accept probability at success rate alpha/2

    Rng rng = make_rng(31);
    int accepts = 0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
        if (membership_oracle_oz([](Rng& g) { return bernoulli(g, 0.25); }, alpha, trials, rng))
            ++accepts;
    }
    CHECK(static_cast<double>(accepts) / reps > 2.0 / 3.0);

    // trivial directions
    CHECK(membership_oracle_oz([](Rng&) { return true; }, alpha, trials, rng));
    CHECK_FALSE(membership_oracle_oz([](Rng&) { return false; }, alpha, trials, rng));

    // rejection side: success rate alpha/4 rejects with probability > 2/3
    int rejects = 0;
    for (int r = 0; r < reps; ++r) {
        if (!membership_oracle_oz([](Rng& g) { return bernoulli(g, 0.125); }, alpha, trials,
                                  rng))
            ++rejects;
    }
    CHECK(static_cast<double>(rejects) / reps > 2.0 / 3.0);

    // boosted variant is near-deterministic on the clear-cut sides
    for (int r = 0; r < 20; ++r) {
        CHECK(membership_oracle_oz_boosted([](Rng& g) { return bernoulli(g, 0.5); }, alpha,
                                           trials, 1e-3, rng));
        CHECK_FALSE(membership_oracle_oz_boosted([](Rng& g) { return bernoulli(g, 0.05); },
                                                 alpha, trials, 1e-3, rng));
    }
}

TEST_CASE("oracle manifests round trip") {
    PrimeField f2(2);
    const std::size_t n = 3;
    Rng rng = make_rng(262);
    auto good_a = PlantedGoodSet::random_coset_union(f2, n * n, 2, 2, rng);
    ConditionalRule rule{PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, rng), true, 18};
    MatMulOracle oracle(f2, good_a, rule, 88);
    auto copy = MatMulOracle::from_manifest(oracle.manifest());
    CHECK(copy.manifest() == oracle.manifest());
    for (int rep = 0; rep < 100; ++rep) {
        FieldMat a = random_mat(f2, n, n, rng);
        FieldMat b = random_mat(f2, n, n, rng);
        CHECK(copy.call(a, b) == oracle.call(a, b));
    }

    auto z = PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, rng);
    ConditionalRule x_rule{PlantedGoodSet::random_coset_union(f2, n, 1, 1, rng), true, 19};
    OmvOracle omv(f2, n, z, x_rule, 89);
    auto omv_copy = OmvOracle::from_manifest(omv.manifest());
    CHECK(omv_copy.manifest() == omv.manifest());
    for (int rep = 0; rep < 100; ++rep) {
        FieldMat m = random_mat(f2, n, n, rng);
        FieldVec x = random_vec(f2, n, rng);
        CHECK(omv_copy.call(m, x) == omv.call(m, x));
    }

    LinearDsOracle lds(f2, random_mat(f2, 4, 5, rng),
                       PlantedGoodSet::random_coset_union(f2, 5, 1, 1, rng), 90);
    auto lds_copy = LinearDsOracle::from_manifest(lds.manifest());
    CHECK(lds_copy.manifest() == lds.manifest());
    for (int rep = 0; rep < 50; ++rep) {
        FieldVec x = random_vec(f2, 5, rng);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(lds_copy.query(lds_copy.preprocess(x), i) == lds.query(lds.preprocess(x), i));
    }

    PrimeField f101(101);
    auto zq = PlantedGoodSet::random_coset_union(f101, monomial_count(2, 2), 1, 51, rng);
    ConditionalRule q_rule{PlantedGoodSet::random_coset_union(f101, 2, 1, 51, rng), true, 20};
    RmOracle rmo(f101, 2, 2, zq, q_rule, 91);
    auto rm_copy = RmOracle::from_manifest(rmo.manifest());
    CHECK(rm_copy.manifest() == rmo.manifest());
    for (int rep = 0; rep < 50; ++rep) {
        FieldVec q = random_vec(f101, monomial_count(2, 2), rng);
        FieldVec x = random_vec(f101, 2, rng);
        CHECK(rm_copy.call(q, x) == rmo.call(q, x));
    }
}

TEST_CASE("identical seeds reproduce identical oracles") {
    PrimeField f2(2);
    const std::size_t n = 4;
    auto build = [&](std::uint64_t seed) {
        Rng rng = make_rng(seed);
        auto good_a = PlantedGoodSet::random_coset_union(f2, n * n, 2, 2, rng);
        ConditionalRule rule{PlantedGoodSet::random_coset_union(f2, n * n, 1, 1, rng), true, 3};
        return MatMulOracle(f2, good_a, rule, 77);
    };
    auto o1 = build(123);
    auto o2 = build(123);
    Rng rng = make_rng(32);
    for (int rep = 0; rep < 200; ++rep) {
        FieldMat a = random_mat(f2, n, n, rng);
        FieldMat b = random_mat(f2, n, n, rng);
        CHECK(o1.call(a, b) == o2.call(a, b));
    }
    CHECK(o1.good_a().manifest() == o2.good_a().manifest());
}

TEST_CASE("graded-lex layout and multivariate evaluation") {
    PrimeField f101(101);
    CHECK(monomial_count(2, 5) == 21);
    CHECK(monomial_count(2, 2) == 6);
    auto exps = graded_lex_exponents(2, 2);
    REQUIRE(exps.size() == 6);
    CHECK(exps[0] == std::vector<std::size_t>{0, 0});
    CHECK(exps[1] == std::vector<std::size_t>{0, 1});
    CHECK(exps[2] == std::vector<std::size_t>{1, 0});
    CHECK(exps[3] == std::vector<std::size_t>{0, 2});
    CHECK(exps[4] == std::vector<std::size_t>{1, 1});
    CHECK(exps[5] == std::vector<std::size_t>{2, 0});

    // q = 3 x1^2 x2 + 7 at (2, 5): (3*4*5 + 7) mod 101 = 67
    MultivariatePoly q(f101, 2, 3);
    const auto& e = q.exponents();
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == std::vector<std::size_t>{2, 1}) q.coeffs()[i] = 3;
        if (e[i] == std::vector<std::size_t>{0, 0}) q.coeffs()[i] = 7;
    }
    CHECK(q.eval({2, 5}) == 67);

    // constant and coordinate polynomials
    MultivariatePoly c(f101, 3, 2);
    c.coeffs()[0] = 9;
    CHECK(c.eval({1, 2, 3}) == 9);
    MultivariatePoly x1(f101, 2, 1);
    for (std::size_t i = 0; i < x1.exponents().size(); ++i)
        if (x1.exponents()[i] == std::vector<std::size_t>{1, 0}) x1.coeffs()[i] = 1;
    CHECK(x1.eval({42, 13}) == 42);
    CHECK_THROWS(q.eval({1, 2, 3}));

    // sparse evaluation agrees with the dense path
    Rng rng = make_rng(33);
    FieldVec coeffs = random_vec(f101, monomial_count(2, 3), rng);
    std::vector<std::pair<std::size_t, Felt>> support;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0) support.emplace_back(i, coeffs[i]);
    for (int rep = 0; rep < 20; ++rep) {
        FieldVec pt = random_vec(f101, 2, rng);
        CHECK(eval_coeff_support(f101, 2, 3, support, pt) ==
              eval_coeff_vector(f101, 2, 3, coeffs, pt));
    }
}
