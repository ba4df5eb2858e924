#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfcorrect/field.hpp"
#include "selfcorrect/fourier.hpp"

namespace selfcorrect::planted {

enum class GoodSetKind { subspace_coset_union, random_dense_enumerable, predicate };

/// Membership predicate with known density, used to fabricate faulty
/// average-case oracles whose ground truth is fully controlled.
///
/// subspace_coset_union: x belongs iff its label vector (<x, w_1>, ...,
/// <x, w_codim>) is one of the stored coset labels; density is
/// #labels / p^codim exactly. random_dense_enumerable stores the subset
/// explicitly.
class PlantedGoodSet {
public:
    static PlantedGoodSet coset_union(const PrimeField& ctx, std::size_t n,
                                      std::vector<FieldVec> constraint_rows,
                                      std::vector<FieldVec> labels);
    /// Random independent constraint rows and the first n_labels label
    /// vectors in lexicographic index order (always includes the zero label,
    /// so planted sets contain a subspace worth of mass).
    static PlantedGoodSet random_coset_union(const PrimeField& ctx, std::size_t n,
                                             std::size_t codim, std::size_t n_labels, Rng& rng);
    static PlantedGoodSet random_dense(const PrimeField& ctx, std::size_t n, double target_alpha,
                                       Rng& rng);
    static PlantedGoodSet from_predicate(const PrimeField& ctx, std::size_t n,
                                         std::function<bool(const FieldVec&)> pred,
                                         double density_estimate);
    static PlantedGoodSet full_space(const PrimeField& ctx, std::size_t n);

    bool contains(const FieldVec& x) const;
    double density() const { return density_; }
    GoodSetKind kind() const { return kind_; }
    std::size_t n() const { return n_; }
    const PrimeField& field() const { return ctx_; }
    const std::vector<FieldVec>& constraint_rows() const { return constraint_rows_; }
    const std::vector<FieldVec>& labels() const { return labels_; }

    /// Label of x in the quotient by the constraint subspace.
    FieldVec label_of(const FieldVec& x) const;

    std::function<bool(const FieldVec&)> indicator() const;
    fourier::MembershipOracle membership_oracle() const;

    std::string manifest() const;
    static PlantedGoodSet from_manifest(const std::string& text);

private:
    PlantedGoodSet(const PrimeField& ctx, std::size_t n) : ctx_(ctx), n_(n) {}
    GoodSetKind kind_ = GoodSetKind::predicate;
    PrimeField ctx_;
    std::size_t n_;
    double density_ = 0.0;
    std::vector<FieldVec> constraint_rows_;
    std::vector<FieldVec> labels_;
    std::vector<std::uint64_t> members_; // sorted, random_dense_enumerable only
    std::function<bool(const FieldVec&)> pred_;
};

/// Convenience shim for the factory shape used by the CLI.
struct GoodSetParams {
    std::size_t codim = 1;
    std::size_t n_labels = 1;
    double target_alpha = 0.5;
};
PlantedGoodSet make_planted_good_set(GoodSetKind kind, const GoodSetParams& params,
                                     const PrimeField& ctx, std::size_t n, Rng& rng);

// --- corruption policy ------------------------------------------------------

/// Deterministic nonzero perturbation keyed by a seeded hash of the input, so
/// corrupted answers are reproducible, adversarially consistent across calls,
/// and never equal to the exact answer.
std::uint64_t hash_vec(std::uint64_t seed, const FieldVec& v);
Felt corrupt_scalar(const PrimeField& ctx, Felt exact, std::uint64_t h);
FieldVec corrupt_vec(const PrimeField& ctx, FieldVec exact, std::uint64_t h);
FieldMat corrupt_mat(const PrimeField& ctx, FieldMat exact, std::uint64_t h);

// --- faulty oracles ----------------------------------------------------------

/// Rule for the per-input good set of second arguments. With shift_by_input
/// the base labels are translated by a hash of the first argument, so the
/// good region moves adversarially with the input.
struct ConditionalRule {
    PlantedGoodSet base;
    bool shift_by_input = false;
    std::uint64_t seed = 0;

    bool contains(const FieldVec& primary_input, const FieldVec& x) const;
    FieldVec label_shift(const FieldVec& primary_input) const;

    std::string manifest() const;
    static ConditionalRule from_manifest(const std::string& text);
};

/// ALG(A, B): exact product iff A is good and B lies in Y_A, corrupted
/// deterministic garbage otherwise.
class MatMulOracle {
public:
    MatMulOracle(const PrimeField& ctx, PlantedGoodSet good_a, ConditionalRule good_b_given_a,
                 std::uint64_t seed);

    FieldMat call(const FieldMat& a, const FieldMat& b) const;
    bool is_good(const FieldMat& a, const FieldMat& b) const; // audit only
    const PlantedGoodSet& good_a() const { return good_a_; }
    const ConditionalRule& rule() const { return rule_; }
    double joint_density() const;

    std::string manifest() const;
    static MatMulOracle from_manifest(const std::string& text);

private:
    PrimeField ctx_;
    PlantedGoodSet good_a_;
    ConditionalRule rule_;
    std::uint64_t seed_;
};

/// DS for the linear problem L_A with preprocess/query shape: on good inputs
/// every query answers <A_i, x>, on bad inputs every query is corrupted.
class LinearDsOracle {
public:
    struct Substate {
        FieldVec x;
        bool good = false;
        std::size_t memory_cells() const { return x.size() + 1; }
    };

    LinearDsOracle(const PrimeField& ctx, FieldMat a, PlantedGoodSet good, std::uint64_t seed);

    Substate preprocess(const FieldVec& x) const;
    Felt query(const Substate& state, std::size_t i) const;
    const FieldMat& problem_matrix() const { return a_; }
    const PlantedGoodSet& good_set() const { return good_; }

    std::string manifest() const;
    static LinearDsOracle from_manifest(const std::string& text);

private:
    PrimeField ctx_;
    FieldMat a_;
    PlantedGoodSet good_;
    std::uint64_t seed_;
};

/// OMV data structure: preprocess a matrix, answer vector queries. Good
/// matrices (M in Z) answer correctly exactly on X_M; bad matrices corrupt
/// every query.
class OmvOracle {
public:
    struct Substate {
        FieldMat m;
        bool good = false;
    };

    OmvOracle(const PrimeField& ctx, std::size_t n, PlantedGoodSet z, ConditionalRule x_given_m,
              std::uint64_t seed);

    Substate preprocess(const FieldMat& m) const;
    FieldVec query(const Substate& state, const FieldVec& x) const;
    FieldVec call(const FieldMat& m, const FieldVec& x) const; // preprocess+query
    const PlantedGoodSet& z_set() const { return z_; }
    const ConditionalRule& x_rule() const { return x_rule_; }
    std::size_t n() const { return n_; }

    std::string manifest() const;
    static OmvOracle from_manifest(const std::string& text);

    static FieldVec flatten(const FieldMat& m);
    static FieldMat unflatten(const FieldVec& v, std::size_t n);

private:
    PrimeField ctx_;
    std::size_t n_;
    PlantedGoodSet z_;
    ConditionalRule x_rule_;
    std::uint64_t seed_;
};

/// Multivariate evaluation data structure over coefficient vectors: good
/// polynomials (q in Z) answer correctly exactly on X_q, bad ones never.
class RmOracle {
public:
    RmOracle(const PrimeField& ctx, std::size_t m, std::size_t d, PlantedGoodSet z,
             ConditionalRule x_given_q, std::uint64_t seed);

    Felt call(const FieldVec& coeffs, const FieldVec& point) const;
    const PlantedGoodSet& z_set() const { return z_; }
    const ConditionalRule& x_rule() const { return x_rule_; }
    std::size_t m() const { return m_; }
    std::size_t d() const { return d_; }

    std::string manifest() const;
    static RmOracle from_manifest(const std::string& text);

private:
    PrimeField ctx_;
    std::size_t m_, d_;
    PlantedGoodSet z_;
    ConditionalRule x_rule_;
    std::uint64_t seed_;
};

// --- sampling membership oracle O_Z ------------------------------------------

/// Sampling membership test: draws `trials` uniform probe inputs, counts
/// how often the data structure's answer matches the exact answer, accepts
/// iff at least an alpha/3 fraction matched. Two-sided guarantee: accepts
/// w.p. > 2/3 when the per-input success rate is >= alpha/2 and rejects
/// w.p. > 2/3 when it is <= alpha/4.
bool membership_oracle_oz(const std::function<bool(Rng&)>& probe_matches, double alpha,
                          std::size_t trials, Rng& rng);

std::size_t oz_trial_count(double alpha, double c = 64.0);

/// Majority-boosted variant with error <= error_target.
bool membership_oracle_oz_boosted(const std::function<bool(Rng&)>& probe_matches, double alpha,
                                  std::size_t trials, double error_target, Rng& rng);

} // namespace selfcorrect::planted
