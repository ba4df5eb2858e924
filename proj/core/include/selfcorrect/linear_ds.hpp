#pragma once

#include <array>
#include <optional>

#include "selfcorrect/fourier.hpp"
#include "selfcorrect/planted.hpp"

namespace selfcorrect::lds {

/// Worst-case state for the linear problem L_A: four average-case substates
/// on members of the good set plus the sparse shift. The stored components
/// w_j satisfy x = w_1 + w_2 - w_3 - w_4 + shift with every w_j in X.
struct WorstCaseLinearState {
    std::array<planted::LinearDsOracle::Substate, 4> substates;
    std::array<int, 4> signs{1, 1, -1, -1};
    fourier::SparseVec shift;
    const planted::LinearDsOracle* oracle = nullptr;
    std::size_t preprocess_tries = 0;

    /// Memory accounting in field-element cells: four substates plus
    /// (index, value) per shift entry plus the sign record.
    std::size_t serialized_size_cells() const;
};

struct LdsConfig {
    double budget_constant = 8.0; // tries = ceil(c ln(1/delta) / alpha^5)
};

/// Preprocesses a worst-case input: decomposes x over the good set X of the
/// average-case structure (membership decided exactly by comparing all m
/// query answers) and stores four preprocessed substates plus the shift.
std::optional<WorstCaseLinearState> lds_preprocess(const planted::LinearDsOracle& avg,
                                                   const FieldVec& x,
                                                   const fourier::CorrectionBasis& basis,
                                                   double delta, Rng& rng,
                                                   const LdsConfig& config = {});

/// Exact worst-case answer: signed sum of the four substate answers plus the
/// sparse correction <A_i, shift> computed in O(t) field operations.
Felt lds_query(const WorstCaseLinearState& state, std::size_t i);

/// Basis for X = { x : the structure answers all m queries correctly },
/// computed once per problem from the exhaustive spectrum at the
/// alpha^(3/2) threshold. Requires an enumerable input domain.
fourier::CorrectionBasis lds_good_set_basis(const planted::LinearDsOracle& avg);

} // namespace selfcorrect::lds
