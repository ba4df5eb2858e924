#include "selfcorrect/linear_ds.hpp"

#include <cmath>
#include <stdexcept>

#include "selfcorrect/domain.hpp"

namespace selfcorrect::lds {

std::size_t WorstCaseLinearState::serialized_size_cells() const {
    std::size_t cells = 0;
    for (const auto& sub : substates) cells += sub.memory_cells();
    cells += 2 * shift.support.size();
    cells += signs.size();
    return cells;
}

namespace {

// exact membership: every query answer matches <A_i, x>
bool answers_all_queries(const planted::LinearDsOracle& avg, const FieldVec& x) {
    const auto& a = avg.problem_matrix();
    const auto& ctx = avg.good_set().field();
    auto state = avg.preprocess(x);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (avg.query(state, i) != inner_product(ctx, a.row(i), x)) return false;
    }
    return true;
}

} // namespace

fourier::CorrectionBasis lds_good_set_basis(const planted::LinearDsOracle& avg) {
    const auto& ctx = avg.good_set().field();
    VectorDomain dom(ctx, avg.problem_matrix().cols());
    auto indicator = [&](const FieldVec& x) { return answers_all_queries(avg, x); };
    // measure the density first so the threshold matches the actual set
    std::uint64_t members = 0;
    for (std::uint64_t i = 0; i < dom.size(); ++i)
        if (indicator(dom.decode(i))) ++members;
    if (members == 0) throw std::runtime_error("linear-ds: empty good set");
    double alpha = static_cast<double>(members) / static_cast<double>(dom.size());
    auto spectrum = fourier::compute_spectrum_exact(indicator, dom, std::pow(alpha, 1.5));
    return fourier::build_correction_basis(ctx, spectrum);
}

std::optional<WorstCaseLinearState> lds_preprocess(const planted::LinearDsOracle& avg,
                                                   const FieldVec& x,
                                                   const fourier::CorrectionBasis& basis,
                                                   double delta, Rng& rng,
                                                   const LdsConfig& config) {
    const double alpha = basis.alpha > 0.0 ? basis.alpha : 1.0;
    const std::size_t budget =
        fourier::decomposition_try_budget(alpha, delta, config.budget_constant);
    auto oracle =
        fourier::MembershipOracle::exact([&](const FieldVec& w) { return answers_all_queries(avg, w); });
    auto decomposition = fourier::sample_decomposition(avg.good_set().field(), x, basis, oracle,
                                                       budget, rng);
    if (!decomposition) return std::nullopt;

    WorstCaseLinearState state;
    state.oracle = &avg;
    state.shift = std::move(decomposition->shift);
    state.preprocess_tries = decomposition->tries_used;
    for (std::size_t j = 0; j < 4; ++j)
        state.substates[j] = avg.preprocess(decomposition->parts[j]);
    return state;
}

Felt lds_query(const WorstCaseLinearState& state, std::size_t i) {
    const auto& avg = *state.oracle;
    const auto& ctx = avg.good_set().field();
    const auto& a = avg.problem_matrix();
    if (i >= a.rows()) throw std::out_of_range("lds_query: index out of range");

    Felt acc = 0;
    for (std::size_t j = 0; j < 4; ++j) {
        Felt answer = avg.query(state.substates[j], i);
        acc = state.signs[j] > 0 ? ctx.add(acc, answer) : ctx.sub(acc, answer);
    }
    // sparse correction from the shift's support only
    for (const auto& [idx, val] : state.shift.support)
        acc = ctx.add(acc, ctx.mul(a.at(i, idx), val));
    return acc;
}

} // namespace selfcorrect::lds
