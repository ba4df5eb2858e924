#pragma once

#include <cstdint>
#include <stdexcept>

#include "selfcorrect/field.hpp"

namespace selfcorrect {

/// Enumerable description of F_p^n for exhaustive sweeps (DFT, convolutions,
/// audits). Indices are mixed-radix little-endian: coordinate 0 is the
/// fastest-varying digit.
class VectorDomain {
public:
    VectorDomain(const PrimeField& ctx, std::size_t n) : ctx_(ctx), n_(n) {
        std::uint64_t size = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (size > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(ctx.p()))
                throw std::invalid_argument("domain p^n too large to enumerate");
            size *= static_cast<std::uint64_t>(ctx.p());
        }
        size_ = size;
    }

    const PrimeField& field() const { return ctx_; }
    std::size_t n() const { return n_; }
    std::uint64_t size() const { return size_; }

    FieldVec decode(std::uint64_t index) const {
        FieldVec v(n_);
        const auto p = static_cast<std::uint64_t>(ctx_.p());
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] = static_cast<Felt>(index % p);
            index /= p;
        }
        return v;
    }

    std::uint64_t encode(const FieldVec& v) const {
        if (v.size() != n_) throw std::invalid_argument("encode: dimension mismatch");
        const auto p = static_cast<std::uint64_t>(ctx_.p());
        std::uint64_t idx = 0;
        for (std::size_t i = n_; i-- > 0;) idx = idx * p + static_cast<std::uint64_t>(v[i]);
        return idx;
    }

private:
    PrimeField ctx_;
    std::size_t n_;
    std::uint64_t size_;
};

} // namespace selfcorrect
