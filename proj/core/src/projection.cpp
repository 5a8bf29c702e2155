#include "fastrp/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "fastrp/rng.hpp"

namespace fastrp {

namespace {

void validate(const ProjectionSpec& spec) {
    if (spec.d < 1) throw std::invalid_argument("projection dimensionality must be >= 1");
    if (spec.kind == ProjectionKind::kVerySparse && spec.s < 1.0)
        throw std::invalid_argument("sparsity parameter must be >= 1");
}

}  // namespace

double default_sparsity(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("node count must be >= 1");
    return std::sqrt(static_cast<double>(n));
}

double ProjectionMatrix::sparse_scale() const noexcept { return std::sqrt(spec_.s); }

void sample_very_sparse_row(const ProjectionSpec& spec, std::uint64_t row,
                            std::vector<std::uint32_t>& cols_out,
                            std::vector<std::int8_t>& signs_out) {
    cols_out.clear();
    signs_out.clear();
    CounterRng rng(spec.seed, row);
    const double p = 1.0 / spec.s;
    if (p >= 1.0) {
        for (std::uint32_t c = 0; c < spec.d; ++c) {
            cols_out.push_back(c);
            signs_out.push_back(rng.next_bool() ? 1 : -1);
        }
        return;
    }
    // Bernoulli process over the d columns, walked by geometric gaps.
    // Expected cost d/s per row instead of d coin flips.
    const double log1mp = std::log1p(-p);
    std::uint64_t c = 0;
    for (;;) {
        const double gap = std::floor(std::log(rng.next_double_open()) / log1mp);
        if (gap >= static_cast<double>(spec.d)) break;
        c += static_cast<std::uint64_t>(gap);
        if (c >= spec.d) break;
        cols_out.push_back(static_cast<std::uint32_t>(c));
        signs_out.push_back(rng.next_bool() ? 1 : -1);
        ++c;
    }
}

ProjectionMatrix sample_very_sparse(const ProjectionSpec& spec) {
    validate(spec);
    if (spec.kind != ProjectionKind::kVerySparse)
        throw std::invalid_argument("spec kind is not very-sparse");

    ProjectionMatrix r;
    r.spec_ = spec;
    r.row_offsets_.reserve(spec.n + 1);
    r.row_offsets_.push_back(0);
    const double expected = static_cast<double>(spec.n) * spec.d / spec.s;
    r.cols_.reserve(static_cast<std::size_t>(expected * 1.1) + 16);
    r.signs_.reserve(r.cols_.capacity());

    std::vector<std::uint32_t> cols;
    std::vector<std::int8_t> signs;
    for (std::uint64_t row = 0; row < spec.n; ++row) {
        sample_very_sparse_row(spec, row, cols, signs);
        r.cols_.insert(r.cols_.end(), cols.begin(), cols.end());
        r.signs_.insert(r.signs_.end(), signs.begin(), signs.end());
        r.row_offsets_.push_back(r.cols_.size());
    }
    return r;
}

ProjectionMatrix sample_gaussian(const ProjectionSpec& spec) {
    validate(spec);
    if (spec.kind != ProjectionKind::kGaussian)
        throw std::invalid_argument("spec kind is not gaussian");

    ProjectionMatrix r;
    r.spec_ = spec;
    r.dense_.resize(spec.n * spec.d);
    const double stddev = 1.0 / std::sqrt(static_cast<double>(spec.d));
    for (std::uint64_t row = 0; row < spec.n; ++row) {
        CounterRng rng(spec.seed, row);
        float* out = r.dense_.data() + row * spec.d;
        std::uint32_t c = 0;
        while (c < spec.d) {
            double z0, z1;
            rng.next_normal_pair(z0, z1);
            out[c++] = static_cast<float>(z0 * stddev);
            if (c < spec.d) out[c++] = static_cast<float>(z1 * stddev);
        }
    }
    return r;
}

ProjectionMatrix sample_projection(const ProjectionSpec& spec) {
    return spec.kind == ProjectionKind::kVerySparse ? sample_very_sparse(spec)
                                                    : sample_gaussian(spec);
}

DenseMatrix<double> ProjectionMatrix::materialize() const {
    DenseMatrix<double> out(spec_.n, spec_.d);
    if (is_sparse()) {
        const double scale = sparse_scale();
        for (std::uint64_t r = 0; r < spec_.n; ++r) {
            const auto cols = row_columns(r);
            const auto signs = row_signs(r);
            for (std::size_t i = 0; i < cols.size(); ++i)
                out(r, cols[i]) = signs[i] > 0 ? scale : -scale;
        }
    } else {
        for (std::uint64_t r = 0; r < spec_.n; ++r) {
            const auto src = dense_row(r);
            for (std::uint32_t c = 0; c < spec_.d; ++c)
                out(r, c) = static_cast<double>(src[c]);
        }
    }
    return out;
}

}  // namespace fastrp
