#pragma once

#include <cstdint>
#include <vector>

#include "fastrp/matrix.hpp"

namespace fastrp {

enum class ProjectionKind {
    kVerySparse,  // entries +-sqrt(s) w.p. 1/(2s) each, 0 otherwise
    kGaussian,    // entries N(0, 1/d)
};

struct ProjectionSpec {
    std::uint64_t n = 0;  // input dimensionality (node count)
    std::uint32_t d = 0;  // embedding dimensionality
    double s = 1.0;       // sparsity parameter; ignored for the Gaussian kind
    ProjectionKind kind = ProjectionKind::kVerySparse;
    std::uint64_t seed = 0;
};

/// The n x d random projection matrix R. The very sparse kind stores
/// per-row (column, sign) pairs with the sqrt(s) scale factored out;
/// callers fold the scale into whatever per-row factor they already
/// apply. The Gaussian kind is dense.
class ProjectionMatrix {
public:
    const ProjectionSpec& spec() const noexcept { return spec_; }

    bool is_sparse() const noexcept { return spec_.kind == ProjectionKind::kVerySparse; }

    /// Deferred global scale of the stored sparse signs: sqrt(s).
    double sparse_scale() const noexcept;

    std::uint64_t nonzeros() const noexcept { return cols_.size(); }

    /// Sparse row r as parallel (column, sign) runs.
    std::span<const std::uint32_t> row_columns(std::uint64_t r) const noexcept {
        return {cols_.data() + row_offsets_[r],
                static_cast<std::size_t>(row_offsets_[r + 1] - row_offsets_[r])};
    }
    std::span<const std::int8_t> row_signs(std::uint64_t r) const noexcept {
        return {signs_.data() + row_offsets_[r],
                static_cast<std::size_t>(row_offsets_[r + 1] - row_offsets_[r])};
    }

    /// Dense Gaussian row r.
    std::span<const float> dense_row(std::uint64_t r) const noexcept {
        return {dense_.data() + r * spec_.d, spec_.d};
    }

    /// Full matrix with the scale applied, in double. For oracles and
    /// statistics tests; O(n*d) memory.
    DenseMatrix<double> materialize() const;

    friend ProjectionMatrix sample_very_sparse(const ProjectionSpec& spec);
    friend ProjectionMatrix sample_gaussian(const ProjectionSpec& spec);

private:
    ProjectionSpec spec_;
    // very-sparse storage
    std::vector<std::uint64_t> row_offsets_;
    std::vector<std::uint32_t> cols_;
    std::vector<std::int8_t> signs_;
    // gaussian storage
    std::vector<float> dense_;
};

/// Samples per-entry: +sqrt(s) w.p. 1/(2s), -sqrt(s) w.p. 1/(2s), 0
/// otherwise, stored as signs with the scale deferred. Row r depends
/// only on (seed, r), so any row can be regenerated in isolation.
ProjectionMatrix sample_very_sparse(const ProjectionSpec& spec);

/// Dense i.i.d. N(0, 1/d) entries; the random-projection baseline.
ProjectionMatrix sample_gaussian(const ProjectionSpec& spec);

/// Dispatch on spec.kind.
ProjectionMatrix sample_projection(const ProjectionSpec& spec);

/// Regenerates the (column, sign) pairs of a single very sparse row.
void sample_very_sparse_row(const ProjectionSpec& spec, std::uint64_t row,
                            std::vector<std::uint32_t>& cols_out,
                            std::vector<std::int8_t>& signs_out);

/// Recommended sparsity for n input dimensions: sqrt(n).
double default_sparsity(std::uint64_t n);

}  // namespace fastrp
