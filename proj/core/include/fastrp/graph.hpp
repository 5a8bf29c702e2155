#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <vector>

#include "fastrp/matrix.hpp"

namespace fastrp {

using NodeId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;
};

/// Raw edge pairs in input order, before symmetrization and dedup.
using EdgeList = std::vector<Edge>;

/// Undirected graph in compressed sparse row form. Symmetric, no
/// self-loops, no parallel edges; neighbor lists strictly increasing.
/// Immutable after construction and safe to share across threads.
class CsrGraph {
public:
    /// Symmetrizes, drops self-loops, collapses duplicates.
    /// Throws std::out_of_range on node ids >= n, std::invalid_argument on n == 0.
    static CsrGraph from_edges(const EdgeList& edges, NodeId n);

    /// Adopts prebuilt CSR arrays (cache loading). Validates shape,
    /// monotonicity and per-row strict ordering; throws
    /// std::invalid_argument on violations.
    static CsrGraph from_csr_arrays(NodeId n, std::uint64_t m,
                                    std::vector<std::uint64_t> offsets,
                                    std::vector<NodeId> targets);

    NodeId num_nodes() const noexcept { return n_; }
    /// Number of distinct undirected edges.
    std::uint64_t num_edges() const noexcept { return m_; }

    std::uint32_t degree(NodeId u) const noexcept { return degrees_[u]; }

    std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {targets_.data() + offsets_[u],
                static_cast<std::size_t>(offsets_[u + 1] - offsets_[u])};
    }

    const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }
    const std::vector<NodeId>& targets() const noexcept { return targets_; }
    const std::vector<std::uint32_t>& degrees() const noexcept { return degrees_; }

private:
    NodeId n_ = 0;
    std::uint64_t m_ = 0;
    std::vector<std::uint64_t> offsets_;  // n+1 entries, offsets[n] == 2m
    std::vector<NodeId> targets_;         // 2m entries
    std::vector<std::uint32_t> degrees_;  // n entries
};

/// Reads "u v" pairs, one per line. Lines starting with '#' or '%' and
/// blank lines are skipped; duplicates pass through untouched.
/// Throws ParseError with the offending line number (shifted by
/// line_offset when the caller already consumed leading lines).
EdgeList parse_edge_list(std::istream& in, std::size_t line_offset = 0);

/// One step of the row-stochastic transition operator: Y_i is the mean
/// of X over the neighbors of i (zero for isolated nodes). Output rows
/// are partitioned across workers; per-row accumulation runs in
/// ascending neighbor order, so the result is identical for any worker
/// count. Throws std::invalid_argument on a row-count mismatch.
template <typename T>
DenseMatrix<T> apply_transition(const CsrGraph& g, const DenseMatrix<T>& x,
                                unsigned threads = 1);

extern template DenseMatrix<float> apply_transition(const CsrGraph&,
                                                    const DenseMatrix<float>&, unsigned);
extern template DenseMatrix<double> apply_transition(const CsrGraph&,
                                                     const DenseMatrix<double>&, unsigned);

/// k-th power of the transition matrix by repeated dense 64-bit
/// multiplication. Test oracle only; quadratic memory, cubic time.
DenseMatrix<double> transition_power_dense(const CsrGraph& g, unsigned k);

/// G(n, m): exactly m distinct undirected edges sampled uniformly
/// without replacement, by rejection on a hash set of edge keys.
/// Deterministic given the seed.
CsrGraph generate_erdos_renyi(NodeId n, std::uint64_t m, std::uint64_t seed);

}  // namespace fastrp
