#include "fastrp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>
#include <string>

#include "fastrp/errors.hpp"
#include "fastrp/parallel.hpp"
#include "fastrp/rng.hpp"

namespace fastrp {

namespace {

constexpr std::uint64_t edge_key(NodeId u, NodeId v) {
    const NodeId lo = u < v ? u : v;
    const NodeId hi = u < v ? v : u;
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

/// Open-addressing set of 64-bit edge keys with linear probing.
/// Fixed capacity; memory cost is predictable, which matters when
/// sampling tens of millions of edges.
class EdgeKeySet {
public:
    explicit EdgeKeySet(std::uint64_t expected) {
        std::size_t cap = 16;
        while (cap < expected * 2) cap <<= 1;
        mask_ = cap - 1;
        slots_.assign(cap, kEmpty);
    }

    /// Returns true if the key was newly inserted.
    bool insert(std::uint64_t key) {
        std::size_t i = mix64(key) & mask_;
        for (;;) {
            if (slots_[i] == kEmpty) {
                slots_[i] = key;
                return true;
            }
            if (slots_[i] == key) return false;
            i = (i + 1) & mask_;
        }
    }

private:
    static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};
    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
};

}  // namespace

EdgeList parse_edge_list(std::istream& in, std::size_t line_offset) {
    EdgeList edges;
    std::string line;
    std::size_t lineno = line_offset;
    while (std::getline(in, line)) {
        ++lineno;
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#' || line[begin] == '%') continue;

        const char* p = line.data() + begin;
        const char* end = line.data() + line.size();
        std::uint64_t tokens[2];
        int count = 0;
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= end) break;
            if (count == 2) throw ParseError("expected two node ids", lineno);
            auto [next, ec] = std::from_chars(p, end, tokens[count]);
            if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t' && *next != '\r'))
                throw ParseError("invalid node id token", lineno);
            ++count;
            p = next;
        }
        if (count != 2) throw ParseError("expected two node ids", lineno);
        if (tokens[0] > std::numeric_limits<NodeId>::max() ||
            tokens[1] > std::numeric_limits<NodeId>::max())
            throw ParseError("node id exceeds 32-bit range", lineno);
        edges.push_back({static_cast<NodeId>(tokens[0]), static_cast<NodeId>(tokens[1])});
    }
    return edges;
}

CsrGraph CsrGraph::from_edges(const EdgeList& edges, NodeId n) {
    if (n == 0) throw std::invalid_argument("graph must have at least one node");

    std::vector<std::uint64_t> keys;
    keys.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n)
            throw std::out_of_range("node id " + std::to_string(std::max(e.u, e.v)) +
                                    " out of range for n=" + std::to_string(n));
        if (e.u == e.v) continue;  // self-loop
        keys.push_back(edge_key(e.u, e.v));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    CsrGraph g;
    g.n_ = n;
    g.m_ = keys.size();
    g.degrees_.assign(n, 0);
    for (const std::uint64_t k : keys) {
        ++g.degrees_[static_cast<NodeId>(k >> 32)];
        ++g.degrees_[static_cast<NodeId>(k)];
    }
    g.offsets_.assign(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + g.degrees_[i];

    // Walking keys in sorted order appends to every row in ascending
    // target order, so rows come out sorted without a second pass.
    g.targets_.resize(2 * g.m_);
    std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const std::uint64_t k : keys) {
        const NodeId u = static_cast<NodeId>(k >> 32);
        const NodeId v = static_cast<NodeId>(k);
        g.targets_[cursor[u]++] = v;
        g.targets_[cursor[v]++] = u;
    }
    return g;
}

CsrGraph CsrGraph::from_csr_arrays(NodeId n, std::uint64_t m,
                                   std::vector<std::uint64_t> offsets,
                                   std::vector<NodeId> targets) {
    if (n == 0) throw std::invalid_argument("graph must have at least one node");
    if (offsets.size() != static_cast<std::size_t>(n) + 1 || offsets.front() != 0)
        throw std::invalid_argument("offsets array has wrong shape");
    if (offsets.back() != 2 * m || targets.size() != 2 * m)
        throw std::invalid_argument("targets array size does not match edge count");

    CsrGraph g;
    g.n_ = n;
    g.m_ = m;
    g.degrees_.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        if (offsets[i + 1] < offsets[i])
            throw std::invalid_argument("offsets array is not non-decreasing");
        g.degrees_[i] = static_cast<std::uint32_t>(offsets[i + 1] - offsets[i]);
        for (std::uint64_t p = offsets[i]; p < offsets[i + 1]; ++p) {
            if (targets[p] >= n) throw std::invalid_argument("target node id out of range");
            if (targets[p] == i) throw std::invalid_argument("self-loop in targets");
            if (p > offsets[i] && targets[p] <= targets[p - 1])
                throw std::invalid_argument("row targets not strictly increasing");
        }
    }
    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    return g;
}

template <typename T>
DenseMatrix<T> apply_transition(const CsrGraph& g, const DenseMatrix<T>& x, unsigned threads) {
    if (x.rows() != g.num_nodes())
        throw std::invalid_argument("matrix has " + std::to_string(x.rows()) +
                                    " rows, graph has " + std::to_string(g.num_nodes()) +
                                    " nodes");
    const std::size_t d = x.cols();
    DenseMatrix<T> y(x.rows(), d);
    parallel_for(g.num_nodes(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto nbrs = g.neighbors(static_cast<NodeId>(i));
            if (nbrs.empty()) continue;
            auto out = y.row(i);
            for (const NodeId j : nbrs) {
                const auto src = x.row(j);
                for (std::size_t c = 0; c < d; ++c) out[c] += src[c];
            }
            const T deg = static_cast<T>(nbrs.size());
            for (std::size_t c = 0; c < d; ++c) out[c] /= deg;
        }
    });
    return y;
}

template DenseMatrix<float> apply_transition(const CsrGraph&, const DenseMatrix<float>&,
                                             unsigned);
template DenseMatrix<double> apply_transition(const CsrGraph&, const DenseMatrix<double>&,
                                              unsigned);

DenseMatrix<double> transition_power_dense(const CsrGraph& g, unsigned k) {
    if (k < 1) throw std::invalid_argument("power must be >= 1");
    const std::size_t n = g.num_nodes();

    DenseMatrix<double> a(n, n);
    for (NodeId i = 0; i < n; ++i) {
        const auto nbrs = g.neighbors(i);
        if (nbrs.empty()) continue;
        const double w = 1.0 / static_cast<double>(nbrs.size());
        for (const NodeId j : nbrs) a(i, j) = w;
    }

    DenseMatrix<double> result = a;
    for (unsigned step = 1; step < k; ++step) {
        DenseMatrix<double> next(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < n; ++l) {
                const double r = result(i, l);
                if (r == 0.0) continue;
                const auto arow = a.row(l);
                auto nrow = next.row(i);
                for (std::size_t j = 0; j < n; ++j) nrow[j] += r * arow[j];
            }
        }
        result = std::move(next);
    }
    return result;
}

CsrGraph generate_erdos_renyi(NodeId n, std::uint64_t m, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("graph must have at least one node");
    const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (m > max_edges)
        throw std::invalid_argument("requested " + std::to_string(m) + " edges, maximum for n=" +
                                    std::to_string(n) + " is " + std::to_string(max_edges));

    CounterRng rng(seed);
    EdgeKeySet seen(m);
    EdgeList edges;
    edges.reserve(m);
    while (edges.size() < m) {
        const NodeId u = static_cast<NodeId>(rng.next_below(n));
        const NodeId v = static_cast<NodeId>(rng.next_below(n));
        if (u == v) continue;
        if (seen.insert(edge_key(u, v))) edges.push_back({u, v});
    }
    return CsrGraph::from_edges(edges, n);
}

}  // namespace fastrp
