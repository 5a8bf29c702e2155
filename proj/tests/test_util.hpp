#pragma once

#include <queue>
#include <vector>

#include "fastrp/graph.hpp"

namespace fastrp::test {

inline CsrGraph make_k3() { return CsrGraph::from_edges({{0, 1}, {1, 2}, {0, 2}}, 3); }

inline CsrGraph make_p3() { return CsrGraph::from_edges({{0, 1}, {1, 2}}, 3); }

inline CsrGraph make_path(NodeId n) {
    EdgeList edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return CsrGraph::from_edges(edges, n);
}

inline bool is_connected(const CsrGraph& g) {
    std::vector<char> seen(g.num_nodes(), 0);
    std::queue<NodeId> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (const NodeId v : g.neighbors(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                frontier.push(v);
            }
        }
    }
    return count == g.num_nodes();
}

inline bool is_bipartite(const CsrGraph& g) {
    std::vector<int> color(g.num_nodes(), -1);
    for (NodeId start = 0; start < g.num_nodes(); ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        std::queue<NodeId> frontier;
        frontier.push(start);
        while (!frontier.empty()) {
            const NodeId u = frontier.front();
            frontier.pop();
            for (const NodeId v : g.neighbors(u)) {
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    frontier.push(v);
                } else if (color[v] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace fastrp::test
