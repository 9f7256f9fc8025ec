#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "dse/sdse.hpp"

namespace dse {

// Dependence graph: edge i -> j iff F_i depends on h_j at the working
// truncation.
struct DepGraph {
    int n = 0;
    std::vector<std::vector<bool>> adj;

    explicit DepGraph(int size) : n(size), adj(static_cast<size_t>(size), std::vector<bool>(static_cast<size_t>(size), false)) {}

    bool edge(int i, int j) const { return adj[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

    std::vector<int> direct_descendants(int i) const {
        std::vector<int> out;
        for (int j = 0; j < n; ++j)
            if (edge(i, j)) out.push_back(j);
        return out;
    }

    // vertices reachable from i by a nonempty oriented path
    std::vector<bool> descendants(int i) const {
        std::vector<bool> seen(static_cast<size_t>(n), false);
        std::vector<int> stack;
        for (int j = 0; j < n; ++j)
            if (edge(i, j) && !seen[static_cast<size_t>(j)]) {
                seen[static_cast<size_t>(j)] = true;
                stack.push_back(j);
            }
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j)
                if (edge(v, j) && !seen[static_cast<size_t>(j)]) {
                    seen[static_cast<size_t>(j)] = true;
                    stack.push_back(j);
                }
        }
        return seen;
    }

    bool weakly_connected() const {
        if (n == 0) return true;
        std::vector<bool> seen(static_cast<size_t>(n), false);
        std::vector<int> stack{0};
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j)
                if ((edge(v, j) || edge(j, v)) && !seen[static_cast<size_t>(j)]) {
                    seen[static_cast<size_t>(j)] = true;
                    stack.push_back(j);
                    ++count;
                }
        }
        return count == n;
    }

    // Tarjan strongly connected components, returned as a component id per
    // vertex; ids are deterministic (discovery order).
    std::vector<int> scc_ids() const {
        std::vector<int> ids(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0),
            num(static_cast<size_t>(n), -1);
        std::vector<int> stack;
        std::vector<bool> on(static_cast<size_t>(n), false);
        int counter = 0, comp = 0;
        auto dfs = [&](auto&& self, int v) -> void {
            num[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = counter++;
            stack.push_back(v);
            on[static_cast<size_t>(v)] = true;
            for (int j = 0; j < n; ++j) {
                if (!edge(v, j)) continue;
                if (num[static_cast<size_t>(j)] < 0) {
                    self(self, j);
                    low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], low[static_cast<size_t>(j)]);
                } else if (on[static_cast<size_t>(j)]) {
                    low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], num[static_cast<size_t>(j)]);
                }
            }
            if (low[static_cast<size_t>(v)] == num[static_cast<size_t>(v)]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on[static_cast<size_t>(w)] = false;
                    ids[static_cast<size_t>(w)] = comp;
                    if (w == v) break;
                }
                ++comp;
            }
        };
        for (int v = 0; v < n; ++v)
            if (num[static_cast<size_t>(v)] < 0) dfs(dfs, v);
        return ids;
    }

    // gcd of the lengths of all oriented cycles; 0 when the graph is acyclic
    int period() const {
        auto ids = scc_ids();
        int g = 0;
        // BFS potentials within each component; every edge inside a component
        // contributes gcd(g, depth(u) + 1 - depth(v))
        std::vector<int> depth(static_cast<size_t>(n), -1);
        for (int s = 0; s < n; ++s) {
            if (depth[static_cast<size_t>(s)] >= 0) continue;
            depth[static_cast<size_t>(s)] = 0;
            std::vector<int> queue{s};
            for (std::size_t q = 0; q < queue.size(); ++q) {
                int v = queue[q];
                for (int j = 0; j < n; ++j) {
                    if (!edge(v, j) || ids[static_cast<size_t>(j)] != ids[static_cast<size_t>(v)])
                        continue;
                    if (depth[static_cast<size_t>(j)] < 0) {
                        depth[static_cast<size_t>(j)] = depth[static_cast<size_t>(v)] + 1;
                        queue.push_back(j);
                    } else {
                        g = std::gcd(g, depth[static_cast<size_t>(v)] + 1 - depth[static_cast<size_t>(j)]);
                    }
                }
            }
        }
        return g < 0 ? -g : g;
    }
};

inline DepGraph dep_graph(const Sdse& s) {
    DepGraph g(s.size());
    for (int i = 0; i < s.size(); ++i)
        for (int j = 0; j < s.size(); ++j)
            g.adj[static_cast<size_t>(i)][static_cast<size_t>(j)] = s.eqn(i).depends_on(j);
    return g;
}

}  // namespace dse
