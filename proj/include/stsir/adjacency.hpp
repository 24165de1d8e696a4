#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stsir/errors.hpp"

namespace stsir {

/// Undirected county neighbor structure (the delta_i sets) in flattened
/// adjacency-list form. Construction validates symmetry, absence of
/// self-loops, and connectivity; the intrinsic CAR density is only defined
/// here for connected graphs (rank m-1).
class AdjacencyGraph {
public:
    AdjacencyGraph() = default;

    /// Builds from undirected edges (each pair listed once or twice).
    static AdjacencyGraph from_edges(int m, const std::vector<std::pair<int, int>>& edges) {
        if (m < 1) throw DataError("adjacency graph needs at least one region");
        std::vector<std::set<int>> nb(m);
        for (auto [a, b] : edges) {
            if (a < 0 || a >= m || b < 0 || b >= m)
                throw DataError("adjacency edge index out of range");
            if (a == b) throw DataError("self-loop in adjacency graph at index " + std::to_string(a));
            nb[a].insert(b);
            nb[b].insert(a);
        }
        AdjacencyGraph g;
        g.m_ = m;
        g.offsets_.resize(m + 1, 0);
        for (int i = 0; i < m; ++i) {
            g.num_.push_back(static_cast<int>(nb[i].size()));
            for (int l : nb[i]) g.adj_.push_back(l);
            g.offsets_[i + 1] = static_cast<int>(g.adj_.size());
        }
        if (!g.is_connected())
            throw DataError("adjacency graph is disconnected; the ICAR prior requires a connected graph");
        return g;
    }

    static AdjacencyGraph ring(int m) {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i + 1 < m; ++i) e.emplace_back(i, i + 1);
        if (m > 2) e.emplace_back(m - 1, 0);
        return from_edges(m, e);
    }

    static AdjacencyGraph path(int m) {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i + 1 < m; ++i) e.emplace_back(i, i + 1);
        return from_edges(m, e);
    }

    int m() const { return m_; }

    std::span<const int> neighbors(int i) const {
        return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
    }

    int num(int i) const { return num_[i]; }

    /// Number of undirected edges.
    int edge_count() const { return static_cast<int>(adj_.size()) / 2; }

    const std::vector<int>& adj() const { return adj_; }
    const std::vector<int>& num() const { return num_; }

    /// Relabels regions: node i becomes perm[i].
    AdjacencyGraph permuted(const std::vector<int>& perm) const {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < m_; ++i)
            for (int l : neighbors(i))
                if (i < l) e.emplace_back(perm[i], perm[l]);
        return from_edges(m_, e);
    }

private:
    bool is_connected() const {
        if (m_ <= 1) return true;
        std::vector<char> seen(m_, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int l : neighbors(i))
                if (!seen[l]) {
                    seen[l] = 1;
                    ++count;
                    stack.push_back(l);
                }
        }
        return count == m_;
    }

    int m_ = 0;
    std::vector<int> adj_;     // flattened neighbor lists
    std::vector<int> num_;     // per-region neighbor counts
    std::vector<int> offsets_; // size m+1 index into adj_
};

} // namespace stsir
