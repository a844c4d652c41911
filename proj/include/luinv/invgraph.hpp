#pragma once

// Colored directed multigraphs of invariants: m vertices, one color per
// party, and for every color j and vertex l an edge with head l and tail
// σ_j(l).

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "luinv/errors.hpp"
#include "luinv/perm.hpp"

namespace luinv {

struct InvGraph {
    int m = 1;
    std::vector<Perm> colors;

    int color_count() const { return static_cast<int>(colors.size()); }
    /// Tail of the color-j edge whose head is l (both 1-based).
    int tail(int j, int l) const { return colors[static_cast<std::size_t>(j - 1)](l); }

    PermTuple to_tuple() const { return PermTuple(m, colors); }

    bool operator==(const InvGraph&) const = default;
};

inline InvGraph build_graph(const PermTuple& sigma) { return InvGraph{sigma.grade(), sigma.perms()}; }

/// Canonical string of the unlabelled graph: the relabelling that
/// minimizes the per-color tail lists, written as "m<m>k<k>:" followed by
/// the tails of each color separated by '|'.
inline std::string canonical_graph(const InvGraph& g) {
    if (g.m > max_grade) throw resource_error("grade too large for brute-force graph canonicalization");
    std::vector<std::vector<int>> best;
    for (const auto& beta : all_perms(g.m)) {
        // relabelled edge (β(l), β(σ_j(l))) gives tail'[β(l)] = β(σ_j(l))
        std::vector<std::vector<int>> tails(g.colors.size(), std::vector<int>(static_cast<std::size_t>(g.m)));
        for (std::size_t j = 0; j < g.colors.size(); ++j)
            for (int l = 1; l <= g.m; ++l) tails[j][static_cast<std::size_t>(beta(l) - 1)] = beta(g.colors[j](l));
        if (best.empty() || tails < best) best = std::move(tails);
    }
    std::string out = "m" + std::to_string(g.m) + "k" + std::to_string(g.colors.size()) + ":";
    for (std::size_t j = 0; j < best.size(); ++j) {
        if (j) out += '|';
        for (int v : best[j]) out += std::to_string(v) + (g.m > 9 ? "." : "");
    }
    return out;
}

struct Components {
    std::vector<std::vector<int>> partition;  ///< vertex sets, sorted
    std::vector<InvGraph> graphs;             ///< induced subgraphs, vertices relabelled 1..size
};

/// Connected components of the underlying undirected multigraph.
inline Components connected_components(const InvGraph& g) {
    Components out;
    out.partition = point_orbits(g.to_tuple());
    for (const auto& part : out.partition) out.graphs.push_back(build_graph(restrict_to(g.to_tuple(), part)));
    return out;
}

inline std::vector<std::string> default_color_names() {
    return {"black", "red", "blue", "green", "orange", "purple", "brown", "cyan"};
}

/// Graphviz digraph; arrows run tail -> head, one edge per (color, vertex).
inline std::string dot_export(const InvGraph& g, const std::vector<std::string>& color_names = default_color_names(),
                              const std::string& name = "invariant") {
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n";
    os << "  node [shape=circle];\n";
    for (int l = 1; l <= g.m; ++l) os << "  v" << l << " [label=\"" << l << "\"];\n";
    for (int j = 1; j <= g.color_count(); ++j) {
        const std::string color = color_names.empty()
                                      ? "black"
                                      : color_names[static_cast<std::size_t>(j - 1) % color_names.size()];
        for (int l = 1; l <= g.m; ++l)
            os << "  v" << g.tail(j, l) << " -> v" << l << " [color=\"" << color << "\", label=\"" << j << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

/// Cycles of a permutation, each starting at its smallest point.
inline std::vector<std::vector<int>> cycles(const Perm& p) {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(static_cast<std::size_t>(p.grade()) + 1, false);
    for (int l = 1; l <= p.grade(); ++l) {
        if (seen[static_cast<std::size_t>(l)]) continue;
        std::vector<int> c;
        for (int x = l; !seen[static_cast<std::size_t>(x)]; x = p(x)) {
            seen[static_cast<std::size_t>(x)] = true;
            c.push_back(x);
        }
        out.push_back(std::move(c));
    }
    return out;
}

/// True iff, in the cyclic vertex order `order`, every cycle of every color
/// walks consecutive positions in one direction (so its points form a
/// contiguous arc traversed as a loop).
inline bool ordering_is_adjacent(const InvGraph& g, const std::vector<int>& order) {
    const int m = g.m;
    if (static_cast<int>(order.size()) != m) return false;
    std::vector<int> pos(static_cast<std::size_t>(m) + 1, -1);
    for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    for (const auto& color : g.colors)
        for (const auto& c : cycles(color)) {
            const auto len = static_cast<int>(c.size());
            if (len <= 1) continue;
            // len − 1 unit steps in one direction; the remaining edge closes the walk
            int up = 0, down = 0;
            for (int i = 0; i < len; ++i) {
                const int step = ((pos[static_cast<std::size_t>(c[static_cast<std::size_t>((i + 1) % len)])] -
                                   pos[static_cast<std::size_t>(c[static_cast<std::size_t>(i)])]) % m + m) % m;
                up += step == 1;
                down += step == m - 1;
            }
            const bool ok = up >= len - 1 || down >= len - 1;
            if (!ok) return false;
        }
    return true;
}

/// A cyclic vertex order (vertex 1 first, up to rotation) in which every
/// colored loop is a walk over adjacent vertices, or nothing if none exists.
inline std::optional<std::vector<int>> expressible_ordering(const InvGraph& g) {
    if (g.m > max_grade) throw resource_error("grade too large for exhaustive ordering search");
    std::vector<int> order(static_cast<std::size_t>(g.m));
    std::iota(order.begin(), order.end(), 1);
    do {
        if (ordering_is_adjacent(g, order)) return order;
    } while (std::next_permutation(order.begin() + 1, order.end()));
    return std::nullopt;
}

inline nlohmann::json graph_to_json(const InvGraph& g) {
    nlohmann::json colors = nlohmann::json::array();
    for (const auto& p : g.colors) colors.push_back(p.images());
    return {{"m", g.m}, {"colors", colors}};
}

inline InvGraph graph_from_json(const nlohmann::json& doc) {
    try {
        InvGraph g;
        g.m = doc.at("m").get<int>();
        for (const auto& c : doc.at("colors")) {
            Perm p(c.get<std::vector<int>>());
            if (p.grade() != g.m) throw parse_error("graph JSON: color length does not match m");
            g.colors.push_back(std::move(p));
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("graph JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("graph JSON: ") + e.what());
    }
}

}  // namespace luinv
