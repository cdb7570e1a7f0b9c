#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <tuple>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlc/error.hpp"
#include "nlc/graph.hpp"

namespace nlc {

/// Finite r-uniform hypergraph. Each hyperedge is stored as a sorted vertex
/// list; hyperedge ids are the construction indices.
class Hypergraph {
public:
    Hypergraph() = default;

    Hypergraph(std::size_t vertex_count, std::size_t uniformity, std::vector<std::vector<Vertex>> edges)
        : vertex_count_(vertex_count), uniformity_(uniformity), edges_(std::move(edges)), incidence_(vertex_count)
    {
        if (uniformity_ == 0)
            throw Error(ErrorCode::invalid_argument, "uniformity must be positive");
        for (EdgeId id = 0; id < edges_.size(); ++id) {
            auto& e = edges_[id];
            std::sort(e.begin(), e.end());
            if (e.size() != uniformity_)
                throw Error(ErrorCode::invalid_argument,
                    "hyperedge " + std::to_string(id) + " has " + std::to_string(e.size()) + " vertices, expected "
                        + std::to_string(uniformity_));
            if (std::adjacent_find(e.begin(), e.end()) != e.end())
                throw Error(ErrorCode::invalid_argument, "hyperedge " + std::to_string(id) + " repeats a vertex");
            if (!e.empty() && e.back() >= vertex_count_)
                throw Error(ErrorCode::invalid_argument, "hyperedge " + std::to_string(id) + " vertex out of range");
            for (auto v : e)
                incidence_[v].push_back(id);
        }
        auto sorted = edges_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(ErrorCode::invalid_argument, "duplicate hyperedge");
    }

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t uniformity() const noexcept { return uniformity_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Vertex> edge(EdgeId id) const { return edges_.at(id); }
    const std::vector<std::vector<Vertex>>& edges() const noexcept { return edges_; }
    std::span<const EdgeId> incident(Vertex v) const { return incidence_.at(v); }

    bool contains(EdgeId id, Vertex v) const
    {
        const auto& e = edges_.at(id);
        return std::binary_search(e.begin(), e.end(), v);
    }

    friend bool operator==(const Hypergraph& a, const Hypergraph& b)
    {
        return a.vertex_count_ == b.vertex_count_ && a.uniformity_ == b.uniformity_ && a.edges_ == b.edges_;
    }

private:
    std::size_t vertex_count_ = 0;
    std::size_t uniformity_ = 1;
    std::vector<std::vector<Vertex>> edges_;
    std::vector<std::vector<EdgeId>> incidence_;
};

/// v0 F0 v1 F1 ... F(l-1) v0. Step i goes from vertices[i] to
/// vertices[(i+1) % l] inside hyperedge edges[i].
struct ClosedWalk {
    std::vector<Vertex> vertices;
    std::vector<EdgeId> edges;

    std::size_t length() const noexcept { return vertices.size(); }

    friend auto operator<=>(const ClosedWalk&, const ClosedWalk&) = default;
    friend bool operator==(const ClosedWalk&, const ClosedWalk&) = default;
};

/// Walk with all vertices distinct, consecutive hyperedges distinct (cyclically),
/// and every step inside its hyperedge. Returns a description of the first
/// violated condition, or nullopt when the walk is valid.
inline std::optional<std::string> walk_violation(const Hypergraph& h, const ClosedWalk& w)
{
    const auto l = w.length();
    if (l < 2)
        return "length below 2";
    if (w.edges.size() != l)
        return "vertex and hyperedge sequences differ in length";
    for (std::size_t i = 0; i < l; ++i) {
        if (w.vertices[i] >= h.vertex_count())
            return "vertex out of range at step " + std::to_string(i);
        if (w.edges[i] >= h.edge_count())
            return "hyperedge out of range at step " + std::to_string(i);
    }
    for (std::size_t i = 0; i < l; ++i) {
        auto next = w.vertices[(i + 1) % l];
        if (!h.contains(w.edges[i], w.vertices[i]) || !h.contains(w.edges[i], next))
            return "step " + std::to_string(i) + " leaves its hyperedge";
        if (w.edges[i] == w.edges[(i + 1) % l])
            return "consecutive hyperedges equal at step " + std::to_string(i);
    }
    auto sorted = w.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return "repeated vertex";
    return std::nullopt;
}

/// Least rotation/reflection, ordering by the vertex sequence and then the
/// hyperedge sequence.
inline ClosedWalk canonical_form(const ClosedWalk& w)
{
    const auto l = w.length();
    if (l == 0)
        return w;
    std::optional<ClosedWalk> best;
    for (int direction : { +1, -1 }) {
        for (std::size_t start = 0; start < l; ++start) {
            ClosedWalk c;
            c.vertices.reserve(l);
            c.edges.reserve(l);
            for (std::size_t i = 0; i < l; ++i) {
                if (direction > 0) {
                    auto at = (start + i) % l;
                    c.vertices.push_back(w.vertices[at]);
                    c.edges.push_back(w.edges[at]);
                } else {
                    // Reversed walk: v_s F_{s-1} v_{s-1} F_{s-2} ...
                    auto at = (start + l - i) % l;
                    c.vertices.push_back(w.vertices[at]);
                    c.edges.push_back(w.edges[(at + l - 1) % l]);
                }
            }
            if (!best || std::tie(c.vertices, c.edges) < std::tie(best->vertices, best->edges))
                best = std::move(c);
        }
    }
    return *best;
}

/// Hyperedges F1..Fl (distinct) linked by distinct x_i in F_i ∩ F_{i+1},
/// including the closing link x_l in F_l ∩ F_1.
struct BergeCycle {
    std::vector<EdgeId> edges;
    std::vector<Vertex> links;

    std::size_t length() const noexcept { return edges.size(); }
};

inline bool is_berge_cycle(const Hypergraph& h, const BergeCycle& c)
{
    const auto l = c.length();
    if (l < 2 || c.links.size() != l)
        return false;
    auto distinct = [](auto seq) {
        std::sort(seq.begin(), seq.end());
        return std::adjacent_find(seq.begin(), seq.end()) == seq.end();
    };
    if (!distinct(c.edges) || !distinct(c.links))
        return false;
    for (std::size_t i = 0; i < l; ++i) {
        if (c.edges[i] >= h.edge_count() || c.links[i] >= h.vertex_count())
            return false;
        if (!h.contains(c.edges[i], c.links[i]) || !h.contains(c.edges[(i + 1) % l], c.links[i]))
            return false;
    }
    return true;
}

/// Bipartite vertex/hyperedge incidence graph: ids [0, n) are vertices,
/// [n, n + m) are hyperedges.
inline Graph incidence_graph(const Hypergraph& h)
{
    std::vector<Edge> edges;
    const auto n = static_cast<Vertex>(h.vertex_count());
    for (EdgeId f = 0; f < h.edge_count(); ++f)
        for (auto v : h.edge(f))
            edges.push_back({ v, n + f });
    return Graph(h.vertex_count() + h.edge_count(), std::move(edges));
}

struct BergeGirthOptions {
    /// Count length-2 Berge cycles (two hyperedges sharing two vertices).
    bool count_digons = true;
};

namespace detail {

    // Berge cycles of length >= 3 by iterative deepening; F1 is the least edge id.
    inline std::optional<BergeCycle> shortest_long_berge_cycle(const Hypergraph& h)
    {
        const auto m = h.edge_count();
        BergeCycle current;
        std::vector<char> edge_used(m, 0), vertex_used(h.vertex_count(), 0);

        std::function<bool(std::size_t)> grow = [&](std::size_t target) -> bool {
            auto last = current.edges.back();
            auto first = current.edges.front();
            if (current.edges.size() == target) {
                for (auto x : h.edge(last))
                    if (!vertex_used[x] && h.contains(first, x)) {
                        current.links.push_back(x);
                        return true;
                    }
                return false;
            }
            for (auto x : h.edge(last)) {
                if (vertex_used[x])
                    continue;
                for (auto next : h.incident(x)) {
                    if (next <= first || edge_used[next])
                        continue;
                    vertex_used[x] = 1;
                    edge_used[next] = 1;
                    current.links.push_back(x);
                    current.edges.push_back(next);
                    if (grow(target))
                        return true;
                    current.edges.pop_back();
                    current.links.pop_back();
                    edge_used[next] = 0;
                    vertex_used[x] = 0;
                }
            }
            return false;
        };

        for (std::size_t target = 3; target <= m; ++target) {
            for (EdgeId first = 0; first < m; ++first) {
                current = BergeCycle { { first }, {} };
                edge_used[first] = 1;
                bool found = grow(target);
                edge_used[first] = 0;
                if (found)
                    return current;
                std::fill(vertex_used.begin(), vertex_used.end(), 0);
                std::fill(edge_used.begin(), edge_used.end(), 0);
            }
        }
        return std::nullopt;
    }

} // namespace detail

/// Some shortest Berge cycle. With digons counted this is a shortest cycle of
/// the incidence graph read back as hyperedges and link vertices.
inline std::optional<BergeCycle> shortest_berge_cycle(const Hypergraph& h, BergeGirthOptions options = {})
{
    if (!options.count_digons)
        return detail::shortest_long_berge_cycle(h);
    auto cycle = shortest_cycle(incidence_graph(h));
    if (!cycle)
        return std::nullopt;
    const auto n = h.vertex_count();
    // Rotate so the sequence starts at a hyperedge node: F x F x ...
    auto start = static_cast<std::size_t>(std::find_if(cycle->begin(), cycle->end(), [&](Vertex x) { return x >= n; })
        - cycle->begin());
    BergeCycle result;
    for (std::size_t i = 0; i < cycle->size(); ++i) {
        auto node = (*cycle)[(start + i) % cycle->size()];
        if (i % 2 == 0)
            result.edges.push_back(static_cast<EdgeId>(node - n));
        else
            result.links.push_back(node);
    }
    return result;
}

/// Length of a shortest Berge cycle, or infinity.
inline Extended berge_girth(const Hypergraph& h, BergeGirthOptions options = {})
{
    if (options.count_digons) {
        auto g = girth(incidence_graph(h));
        if (g.is_infinite())
            return g;
        return Extended(g.value() / 2);
    }
    auto c = detail::shortest_long_berge_cycle(h);
    return c ? Extended(c->length()) : Extended::infinity();
}

// ---------------------------------------------------- hypergraph colouring

/// A vertex k-colouring leaving no hyperedge monochromatic, or nullopt.
/// Backtracking over vertices by (degree desc, id asc) with new colours opened
/// in order only.
inline std::optional<std::vector<Colour>> find_hypergraph_colouring(const Hypergraph& h, std::size_t k)
{
    const auto n = h.vertex_count();
    for (const auto& e : h.edges())
        if (e.size() < 2)
            return std::nullopt;
    if (h.edge_count() == 0)
        return k >= 1 || n == 0 ? std::optional(std::vector<Colour>(n, 0)) : std::nullopt;
    if (k < 2)
        return std::nullopt;

    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
        [&](Vertex a, Vertex b) { return h.incident(a).size() > h.incident(b).size(); });

    constexpr auto unassigned = std::numeric_limits<Colour>::max();
    std::vector<Colour> colour(n, unassigned);
    // Per hyperedge: number of coloured vertices and how many share the first colour.
    std::vector<std::size_t> coloured(h.edge_count(), 0);

    auto monochromatic_after = [&](Vertex v) {
        for (auto f : h.incident(v)) {
            if (coloured[f] != h.edge(f).size())
                continue;
            auto c = colour[h.edge(f)[0]];
            bool mono = true;
            for (auto x : h.edge(f))
                if (colour[x] != c) {
                    mono = false;
                    break;
                }
            if (mono)
                return true;
        }
        return false;
    };

    std::function<bool(std::size_t, Colour)> assign = [&](std::size_t at, Colour used) -> bool {
        if (at == n)
            return true;
        auto v = order[at];
        auto limit = std::min<std::size_t>(k, used + 1);
        for (Colour c = 0; c < limit; ++c) {
            colour[v] = c;
            for (auto f : h.incident(v))
                ++coloured[f];
            bool ok = !monochromatic_after(v) && assign(at + 1, std::max<Colour>(used, c + 1));
            if (ok)
                return true;
            for (auto f : h.incident(v))
                --coloured[f];
        }
        colour[v] = unassigned;
        return false;
    };

    if (!assign(0, 0))
        return std::nullopt;
    return colour;
}

struct HypergraphColouring {
    Extended colour_count = Extended::infinity();
    std::vector<Colour> colour_of;
};

/// Least k with a colouring leaving no hyperedge monochromatic. Infinity when a
/// hyperedge is a singleton.
inline HypergraphColouring optimal_hypergraph_colouring(const Hypergraph& h)
{
    for (const auto& e : h.edges())
        if (e.size() < 2)
            return {};
    if (h.edge_count() == 0)
        return { Extended(1), std::vector<Colour>(h.vertex_count(), 0) };
    for (std::size_t k = 2;; ++k)
        if (auto found = find_hypergraph_colouring(h, k))
            return { Extended(k), std::move(*found) };
}

inline Extended hypergraph_chromatic_number(const Hypergraph& h) { return optimal_hypergraph_colouring(h).colour_count; }

/// True iff χ(h) >= k, decided by a single (k-1)-colouring search.
inline bool chromatic_at_least(const Hypergraph& h, std::size_t k)
{
    if (k <= 1)
        return true;
    return !find_hypergraph_colouring(h, k - 1).has_value();
}

// ----------------------------------------------------------- closed walks

/// Calls visit(walk) for every closed walk of length <= max_len once, in
/// canonical form (least vertex first; then v1 < v(l-1), or F0 < F1 for l = 2).
/// Stops when visit returns false; returns false in that case.
template <typename Visitor>
bool for_each_closed_walk(const Hypergraph& h, std::size_t max_len, Visitor&& visit)
{
    if (max_len < 2)
        throw Error(ErrorCode::invalid_argument, "max_len must be at least 2");
    ClosedWalk walk;
    std::vector<char> on_walk(h.vertex_count(), 0);

    // walk holds v0..vi and F0..F(i-1); choose F_i and v_{i+1}.
    std::function<bool()> extend = [&]() -> bool {
        const auto root = walk.vertices.front();
        const auto here = walk.vertices.back();
        const auto i = walk.vertices.size() - 1;
        for (auto f : h.incident(here)) {
            if (i > 0 && f == walk.edges.back())
                continue;
            for (auto next : h.edge(f)) {
                if (next == here)
                    continue;
                if (next == root) {
                    if (i + 1 < 2 || f == walk.edges.front())
                        continue;
                    const auto l = i + 1;
                    bool canonical = l == 2 ? walk.edges.front() < f : walk.vertices[1] < walk.vertices.back();
                    if (!canonical)
                        continue;
                    walk.edges.push_back(f);
                    bool keep_going = visit(static_cast<const ClosedWalk&>(walk));
                    walk.edges.pop_back();
                    if (!keep_going)
                        return false;
                } else if (next > root && !on_walk[next] && i + 1 < max_len) {
                    on_walk[next] = 1;
                    walk.vertices.push_back(next);
                    walk.edges.push_back(f);
                    bool keep_going = extend();
                    walk.edges.pop_back();
                    walk.vertices.pop_back();
                    on_walk[next] = 0;
                    if (!keep_going)
                        return false;
                }
            }
        }
        return true;
    };

    for (Vertex root = 0; root < h.vertex_count(); ++root) {
        walk.vertices.assign(1, root);
        walk.edges.clear();
        on_walk[root] = 1;
        bool keep_going = extend();
        on_walk[root] = 0;
        if (!keep_going)
            return false;
    }
    return true;
}

/// All closed walks of length <= max_len, canonical and sorted.
inline std::vector<ClosedWalk> enumerate_closed_walks(const Hypergraph& h, std::size_t max_len)
{
    std::vector<ClosedWalk> walks;
    for_each_closed_walk(h, max_len, [&](const ClosedWalk& w) {
        walks.push_back(w);
        return true;
    });
    std::sort(walks.begin(), walks.end());
    return walks;
}

/// Induced subhypergraph on the kept vertices (renumbered in ascending order);
/// a hyperedge survives iff all its vertices are kept. Returns the new
/// hypergraph and, for each surviving hyperedge, its original id.
struct InducedSubhypergraph {
    Hypergraph hypergraph;
    std::vector<Vertex> original_vertex;
    std::vector<EdgeId> original_edge;
};

inline InducedSubhypergraph induced_subhypergraph(const Hypergraph& h, std::span<const char> keep)
{
    if (keep.size() != h.vertex_count())
        throw Error(ErrorCode::invalid_argument, "keep mask size mismatch");
    constexpr auto dropped = std::numeric_limits<Vertex>::max();
    std::vector<Vertex> renumber(h.vertex_count(), dropped);
    InducedSubhypergraph result;
    for (Vertex v = 0; v < h.vertex_count(); ++v)
        if (keep[v]) {
            renumber[v] = static_cast<Vertex>(result.original_vertex.size());
            result.original_vertex.push_back(v);
        }
    std::vector<std::vector<Vertex>> edges;
    for (EdgeId f = 0; f < h.edge_count(); ++f) {
        auto e = h.edge(f);
        if (std::all_of(e.begin(), e.end(), [&](Vertex v) { return keep[v]; })) {
            std::vector<Vertex> mapped;
            for (auto v : e)
                mapped.push_back(renumber[v]);
            edges.push_back(std::move(mapped));
            result.original_edge.push_back(f);
        }
    }
    result.hypergraph = Hypergraph(result.original_vertex.size(), h.uniformity(), std::move(edges));
    return result;
}

} // namespace nlc
