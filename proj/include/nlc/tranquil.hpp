#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlc/error.hpp"
#include "nlc/graph.hpp"
#include "nlc/hypergraph.hpp"

namespace nlc {

using Label = std::uint32_t;

struct LabelledVertex {
    Vertex vertex;
    Label label;

    friend bool operator==(const LabelledVertex&, const LabelledVertex&) = default;
};

/// One bijection F -> {1..r} per hyperedge, stored as (vertex, label) pairs
/// sorted by vertex. Index i describes hyperedge i.
class LabellingFamily {
public:
    LabellingFamily() = default;

    explicit LabellingFamily(std::vector<std::vector<LabelledVertex>> maps) : maps_(std::move(maps))
    {
        for (std::size_t f = 0; f < maps_.size(); ++f) {
            auto& m = maps_[f];
            std::sort(m.begin(), m.end(), [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
            std::vector<Label> labels;
            for (const auto& [v, l] : m)
                labels.push_back(l);
            std::sort(labels.begin(), labels.end());
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] != i + 1)
                    throw Error(ErrorCode::invalid_argument,
                        "labelling of hyperedge " + std::to_string(f) + " is not a bijection onto 1..r");
            for (std::size_t i = 1; i < m.size(); ++i)
                if (m[i].vertex == m[i - 1].vertex)
                    throw Error(ErrorCode::invalid_argument, "labelling of hyperedge " + std::to_string(f) + " repeats a vertex");
        }
    }

    /// Labels given positionally: labels[f][i] is the label of the i-th
    /// (ascending) vertex of hyperedge f.
    static LabellingFamily from_positions(const Hypergraph& h, const std::vector<std::vector<Label>>& labels)
    {
        if (labels.size() != h.edge_count())
            throw Error(ErrorCode::invalid_argument, "labelling must cover every hyperedge");
        std::vector<std::vector<LabelledVertex>> maps(h.edge_count());
        for (EdgeId f = 0; f < h.edge_count(); ++f) {
            auto e = h.edge(f);
            if (labels[f].size() != e.size())
                throw Error(ErrorCode::invalid_argument, "labelling size mismatch on hyperedge " + std::to_string(f));
            for (std::size_t i = 0; i < e.size(); ++i)
                maps[f].push_back({ e[i], labels[f][i] });
        }
        return LabellingFamily(std::move(maps));
    }

    /// Each hyperedge labels its vertices 1..r in ascending vertex order.
    static LabellingFamily ascending(const Hypergraph& h)
    {
        std::vector<std::vector<Label>> labels(h.edge_count());
        for (auto& l : labels) {
            l.resize(h.uniformity());
            std::iota(l.begin(), l.end(), Label { 1 });
        }
        return from_positions(h, labels);
    }

    std::size_t edge_count() const noexcept { return maps_.size(); }
    std::span<const LabelledVertex> map(EdgeId f) const { return maps_.at(f); }

    std::optional<Label> label(EdgeId f, Vertex v) const
    {
        if (f >= maps_.size())
            return std::nullopt;
        const auto& m = maps_[f];
        auto it = std::lower_bound(m.begin(), m.end(), v, [](const LabelledVertex& a, Vertex x) { return a.vertex < x; });
        if (it == m.end() || it->vertex != v)
            return std::nullopt;
        return it->label;
    }

    /// The vertex of hyperedge f carrying label l.
    std::optional<Vertex> vertex_with_label(EdgeId f, Label l) const
    {
        if (f >= maps_.size())
            return std::nullopt;
        for (const auto& [v, lab] : maps_[f])
            if (lab == l)
                return v;
        return std::nullopt;
    }

    /// Domain of every map equals its hyperedge.
    bool matches(const Hypergraph& h) const
    {
        if (maps_.size() != h.edge_count())
            return false;
        for (EdgeId f = 0; f < h.edge_count(); ++f) {
            auto e = h.edge(f);
            const auto& m = maps_[f];
            if (m.size() != e.size())
                return false;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (m[i].vertex != e[i])
                    return false;
        }
        return true;
    }

    void set_map(EdgeId f, std::vector<LabelledVertex> m)
    {
        LabellingFamily check(std::vector<std::vector<LabelledVertex>> { m });
        maps_.at(f) = std::move(check.maps_[0]);
    }

    friend bool operator==(const LabellingFamily&, const LabellingFamily&) = default;

private:
    std::vector<std::vector<LabelledVertex>> maps_;
};

/// Projection of a closed walk: multigraph on the labels, one edge per walk
/// step (step i is edge id i). Label l is multigraph vertex l - 1.
inline Multigraph project(const ClosedWalk& w, const LabellingFamily& lam, std::size_t r)
{
    Multigraph m(r);
    const auto l = w.length();
    for (std::size_t i = 0; i < l; ++i) {
        auto f = w.edges[i];
        auto a = lam.label(f, w.vertices[i]);
        auto b = lam.label(f, w.vertices[(i + 1) % l]);
        if (!a || !b)
            throw Error(ErrorCode::unlabelled_edge, "no label for step " + std::to_string(i) + " in hyperedge " + std::to_string(f));
        if (*a > r || *b > r)
            throw Error(ErrorCode::invalid_argument, "label exceeds uniformity");
        m.add_edge(*a - 1, *b - 1);
    }
    return m;
}

struct TranquilityCounterexample {
    ClosedWalk walk;
    EdgeId bridge_step = 0; // edge id in the projection == walk step
    Label from = 0; // labels joined by the bridge, from < to
    Label to = 0;

    friend bool operator==(const TranquilityCounterexample&, const TranquilityCounterexample&) = default;
};

struct TranquilityCertificate {
    std::size_t walk_count = 0;
    std::size_t max_walk_length = 0;
    std::optional<TranquilityCounterexample> counterexample;

    bool tranquil() const noexcept { return !counterexample.has_value(); }
};

/// First bridge of the projection, as a counterexample for this walk.
inline std::optional<TranquilityCounterexample> bridge_in_projection(
    const ClosedWalk& w, const LabellingFamily& lam, std::size_t r)
{
    auto m = project(w, lam, r);
    auto bridges = find_bridges(m);
    if (bridges.empty())
        return std::nullopt;
    const auto& e = m.edge(bridges.front());
    auto [lo, hi] = std::minmax(e.u, e.v);
    return TranquilityCounterexample { w, bridges.front(), lo + 1, hi + 1 };
}

/// Certificate by complete closed-walk enumeration (walk length is bounded by
/// the vertex count because walk vertices are distinct). The reported
/// counterexample is the least failing walk in canonical order.
inline TranquilityCertificate certify_tranquil(const Hypergraph& h, const LabellingFamily& lam)
{
    TranquilityCertificate cert;
    cert.max_walk_length = h.vertex_count() + 1;
    if (h.vertex_count() == 0)
        return cert;
    for_each_closed_walk(h, std::max<std::size_t>(2, cert.max_walk_length), [&](const ClosedWalk& w) {
        ++cert.walk_count;
        if (cert.counterexample && cert.counterexample->walk < w)
            return true;
        if (auto found = bridge_in_projection(w, lam, h.uniformity()))
            if (!cert.counterexample || found->walk < cert.counterexample->walk)
                cert.counterexample = std::move(found);
        return true;
    });
    return cert;
}

/// Re-derives the stored counterexample's bridge from scratch.
inline bool replay(const Hypergraph& h, const LabellingFamily& lam, const TranquilityCounterexample& cx)
{
    if (walk_violation(h, cx.walk))
        return false;
    auto m = project(cx.walk, lam, h.uniformity());
    auto bridges = find_bridges(m);
    if (!std::binary_search(bridges.begin(), bridges.end(), cx.bridge_step))
        return false;
    const auto& e = m.edge(cx.bridge_step);
    return std::min(e.u, e.v) + 1 == cx.from && std::max(e.u, e.v) + 1 == cx.to;
}

// ------------------------------------------------------ cut-based decision
//
// A projection has a bridge iff some bipartition (A, B) of the labels is
// crossed by exactly one walk step. A closed sequence of steps (vertices may
// repeat) with exactly one crossing can always be shortened to a closed walk
// with one crossing: merge consecutive steps in the same hyperedge, and split
// at a repeated vertex keeping the half with the crossing. So a counterexample
// exists iff, for some bipartition, a crossing step u -> w has w connected
// back to u by non-crossing steps.

namespace detail {

    struct Step {
        Vertex from;
        Vertex to;
        EdgeId edge;
    };

    inline bool crosses(const LabellingFamily& lam, const Step& s, std::uint64_t side_mask)
    {
        auto a = *lam.label(s.edge, s.from) - 1;
        auto b = *lam.label(s.edge, s.to) - 1;
        return ((side_mask >> a) & 1) != ((side_mask >> b) & 1);
    }

    inline std::size_t crossing_count(const LabellingFamily& lam, const std::vector<Step>& steps, std::uint64_t mask)
    {
        std::size_t n = 0;
        for (const auto& s : steps)
            n += crosses(lam, s, mask);
        return n;
    }

    // Shortens a closed step sequence with exactly one crossing to a valid walk.
    inline ClosedWalk reduce_to_walk(const LabellingFamily& lam, std::vector<Step> steps, std::uint64_t mask)
    {
        for (bool changed = true; changed;) {
            changed = false;
            const auto l = steps.size();
            for (std::size_t i = 0; i < l && !changed; ++i) {
                auto j = (i + 1) % l;
                if (steps[i].edge != steps[j].edge)
                    continue;
                Step merged { steps[i].from, steps[j].to, steps[i].edge };
                std::vector<Step> next;
                for (std::size_t k = 0; k < l; ++k) {
                    if (k == i && merged.from != merged.to)
                        next.push_back(merged);
                    else if (k != i && k != j)
                        next.push_back(steps[k]);
                }
                steps = std::move(next);
                changed = true;
            }
            if (changed)
                continue;
            for (std::size_t i = 0; i < l && !changed; ++i)
                for (std::size_t j = i + 1; j < l && !changed; ++j) {
                    if (steps[i].from != steps[j].from)
                        continue;
                    std::vector<Step> inner(steps.begin() + static_cast<std::ptrdiff_t>(i),
                        steps.begin() + static_cast<std::ptrdiff_t>(j));
                    std::vector<Step> outer(steps.begin() + static_cast<std::ptrdiff_t>(j), steps.end());
                    outer.insert(outer.end(), steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(i));
                    steps = crossing_count(lam, inner, mask) == 1 ? std::move(inner) : std::move(outer);
                    changed = true;
                }
        }
        ClosedWalk w;
        for (const auto& s : steps) {
            w.vertices.push_back(s.from);
            w.edges.push_back(s.edge);
        }
        return w;
    }

} // namespace detail

/// Complete tranquility decision without walk enumeration; polynomial in the
/// hypergraph size for fixed r (2^(r-1) label bipartitions). Returns a
/// counterexample walk (canonical form) or nullopt when tranquil.
inline std::optional<TranquilityCounterexample> find_counterexample_by_cuts(const Hypergraph& h, const LabellingFamily& lam)
{
    const auto r = h.uniformity();
    if (r > 40)
        throw Error(ErrorCode::invalid_argument, "cut search supports uniformity up to 40");
    if (lam.edge_count() < h.edge_count())
        throw Error(ErrorCode::unlabelled_edge, "labelling does not cover every hyperedge");
    if (r < 2)
        return std::nullopt;
    const auto n = h.vertex_count();
    const std::uint64_t masks = std::uint64_t { 1 } << (r - 1);

    std::vector<Vertex> parent(n);
    std::vector<EdgeId> parent_edge(n);
    std::vector<std::size_t> component(n);

    std::optional<TranquilityCounterexample> best;
    // Label 1 always sits on side 0.
    for (std::uint64_t half = 1; half < masks; ++half) {
        const std::uint64_t mask = half << 1;
        // Components of the non-crossing step graph, with BFS trees for paths.
        constexpr auto none = std::numeric_limits<std::size_t>::max();
        std::fill(component.begin(), component.end(), none);
        std::vector<std::vector<std::pair<Vertex, EdgeId>>> quiet(n);
        for (EdgeId f = 0; f < h.edge_count(); ++f) {
            auto e = h.edge(f);
            for (std::size_t a = 0; a < e.size(); ++a)
                for (std::size_t b = a + 1; b < e.size(); ++b)
                    if (!detail::crosses(lam, { e[a], e[b], f }, mask)) {
                        quiet[e[a]].push_back({ e[b], f });
                        quiet[e[b]].push_back({ e[a], f });
                    }
        }
        std::size_t components = 0;
        for (Vertex s = 0; s < n; ++s) {
            if (component[s] != none)
                continue;
            component[s] = components;
            parent[s] = s;
            std::queue<Vertex> q;
            q.push(s);
            while (!q.empty()) {
                auto x = q.front();
                q.pop();
                for (auto [y, f] : quiet[x])
                    if (component[y] == none) {
                        component[y] = components;
                        parent[y] = x;
                        parent_edge[y] = f;
                        q.push(y);
                    }
            }
            ++components;
        }
        for (EdgeId f = 0; f < h.edge_count(); ++f) {
            auto e = h.edge(f);
            for (auto u : e)
                for (auto w : e) {
                    if (u == w || component[u] != component[w] || !detail::crosses(lam, { u, w, f }, mask))
                        continue;
                    // Crossing step u -> w, then quiet path w -> u through the BFS tree.
                    auto root_path = [&](Vertex x) {
                        std::vector<detail::Step> up; // x -> root
                        while (parent[x] != x) {
                            up.push_back({ x, parent[x], parent_edge[x] });
                            x = parent[x];
                        }
                        return up;
                    };
                    std::vector<detail::Step> steps { { u, w, f } };
                    auto w_up = root_path(w);
                    auto u_up = root_path(u);
                    steps.insert(steps.end(), w_up.begin(), w_up.end());
                    for (auto it = u_up.rbegin(); it != u_up.rend(); ++it)
                        steps.push_back({ it->to, it->from, it->edge });
                    auto walk = canonical_form(detail::reduce_to_walk(lam, std::move(steps), mask));
                    auto found = bridge_in_projection(walk, lam, r);
                    if (!found)
                        throw Error(ErrorCode::invalid_argument, "internal: reduced walk lost its bridge");
                    if (!best || found->walk < best->walk)
                        best = std::move(found);
                    // One witness per bipartition is enough.
                    goto next_mask;
                }
        }
    next_mask:;
    }
    return best;
}

inline bool is_tranquil_by_cuts(const Hypergraph& h, const LabellingFamily& lam)
{
    return !find_counterexample_by_cuts(h, lam).has_value();
}

/// Restriction of a labelling family to an induced subhypergraph.
inline LabellingFamily restrict_labelling(const LabellingFamily& lam, const InducedSubhypergraph& sub)
{
    std::vector<Vertex> renumber;
    Vertex max_original = 0;
    for (auto v : sub.original_vertex)
        max_original = std::max(max_original, v);
    renumber.assign(sub.original_vertex.empty() ? 0 : max_original + 1, 0);
    for (Vertex i = 0; i < sub.original_vertex.size(); ++i)
        renumber[sub.original_vertex[i]] = i;
    std::vector<std::vector<LabelledVertex>> maps;
    for (auto f : sub.original_edge) {
        std::vector<LabelledVertex> m;
        for (const auto& [v, l] : lam.map(f))
            m.push_back({ renumber.at(v), l });
        maps.push_back(std::move(m));
    }
    return LabellingFamily(std::move(maps));
}

// ------------------------------------------------------------ search

enum class SearchStatus { found, exhausted, budget };

struct LabellingSearch {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<LabellingFamily> family;
    std::size_t explored = 0;
};

/// Backtracking over per-hyperedge bijections in hyperedge order, pruning a
/// partial family as soon as the hyperedges labelled so far admit a bridged
/// walk. `budget` caps the number of partial families explored.
inline LabellingSearch search_tranquil_labelling(const Hypergraph& h, std::size_t budget)
{
    if (budget == 0)
        throw Error(ErrorCode::invalid_argument, "budget must be positive");
    LabellingSearch result;
    const auto r = h.uniformity();
    const auto m = h.edge_count();
    std::vector<std::vector<LabelledVertex>> maps;

    std::function<bool(EdgeId)> assign = [&](EdgeId f) -> bool {
        if (f == m)
            return true;
        auto e = h.edge(f);
        std::vector<Label> perm(r);
        std::iota(perm.begin(), perm.end(), Label { 1 });
        do {
            if (result.explored >= budget) {
                result.status = SearchStatus::budget;
                return false;
            }
            ++result.explored;
            std::vector<LabelledVertex> map;
            for (std::size_t i = 0; i < r; ++i)
                map.push_back({ e[i], perm[i] });
            maps.push_back(std::move(map));
            std::vector<std::vector<Vertex>> prefix(h.edges().begin(), h.edges().begin() + f + 1);
            Hypergraph partial(h.vertex_count(), r, std::move(prefix));
            LabellingFamily lam(maps);
            if (is_tranquil_by_cuts(partial, lam) && assign(f + 1))
                return true;
            maps.pop_back();
            if (result.status == SearchStatus::budget)
                return false;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };

    if (assign(0)) {
        LabellingFamily lam(maps);
        if (!certify_tranquil(h, lam).tranquil())
            throw Error(ErrorCode::not_tranquil, "internal: search result failed enumeration certificate");
        result.status = SearchStatus::found;
        result.family = std::move(lam);
    }
    return result;
}

} // namespace nlc
