#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "nlc/error.hpp"

namespace nlc {

struct Edge {
    Vertex u;
    Vertex v;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
    Vertex neighbour;
    EdgeId edge;
};

/// Simple undirected graph. Edges are stored normalised (u < v) and sorted;
/// an edge's id is its index in that order.
class Graph {
public:
    Graph() = default;

    explicit Graph(std::size_t vertex_count) : Graph(vertex_count, std::vector<Edge> {}) {}

    Graph(std::size_t vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count), edges_(std::move(edges))
    {
        for (auto& e : edges_) {
            if (e.u >= vertex_count_ || e.v >= vertex_count_)
                throw Error(ErrorCode::invalid_argument, "edge endpoint out of range");
            if (e.u == e.v)
                throw Error(ErrorCode::invalid_argument, "loop at vertex " + std::to_string(e.u));
            if (e.u > e.v)
                std::swap(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            throw Error(ErrorCode::invalid_argument, "duplicate edge");

        adjacency_.assign(vertex_count_, {});
        for (EdgeId id = 0; id < edges_.size(); ++id) {
            adjacency_[edges_[id].u].push_back({ edges_[id].v, id });
            adjacency_[edges_[id].v].push_back({ edges_[id].u, id });
        }
        for (auto& list : adjacency_)
            std::sort(list.begin(), list.end(), [](const Incidence& a, const Incidence& b) { return a.neighbour < b.neighbour; });
    }

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_.at(id); }
    std::span<const Incidence> neighbours(Vertex v) const { return adjacency_.at(v); }
    std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

    std::optional<EdgeId> edge_between(Vertex a, Vertex b) const
    {
        if (a >= vertex_count_ || b >= vertex_count_)
            return std::nullopt;
        const auto& list = adjacency_[a];
        auto it = std::lower_bound(list.begin(), list.end(), b,
            [](const Incidence& inc, Vertex x) { return inc.neighbour < x; });
        if (it != list.end() && it->neighbour == b)
            return it->edge;
        return std::nullopt;
    }

    bool adjacent(Vertex a, Vertex b) const { return edge_between(a, b).has_value(); }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
};

/// Undirected multigraph; loops and parallel edges allowed. Edge ids are
/// insertion indices.
class Multigraph {
public:
    explicit Multigraph(std::size_t vertex_count = 0) : adjacency_(vertex_count) {}

    Multigraph(std::size_t vertex_count, const std::vector<Edge>& edges) : adjacency_(vertex_count)
    {
        for (const auto& e : edges)
            add_edge(e.u, e.v);
    }

    EdgeId add_edge(Vertex a, Vertex b)
    {
        if (a >= adjacency_.size() || b >= adjacency_.size())
            throw Error(ErrorCode::invalid_argument, "multigraph edge endpoint out of range");
        auto id = static_cast<EdgeId>(edges_.size());
        edges_.push_back({ a, b });
        adjacency_[a].push_back({ b, id });
        if (a != b)
            adjacency_[b].push_back({ a, id });
        return id;
    }

    std::size_t vertex_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_.at(id); }
    std::span<const Incidence> neighbours(Vertex v) const { return adjacency_.at(v); }

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
};

/// Colour per edge id.
class EdgeColouring {
public:
    EdgeColouring() = default;
    explicit EdgeColouring(std::vector<Colour> colours) : colours_(std::move(colours)) {}

    Colour operator[](EdgeId e) const { return colours_.at(e); }
    std::size_t size() const noexcept { return colours_.size(); }
    std::span<const Colour> colours() const noexcept { return colours_; }

    void set(EdgeId e, Colour c) { colours_.at(e) = c; }

    std::size_t colour_count() const
    {
        return colours_.empty() ? 0 : *std::max_element(colours_.begin(), colours_.end()) + 1;
    }

    friend bool operator==(const EdgeColouring&, const EdgeColouring&) = default;

private:
    std::vector<Colour> colours_;
};

using Cycle = std::vector<Vertex>;

inline constexpr std::size_t default_cycle_cap = 1'000'000;

// ---------------------------------------------------------------- girth

namespace detail {

    struct ShortestCycleSearch {
        std::size_t length = 0;
        Vertex root = 0, u = 0, w = 0;
        std::vector<Vertex> parent;
    };

    // Per-root BFS; the globally shortest non-tree closure is a simple cycle.
    inline std::optional<ShortestCycleSearch> shortest_cycle_search(const Graph& g, bool want_witness)
    {
        const auto n = g.vertex_count();
        constexpr auto unseen = std::numeric_limits<std::size_t>::max();
        std::optional<ShortestCycleSearch> best;
        std::vector<std::size_t> dist(n);
        std::vector<Vertex> parent(n);
        std::vector<EdgeId> parent_edge(n);
        std::vector<Vertex> queue;
        queue.reserve(n);

        for (Vertex root = 0; root < n; ++root) {
            std::fill(dist.begin(), dist.end(), unseen);
            queue.clear();
            dist[root] = 0;
            parent[root] = root;
            queue.push_back(root);
            bool improved = false;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                auto x = queue[head];
                if (best && 2 * dist[x] + 1 >= best->length)
                    break;
                for (auto [y, e] : g.neighbours(x)) {
                    if (dist[y] == unseen) {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        parent_edge[y] = e;
                        queue.push_back(y);
                    } else if (x != root && parent_edge[x] == e) {
                        continue;
                    } else if (dist[y] >= dist[x]) {
                        auto len = dist[x] + dist[y] + 1;
                        if (!best || len < best->length) {
                            best = ShortestCycleSearch { len, root, x, y, {} };
                            improved = true;
                        }
                    }
                }
            }
            if (improved && want_witness)
                best->parent = parent;
        }
        return best;
    }

} // namespace detail

/// Length of a shortest cycle; infinity for forests.
inline Extended girth(const Graph& g)
{
    auto found = detail::shortest_cycle_search(g, false);
    return found ? Extended(found->length) : Extended::infinity();
}

/// Some shortest cycle, as a vertex sequence, or nullopt for forests.
inline std::optional<Cycle> shortest_cycle(const Graph& g)
{
    auto found = detail::shortest_cycle_search(g, true);
    if (!found)
        return std::nullopt;
    Cycle up, down;
    for (auto x = found->u; x != found->root; x = found->parent[x])
        up.push_back(x);
    for (auto x = found->w; x != found->root; x = found->parent[x])
        down.push_back(x);
    Cycle cycle { found->root };
    cycle.insert(cycle.end(), up.rbegin(), up.rend());
    cycle.insert(cycle.end(), down.begin(), down.end());
    return cycle;
}

// -------------------------------------------------------------- bridges

/// Edge ids whose removal increases the number of components, ascending.
/// Parallel edges are handled by skipping only the tree edge's own id.
inline std::vector<EdgeId> find_bridges(const Multigraph& m)
{
    const auto n = m.vertex_count();
    constexpr auto unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> order(n, unvisited), low(n, 0);
    std::vector<EdgeId> bridges;
    std::size_t counter = 0;

    struct Frame {
        Vertex v;
        EdgeId via;
        bool has_via;
        std::size_t next;
    };
    std::vector<Frame> stack;

    for (Vertex start = 0; start < n; ++start) {
        if (order[start] != unvisited)
            continue;
        order[start] = low[start] = counter++;
        stack.push_back({ start, 0, false, 0 });
        while (!stack.empty()) {
            auto& top = stack.back();
            auto adj = m.neighbours(top.v);
            if (top.next < adj.size()) {
                auto [w, e] = adj[top.next++];
                if (top.has_via && e == top.via)
                    continue;
                if (w == top.v)
                    continue;
                if (order[w] == unvisited) {
                    order[w] = low[w] = counter++;
                    stack.push_back({ w, e, true, 0 });
                } else {
                    low[top.v] = std::min(low[top.v], order[w]);
                }
            } else {
                auto done = top;
                stack.pop_back();
                if (!stack.empty()) {
                    auto& parent = stack.back();
                    low[parent.v] = std::min(low[parent.v], low[done.v]);
                    if (low[done.v] > order[parent.v])
                        bridges.push_back(done.via);
                }
            }
        }
    }
    std::sort(bridges.begin(), bridges.end());
    return bridges;
}

// --------------------------------------------------------------- cycles

/// Calls visit(cycle) for every simple cycle once, in canonical form: starts at
/// its least vertex, and second vertex < last vertex. Cycles are produced in
/// lexicographic order. Stops early when visit returns false; returns false in
/// that case.
template <typename Visitor>
bool for_each_cycle(const Graph& g, Visitor&& visit)
{
    const auto n = g.vertex_count();
    std::vector<char> on_path(n, 0);
    Cycle path;

    std::function<bool(Vertex)> extend = [&](Vertex v) -> bool {
        const auto root = path.front();
        for (auto [w, e] : g.neighbours(v)) {
            (void)e;
            if (w == root) {
                if (path.size() >= 3 && path[1] < path.back())
                    if (!visit(static_cast<const Cycle&>(path)))
                        return false;
            } else if (w > root && !on_path[w]) {
                on_path[w] = 1;
                path.push_back(w);
                bool keep_going = extend(w);
                path.pop_back();
                on_path[w] = 0;
                if (!keep_going)
                    return false;
            }
        }
        return true;
    };

    for (Vertex root = 0; root < n; ++root) {
        path.assign(1, root);
        on_path[root] = 1;
        bool keep_going = extend(root);
        on_path[root] = 0;
        if (!keep_going)
            return false;
    }
    return true;
}

struct CycleEnumeration {
    std::vector<Cycle> cycles;
    bool truncated = false;
};

/// All simple cycles in canonical form. With a cap, stops once more than
/// max_count cycles exist and flags truncation; the partial list is kept.
inline CycleEnumeration enumerate_cycles(const Graph& g, std::optional<std::size_t> max_count = default_cycle_cap)
{
    CycleEnumeration result;
    for_each_cycle(g, [&](const Cycle& c) {
        if (max_count && result.cycles.size() >= *max_count) {
            result.truncated = true;
            return false;
        }
        result.cycles.push_back(c);
        return true;
    });
    return result;
}

/// Edge ids along a cycle, step i joining cycle[i] and cycle[i+1 mod len].
inline std::vector<EdgeId> cycle_edges(const Graph& g, std::span<const Vertex> cycle)
{
    if (cycle.size() < 3)
        throw Error(ErrorCode::malformed_cycle, "a cycle needs at least 3 vertices");
    std::vector<EdgeId> ids;
    ids.reserve(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        auto e = g.edge_between(cycle[i], cycle[(i + 1) % cycle.size()]);
        if (!e)
            throw Error(ErrorCode::malformed_cycle, "consecutive cycle vertices are not adjacent");
        ids.push_back(*e);
    }
    return ids;
}

/// True iff cycle is a simple cycle of g (length >= 3, distinct vertices,
/// consecutive vertices adjacent).
inline bool is_cycle_of(const Graph& g, std::span<const Vertex> cycle)
{
    if (cycle.size() < 3)
        return false;
    std::vector<Vertex> sorted(cycle.begin(), cycle.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return false;
    for (std::size_t i = 0; i < cycle.size(); ++i)
        if (!g.adjacent(cycle[i], cycle[(i + 1) % cycle.size()]))
            return false;
    return true;
}

// ----------------------------------------------------- vertex colouring

namespace detail {

    class DsaturSearch {
    public:
        DsaturSearch(const Graph& g, std::size_t k)
            : g_(g), k_(k), colour_(g.vertex_count(), unassigned), seen_(g.vertex_count() * k, 0),
              saturation_(g.vertex_count(), 0)
        {
        }

        bool run() { return assign(0, 0); }
        const std::vector<Colour>& colouring() const { return colour_; }

    private:
        static constexpr Colour unassigned = std::numeric_limits<Colour>::max();

        Vertex pick() const
        {
            Vertex best = 0;
            bool have = false;
            for (Vertex v = 0; v < g_.vertex_count(); ++v) {
                if (colour_[v] != unassigned)
                    continue;
                if (!have || saturation_[v] > saturation_[best]
                    || (saturation_[v] == saturation_[best] && g_.degree(v) > g_.degree(best))) {
                    best = v;
                    have = true;
                }
            }
            return best;
        }

        void paint(Vertex v, Colour c, int delta)
        {
            for (auto [w, e] : g_.neighbours(v)) {
                (void)e;
                auto& slot = seen_[w * k_ + c];
                if (delta > 0) {
                    if (slot++ == 0)
                        ++saturation_[w];
                } else {
                    if (--slot == 0)
                        --saturation_[w];
                }
            }
        }

        bool assign(std::size_t coloured, Colour used)
        {
            if (coloured == g_.vertex_count())
                return true;
            auto v = pick();
            if (saturation_[v] >= k_)
                return false;
            auto limit = std::min<std::size_t>(k_, used + 1);
            for (Colour c = 0; c < limit; ++c) {
                if (seen_[v * k_ + c])
                    continue;
                colour_[v] = c;
                paint(v, c, +1);
                if (assign(coloured + 1, std::max<Colour>(used, c + 1)))
                    return true;
                paint(v, c, -1);
                colour_[v] = unassigned;
            }
            return false;
        }

        const Graph& g_;
        std::size_t k_;
        std::vector<Colour> colour_;
        std::vector<std::uint32_t> seen_;
        std::vector<std::size_t> saturation_;
    };

} // namespace detail

/// A proper k-colouring found by exhaustive DSATUR backtracking, or nullopt if
/// none exists.
inline std::optional<std::vector<Colour>> find_colouring(const Graph& g, std::size_t k)
{
    if (g.vertex_count() == 0)
        return std::vector<Colour> {};
    if (k == 0)
        return std::nullopt;
    detail::DsaturSearch search(g, k);
    if (!search.run())
        return std::nullopt;
    return search.colouring();
}

/// Greedy DSATUR colouring (ties: degree desc, id asc). An upper bound.
inline std::vector<Colour> dsatur_greedy(const Graph& g)
{
    const auto n = g.vertex_count();
    constexpr auto unassigned = std::numeric_limits<Colour>::max();
    std::vector<Colour> colour(n, unassigned);
    std::vector<std::vector<char>> seen(n);
    std::vector<std::size_t> saturation(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
        Vertex best = 0;
        bool have = false;
        for (Vertex v = 0; v < n; ++v) {
            if (colour[v] != unassigned)
                continue;
            if (!have || saturation[v] > saturation[best]
                || (saturation[v] == saturation[best] && g.degree(v) > g.degree(best))) {
                best = v;
                have = true;
            }
        }
        Colour c = 0;
        while (c < seen[best].size() && seen[best][c])
            ++c;
        colour[best] = c;
        for (auto [w, e] : g.neighbours(best)) {
            (void)e;
            if (seen[w].size() <= c)
                seen[w].resize(c + 1, 0);
            if (!seen[w][c]) {
                seen[w][c] = 1;
                ++saturation[w];
            }
        }
    }
    return colour;
}

/// Size of a greedily grown clique (best over all seeds). A lower bound on χ.
inline std::size_t greedy_clique_size(const Graph& g)
{
    std::size_t best = g.vertex_count() > 0 ? 1 : 0;
    for (Vertex seed = 0; seed < g.vertex_count(); ++seed) {
        std::vector<Vertex> clique { seed };
        std::vector<Vertex> candidates;
        for (auto [w, e] : g.neighbours(seed)) {
            (void)e;
            candidates.push_back(w);
        }
        std::sort(candidates.begin(), candidates.end(),
            [&](Vertex a, Vertex b) { return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b; });
        for (auto c : candidates)
            if (std::all_of(clique.begin(), clique.end(), [&](Vertex x) { return g.adjacent(x, c); }))
                clique.push_back(c);
        best = std::max(best, clique.size());
    }
    return best;
}

struct VertexColouring {
    std::size_t colour_count = 0;
    std::vector<Colour> colour_of;
};

/// Exact chromatic number with a witness colouring: DSATUR upper bound, clique
/// lower bound, then decision searches from the lower bound upwards.
inline VertexColouring optimal_colouring(const Graph& g)
{
    if (g.vertex_count() == 0)
        throw Error(ErrorCode::invalid_argument, "chromatic number of the empty graph");
    auto greedy = dsatur_greedy(g);
    std::size_t upper = *std::max_element(greedy.begin(), greedy.end()) + 1;
    for (auto k = greedy_clique_size(g); k < upper; ++k)
        if (auto found = find_colouring(g, k))
            return { k, std::move(*found) };
    return { upper, std::move(greedy) };
}

inline std::size_t chromatic_number(const Graph& g) { return optimal_colouring(g).colour_count; }

// -------------------------------------------------------- edge colourings

struct ColourClash {
    Vertex vertex;
    Colour colour;
};

struct ProperEdgeColouringCheck {
    bool proper = true;
    std::optional<ColourClash> violation;
};

namespace detail {
    inline void require_total(const Graph& g, const EdgeColouring& c)
    {
        if (c.size() != g.edge_count())
            throw Error(ErrorCode::missing_edge,
                "colouring covers " + std::to_string(c.size()) + " of " + std::to_string(g.edge_count()) + " edges");
    }

    // First (vertex, colour) seen more than `allowed` times, scanning vertices in order.
    inline std::optional<ColourClash> colour_overload(const Graph& g, const EdgeColouring& c, std::size_t allowed)
    {
        std::vector<Colour> around;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            around.clear();
            for (auto [w, e] : g.neighbours(v)) {
                (void)w;
                around.push_back(c[e]);
            }
            std::sort(around.begin(), around.end());
            for (std::size_t i = 0; i + allowed < around.size(); ++i)
                if (around[i] == around[i + allowed])
                    return ColourClash { v, around[i] };
        }
        return std::nullopt;
    }
} // namespace detail

inline ProperEdgeColouringCheck is_proper_edge_colouring(const Graph& g, const EdgeColouring& c)
{
    detail::require_total(g, c);
    auto clash = detail::colour_overload(g, c, 1);
    return { !clash.has_value(), clash };
}

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

struct LonelyColourCheck {
    Verdict verdict = Verdict::pass;
    std::size_t cycles_checked = 0;
    // On FAIL: either a cycle carrying a lonely colour...
    std::optional<Cycle> witness_cycle;
    std::optional<Colour> lonely_colour;
    // ...or a vertex seeing some colour three or more times.
    std::optional<ColourClash> overloaded;
};

/// Lonely colour on a cycle (a colour used exactly once), smallest first.
inline std::optional<Colour> lonely_colour_on(const Graph& g, const EdgeColouring& c, std::span<const Vertex> cycle)
{
    std::vector<Colour> seen;
    for (auto e : cycle_edges(g, cycle))
        seen.push_back(c[e]);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size();) {
        auto j = i;
        while (j < seen.size() && seen[j] == seen[i])
            ++j;
        if (j - i == 1)
            return seen[i];
        i = j;
    }
    return std::nullopt;
}

/// Checks both no-lonely-colour conditions: every vertex sees each colour at
/// most twice, and no cycle carries a colour exactly once. Cycles beyond the
/// cap make the answer INCONCLUSIVE unless a failure was already found.
inline LonelyColourCheck check_no_lonely_colour(
    const Graph& g, const EdgeColouring& c, std::optional<std::size_t> cycle_cap = default_cycle_cap)
{
    detail::require_total(g, c);
    LonelyColourCheck result;
    if (auto clash = detail::colour_overload(g, c, 2)) {
        result.verdict = Verdict::fail;
        result.overloaded = clash;
        return result;
    }
    bool truncated = false;
    for_each_cycle(g, [&](const Cycle& cycle) {
        if (cycle_cap && result.cycles_checked >= *cycle_cap) {
            truncated = true;
            return false;
        }
        ++result.cycles_checked;
        if (auto lonely = lonely_colour_on(g, c, cycle)) {
            result.verdict = Verdict::fail;
            result.witness_cycle = cycle;
            result.lonely_colour = lonely;
            return false;
        }
        return true;
    });
    if (result.verdict == Verdict::pass && truncated)
        result.verdict = Verdict::inconclusive;
    return result;
}

} // namespace nlc
