#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "nlc/error.hpp"
#include "nlc/hypergraph.hpp"
#include "nlc/tranquil.hpp"

namespace nlc {

/// Finite piece of the Gallai hypergraph: box [0, side)^dimension and radii
/// 1..max_radius. A hyperedge {x + r e_1, ..., x + r e_d} is kept iff all its
/// points lie in the box.
struct SliceSpec {
    std::size_t dimension = 2;
    std::size_t side = 1;
    std::size_t max_radius = 1;

    friend bool operator==(const SliceSpec&, const SliceSpec&) = default;
};

inline constexpr std::size_t max_slice_vertices = std::size_t { 1 } << 24;

inline void validate(const SliceSpec& spec)
{
    if (spec.dimension < 2)
        throw Error(ErrorCode::invalid_argument, "slice dimension must be at least 2");
    if (spec.side < 1)
        throw Error(ErrorCode::invalid_argument, "slice side must be positive");
    if (spec.max_radius < 1)
        throw Error(ErrorCode::invalid_argument, "slice radius bound must be positive");
    std::size_t count = 1;
    for (std::size_t i = 0; i < spec.dimension; ++i) {
        count *= spec.side;
        if (count > max_slice_vertices)
            throw Error(ErrorCode::invalid_argument, "slice has too many vertices");
    }
}

inline std::size_t slice_vertex_count(const SliceSpec& spec)
{
    validate(spec);
    std::size_t count = 1;
    for (std::size_t i = 0; i < spec.dimension; ++i)
        count *= spec.side;
    return count;
}

using Point = std::vector<std::int64_t>;

/// Row-major: the first coordinate is the most significant digit.
inline Vertex point_id(const SliceSpec& spec, const Point& p)
{
    std::size_t id = 0;
    for (auto c : p)
        id = id * spec.side + static_cast<std::size_t>(c);
    return static_cast<Vertex>(id);
}

inline Point point_of(const SliceSpec& spec, Vertex id)
{
    Point p(spec.dimension);
    std::size_t rest = id;
    for (std::size_t i = spec.dimension; i-- > 0;) {
        p[i] = static_cast<std::int64_t>(rest % spec.side);
        rest /= spec.side;
    }
    return p;
}

struct Slice {
    SliceSpec spec;
    Hypergraph hypergraph;
    LabellingFamily labelling;
    /// Base point id and radius of every hyperedge.
    std::vector<std::pair<Vertex, std::size_t>> origin;
};

/// All box-contained hyperedges, ordered by (base point id, radius), with the
/// labelling x + r e_i -> i.
inline Slice build_slice(const SliceSpec& spec)
{
    const auto n = slice_vertex_count(spec);
    const auto d = spec.dimension;
    Slice slice { spec, {}, {}, {} };
    std::vector<std::vector<Vertex>> edges;
    std::vector<std::vector<LabelledVertex>> maps;
    for (Vertex base = 0; base < n; ++base) {
        auto x = point_of(spec, base);
        for (std::size_t r = 1; r <= spec.max_radius; ++r) {
            bool fits = true;
            for (auto c : x)
                if (static_cast<std::size_t>(c) + r >= spec.side)
                    fits = false;
            if (!fits)
                break;
            std::vector<Vertex> edge;
            std::vector<LabelledVertex> map;
            for (std::size_t i = 0; i < d; ++i) {
                auto p = x;
                p[i] += static_cast<std::int64_t>(r);
                auto id = point_id(spec, p);
                edge.push_back(id);
                map.push_back({ id, static_cast<Label>(i + 1) });
            }
            edges.push_back(std::move(edge));
            maps.push_back(std::move(map));
            slice.origin.push_back({ base, r });
        }
    }
    slice.hypergraph = Hypergraph(n, d, std::move(edges));
    slice.labelling = LabellingFamily(std::move(maps));
    return slice;
}

struct WalkStep {
    Vertex from;
    Vertex to;
};

inline std::vector<WalkStep> steps_of(const ClosedWalk& w)
{
    std::vector<WalkStep> steps;
    for (std::size_t i = 0; i < w.length(); ++i)
        steps.push_back({ w.vertices[i], w.vertices[(i + 1) % w.length()] });
    return steps;
}

/// Sums r (e_j - e_i) over the steps, where each step moves from x + r e_i to
/// x + r e_j. True iff the sum vanishes. Throws INVALID_STEP for a step that is
/// not of that shape.
inline bool check_displacement_closure(std::span<const WalkStep> steps, const SliceSpec& spec)
{
    validate(spec);
    std::vector<std::int64_t> total(spec.dimension, 0);
    for (std::size_t s = 0; s < steps.size(); ++s) {
        auto a = point_of(spec, steps[s].from);
        auto b = point_of(spec, steps[s].to);
        std::optional<std::size_t> up, down;
        std::int64_t radius = 0;
        bool ok = true;
        for (std::size_t i = 0; i < spec.dimension; ++i) {
            auto diff = b[i] - a[i];
            if (diff == 0)
                continue;
            if (diff > 0 && !up) {
                up = i;
                if (radius != 0 && radius != diff)
                    ok = false;
                radius = diff;
            } else if (diff < 0 && !down) {
                down = i;
                if (radius != 0 && radius != -diff)
                    ok = false;
                radius = -diff;
            } else {
                ok = false;
            }
        }
        if (!ok || !up || !down)
            throw Error(ErrorCode::invalid_step, "step " + std::to_string(s) + " is not r(e_j - e_i)");
        // The step leaves label `down` and arrives at label `up`.
        total[*up] += radius;
        total[*down] -= radius;
    }
    return std::all_of(total.begin(), total.end(), [](std::int64_t t) { return t == 0; });
}

inline bool check_displacement_closure(const ClosedWalk& w, const SliceSpec& spec)
{
    auto steps = steps_of(w);
    return check_displacement_closure(std::span<const WalkStep>(steps), spec);
}

struct PrunedHypergraph {
    Hypergraph hypergraph;
    LabellingFamily labelling;
    /// Ids in the input hypergraph of the surviving vertices.
    std::vector<Vertex> kept_vertices;
    std::size_t deleted = 0;
};

/// Deletes a seeded-random link vertex of a shortest Berge cycle until the
/// girth target is met, then requires χ >= target_chi (exact) and re-checks
/// tranquility of the restricted labelling. nullopt when χ fell too low.
inline std::optional<PrunedHypergraph> prune_for_girth(const Hypergraph& h, const LabellingFamily& lam,
    std::size_t target_girth, std::size_t target_chi, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<char> keep(h.vertex_count(), 1);
    PrunedHypergraph current { h, lam, {}, 0 };
    current.kept_vertices.resize(h.vertex_count());
    std::iota(current.kept_vertices.begin(), current.kept_vertices.end(), Vertex { 0 });

    while (true) {
        auto cycle = shortest_berge_cycle(current.hypergraph);
        if (!cycle || cycle->length() >= target_girth)
            break;
        std::uniform_int_distribution<std::size_t> pick(0, cycle->links.size() - 1);
        auto local = cycle->links[pick(rng)];
        keep[current.kept_vertices[local]] = 0;
        ++current.deleted;
        auto sub = induced_subhypergraph(h, keep);
        current.hypergraph = std::move(sub.hypergraph);
        current.labelling = restrict_labelling(lam, sub);
        current.kept_vertices = std::move(sub.original_vertex);
    }
    if (!chromatic_at_least(current.hypergraph, target_chi))
        return std::nullopt;
    if (!is_tranquil_by_cuts(current.hypergraph, current.labelling))
        throw Error(ErrorCode::not_tranquil, "pruned labelling is not tranquil");
    return current;
}

} // namespace nlc
