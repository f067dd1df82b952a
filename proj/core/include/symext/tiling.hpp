#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "symext/group.hpp"
#include "symext/shift_space.hpp"

namespace symext {

/// Shapes S_1..S_k. Each shape is canonical: its minimal element is the
/// identity, so a tile S_j·g has anchor g inside it.
class ShapeFamily {
public:
    ShapeFamily(GroupKind group, std::vector<FiniteSubset> shapes);

    GroupKind group() const { return group_; }
    std::size_t size() const { return shapes_.size(); }
    const FiniteSubset& operator[](std::size_t j) const { return shapes_.at(j); }
    const std::vector<FiniteSubset>& shapes() const { return shapes_; }
    bool operator==(const ShapeFamily&) const = default;

private:
    GroupKind group_;
    std::vector<FiniteSubset> shapes_;
};

/// A tile S_j·anchor. `shape_index` is 0-based; the symbolic point x_T uses
/// shape_index + 1 at anchors.
struct TileInstance {
    std::size_t shape_index = 0;
    GroupElement anchor;
    bool contained = false;  // fully inside the queried window

    FiniteSubset points(const ShapeFamily& family) const { return right_translate(family[shape_index], anchor); }
    bool operator==(const TileInstance&) const = default;
};

/// How anchors are generated.
///   grid   one coordinate-box shape [0,a_1)x...; anchors λ·offset for λ in
///          the lattice a_1Z x ... (works in H3 as well, since box·λ tiles)
///   cycle  Z only: interval shapes laid end to end following `sequence`,
///          repeated periodically from `offset`
enum class Placement { grid, cycle };

struct TilingSpec {
    ShapeFamily family;
    Placement placement = Placement::grid;
    std::vector<std::size_t> sequence;  // cycle only
    GroupElement offset;
    // derived from the family at construction
    std::array<Coord, 3> grid_dims{1, 1, 1};
    std::vector<Coord> cycle_prefix;

    /// Validates the family against the placement rule.
    TilingSpec(ShapeFamily fam, Placement p, GroupElement off, std::vector<std::size_t> seq = {});

    GroupKind group() const { return family.group(); }
    bool operator==(const TilingSpec&) const = default;
};

/// Shape index and anchor of the tile containing g.
TileInstance tile_containing(const TilingSpec& spec, const GroupElement& g);

/// All tiles meeting W, sorted by anchor, flagged contained/partial.
/// Disjointness and covering are re-checked on W; a violation throws an
/// Error naming the offending site.
std::vector<TileInstance> tiles_in_window(const TilingSpec& spec, const FiniteSubset& w);

/// x_T restricted to W: shape_index+1 at anchors, 0 elsewhere.
Pattern encode_tiling_point(const TilingSpec& spec, const FiniteSubset& w);
/// Tiles recorded in a pattern produced by encode_tiling_point.
std::vector<TileInstance> decode_tiling_point(const ShapeFamily& family, const Pattern& x);

/// gT = {T·g^{-1} : T in T}.
TilingSpec shift_tiling(const TilingSpec& spec, const GroupElement& g);

/// invariance_ratio(S_j, K) for each shape.
std::vector<Ratio> shape_invariance_report(const ShapeFamily& family, const FiniteSubset& k);

/// Representatives r such that every translate of the tiling agrees with
/// the one at r·offset (a fundamental domain of the period subgroup).
FiniteSubset period_representatives(const TilingSpec& spec);

/// Number of distinct patterns of x_T on F_m, over all translates of the
/// tiling, for m = 1..n.
std::vector<std::size_t> tiling_complexity(const TilingSpec& spec, int n);

/// A single-shape grid tiling by the box [0,size_1) x ... anchored at offset.
TilingSpec box_tiling(GroupKind group, std::span<const Coord> size, GroupElement offset);
TilingSpec box_tiling(GroupKind group, std::initializer_list<Coord> size);

}  // namespace symext
