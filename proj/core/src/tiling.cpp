#include "symext/tiling.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace symext {

ShapeFamily::ShapeFamily(GroupKind group, std::vector<FiniteSubset> shapes) : group_(group), shapes_(std::move(shapes)) {
    if (shapes_.empty()) throw Error("shape family must contain at least one shape");
    const auto e = GroupElement::identity(group_);
    for (std::size_t j = 0; j < shapes_.size(); ++j) {
        const auto& s = shapes_[j];
        if (s.kind() != group_) throw Error("shape " + std::to_string(j) + " lives in the wrong group");
        if (s.empty() || s.min() != e)
            throw Error("shape " + std::to_string(j) + " must be canonical (minimal element at the identity)");
        for (std::size_t i = 0; i < j; ++i)
            if (shapes_[i] == s) throw Error("shapes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
}

namespace {

Coord floor_div(Coord a, Coord b) {
    Coord q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Box dimensions of a grid shape; throws if the shape is not [0,a_1)x...
std::array<Coord, 3> box_dims(const FiniteSubset& shape) {
    const int d = dimension(shape.kind());
    std::array<Coord, 3> dims{1, 1, 1};
    for (const auto& g : shape)
        for (int i = 0; i < d; ++i) dims[i] = std::max(dims[i], g[i] + 1);
    std::array<Coord, 3> lo{};
    const auto box = coordinate_box(shape.kind(), std::span<const Coord>(lo.data(), d),
                                    std::span<const Coord>(dims.data(), d));
    if (box != shape) throw Error("grid placement needs a coordinate-box shape [0,a_1) x ...");
    return dims;
}

Coord interval_length(const FiniteSubset& shape) {
    const Coord len = shape.max()[0] + 1;
    if (static_cast<Coord>(shape.size()) != len) throw Error("cycle placement needs interval shapes {0..L-1}");
    return len;
}

}  // namespace

TilingSpec::TilingSpec(ShapeFamily fam, Placement p, GroupElement off, std::vector<std::size_t> seq)
    : family(std::move(fam)), placement(p), sequence(std::move(seq)), offset(off) {
    if (offset.kind() != family.group()) throw Error("tiling offset lives in the wrong group");
    if (placement == Placement::grid) {
        if (family.size() != 1) throw Error("grid placement uses exactly one shape");
        grid_dims = box_dims(family[0]);
        sequence.clear();
    } else {
        if (family.group() != GroupKind::Z) throw Error("cycle placement is only defined on Z");
        for (const auto& s : family.shapes()) interval_length(s);
        if (sequence.empty()) {
            sequence.resize(family.size());
            std::iota(sequence.begin(), sequence.end(), std::size_t{0});
        }
        cycle_prefix = {0};
        for (auto j : sequence) {
            if (j >= family.size()) throw Error("cycle sequence refers to a missing shape");
            cycle_prefix.push_back(cycle_prefix.back() + interval_length(family[j]));
        }
    }
}

TileInstance tile_containing(const TilingSpec& spec, const GroupElement& g) {
    const GroupKind kind = spec.group();
    if (g.kind() != kind) throw Error("site and tiling live in different groups");
    const GroupElement v = multiply(g, inverse(spec.offset));
    std::array<Coord, 3> lambda{};
    const int d = dimension(kind);
    TileInstance tile;
    if (spec.placement == Placement::grid) {
        const auto& dims = spec.grid_dims;
        // v = s·λ with s in the box and λ in the anchor lattice
        std::array<Coord, 3> s{};
        for (int i = 0; i < std::min(d, 2); ++i) {
            lambda[i] = floor_div(v[i], dims[i]) * dims[i];
            s[i] = v[i] - lambda[i];
        }
        if (d == 3) {
            Coord third = v[2];
            if (kind == GroupKind::H3) third -= s[0] * lambda[1];
            lambda[2] = floor_div(third, dims[2]) * dims[2];
        }
        tile.shape_index = 0;
    } else {
        const auto& prefix = spec.cycle_prefix;
        const Coord period = prefix.back();
        const Coord m = floor_div(v[0], period);
        const Coord r = v[0] - m * period;
        const auto pos = static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), r) - prefix.begin() - 1);
        tile.shape_index = spec.sequence[pos];
        lambda[0] = m * period + prefix[pos];
    }
    tile.anchor = multiply(GroupElement(kind, std::span<const Coord>(lambda.data(), d)), spec.offset);
    return tile;
}

std::vector<TileInstance> tiles_in_window(const TilingSpec& spec, const FiniteSubset& w) {
    if (w.kind() != spec.group()) throw Error("window and tiling live in different groups");
    std::map<std::pair<GroupElement, std::size_t>, TileInstance> found;
    for (const auto& g : w) {
        auto t = tile_containing(spec, g);
        if (!t.points(spec.family).contains(g)) throw Error("tiling leaves site " + g.str() + " uncovered");
        found.emplace(std::make_pair(t.anchor, t.shape_index), t);
    }
    std::unordered_map<GroupElement, const TileInstance*, GroupElementHash> owner;
    std::vector<TileInstance> out;
    for (auto& [key, t] : found) {
        const auto pts = t.points(spec.family);
        for (const auto& p : pts) {
            if (!w.contains(p)) continue;
            auto [it, fresh] = owner.emplace(p, &t);
            if (!fresh) throw Error("tiles anchored at " + it->second->anchor.str() + " and " + t.anchor.str() +
                                    " overlap at site " + p.str());
        }
        t.contained = pts.is_subset_of(w);
        out.push_back(t);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.anchor < b.anchor; });
    return out;
}

Pattern encode_tiling_point(const TilingSpec& spec, const FiniteSubset& w) {
    std::vector<Symbol> vals;
    vals.reserve(w.size());
    for (const auto& g : w) {
        const auto t = tile_containing(spec, g);
        vals.push_back(t.anchor == g ? static_cast<Symbol>(t.shape_index + 1) : Symbol{0});
    }
    return Pattern(w, std::move(vals));
}

std::vector<TileInstance> decode_tiling_point(const ShapeFamily& family, const Pattern& x) {
    std::vector<TileInstance> out;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        if (x.values[i] == 0) continue;
        if (x.values[i] > family.size()) throw Error("tiling point uses an unknown shape index");
        out.push_back({static_cast<std::size_t>(x.values[i] - 1), x.domain[i], false});
    }
    return out;
}

TilingSpec shift_tiling(const TilingSpec& spec, const GroupElement& g) {
    TilingSpec out = spec;
    out.offset = multiply(spec.offset, inverse(g));
    return out;
}

std::vector<Ratio> shape_invariance_report(const ShapeFamily& family, const FiniteSubset& k) {
    std::vector<Ratio> out;
    for (const auto& s : family.shapes()) out.push_back(invariance_ratio(s, k));
    return out;
}

FiniteSubset period_representatives(const TilingSpec& spec) {
    const GroupKind kind = spec.group();
    const int d = dimension(kind);
    std::array<Coord, 3> lo{};
    std::array<Coord, 3> dims{1, 1, 1};
    if (spec.placement == Placement::grid) {
        dims = spec.grid_dims;
        // in H3 the lattice aZ x bZ x cZ is only a subgroup when c | ab;
        // widening the middle period to b·c/gcd(c,ab) always gives one that
        // preserves the anchor set
        if (kind == GroupKind::H3) dims[1] = dims[1] * dims[2] / std::gcd(dims[2], dims[0] * dims[1]);
    } else {
        dims[0] = spec.cycle_prefix.back();
    }
    return coordinate_box(kind, std::span<const Coord>(lo.data(), d), std::span<const Coord>(dims.data(), d));
}

std::vector<std::size_t> tiling_complexity(const TilingSpec& spec, int n) {
    if (n <= 0) throw Error("tiling_complexity: n must be positive");
    const auto reps = period_representatives(spec);
    std::vector<std::size_t> counts;
    for (int m = 1; m <= n; ++m) {
        const auto f = folner_set(spec.group(), m);
        std::set<std::vector<Symbol>> seen;
        for (const auto& r : reps) {
            const auto h = multiply(r, spec.offset);
            std::vector<Symbol> vals;
            vals.reserve(f.size());
            for (const auto& site : f) {
                const auto g = multiply(site, h);
                const auto t = tile_containing(spec, g);
                vals.push_back(t.anchor == g ? static_cast<Symbol>(t.shape_index + 1) : Symbol{0});
            }
            seen.insert(std::move(vals));
        }
        counts.push_back(seen.size());
    }
    return counts;
}

TilingSpec box_tiling(GroupKind group, std::span<const Coord> size, GroupElement offset) {
    std::array<Coord, 3> lo{};
    auto shape = coordinate_box(group, std::span<const Coord>(lo.data(), size.size()), size);
    return TilingSpec(ShapeFamily(group, {std::move(shape)}), Placement::grid, offset);
}

TilingSpec box_tiling(GroupKind group, std::initializer_list<Coord> size) {
    return box_tiling(group, std::span<const Coord>(size.begin(), size.size()), GroupElement::identity(group));
}

}  // namespace symext
