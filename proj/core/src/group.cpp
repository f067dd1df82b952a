#include "symext/group.hpp"

#include <algorithm>
#include <limits>

namespace symext {

std::string_view to_string(GroupKind kind) {
    switch (kind) {
    case GroupKind::Z: return "Z";
    case GroupKind::Z2: return "Z2";
    case GroupKind::Z3: return "Z3";
    case GroupKind::H3: return "H3";
    }
    return "?";
}

GroupKind parse_group_kind(std::string_view name) {
    if (name == "Z") return GroupKind::Z;
    if (name == "Z2") return GroupKind::Z2;
    if (name == "Z3") return GroupKind::Z3;
    if (name == "H3" || name == "Heisenberg3") return GroupKind::H3;
    throw Error("unknown group '" + std::string(name) + "' (expected Z, Z2, Z3 or H3)");
}

int dimension(GroupKind kind) {
    switch (kind) {
    case GroupKind::Z: return 1;
    case GroupKind::Z2: return 2;
    case GroupKind::Z3:
    case GroupKind::H3: return 3;
    }
    return 0;
}

GroupElement::GroupElement(GroupKind kind, std::span<const Coord> coords) : kind_(kind) {
    if (!coords.empty() && static_cast<int>(coords.size()) != dimension(kind))
        throw Error("group " + std::string(to_string(kind)) + " expects " + std::to_string(dimension(kind)) +
                    " coordinates, got " + std::to_string(coords.size()));
    std::copy(coords.begin(), coords.end(), coords_.begin());
}

std::string GroupElement::str() const {
    std::string out = "(";
    for (int i = 0; i < dim(); ++i) {
        if (i) out += ",";
        out += std::to_string(coords_[i]);
    }
    return out + ")";
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
    std::size_t h = static_cast<std::size_t>(g.kind());
    for (Coord c : g.coords()) h = h * 1000003u ^ std::hash<Coord>{}(c);
    return h;
}

namespace {

void require_same(GroupKind a, GroupKind b) {
    if (a != b)
        throw Error("group mismatch: " + std::string(to_string(a)) + " vs " + std::string(to_string(b)));
}

}  // namespace

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    require_same(g.kind(), h.kind());
    std::array<Coord, 3> r{};
    for (int i = 0; i < g.dim(); ++i) r[i] = g[i] + h[i];
    if (g.kind() == GroupKind::H3) r[2] += g[0] * h[1];
    return GroupElement(g.kind(), std::span<const Coord>(r.data(), g.dim()));
}

GroupElement inverse(const GroupElement& g) {
    std::array<Coord, 3> r{};
    for (int i = 0; i < g.dim(); ++i) r[i] = -g[i];
    if (g.kind() == GroupKind::H3) r[2] = -g[2] + g[0] * g[1];
    return GroupElement(g.kind(), std::span<const Coord>(r.data(), g.dim()));
}

FiniteSubset::FiniteSubset(GroupKind kind, std::vector<GroupElement> elements)
    : kind_(kind), elems_(std::move(elements)) {
    for (const auto& e : elems_) require_same(kind_, e.kind());
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

const GroupElement& FiniteSubset::min() const {
    if (elems_.empty()) throw Error("min() of empty set");
    return elems_.front();
}

const GroupElement& FiniteSubset::max() const {
    if (elems_.empty()) throw Error("max() of empty set");
    return elems_.back();
}

bool FiniteSubset::contains(const GroupElement& g) const {
    return std::binary_search(elems_.begin(), elems_.end(), g);
}

std::optional<std::size_t> FiniteSubset::index_of(const GroupElement& g) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), g);
    if (it == elems_.end() || *it != g) return std::nullopt;
    return static_cast<std::size_t>(it - elems_.begin());
}

bool FiniteSubset::is_subset_of(const FiniteSubset& other) const {
    require_same(kind_, other.kind_);
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

namespace {

template <typename Op>
FiniteSubset merge_with(const FiniteSubset& a, const FiniteSubset& b, Op op) {
    require_same(a.kind(), b.kind());
    std::vector<GroupElement> out;
    op(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return FiniteSubset(a.kind(), std::move(out));
}

}  // namespace

FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
    return merge_with(a, b, [](auto... args) { return std::set_union(args...); });
}

FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b) {
    return merge_with(a, b, [](auto... args) { return std::set_intersection(args...); });
}

FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b) {
    return merge_with(a, b, [](auto... args) { return std::set_difference(args...); });
}

FiniteSubset symmetric_difference(const FiniteSubset& a, const FiniteSubset& b) {
    return merge_with(a, b, [](auto... args) { return std::set_symmetric_difference(args...); });
}

FiniteSubset set_product(const FiniteSubset& d, const FiniteSubset& t) {
    require_same(d.kind(), t.kind());
    std::vector<GroupElement> out;
    out.reserve(d.size() * t.size());
    for (const auto& x : d)
        for (const auto& y : t) out.push_back(multiply(x, y));
    return FiniteSubset(t.kind(), std::move(out));
}

FiniteSubset right_translate(const FiniteSubset& t, const GroupElement& g) {
    require_same(t.kind(), g.kind());
    std::vector<GroupElement> out;
    out.reserve(t.size());
    for (const auto& x : t) out.push_back(multiply(x, g));
    return FiniteSubset(t.kind(), std::move(out));
}

FiniteSubset left_translate(const GroupElement& g, const FiniteSubset& t) {
    require_same(t.kind(), g.kind());
    std::vector<GroupElement> out;
    out.reserve(t.size());
    for (const auto& x : t) out.push_back(multiply(g, x));
    return FiniteSubset(t.kind(), std::move(out));
}

FiniteSubset coordinate_box(GroupKind kind, std::span<const Coord> lo, std::span<const Coord> size) {
    const int d = dimension(kind);
    if (static_cast<int>(lo.size()) != d || static_cast<int>(size.size()) != d)
        throw Error("coordinate_box: wrong number of coordinates");
    std::vector<GroupElement> out;
    std::array<Coord, 3> off{};
    for (int i = 0; i < d; ++i) {
        if (size[i] <= 0) return FiniteSubset(kind);
    }
    // odometer over the box, last coordinate fastest
    for (;;) {
        std::array<Coord, 3> c{};
        for (int i = 0; i < d; ++i) c[i] = lo[i] + off[i];
        out.emplace_back(kind, std::span<const Coord>(c.data(), d));
        int i = d - 1;
        while (i >= 0 && ++off[i] == size[i]) off[i--] = 0;
        if (i < 0) break;
    }
    return FiniteSubset(kind, std::move(out));
}

FiniteSubset folner_set(GroupKind kind, int n) {
    if (n <= 0) throw Error("folner_set: n must be positive, got " + std::to_string(n));
    const Coord m = n;
    std::array<Coord, 3> lo{};
    std::array<Coord, 3> size{m, m, m};
    if (kind == GroupKind::H3) size[2] = m * m;
    const auto d = static_cast<std::size_t>(dimension(kind));
    return coordinate_box(kind, std::span<const Coord>(lo.data(), d), std::span<const Coord>(size.data(), d));
}

Ratio invariance_ratio(const FiniteSubset& t, const FiniteSubset& d) {
    if (t.empty()) throw Error("invariance_ratio: T must be nonempty");
    const auto sd = symmetric_difference(set_product(d, t), t);
    return Ratio(static_cast<std::int64_t>(sd.size()), static_cast<std::int64_t>(t.size()));
}

bool is_invariant(const FiniteSubset& t, const FiniteSubset& d, Ratio delta) {
    return invariance_ratio(t, d) < delta;
}

FiniteSubset core(const FiniteSubset& t, const FiniteSubset& d) {
    require_same(t.kind(), d.kind());
    std::vector<GroupElement> out;
    for (const auto& x : t) {
        bool inside = std::all_of(d.begin(), d.end(), [&](const GroupElement& y) { return t.contains(multiply(y, x)); });
        if (inside) out.push_back(x);
    }
    return FiniteSubset(t.kind(), std::move(out));
}

ConeTranslation to_positive_cone(const FiniteSubset& d) {
    if (d.empty()) return {d, GroupElement::identity(d.kind())};
    const int dim = dimension(d.kind());
    std::array<Coord, 3> g{};
    for (int i = 0; i < std::min(dim, 2); ++i) {
        Coord lo = std::numeric_limits<Coord>::max();
        for (const auto& x : d) lo = std::min(lo, x[i]);
        g[i] = -lo;
    }
    if (dim == 3) {
        // the H3 third coordinate of x·g picks up x[0]·g[1]
        Coord lo = std::numeric_limits<Coord>::max();
        for (const auto& x : d) {
            Coord c = x[2];
            if (d.kind() == GroupKind::H3) c += x[0] * g[1];
            lo = std::min(lo, c);
        }
        g[2] = -lo;
    }
    GroupElement shift(d.kind(), std::span<const Coord>(g.data(), dim));
    return {right_translate(d, shift), shift};
}

int smallest_folner_index_containing(const FiniteSubset& d) {
    const auto cone = to_positive_cone(d);
    for (int n = 1;; ++n) {
        if (cone.translated.is_subset_of(folner_set(d.kind(), n))) return n;
    }
}

}  // namespace symext
