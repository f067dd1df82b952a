#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace symext {

/// Raised for any contract violation in the library (mismatched groups,
/// empty sets where a nonempty one is required, malformed input, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The closed list of supported groups. Each has a hand-written normal form:
///   Z   integers
///   Z2  pairs, componentwise addition
///   Z3  triples, componentwise addition
///   H3  discrete Heisenberg group, (a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a·b')
enum class GroupKind : std::uint8_t { Z, Z2, Z3, H3 };

std::string_view to_string(GroupKind kind);
GroupKind parse_group_kind(std::string_view name);
int dimension(GroupKind kind);

using Coord = std::int64_t;

/// An element in normal form. Unused trailing coordinates are always zero, so
/// equality of elements is equality of the coordinate tuples.
class GroupElement {
public:
    GroupElement() = default;
    GroupElement(GroupKind kind, std::span<const Coord> coords);
    GroupElement(GroupKind kind, std::initializer_list<Coord> coords)
        : GroupElement(kind, std::span<const Coord>(coords.begin(), coords.size())) {}

    static GroupElement identity(GroupKind kind) { return GroupElement(kind, std::span<const Coord>{}); }

    GroupKind kind() const { return kind_; }
    int dim() const { return dimension(kind_); }
    Coord operator[](std::size_t i) const { return coords_[i]; }
    std::span<const Coord> coords() const { return {coords_.data(), static_cast<std::size_t>(dim())}; }
    bool is_identity() const { return coords_ == std::array<Coord, 3>{}; }

    // Lexicographic on coordinates; the kind is compared first only so that
    // the ordering stays total, mixed kinds never meet in a valid set.
    auto operator<=>(const GroupElement&) const = default;
    bool operator==(const GroupElement&) const = default;

    std::string str() const;

private:
    GroupKind kind_ = GroupKind::Z;
    std::array<Coord, 3> coords_{};
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept;
};

GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

/// A finite set of elements of one group, kept sorted and duplicate-free.
/// Iteration follows the group's total order.
class FiniteSubset {
public:
    explicit FiniteSubset(GroupKind kind) : kind_(kind) {}
    FiniteSubset(GroupKind kind, std::vector<GroupElement> elements);

    GroupKind kind() const { return kind_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    const std::vector<GroupElement>& elements() const { return elems_; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }
    const GroupElement& operator[](std::size_t i) const { return elems_[i]; }
    const GroupElement& min() const;
    const GroupElement& max() const;

    bool contains(const GroupElement& g) const;
    /// Position of g in the sorted order, if present.
    std::optional<std::size_t> index_of(const GroupElement& g) const;
    bool is_subset_of(const FiniteSubset& other) const;

    bool operator==(const FiniteSubset&) const = default;

private:
    GroupKind kind_;
    std::vector<GroupElement> elems_;
};

FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset symmetric_difference(const FiniteSubset& a, const FiniteSubset& b);

/// Left product set DT = {d·t : d ∈ D, t ∈ T}.
FiniteSubset set_product(const FiniteSubset& d, const FiniteSubset& t);
/// Right translate Tg = {t·g : t ∈ T}.
FiniteSubset right_translate(const FiniteSubset& t, const GroupElement& g);
/// Left translate gT = {g·t : t ∈ T}.
FiniteSubset left_translate(const GroupElement& g, const FiniteSubset& t);

/// Coordinate box [lo_i, lo_i + size_i) in normal-form coordinates.
FiniteSubset coordinate_box(GroupKind kind, std::span<const Coord> lo, std::span<const Coord> size);

/// Canonical Følner set: [0,n) for Z, [0,n)^d for Z^d, [0,n)x[0,n)x[0,n^2) for H3.
FiniteSubset folner_set(GroupKind kind, int n);

using Ratio = boost::rational<std::int64_t>;

/// |DT △ T| / |T|, exactly.
Ratio invariance_ratio(const FiniteSubset& t, const FiniteSubset& d);
/// Strict test |DT △ T| / |T| < delta.
bool is_invariant(const FiniteSubset& t, const FiniteSubset& d, Ratio delta);

/// D-core T_D = {t ∈ T : Dt ⊂ T}.
FiniteSubset core(const FiniteSubset& t, const FiniteSubset& d);

struct ConeTranslation {
    FiniteSubset translated;   // D·g, all coordinates non-negative
    GroupElement translation;  // g
};

/// Right-translates D so every coordinate is non-negative, which puts it
/// inside F_n for large n. Blocks are only used up to translation, so the
/// constructions are unaffected.
ConeTranslation to_positive_cone(const FiniteSubset& d);

/// Smallest n with D ⊆ F_n, after the positive-cone translation.
int smallest_folner_index_containing(const FiniteSubset& d);

}  // namespace symext
