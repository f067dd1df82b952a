#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "symext/group.hpp"

namespace support {

using symext::Coord;
using symext::FiniteSubset;
using symext::GroupElement;
using symext::GroupKind;

inline GroupElement z(Coord a) { return GroupElement(GroupKind::Z, {a}); }
inline GroupElement z2(Coord a, Coord b) { return GroupElement(GroupKind::Z2, {a, b}); }
inline GroupElement h3(Coord a, Coord b, Coord c) { return GroupElement(GroupKind::H3, {a, b, c}); }

inline FiniteSubset zset(std::initializer_list<Coord> v) {
    std::vector<GroupElement> e;
    for (auto a : v) e.push_back(z(a));
    return FiniteSubset(GroupKind::Z, e);
}

inline FiniteSubset interval(Coord lo, Coord len) {
    std::vector<GroupElement> e;
    for (Coord a = lo; a < lo + len; ++a) e.push_back(z(a));
    return FiniteSubset(GroupKind::Z, e);
}

inline FiniteSubset box(GroupKind kind, std::vector<Coord> size, std::vector<Coord> lo = {}) {
    lo.resize(size.size(), 0);
    return symext::coordinate_box(kind, lo, size);
}

inline GroupElement random_element(GroupKind kind, std::mt19937_64& rng, Coord r) {
    std::uniform_int_distribution<Coord> c(-r, r);
    std::vector<Coord> v;
    for (int i = 0; i < symext::dimension(kind); ++i) v.push_back(c(rng));
    return GroupElement(kind, std::span<const Coord>(v));
}

inline FiniteSubset random_subset(GroupKind kind, std::mt19937_64& rng, std::size_t n, Coord r) {
    std::vector<GroupElement> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(random_element(kind, rng, r));
    return FiniteSubset(kind, e);
}

}  // namespace support
