#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "symext/bigint.hpp"

namespace symext {

using Symbol = std::uint8_t;

/// A forbidden tuple: the assignment `values` on positions `sites` (ascending)
/// is not allowed.
struct Ban {
    std::vector<std::uint32_t> sites;
    std::vector<Symbol> values;
};

/// Finite constraint problem over positions 0..n-1 with a common alphabet
/// {0..l-1} and a list of bans. Positions are visited in index order, which
/// is the ranking order of patterns.
///
/// Counting uses a frontier dynamic program: after position i only the
/// positions below i that still occur in a ban reaching i or beyond can
/// influence the future, so partial assignments are merged by their values
/// on that frontier.
class ConstraintSystem {
public:
    using Fixed = std::span<const std::optional<Symbol>>;
    /// Receives a complete assignment; return false to stop the enumeration.
    using Visitor = std::function<bool(std::span<const Symbol>)>;
    /// Extra acceptance test on complete assignments.
    using LeafCheck = std::function<bool(std::span<const Symbol>)>;
    /// Optional reordering of candidate values for one position.
    using ValueOrder = std::function<void(std::size_t position, std::vector<Symbol>& values)>;

    ConstraintSystem(std::size_t num_sites, int alphabet_size, std::vector<Ban> bans);

    std::size_t num_sites() const { return n_; }
    int alphabet_size() const { return l_; }
    const std::vector<Ban>& bans() const { return bans_; }

    bool admits(std::span<const Symbol> assignment) const;

    /// Number of assignments violating no ban.
    BigInt count() const;

    /// Enumerates admissible assignments consistent with `fixed` in
    /// lexicographic order (or the order given by `order`). Returns false
    /// if the visitor stopped early.
    bool for_each_solution(Fixed fixed, const Visitor& visit, const LeafCheck& leaf = {},
                           const ValueOrder& order = {}) const;

    std::optional<std::vector<Symbol>> solve(Fixed fixed, const LeafCheck& leaf = {},
                                             const ValueOrder& order = {}) const;

    /// Rank of an admissible assignment among all admissible assignments in
    /// lexicographic order; nullopt if it violates a ban.
    std::optional<BigInt> rank(std::span<const Symbol> assignment) const;
    /// Inverse of rank; requires 0 <= r < count().
    std::vector<Symbol> unrank(BigInt r) const;

private:
    using Key = std::vector<Symbol>;

    struct Step {
        std::vector<std::uint32_t> frontier;      // sorted positions < i still needed
        std::vector<std::size_t> closing_bans;   // bans whose last position is i
        std::vector<std::vector<std::int32_t>> ban_slots;  // per closing ban: slot in (frontier ++ [i]) per site
        std::vector<std::int32_t> next_slots;    // frontier_{i+1} as slots in (frontier ++ [i])
    };

    bool step_ok(std::size_t i, const Key& key, Symbol v) const;
    Key next_key(std::size_t i, const Key& key, Symbol v) const;
    const BigInt& completions(std::size_t i, const Key& key) const;

    std::size_t n_;
    int l_;
    std::vector<Ban> bans_;
    std::vector<Step> steps_;

    struct Memo {
        std::mutex mutex;
        std::vector<std::map<Key, BigInt>> table;
    };
    std::shared_ptr<Memo> memo_;
};

}  // namespace symext
