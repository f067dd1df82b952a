#include "symext/constraints.hpp"

#include <algorithm>
#include <numeric>

#include "symext/group.hpp"

namespace symext {

ConstraintSystem::ConstraintSystem(std::size_t num_sites, int alphabet_size, std::vector<Ban> bans)
    : n_(num_sites), l_(alphabet_size), bans_(std::move(bans)), memo_(std::make_shared<Memo>()) {
    if (l_ < 1 || l_ > 256) throw Error("alphabet size must be in [1, 256]");
    for (auto& b : bans_) {
        if (b.sites.empty() || b.sites.size() != b.values.size()) throw Error("malformed ban");
        std::vector<std::size_t> idx(b.sites.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return b.sites[x] < b.sites[y]; });
        Ban sorted;
        for (auto k : idx) {
            if (b.sites[k] >= n_) throw Error("ban refers to a position outside the domain");
            sorted.sites.push_back(b.sites[k]);
            sorted.values.push_back(b.values[k]);
        }
        if (std::adjacent_find(sorted.sites.begin(), sorted.sites.end()) != sorted.sites.end())
            throw Error("ban lists a position twice");
        b = std::move(sorted);
    }

    std::vector<std::int64_t> reach(n_, -1);
    for (const auto& b : bans_)
        for (auto s : b.sites) reach[s] = std::max<std::int64_t>(reach[s], b.sites.back());

    steps_.resize(n_);
    std::vector<std::uint32_t> frontier;
    for (std::size_t i = 0; i < n_; ++i) {
        Step& st = steps_[i];
        st.frontier = frontier;
        auto slot_of = [&](std::uint32_t s) -> std::int32_t {
            if (s == i) return static_cast<std::int32_t>(st.frontier.size());
            auto it = std::lower_bound(st.frontier.begin(), st.frontier.end(), s);
            return static_cast<std::int32_t>(it - st.frontier.begin());
        };
        for (std::size_t b = 0; b < bans_.size(); ++b) {
            if (bans_[b].sites.back() != i) continue;
            st.closing_bans.push_back(b);
            std::vector<std::int32_t> slots;
            for (auto s : bans_[b].sites) slots.push_back(slot_of(s));
            st.ban_slots.push_back(std::move(slots));
        }
        std::vector<std::uint32_t> next;
        for (auto s : frontier)
            if (reach[s] >= static_cast<std::int64_t>(i + 1)) next.push_back(s);
        if (reach[i] >= static_cast<std::int64_t>(i + 1)) next.push_back(static_cast<std::uint32_t>(i));
        for (auto s : next) st.next_slots.push_back(slot_of(s));
        frontier = std::move(next);
    }
    memo_->table.resize(n_ + 1);
}

bool ConstraintSystem::admits(std::span<const Symbol> a) const {
    if (a.size() != n_) return false;
    for (auto v : a)
        if (v >= l_) return false;
    for (const auto& b : bans_) {
        bool hit = true;
        for (std::size_t j = 0; j < b.sites.size() && hit; ++j) hit = a[b.sites[j]] == b.values[j];
        if (hit) return false;
    }
    return true;
}

bool ConstraintSystem::step_ok(std::size_t i, const Key& key, Symbol v) const {
    const Step& st = steps_[i];
    for (std::size_t c = 0; c < st.closing_bans.size(); ++c) {
        const Ban& b = bans_[st.closing_bans[c]];
        const auto& slots = st.ban_slots[c];
        bool hit = true;
        for (std::size_t j = 0; j < slots.size() && hit; ++j) {
            const Symbol val = slots[j] == static_cast<std::int32_t>(key.size()) ? v : key[slots[j]];
            hit = val == b.values[j];
        }
        if (hit) return false;
    }
    return true;
}

ConstraintSystem::Key ConstraintSystem::next_key(std::size_t i, const Key& key, Symbol v) const {
    const Step& st = steps_[i];
    Key out;
    out.reserve(st.next_slots.size());
    for (auto slot : st.next_slots) out.push_back(slot == static_cast<std::int32_t>(key.size()) ? v : key[slot]);
    return out;
}

BigInt ConstraintSystem::count() const {
    std::map<Key, BigInt> cur;
    cur.emplace(Key{}, BigInt(1));
    for (std::size_t i = 0; i < n_; ++i) {
        std::map<Key, BigInt> next;
        for (const auto& [key, c] : cur)
            for (int v = 0; v < l_; ++v) {
                const auto s = static_cast<Symbol>(v);
                if (step_ok(i, key, s)) next[next_key(i, key, s)] += c;
            }
        cur = std::move(next);
    }
    BigInt total = 0;
    for (const auto& [key, c] : cur) total += c;
    return total;
}

const BigInt& ConstraintSystem::completions(std::size_t i, const Key& key) const {
    auto& level = memo_->table[i];
    if (auto it = level.find(key); it != level.end()) return it->second;
    BigInt total = 0;
    if (i == n_) {
        total = 1;
    } else {
        for (int v = 0; v < l_; ++v) {
            const auto s = static_cast<Symbol>(v);
            if (step_ok(i, key, s)) total += completions(i + 1, next_key(i, key, s));
        }
    }
    return level.emplace(key, std::move(total)).first->second;
}

std::optional<BigInt> ConstraintSystem::rank(std::span<const Symbol> a) const {
    if (a.size() != n_) return std::nullopt;
    std::lock_guard lock(memo_->mutex);
    BigInt r = 0;
    Key key;
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] >= l_) return std::nullopt;
        for (int v = 0; v < a[i]; ++v) {
            const auto s = static_cast<Symbol>(v);
            if (step_ok(i, key, s)) r += completions(i + 1, next_key(i, key, s));
        }
        if (!step_ok(i, key, a[i])) return std::nullopt;
        key = next_key(i, key, a[i]);
    }
    return r;
}

std::vector<Symbol> ConstraintSystem::unrank(BigInt r) const {
    std::lock_guard lock(memo_->mutex);
    if (r < 0 || r >= completions(0, Key{})) throw Error("unrank: rank out of range");
    std::vector<Symbol> out;
    out.reserve(n_);
    Key key;
    for (std::size_t i = 0; i < n_; ++i) {
        for (int v = 0; v < l_; ++v) {
            const auto s = static_cast<Symbol>(v);
            if (!step_ok(i, key, s)) continue;
            auto nk = next_key(i, key, s);
            const BigInt& c = completions(i + 1, nk);
            if (r < c) {
                out.push_back(s);
                key = std::move(nk);
                break;
            }
            r -= c;
        }
    }
    return out;
}

bool ConstraintSystem::for_each_solution(Fixed fixed, const Visitor& visit, const LeafCheck& leaf,
                                         const ValueOrder& order) const {
    if (!fixed.empty() && fixed.size() != n_) throw Error("fixed assignment has the wrong length");
    auto is_fixed = [&](std::size_t s) { return !fixed.empty() && fixed[s].has_value(); };

    // each ban is tested once its last free position is assigned
    std::vector<std::vector<std::size_t>> trigger(n_);
    std::vector<Symbol> a(n_, 0);
    for (std::size_t s = 0; s < n_; ++s)
        if (is_fixed(s)) {
            if (*fixed[s] >= l_) return true;
            a[s] = *fixed[s];
        }
    for (std::size_t b = 0; b < bans_.size(); ++b) {
        std::int64_t t = -1;
        for (auto s : bans_[b].sites)
            if (!is_fixed(s)) t = std::max<std::int64_t>(t, s);
        if (t >= 0) {
            trigger[static_cast<std::size_t>(t)].push_back(b);
            continue;
        }
        bool hit = true;
        for (std::size_t j = 0; j < bans_[b].sites.size() && hit; ++j)
            hit = a[bans_[b].sites[j]] == bans_[b].values[j];
        if (hit) return true;  // fixed values already violate a ban
    }

    std::vector<std::size_t> free_sites;
    for (std::size_t s = 0; s < n_; ++s)
        if (!is_fixed(s)) free_sites.push_back(s);

    auto violated = [&](std::size_t pos) {
        for (auto b : trigger[pos]) {
            const Ban& ban = bans_[b];
            bool hit = true;
            for (std::size_t j = 0; j < ban.sites.size() && hit; ++j) hit = a[ban.sites[j]] == ban.values[j];
            if (hit) return true;
        }
        return false;
    };

    std::vector<Symbol> base(static_cast<std::size_t>(l_));
    std::iota(base.begin(), base.end(), Symbol{0});

    bool keep_going = true;
    std::function<void(std::size_t)> dfs = [&](std::size_t depth) {
        if (!keep_going) return;
        if (depth == free_sites.size()) {
            if (leaf && !leaf(a)) return;
            keep_going = visit(a);
            return;
        }
        const std::size_t pos = free_sites[depth];
        std::vector<Symbol> values = base;
        if (order) order(pos, values);
        for (Symbol v : values) {
            a[pos] = v;
            if (!violated(pos)) dfs(depth + 1);
            if (!keep_going) return;
        }
    };
    dfs(0);
    return keep_going;
}

std::optional<std::vector<Symbol>> ConstraintSystem::solve(Fixed fixed, const LeafCheck& leaf,
                                                           const ValueOrder& order) const {
    std::optional<std::vector<Symbol>> found;
    for_each_solution(
        fixed,
        [&](std::span<const Symbol> a) {
            found.emplace(a.begin(), a.end());
            return false;
        },
        leaf, order);
    return found;
}

}  // namespace symext
