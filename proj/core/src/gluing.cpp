#include "symext/gluing.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace symext {

std::optional<Pattern> glue(const ShiftSpaceSpec& spec, const Pattern& fixed, const FiniteSubset& free_sites,
                            const AdmissibilityConfig& cfg) {
    const auto domain = set_union(fixed.domain, free_sites);
    if (domain.empty()) return Pattern(domain, {});
    PatternSpace space(spec, domain, cfg);
    std::vector<std::optional<Symbol>> pinned(domain.size());
    for (std::size_t i = 0; i < fixed.values.size(); ++i) pinned[*domain.index_of(fixed.domain[i])] = fixed.values[i];
    auto vals = space.complete(pinned);
    if (!vals) return std::nullopt;
    return Pattern(domain, std::move(*vals));
}

bool can_glue(const ShiftSpaceSpec& spec, const FiniteSubset& t1, const Pattern& a, const FiniteSubset& t2,
              const Pattern& b, const AdmissibilityConfig& cfg) {
    if (a.domain != t1 || b.domain != t2) throw Error("can_glue: pattern domains must equal T1 and T2");
    if (!set_intersection(t1, t2).empty()) throw Error("can_glue: T1 and T2 overlap");
    return glue(spec, merge(a, b), FiniteSubset(t1.kind()), cfg).has_value();
}

bool can_glue(const ShiftSpaceSpec& spec, const Pattern& a, const Pattern& b, const AdmissibilityConfig& cfg) {
    return can_glue(spec, a.domain, a, b.domain, b, cfg);
}

bool separated(const FiniteSubset& t1, const FiniteSubset& t2, const FiniteSubset& d) {
    return set_intersection(t2, set_product(d, t1)).empty() && set_intersection(t1, set_product(d, t2)).empty();
}

std::string_view to_string(GluingVerdict v) {
    switch (v) {
    case GluingVerdict::pass: return "pass";
    case GluingVerdict::fail: return "fail";
    case GluingVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

struct SitePair {
    std::vector<std::size_t> first;   // positions in W
    std::vector<std::size_t> second;

    std::size_t size() const { return first.size() + second.size(); }
};

std::vector<SitePair> separated_pairs(const FiniteSubset& w, const FiniteSubset& d, std::size_t max_size) {
    if (w.size() > 20) throw Error("gluing window too large for exhaustive pair enumeration (max 20 sites)");
    std::vector<SitePair> out;
    SitePair cur;
    auto subset = [&](const std::vector<std::size_t>& pos) {
        std::vector<GroupElement> e;
        for (auto p : pos) e.push_back(w[p]);
        return FiniteSubset(w.kind(), std::move(e));
    };
    // each site goes to T1, T2 or neither
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (cur.size() > max_size) return;
        if (i == w.size()) {
            if (!cur.first.empty() && !cur.second.empty() && separated(subset(cur.first), subset(cur.second), d))
                out.push_back(cur);
            return;
        }
        self(self, i + 1);
        cur.first.push_back(i);
        self(self, i + 1);
        cur.first.pop_back();
        cur.second.push_back(i);
        self(self, i + 1);
        cur.second.pop_back();
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), [](const SitePair& x, const SitePair& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
    });
    return out;
}

// First (A, B) in ranking order that cannot be glued, if any.
std::optional<GluingWitness> find_failure(const ShiftSpaceSpec& spec, const FiniteSubset& t1, const FiniteSubset& t2,
                                          const AdmissibilityConfig& cfg) {
    const auto both = set_union(t1, t2);
    PatternSpace s1(spec, t1, cfg), s2(spec, t2, cfg), joint(spec, both, cfg);
    std::vector<std::size_t> pos1, pos2;
    for (const auto& g : t1) pos1.push_back(*both.index_of(g));
    for (const auto& g : t2) pos2.push_back(*both.index_of(g));

    std::vector<std::vector<Symbol>> as, bs;
    s1.for_each([&](std::span<const Symbol> v) {
        as.emplace_back(v.begin(), v.end());
        return true;
    });
    s2.for_each([&](std::span<const Symbol> v) {
        bs.emplace_back(v.begin(), v.end());
        return true;
    });
    std::vector<std::optional<Symbol>> fixed(both.size());
    for (const auto& a : as) {
        for (std::size_t i = 0; i < a.size(); ++i) fixed[pos1[i]] = a[i];
        for (const auto& b : bs) {
            for (std::size_t i = 0; i < b.size(); ++i) fixed[pos2[i]] = b[i];
            if (!joint.complete(fixed)) return GluingWitness{Pattern(t1, a), Pattern(t2, b)};
        }
    }
    return std::nullopt;
}

}  // namespace

GluingReport check_gluing_property(const ShiftSpaceSpec& spec, const FiniteSubset& d, const FiniteSubset& w,
                                   const GluingBudget& budget, const AdmissibilityConfig& cfg, unsigned jobs) {
    if (!d.contains(GroupElement::identity(d.kind()))) throw Error("gluing distance must contain the identity");
    if (d.kind() != spec.group || w.kind() != spec.group) throw Error("gluing check: group mismatch");

    const auto pairs = separated_pairs(w, d, budget.max_size);
    GluingReport report{GluingVerdict::pass, std::nullopt, w, budget.max_size, pairs.size(), 0, cfg.mode};
    std::size_t limit = pairs.size();
    if (budget.max_pairs != 0 && budget.max_pairs < limit) limit = budget.max_pairs;

    auto subset = [&](const std::vector<std::size_t>& pos) {
        std::vector<GroupElement> e;
        for (auto p : pos) e.push_back(w[p]);
        return FiniteSubset(w.kind(), std::move(e));
    };
    auto fails = [&](std::size_t idx) {
        return find_failure(spec, subset(pairs[idx].first), subset(pairs[idx].second), cfg).has_value();
    };

    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> first_fail{none};
    if (jobs <= 1) {
        for (std::size_t i = 0; i < limit; ++i)
            if (fails(i)) {
                first_fail = i;
                break;
            }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < jobs; ++t)
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= limit || i > first_fail.load()) return;
                    if (fails(i)) {
                        std::size_t cur = first_fail.load();
                        while (i < cur && !first_fail.compare_exchange_weak(cur, i)) {}
                    }
                }
            });
        for (auto& th : workers) th.join();
    }

    if (first_fail != none) {
        const auto i = first_fail.load();
        report.verdict = GluingVerdict::fail;
        report.witness = find_failure(spec, subset(pairs[i].first), subset(pairs[i].second), cfg);
        report.pairs_examined = i + 1;
    } else {
        report.pairs_examined = limit;
        if (limit < pairs.size()) report.verdict = GluingVerdict::inconclusive;
    }
    return report;
}

}  // namespace symext
