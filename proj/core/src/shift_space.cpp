#include "symext/shift_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

namespace symext {

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) throw Error("alphabet must contain at least one symbol");
    if (tokens_.size() > 256) throw Error("alphabet is limited to 256 symbols");
    auto sorted = tokens_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("alphabet symbols must be distinct");
}

Alphabet Alphabet::digits(int size) {
    std::vector<std::string> t;
    for (int i = 0; i < size; ++i) t.push_back(std::to_string(i));
    return Alphabet(std::move(t));
}

Symbol Alphabet::index_of(const std::string& token) const {
    auto it = std::find(tokens_.begin(), tokens_.end(), token);
    if (it == tokens_.end()) throw Error("symbol '" + token + "' is not in the alphabet");
    return static_cast<Symbol>(it - tokens_.begin());
}

Pattern::Pattern(FiniteSubset d, std::vector<Symbol> v) : domain(std::move(d)), values(std::move(v)) {
    if (domain.size() != values.size()) throw Error("pattern: domain and value counts differ");
}

std::optional<Symbol> Pattern::at(const GroupElement& g) const {
    if (auto i = domain.index_of(g)) return values[*i];
    return std::nullopt;
}

Pattern pattern_from_pairs(GroupKind kind, std::vector<std::pair<GroupElement, Symbol>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    std::vector<GroupElement> elems;
    std::vector<Symbol> vals;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i > 0 && pairs[i].first == pairs[i - 1].first) {
            if (pairs[i].second != pairs[i - 1].second)
                throw Error("patterns disagree at " + pairs[i].first.str());
            continue;
        }
        elems.push_back(pairs[i].first);
        vals.push_back(pairs[i].second);
    }
    return Pattern(FiniteSubset(kind, std::move(elems)), std::move(vals));
}

Pattern translate(const Pattern& p, const GroupElement& g) {
    std::vector<std::pair<GroupElement, Symbol>> pairs;
    pairs.reserve(p.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i) pairs.emplace_back(multiply(p.domain[i], g), p.values[i]);
    return pattern_from_pairs(p.domain.kind(), std::move(pairs));
}

Pattern canonicalize(const Pattern& p) {
    if (p.domain.empty()) return p;
    return translate(p, inverse(p.domain.min()));
}

Pattern restrict_to(const Pattern& p, const FiniteSubset& sub) {
    std::vector<Symbol> vals;
    vals.reserve(sub.size());
    for (const auto& g : sub) {
        auto v = p.at(g);
        if (!v) throw Error("restrict_to: " + g.str() + " is outside the pattern's domain");
        vals.push_back(*v);
    }
    return Pattern(sub, std::move(vals));
}

Pattern merge(const Pattern& a, const Pattern& b) {
    std::vector<std::pair<GroupElement, Symbol>> pairs;
    for (std::size_t i = 0; i < a.values.size(); ++i) pairs.emplace_back(a.domain[i], a.values[i]);
    for (std::size_t i = 0; i < b.values.size(); ++i) pairs.emplace_back(b.domain[i], b.values[i]);
    return pattern_from_pairs(a.domain.kind(), std::move(pairs));
}

ShiftSpaceSpec::ShiftSpaceSpec(GroupKind g, Alphabet a, std::vector<Pattern> forbidden_patterns)
    : group(g), alphabet(std::move(a)) {
    for (auto& p : forbidden_patterns) {
        if (p.domain.kind() != group) throw Error("forbidden pattern lives in the wrong group");
        if (p.domain.empty()) throw Error("forbidden pattern with empty domain");
        for (auto v : p.values)
            if (v >= alphabet.size()) throw Error("forbidden pattern uses a symbol outside the alphabet");
        auto c = canonicalize(p);
        if (std::find(forbidden.begin(), forbidden.end(), c) == forbidden.end()) forbidden.push_back(std::move(c));
    }
}

ShiftSpaceSpec full_shift(GroupKind group, int symbols) {
    return ShiftSpaceSpec(group, Alphabet::digits(symbols), {});
}

ShiftSpaceSpec forbid_words(Alphabet alphabet, const std::vector<std::string>& words) {
    std::vector<Pattern> forbidden;
    for (const auto& w : words) {
        std::vector<GroupElement> dom;
        std::vector<Symbol> vals;
        for (std::size_t i = 0; i < w.size(); ++i) {
            dom.emplace_back(GroupKind::Z, std::initializer_list<Coord>{static_cast<Coord>(i)});
            vals.push_back(alphabet.index_of(std::string(1, w[i])));
        }
        forbidden.emplace_back(FiniteSubset(GroupKind::Z, std::move(dom)), std::move(vals));
    }
    return ShiftSpaceSpec(GroupKind::Z, std::move(alphabet), std::move(forbidden));
}

ShiftSpaceSpec golden_mean_shift() { return forbid_words(Alphabet::digits(2), {"11"}); }

std::string_view to_string(AdmissibilityMode mode) {
    switch (mode) {
    case AdmissibilityMode::local: return "local";
    case AdmissibilityMode::margin: return "margin";
    case AdmissibilityMode::exact1d: return "exact1d";
    }
    return "?";
}

AdmissibilityMode parse_mode(std::string_view name) {
    if (name == "local") return AdmissibilityMode::local;
    if (name == "margin") return AdmissibilityMode::margin;
    if (name == "exact1d") return AdmissibilityMode::exact1d;
    throw Error("unknown admissibility mode '" + std::string(name) + "' (expected local, margin or exact1d)");
}

AdmissibilityConfig::AdmissibilityConfig(GroupKind group, AdmissibilityMode m)
    : mode(m), margin(group, {GroupElement::identity(group)}) {}

AdmissibilityConfig::AdmissibilityConfig(AdmissibilityMode m, FiniteSubset margin_set)
    : mode(m), margin(std::move(margin_set)) {
    if (!margin.contains(GroupElement::identity(margin.kind())))
        throw Error("admissibility margin must contain the identity");
}

bool is_memory_one(const ShiftSpaceSpec& spec) {
    if (spec.group != GroupKind::Z) return false;
    for (const auto& f : spec.forbidden) {
        if (f.domain.size() > 2) return false;
        if (f.domain.size() == 2 && f.domain[1][0] != 1) return false;
    }
    return true;
}

std::vector<Ban> local_bans(const ShiftSpaceSpec& spec, const FiniteSubset& domain) {
    std::vector<Ban> bans;
    for (const auto& f : spec.forbidden) {
        for (const auto& g : domain) {
            Ban ban;
            bool inside = true;
            for (std::size_t j = 0; j < f.values.size() && inside; ++j) {
                auto pos = domain.index_of(multiply(f.domain[j], g));
                if (!pos) {
                    inside = false;
                    break;
                }
                ban.sites.push_back(static_cast<std::uint32_t>(*pos));
                ban.values.push_back(f.values[j]);
            }
            if (inside) bans.push_back(std::move(ban));
        }
    }
    return bans;
}

namespace {

using BoolMatrix = std::vector<std::vector<char>>;

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t l = a.size();
    BoolMatrix c(l, std::vector<char>(l, 0));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t k = 0; k < l; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < l; ++j) c[i][j] |= b[k][j];
    return c;
}

struct TransferGraph {
    BoolMatrix adj;               // restricted to essential vertices
    std::vector<char> essential;  // vertices on some bi-infinite path
};

TransferGraph transfer_graph(const ShiftSpaceSpec& spec) {
    const auto l = static_cast<std::size_t>(spec.alphabet.size());
    TransferGraph g{BoolMatrix(l, std::vector<char>(l, 1)), std::vector<char>(l, 1)};
    for (const auto& f : spec.forbidden) {
        if (f.domain.size() == 1) g.essential[f.values[0]] = 0;
        else g.adj[f.values[0]][f.values[1]] = 0;
    }
    // strip vertices without a successor or predecessor until stable
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t v = 0; v < l; ++v) {
            if (!g.essential[v]) continue;
            bool out = false, in = false;
            for (std::size_t w = 0; w < l; ++w) {
                if (!g.essential[w]) continue;
                out |= g.adj[v][w] != 0;
                in |= g.adj[w][v] != 0;
            }
            if (!out || !in) {
                g.essential[v] = 0;
                changed = true;
            }
        }
    }
    for (std::size_t v = 0; v < l; ++v)
        for (std::size_t w = 0; w < l; ++w)
            if (!g.essential[v] || !g.essential[w]) g.adj[v][w] = 0;
    return g;
}

std::vector<Ban> exact1d_bans(const ShiftSpaceSpec& spec, const FiniteSubset& domain) {
    if (spec.group != GroupKind::Z) throw Error("exact1d mode requires the group Z");
    if (!is_memory_one(spec)) throw Error("exact1d mode requires a memory-1 SFT (forbidden domains {0} or {0,1})");
    const auto g = transfer_graph(spec);
    const auto l = g.essential.size();
    std::vector<Ban> bans;
    for (std::uint32_t s = 0; s < domain.size(); ++s)
        for (std::size_t a = 0; a < l; ++a)
            if (!g.essential[a]) bans.push_back({{s}, {static_cast<Symbol>(a)}});

    std::map<Coord, BoolMatrix> reach;  // gap -> exactly-gap-step reachability
    auto reach_in = [&](Coord gap) -> const BoolMatrix& {
        if (auto it = reach.find(gap); it != reach.end()) return it->second;
        BoolMatrix r = g.adj;
        Coord have = 1;
        if (auto it = reach.upper_bound(gap); it != reach.begin()) {
            --it;
            r = it->second;
            have = it->first;
        }
        for (; have < gap; ++have) r = bool_product(r, g.adj);
        return reach.emplace(gap, std::move(r)).first->second;
    };
    for (std::uint32_t s = 0; s + 1 < domain.size(); ++s) {
        const Coord gap = domain[s + 1][0] - domain[s][0];
        const auto& r = reach_in(gap);
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = 0; b < l; ++b)
                if (g.essential[a] && g.essential[b] && !r[a][b])
                    bans.push_back({{s, s + 1}, {static_cast<Symbol>(a), static_cast<Symbol>(b)}});
    }
    return bans;
}

}  // namespace

PatternSpace::PatternSpace(const ShiftSpaceSpec& spec, FiniteSubset domain, const AdmissibilityConfig& cfg)
    : domain_(std::move(domain)), mode_(cfg.mode) {
    if (domain_.kind() != spec.group) throw Error("domain and shift space live in different groups");
    const int l = spec.alphabet.size();
    switch (mode_) {
    case AdmissibilityMode::local:
        system_ = std::make_unique<ConstraintSystem>(domain_.size(), l, local_bans(spec, domain_));
        break;
    case AdmissibilityMode::exact1d:
        system_ = std::make_unique<ConstraintSystem>(domain_.size(), l, exact1d_bans(spec, domain_));
        break;
    case AdmissibilityMode::margin: {
        if (cfg.margin.kind() != spec.group) throw Error("margin lives in the wrong group");
        system_ = std::make_unique<ConstraintSystem>(domain_.size(), l, local_bans(spec, domain_));
        const auto outer = set_union(set_product(cfg.margin, domain_), domain_);
        outer_ = std::make_unique<ConstraintSystem>(outer.size(), l, local_bans(spec, outer));
        for (const auto& g : domain_) inner_positions_.push_back(*outer.index_of(g));
        break;
    }
    }
}

bool PatternSpace::extends(std::span<const Symbol> values) const {
    if (!outer_) return true;
    std::vector<std::optional<Symbol>> fixed(outer_->num_sites());
    for (std::size_t i = 0; i < values.size(); ++i) fixed[inner_positions_[i]] = values[i];
    return outer_->solve(fixed).has_value();
}

BigInt PatternSpace::count() const {
    if (mode_ != AdmissibilityMode::margin) return system_->count();
    BigInt n = 0;
    for_each([&](std::span<const Symbol>) {
        ++n;
        return true;
    });
    return n;
}

bool PatternSpace::admits(std::span<const Symbol> values) const {
    return system_->admits(values) && extends(values);
}

std::optional<BigInt> PatternSpace::rank(std::span<const Symbol> values) const {
    if (mode_ != AdmissibilityMode::margin) return system_->rank(values);
    if (!admits(values)) return std::nullopt;
    BigInt r = 0;
    const std::vector<Symbol> target(values.begin(), values.end());
    for_each([&](std::span<const Symbol> v) {
        if (std::equal(v.begin(), v.end(), target.begin())) return false;
        ++r;
        return true;
    });
    return r;
}

std::vector<Symbol> PatternSpace::unrank(const BigInt& r) const {
    if (mode_ != AdmissibilityMode::margin) return system_->unrank(r);
    BigInt i = 0;
    std::optional<std::vector<Symbol>> out;
    for_each([&](std::span<const Symbol> v) {
        if (i == r) {
            out.emplace(v.begin(), v.end());
            return false;
        }
        ++i;
        return true;
    });
    if (!out) throw Error("unrank: rank out of range");
    return *out;
}

void PatternSpace::for_each(const ConstraintSystem::Visitor& visit) const {
    ConstraintSystem::LeafCheck leaf;
    if (outer_) leaf = [this](std::span<const Symbol> v) { return extends(v); };
    system_->for_each_solution({}, visit, leaf);
}

std::optional<std::vector<Symbol>> PatternSpace::complete(ConstraintSystem::Fixed fixed, std::mt19937_64* rng) const {
    ConstraintSystem::LeafCheck leaf;
    if (outer_) leaf = [this](std::span<const Symbol> v) { return extends(v); };
    ConstraintSystem::ValueOrder order;
    if (rng) order = [rng](std::size_t, std::vector<Symbol>& vals) { std::shuffle(vals.begin(), vals.end(), *rng); };
    return system_->solve(fixed, leaf, order);
}

std::vector<Pattern> enumerate_patterns(const ShiftSpaceSpec& spec, const FiniteSubset& t,
                                        const AdmissibilityConfig& cfg) {
    if (t.empty()) throw Error("enumerate_patterns: domain must be nonempty");
    PatternSpace space(spec, t, cfg);
    std::vector<Pattern> out;
    space.for_each([&](std::span<const Symbol> v) {
        out.emplace_back(t, std::vector<Symbol>(v.begin(), v.end()));
        return true;
    });
    return out;
}

BigInt count_patterns(const ShiftSpaceSpec& spec, const FiniteSubset& t, const AdmissibilityConfig& cfg) {
    if (t.empty()) throw Error("count_patterns: domain must be nonempty");
    return PatternSpace(spec, t, cfg).count();
}

EntropyReport entropy_report(const ShiftSpaceSpec& spec, int n, const AdmissibilityConfig& cfg) {
    const auto f = folner_set(spec.group, n);
    auto count = count_patterns(spec, f, cfg);
    if (count == 0) throw Error("no admissible pattern on F_" + std::to_string(n) + "; the subshift is empty");
    const double h = log2_big(count) / static_cast<double>(f.size());
    return {n, f.size(), std::move(count), h, cfg.mode};
}

double entropy_estimate(const ShiftSpaceSpec& spec, int n, const AdmissibilityConfig& cfg) {
    return entropy_report(spec, n, cfg).h_estimate;
}

CountingBoundReport check_counting_bound(const ShiftSpaceSpec& spec, const FiniteSubset& t, double h_ref,
                                         double eps, const AdmissibilityConfig& cfg) {
    CountingBoundReport r;
    r.count = count_patterns(spec, t, cfg);
    r.mode = cfg.mode;
    r.log2_bound = (h_ref - eps) * static_cast<double>(t.size());
    r.bound = std::exp2(r.log2_bound);
    r.log2_count = r.count > 0 ? log2_big(r.count) : -INFINITY;
    if (r.log2_bound < 1000.0) {
        // N > b  <=>  N > floor(b) for integer N
        r.holds = r.count > BigInt(std::floor(r.bound));
    } else {
        r.holds = r.log2_count > r.log2_bound;
    }
    return r;
}

double transfer_matrix_entropy(const ShiftSpaceSpec& spec) {
    if (!is_memory_one(spec)) throw Error("transfer_matrix_entropy requires a memory-1 SFT on Z");
    const auto g = transfer_graph(spec);
    const auto l = static_cast<Eigen::Index>(g.essential.size());
    Eigen::MatrixXd m(l, l);
    for (Eigen::Index i = 0; i < l; ++i)
        for (Eigen::Index j = 0; j < l; ++j) m(i, j) = g.adj[i][j] ? 1.0 : 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    double rho = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) rho = std::max(rho, std::abs(solver.eigenvalues()[i]));
    if (rho <= 0.0) throw Error("the subshift has no bi-infinite points");
    return std::log2(rho);
}

std::optional<Pattern> sample_pattern(const ShiftSpaceSpec& spec, const FiniteSubset& domain,
                                      const AdmissibilityConfig& cfg, std::mt19937_64& rng) {
    PatternSpace space(spec, domain, cfg);
    std::vector<std::optional<Symbol>> fixed(domain.size());
    auto vals = space.complete(fixed, &rng);
    if (!vals) return std::nullopt;
    return Pattern(domain, std::move(*vals));
}

}  // namespace symext
