#pragma once

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "symext/bigint.hpp"
#include "symext/constraints.hpp"
#include "symext/group.hpp"

namespace symext {

/// Ordered list of distinct symbol tokens. Symbols are referred to by their
/// index in this list everywhere else.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> tokens);
    static Alphabet digits(int size);  // "0", "1", ...

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::string& token(Symbol s) const { return tokens_.at(s); }
    Symbol index_of(const std::string& token) const;
    const std::vector<std::string>& tokens() const { return tokens_; }
    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> tokens_;
};

/// A block: symbol values[i] sits at domain[i].
struct Pattern {
    FiniteSubset domain;
    std::vector<Symbol> values;

    Pattern(FiniteSubset d, std::vector<Symbol> v);
    std::optional<Symbol> at(const GroupElement& g) const;
    bool operator==(const Pattern&) const = default;
};

/// Builds a pattern from (site, symbol) pairs in any order; repeated sites
/// must agree.
Pattern pattern_from_pairs(GroupKind kind, std::vector<std::pair<GroupElement, Symbol>> pairs);
/// Right-translates the domain: the result carries the same symbols on Tg.
Pattern translate(const Pattern& p, const GroupElement& g);
/// Translate so the order-minimal domain element becomes the identity.
Pattern canonicalize(const Pattern& p);
Pattern restrict_to(const Pattern& p, const FiniteSubset& sub);
/// Union of two patterns on disjoint (or agreeing) domains.
Pattern merge(const Pattern& a, const Pattern& b);

/// Subshift of finite type: patterns from `forbidden` may not occur anywhere.
struct ShiftSpaceSpec {
    GroupKind group;
    Alphabet alphabet;
    std::vector<Pattern> forbidden;  // canonical, duplicate-free

    ShiftSpaceSpec(GroupKind g, Alphabet a, std::vector<Pattern> forbidden_patterns);
};

ShiftSpaceSpec full_shift(GroupKind group, int symbols);
/// Z-subshift forbidding each of the given words (strings over alphabet tokens
/// of length one, e.g. "11").
ShiftSpaceSpec forbid_words(Alphabet alphabet, const std::vector<std::string>& words);
ShiftSpaceSpec golden_mean_shift();

enum class AdmissibilityMode { local, margin, exact1d };

std::string_view to_string(AdmissibilityMode mode);
AdmissibilityMode parse_mode(std::string_view name);

/// How "occurs in X" is approximated on a finite domain T.
///   local   no forbidden pattern embeds in T
///   margin  extends to a locally admissible pattern on margin·T
///   exact1d exact occurrence for memory-1 SFTs on Z via the transfer graph
struct AdmissibilityConfig {
    AdmissibilityMode mode = AdmissibilityMode::local;
    FiniteSubset margin;

    explicit AdmissibilityConfig(GroupKind group, AdmissibilityMode m = AdmissibilityMode::local);
    AdmissibilityConfig(AdmissibilityMode m, FiniteSubset margin_set);
};

/// True when every forbidden domain is {0} or {0,1} on Z.
bool is_memory_one(const ShiftSpaceSpec& spec);

/// Bans expressing local admissibility on a domain (all placements of
/// forbidden patterns fully inside it).
std::vector<Ban> local_bans(const ShiftSpaceSpec& spec, const FiniteSubset& domain);

/// The admissible patterns on one fixed domain under one admissibility mode,
/// with ranking (lexicographic in domain order, then symbol order).
class PatternSpace {
public:
    PatternSpace(const ShiftSpaceSpec& spec, FiniteSubset domain, const AdmissibilityConfig& cfg);

    const FiniteSubset& domain() const { return domain_; }
    AdmissibilityMode mode() const { return mode_; }
    int alphabet_size() const { return system_->alphabet_size(); }

    BigInt count() const;
    bool admits(std::span<const Symbol> values) const;
    std::optional<BigInt> rank(std::span<const Symbol> values) const;
    std::vector<Symbol> unrank(const BigInt& r) const;
    /// Visits admissible value vectors in ranking order until `visit` returns false.
    void for_each(const ConstraintSystem::Visitor& visit) const;

    /// Least admissible completion of a partial assignment (free = nullopt).
    /// With an rng the value order is shuffled per position instead.
    std::optional<std::vector<Symbol>> complete(ConstraintSystem::Fixed fixed, std::mt19937_64* rng = nullptr) const;

private:
    bool extends(std::span<const Symbol> values) const;

    FiniteSubset domain_;
    AdmissibilityMode mode_;
    std::unique_ptr<ConstraintSystem> system_;
    // margin mode only: the enlarged domain and where domain_ sits inside it
    std::unique_ptr<ConstraintSystem> outer_;
    std::vector<std::size_t> inner_positions_;
};

std::vector<Pattern> enumerate_patterns(const ShiftSpaceSpec& spec, const FiniteSubset& t,
                                        const AdmissibilityConfig& cfg);
BigInt count_patterns(const ShiftSpaceSpec& spec, const FiniteSubset& t, const AdmissibilityConfig& cfg);

struct EntropyReport {
    int n;
    std::size_t domain_size;
    BigInt count;
    double h_estimate;
    AdmissibilityMode mode;
};

EntropyReport entropy_report(const ShiftSpaceSpec& spec, int n, const AdmissibilityConfig& cfg);
/// (1/|F_n|) log2 N_{F_n}(X).
double entropy_estimate(const ShiftSpaceSpec& spec, int n, const AdmissibilityConfig& cfg);

struct CountingBoundReport {
    BigInt count;       // N_T
    double bound;       // 2^{(h_ref - eps)|T|}
    double log2_count;
    double log2_bound;
    bool holds;         // N_T > bound
    AdmissibilityMode mode;
};

CountingBoundReport check_counting_bound(const ShiftSpaceSpec& spec, const FiniteSubset& t, double h_ref,
                                         double eps, const AdmissibilityConfig& cfg);

/// log2 of the spectral radius of the transfer matrix of a memory-1 Z-SFT.
double transfer_matrix_entropy(const ShiftSpaceSpec& spec);

/// A random admissible pattern on `domain` (randomized backtracking).
std::optional<Pattern> sample_pattern(const ShiftSpaceSpec& spec, const FiniteSubset& domain,
                                      const AdmissibilityConfig& cfg, std::mt19937_64& rng);

}  // namespace symext
