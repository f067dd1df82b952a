#pragma once

#include <cstddef>
#include <optional>

#include "symext/group.hpp"
#include "symext/shift_space.hpp"

namespace symext {

/// Least admissible pattern on fixed.domain ∪ free_sites that restricts to
/// `fixed` (lexicographic in domain order), or nullopt if none exists under
/// the admissibility mode.
std::optional<Pattern> glue(const ShiftSpaceSpec& spec, const Pattern& fixed, const FiniteSubset& free_sites,
                            const AdmissibilityConfig& cfg);

/// Whether some admissible pattern on T1 ∪ T2 (enlarged by the margin in
/// margin mode) restricts to A on T1 and B on T2.
bool can_glue(const ShiftSpaceSpec& spec, const FiniteSubset& t1, const Pattern& a, const FiniteSubset& t2,
              const Pattern& b, const AdmissibilityConfig& cfg);
bool can_glue(const ShiftSpaceSpec& spec, const Pattern& a, const Pattern& b, const AdmissibilityConfig& cfg);

/// T1 and T2 are D-separated when T2 ∩ DT1 = ∅ and T1 ∩ DT2 = ∅.
bool separated(const FiniteSubset& t1, const FiniteSubset& t2, const FiniteSubset& d);

enum class GluingVerdict { pass, fail, inconclusive };
std::string_view to_string(GluingVerdict v);

struct GluingBudget {
    std::size_t max_size = 8;   // bound on |T1| + |T2|
    std::size_t max_pairs = 0;  // 0 = no bound on the number of (T1, T2) pairs
};

struct GluingWitness {
    Pattern a;  // on T1
    Pattern b;  // on T2
};

struct GluingReport {
    GluingVerdict verdict = GluingVerdict::pass;
    std::optional<GluingWitness> witness;
    FiniteSubset window;
    std::size_t max_size = 0;
    std::size_t pairs_total = 0;     // separated pairs within the size bound
    std::size_t pairs_examined = 0;  // up to and including the failing pair
    AdmissibilityMode mode = AdmissibilityMode::local;
};

/// Bounded search for a counterexample to the gluing property with distance
/// D: every D-separated pair (T1, T2) inside W with |T1|+|T2| <= max_size, and
/// all admissible A on T1 and B on T2. Pairs are visited by increasing
/// |T1|+|T2|, then lexicographically; the first failure is reported.
/// `jobs` > 1 splits the pairs across threads without changing the result.
GluingReport check_gluing_property(const ShiftSpaceSpec& spec, const FiniteSubset& d, const FiniteSubset& w,
                                   const GluingBudget& budget, const AdmissibilityConfig& cfg, unsigned jobs = 1);

}  // namespace symext
