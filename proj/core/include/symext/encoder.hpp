#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symext/bigint.hpp"
#include "symext/group.hpp"
#include "symext/shift_space.hpp"
#include "symext/tiling.hpp"

namespace symext {

/// Tag identifying the φ_S construction; tables are reproducible from it.
inline constexpr std::string_view kRankingVersion = "rank-mod-v1";

struct EncoderConfig {
    int k = 2;                  // target alphabet {1..k}
    double gamma = 1.0;         // 1 < gamma < h_ref / log2 k
    FiniteSubset distance;      // gluing distance D, contains the identity
    double h_ref = 0.0;         // entropy of X (exact or oracle value)
    TilingSpec tiling;
    AdmissibilityConfig admissibility;

    /// Throws unless k >= 2, e ∈ D, 1 < gamma and gamma·log2 k < h_ref.
    void validate() const;
};

/// Counting facts for one shape S with core S_D:
///   cond1  |S \ S_D| < ((gamma-1)·log_l k)·|S|
///   cond2  N_S > k^{gamma|S|}
///   chain  N_{S_D} > k^{|S|}
struct ShapeCertificate {
    FiniteSubset shape{GroupKind::Z};
    FiniteSubset core{GroupKind::Z};
    BigInt n1;                  // N_S
    BigInt n2;                  // N_{S_D}
    BigInt word_count;          // k^{|S|}
    std::size_t boundary = 0;   // |S \ S_D|
    double cond1_rhs = 0.0;     // ((gamma-1)·log_l k)·|S|
    double log2_cond2_threshold = 0.0;  // gamma·|S|·log2 k
    bool cond1 = false;
    bool cond2 = false;
    bool chain = false;
};

/// Recomputes the counting chain from the stored integers: the flags must
/// match the integers, N_S <= N_{S_D}·l^{|S∖S_D|} must hold, and cond1 ∧ cond2
/// must force N_{S_D} > k^{|S|}.
bool rederive_chain(const ShapeCertificate& cert, const EncoderConfig& config, int alphabet_size);

class ConstructionRefused : public Error {
public:
    ConstructionRefused(std::string what, std::vector<ShapeCertificate> certs)
        : Error(std::move(what)), certificates(std::move(certs)) {}
    std::vector<ShapeCertificate> certificates;
};

std::vector<ShapeCertificate> certify_shapes(const EncoderConfig& config, const ShiftSpaceSpec& spec);

/// Per-shape surjections φ_S from admissible S_D-patterns onto words in
/// {1..k}^S: the pattern of rank r maps to the word of rank r mod k^{|S|}.
/// Words are stored 0-based (digit d means symbol d+1), most significant
/// digit at the shape's first element.
class EncoderTable {
public:
    EncoderTable(EncoderConfig config, ShiftSpaceSpec spec);

    const EncoderConfig& config() const { return config_; }
    const ShiftSpaceSpec& spec() const { return spec_; }
    const std::vector<ShapeCertificate>& certificates() const { return certs_; }
    std::size_t shape_count() const { return shapes_.size(); }
    const FiniteSubset& shape(std::size_t j) const { return shapes_[j].shape; }
    const FiniteSubset& core(std::size_t j) const { return shapes_[j].core; }
    const PatternSpace& core_space(std::size_t j) const { return *shapes_[j].space; }

    BigInt word_rank(std::size_t j, std::span<const Symbol> word) const;
    std::vector<Symbol> word_at(std::size_t j, const BigInt& rank) const;

    /// φ_S on the values of a core pattern (in core order); nullopt when the
    /// pattern is not admissible.
    std::optional<std::vector<Symbol>> phi(std::size_t j, std::span<const Symbol> core_values) const;
    /// Minimal-rank core pattern mapping to `word`.
    std::vector<Symbol> minimal_preimage(std::size_t j, std::span<const Symbol> word) const;

    /// Distinct words hit by φ_S, counted by enumerating every admissible core
    /// pattern (refuses when N_{S_D} exceeds `limit`).
    BigInt image_size(std::size_t j, const BigInt& limit) const;

private:
    struct ShapeEncoder {
        FiniteSubset shape;
        FiniteSubset core;
        std::shared_ptr<const PatternSpace> space;
        BigInt word_count;
    };

    EncoderConfig config_;
    ShiftSpaceSpec spec_;
    std::vector<ShapeCertificate> certs_;
    std::vector<ShapeEncoder> shapes_;
};

/// Builds the table after certify_shapes; throws ConstructionRefused if any
/// shape fails the chain bound.
EncoderTable build_phi(const EncoderConfig& config, const ShiftSpaceSpec& spec);

/// A finite window of a point of the product extension: x from X and a
/// translate of the base tiling.
struct ProductPoint {
    Pattern x;
    TilingSpec tiling;
};

struct EncodeResult {
    Pattern y;                 // 0-based output symbols on covered sites
    FiniteSubset uncovered;    // sites of W in no tile contained in W
    std::vector<TileInstance> tiles;  // contained tiles that were encoded
};

/// y(T) = φ_{σ(T)}(x(T_D)) on every tile T contained in W.
EncodeResult encode(const EncoderTable& table, const ProductPoint& point, const FiniteSubset& w);

/// Shift of a product point: (g x)(h) = x(hg), tiling g·T.
ProductPoint shift_point(const ProductPoint& point, const GroupElement& g);

struct EquivarianceResult {
    bool equal = true;
    std::optional<GroupElement> first_mismatch;
    std::size_t sites_compared = 0;
};

/// Compares φ(g x̃)(h) with φ(x̃)(hg) for h in W.
EquivarianceResult check_equivariance(const EncoderTable& table, const ProductPoint& point, const GroupElement& g,
                                      const FiniteSubset& w);

struct EquivarianceSample {
    GroupElement g;             // the shift being tested
    GroupElement tiling_shift;  // the point's tiling is tiling_shift·T_0
    EquivarianceResult result;
};

/// Draws `samples` pairs (g, point) with g and the tiling shift uniform in
/// [-radius, radius]^d and x a random admissible pattern on W·g, then runs
/// check_equivariance on W for each.
std::vector<EquivarianceSample> sample_equivariance(const EncoderTable& table, const FiniteSubset& w,
                                                    std::size_t samples, Coord radius, std::mt19937_64& rng);

class PreimageFailure : public Error {
public:
    PreimageFailure(std::string what, std::size_t failed_step) : Error(std::move(what)), step(failed_step) {}
    std::size_t step;  // 1-based index of the tile that could not be glued
};

/// Builds x tile by tile: the core of tile j+1 gets the minimal-rank pattern
/// mapping to y on that tile and is glued onto the cores fixed so far.
/// `y` uses 0-based output symbols and must be defined on exactly the union
/// of the tiles.
ProductPoint preimage(const EncoderTable& table, const Pattern& y, const std::vector<TileInstance>& tiles);

struct ProductEntropyReport {
    int n = 0;
    double h_x = 0.0;          // (1/|F_n|) log2 N_{F_n}(X)
    double tiling_rate = 0.0;  // (1/|F_n|) log2 (tiling complexity at n)
    double h_product = 0.0;    // entropy estimate of X × X_T
};

/// Pattern count of the product system on F_n is N_{F_n}(X) times the tiling
/// complexity, since the two coordinates vary independently.
ProductEntropyReport product_entropy_estimate(const ShiftSpaceSpec& spec, const TilingSpec& tiling, int n,
                                              const AdmissibilityConfig& cfg);

}  // namespace symext
