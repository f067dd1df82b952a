#include "symext/encoder.hpp"

#include <array>
#include <cmath>
#include <set>

#include "symext/gluing.hpp"

namespace symext {

void EncoderConfig::validate() const {
    if (k < 2) throw Error("k must be at least 2");
    if (distance.kind() != tiling.group()) throw Error("gluing distance and tiling live in different groups");
    if (!distance.contains(GroupElement::identity(distance.kind())))
        throw Error("gluing distance must contain the identity");
    if (!(gamma > 1.0)) throw Error("gamma must exceed 1");
    if (!(gamma * std::log2(static_cast<double>(k)) < h_ref))
        throw Error("gamma·log2(k) must be below the entropy h_ref (" + std::to_string(h_ref) + ")");
}

namespace {

double log_base(double base, double x) { return std::log2(x) / std::log2(base); }

bool cond1_holds(std::size_t boundary, std::size_t shape_size, double gamma, int k, int l, double* rhs_out) {
    const double rhs = l > 1 ? (gamma - 1.0) * log_base(l, k) * static_cast<double>(shape_size) : 0.0;
    if (rhs_out) *rhs_out = rhs;
    return l > 1 && static_cast<double>(boundary) < rhs;
}

}  // namespace

std::vector<ShapeCertificate> certify_shapes(const EncoderConfig& config, const ShiftSpaceSpec& spec) {
    config.validate();
    if (spec.group != config.tiling.group()) throw Error("shift space and tiling live in different groups");
    const int l = spec.alphabet.size();
    std::vector<ShapeCertificate> out;
    for (const auto& shape : config.tiling.family.shapes()) {
        ShapeCertificate c;
        c.shape = shape;
        c.core = core(shape, config.distance);
        c.n1 = PatternSpace(spec, shape, config.admissibility).count();
        c.n2 = PatternSpace(spec, c.core, config.admissibility).count();
        c.word_count = pow_big(static_cast<std::uint64_t>(config.k), shape.size());
        c.boundary = shape.size() - c.core.size();
        c.cond1 = cond1_holds(c.boundary, shape.size(), config.gamma, config.k, l, &c.cond1_rhs);
        c.log2_cond2_threshold = config.gamma * static_cast<double>(shape.size()) * std::log2(config.k);
        c.cond2 = c.n1 > 0 && log2_big(c.n1) > c.log2_cond2_threshold;
        c.chain = c.n2 > c.word_count;
        out.push_back(std::move(c));
    }
    return out;
}

bool rederive_chain(const ShapeCertificate& cert, const EncoderConfig& config, int alphabet_size) {
    const auto s = cert.shape.size();
    if (!cert.core.is_subset_of(cert.shape)) return false;
    if (cert.boundary != s - cert.core.size()) return false;
    if (cert.word_count != pow_big(static_cast<std::uint64_t>(config.k), s)) return false;

    const bool cond1 = cond1_holds(cert.boundary, s, config.gamma, config.k, alphabet_size, nullptr);
    const bool cond2 = cert.n1 > 0 && log2_big(cert.n1) > config.gamma * static_cast<double>(s) * std::log2(config.k);
    const bool chain = cert.n2 > cert.word_count;
    if (cond1 != cert.cond1 || cond2 != cert.cond2 || chain != cert.chain) return false;

    // middle link: every pattern on S restricts to one on S_D
    if (cert.n1 > cert.n2 * pow_big(static_cast<std::uint64_t>(alphabet_size), cert.boundary)) return false;
    return !(cond1 && cond2) || chain;
}

EncoderTable::EncoderTable(EncoderConfig config, ShiftSpaceSpec spec)
    : config_(std::move(config)), spec_(std::move(spec)) {
    certs_ = certify_shapes(config_, spec_);
    for (std::size_t j = 0; j < certs_.size(); ++j)
        if (!certs_[j].chain)
            throw ConstructionRefused("shape " + std::to_string(j) + ": N_core = " + to_string(certs_[j].n2) +
                                          " does not exceed k^|S| = " + to_string(certs_[j].word_count),
                                      certs_);
    for (const auto& c : certs_)
        shapes_.push_back({c.shape, c.core, std::make_shared<const PatternSpace>(spec_, c.core, config_.admissibility),
                           c.word_count});
}

BigInt EncoderTable::word_rank(std::size_t j, std::span<const Symbol> word) const {
    const auto& sh = shapes_.at(j);
    if (word.size() != sh.shape.size()) throw Error("word length does not match the shape");
    BigInt r = 0;
    for (auto d : word) {
        if (d >= config_.k) throw Error("word symbol outside {1..k}");
        r = r * config_.k + d;
    }
    return r;
}

std::vector<Symbol> EncoderTable::word_at(std::size_t j, const BigInt& rank) const {
    const auto& sh = shapes_.at(j);
    std::vector<Symbol> digits(sh.shape.size());
    BigInt r = rank;
    for (std::size_t i = digits.size(); i-- > 0;) {
        digits[i] = static_cast<Symbol>(static_cast<unsigned>(r % config_.k));
        r /= config_.k;
    }
    return digits;
}

std::optional<std::vector<Symbol>> EncoderTable::phi(std::size_t j, std::span<const Symbol> core_values) const {
    const auto& sh = shapes_.at(j);
    auto r = sh.space->rank(core_values);
    if (!r) return std::nullopt;
    return word_at(j, *r % sh.word_count);
}

std::vector<Symbol> EncoderTable::minimal_preimage(std::size_t j, std::span<const Symbol> word) const {
    return shapes_.at(j).space->unrank(word_rank(j, word));
}

BigInt EncoderTable::image_size(std::size_t j, const BigInt& limit) const {
    const auto& sh = shapes_.at(j);
    if (certs_.at(j).n2 > limit) throw Error("image_size: too many core patterns to enumerate");
    std::set<std::vector<Symbol>> image;
    sh.space->for_each([&](std::span<const Symbol> v) {
        image.insert(*phi(j, v));
        return true;
    });
    return BigInt(image.size());
}

EncoderTable build_phi(const EncoderConfig& config, const ShiftSpaceSpec& spec) { return EncoderTable(config, spec); }

EncodeResult encode(const EncoderTable& table, const ProductPoint& point, const FiniteSubset& w) {
    const auto& family = point.tiling.family;
    if (family != table.config().tiling.family) throw Error("product point uses a different shape family");
    const GroupKind kind = w.kind();
    std::vector<std::pair<GroupElement, Symbol>> out;
    FiniteSubset covered(kind);
    std::vector<TileInstance> used;
    for (const auto& tile : tiles_in_window(point.tiling, w)) {
        if (!tile.contained) continue;
        const auto j = tile.shape_index;
        std::vector<Symbol> core_vals;
        for (const auto& c : table.core(j)) {
            const auto site = multiply(c, tile.anchor);
            auto v = point.x.at(site);
            if (!v)
                throw Error("x is undefined at " + site.str() + " in the core of the tile anchored at " +
                            tile.anchor.str());
            core_vals.push_back(*v);
        }
        auto word = table.phi(j, core_vals);
        if (!word)
            throw Error("core pattern of the tile anchored at " + tile.anchor.str() + " is not admissible (" +
                        std::string(to_string(table.config().admissibility.mode)) + " mode)");
        const auto& shape = table.shape(j);
        for (std::size_t i = 0; i < shape.size(); ++i) out.emplace_back(multiply(shape[i], tile.anchor), (*word)[i]);
        covered = set_union(covered, tile.points(family));
        used.push_back(tile);
    }
    return {pattern_from_pairs(kind, std::move(out)), set_difference(w, covered), std::move(used)};
}

ProductPoint shift_point(const ProductPoint& point, const GroupElement& g) {
    return {translate(point.x, inverse(g)), shift_tiling(point.tiling, g)};
}

EquivarianceResult check_equivariance(const EncoderTable& table, const ProductPoint& point, const GroupElement& g,
                                      const FiniteSubset& w) {
    const auto lhs = encode(table, shift_point(point, g), w);
    const auto rhs = encode(table, point, right_translate(w, g));
    EquivarianceResult r;
    for (const auto& h : w) {
        ++r.sites_compared;
        if (lhs.y.at(h) != rhs.y.at(multiply(h, g))) {
            r.equal = false;
            r.first_mismatch = h;
            break;
        }
    }
    return r;
}

std::vector<EquivarianceSample> sample_equivariance(const EncoderTable& table, const FiniteSubset& w,
                                                    std::size_t samples, Coord radius, std::mt19937_64& rng) {
    const GroupKind kind = w.kind();
    const int d = dimension(kind);
    std::uniform_int_distribution<Coord> coord(-radius, radius);
    auto random_element = [&] {
        std::array<Coord, 3> c{};
        for (int i = 0; i < d; ++i) c[i] = coord(rng);
        return GroupElement(kind, std::span<const Coord>(c.data(), d));
    };
    std::vector<EquivarianceSample> out;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto t = random_element();
        const auto g = random_element();
        auto x = sample_pattern(table.spec(), right_translate(w, g), table.config().admissibility, rng);
        if (!x) throw Error("no admissible pattern on the sampling window");
        const ProductPoint point{std::move(*x), shift_tiling(table.config().tiling, t)};
        out.push_back({g, t, check_equivariance(table, point, g, w)});
    }
    return out;
}

ProductPoint preimage(const EncoderTable& table, const Pattern& y, const std::vector<TileInstance>& tiles) {
    const auto& config = table.config();
    const auto& family = config.tiling.family;
    const GroupKind kind = config.tiling.group();

    FiniteSubset all(kind);
    for (const auto& t : tiles) {
        const auto actual = tile_containing(config.tiling, t.anchor);
        if (actual.anchor != t.anchor || actual.shape_index != t.shape_index)
            throw Error("tile anchored at " + t.anchor.str() + " is not a tile of the encoder's tiling");
        const auto pts = t.points(family);
        if (!set_intersection(all, pts).empty()) throw Error("preimage: tiles overlap");
        all = set_union(all, pts);
    }
    if (y.domain != all) throw Error("preimage: y must be defined on exactly the union of the tiles");

    FiniteSubset covered(kind);
    Pattern cores(FiniteSubset(kind), {});
    Pattern x(FiniteSubset(kind), {});
    for (std::size_t j = 0; j < tiles.size(); ++j) {
        const auto& t = tiles[j];
        const auto& shape = table.shape(t.shape_index);
        const auto& core_shape = table.core(t.shape_index);

        std::vector<Symbol> word;
        for (const auto& s : shape) word.push_back(*y.at(multiply(s, t.anchor)));
        const auto p = table.minimal_preimage(t.shape_index, word);

        std::vector<std::pair<GroupElement, Symbol>> core_pairs;
        for (std::size_t i = 0; i < core_shape.size(); ++i)
            core_pairs.emplace_back(multiply(core_shape[i], t.anchor), p[i]);
        const auto core_pattern = pattern_from_pairs(kind, std::move(core_pairs));

        // D·(T_{j+1})_D stays inside T_{j+1}, so it misses the earlier tiles
        if (!set_intersection(set_product(config.distance, core_pattern.domain), covered).empty())
            throw PreimageFailure("step " + std::to_string(j + 1) + ": D·core meets the earlier tiles", j + 1);

        covered = set_union(covered, t.points(family));
        auto fixed = merge(cores, core_pattern);
        auto glued = glue(table.spec(), fixed, set_difference(covered, fixed.domain), config.admissibility);
        if (!glued)
            throw PreimageFailure("step " + std::to_string(j + 1) + ": no admissible gluing of the core at " +
                                      t.anchor.str() + " onto the earlier cores",
                                  j + 1);
        cores = std::move(fixed);
        x = std::move(*glued);
    }
    return {std::move(x), config.tiling};
}

ProductEntropyReport product_entropy_estimate(const ShiftSpaceSpec& spec, const TilingSpec& tiling, int n,
                                              const AdmissibilityConfig& cfg) {
    const auto f = folner_set(spec.group, n);
    const auto nx = count_patterns(spec, f, cfg);
    const auto nt = tiling_complexity(tiling, n).back();
    const double size = static_cast<double>(f.size());
    ProductEntropyReport r;
    r.n = n;
    r.h_x = log2_big(nx) / size;
    r.tiling_rate = std::log2(static_cast<double>(nt)) / size;
    r.h_product = log2_big(nx * BigInt(nt)) / size;
    return r;
}

}  // namespace symext
