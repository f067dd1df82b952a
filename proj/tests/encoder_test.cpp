#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "support.hpp"
#include "symext/encoder.hpp"

using namespace symext;
using namespace support;

namespace {

EncoderConfig full3_config(Coord shape_len, FiniteSubset d, double gamma = 1.2) {
    return {2, gamma, std::move(d), std::log2(3.0), box_tiling(GroupKind::Z, {shape_len}),
            AdmissibilityConfig(GroupKind::Z)};
}

// 5 symbols, "00" forbidden, tiles of length 8, D = {0,1}
EncoderConfig no00_config() {
    return {2,
            1.5,
            zset({0, 1}),
            std::log2(2 + 2 * std::sqrt(2.0)),
            box_tiling(GroupKind::Z, {8}),
            AdmissibilityConfig(GroupKind::Z, AdmissibilityMode::exact1d)};
}

ShiftSpaceSpec no00() { return forbid_words(Alphabet::digits(5), {"00"}); }

std::string word_string(const std::vector<Symbol>& w) {
    std::string s;
    for (auto d : w) s.push_back(static_cast<char>('1' + d));
    return s;
}

std::vector<Symbol> random_word(std::mt19937_64& rng, std::size_t n, int k) {
    std::uniform_int_distribution<int> d(0, k - 1);
    std::vector<Symbol> w(n);
    for (auto& s : w) s = static_cast<Symbol>(d(rng));
    return w;
}

Pattern y_on_tiles(const EncoderTable& table, const std::vector<TileInstance>& tiles, const std::vector<Symbol>& word) {
    std::vector<std::pair<GroupElement, Symbol>> pairs;
    for (const auto& t : tiles)
        for (const auto& s : table.shape(t.shape_index)) pairs.emplace_back(multiply(s, t.anchor), word[pairs.size()]);
    return pattern_from_pairs(table.spec().group, pairs);
}

}  // namespace

TEST_CASE("config validation") {
    auto cfg = full3_config(8, zset({0, 1}));
    CHECK_NOTHROW(cfg.validate());
    cfg.gamma = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.gamma = 1.6;  // 1.6 > log2 3
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = full3_config(8, zset({1}));
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = full3_config(8, zset({0}));
    cfg.k = 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("certificate for shape {0..7}") {
    const auto cfg = full3_config(8, zset({0, 1}));
    const auto certs = certify_shapes(cfg, full_shift(GroupKind::Z, 3));
    REQUIRE(certs.size() == 1);
    const auto& c = certs[0];
    CHECK(c.core == interval(0, 7));
    CHECK(c.boundary == 1);
    CHECK(c.cond1_rhs == doctest::Approx(0.2 * std::log(2.0) / std::log(3.0) * 8));
    CHECK(c.cond1_rhs == doctest::Approx(1.0095).epsilon(1e-4));
    CHECK(c.cond1);
    CHECK(c.n1 == 6561);
    CHECK(c.log2_cond2_threshold == doctest::Approx(9.6));
    CHECK(std::exp2(c.log2_cond2_threshold) == doctest::Approx(776.05).epsilon(1e-4));
    CHECK(c.cond2);
    CHECK(c.n2 == 2187);
    CHECK(c.word_count == 256);
    CHECK(c.chain);
    CHECK(rederive_chain(c, cfg, 3));
}

TEST_CASE("certificate for shape {0..3}") {
    const auto cfg = full3_config(4, zset({0, 1}));
    const auto c = certify_shapes(cfg, full_shift(GroupKind::Z, 3)).at(0);
    CHECK(c.cond1_rhs == doctest::Approx(0.5047).epsilon(1e-3));
    CHECK_FALSE(c.cond1);
    CHECK(c.n2 == 27);
    CHECK(c.word_count == 16);
    CHECK(c.chain);
    CHECK(rederive_chain(c, cfg, 3));
}

TEST_CASE("D = {e} makes cond1 trivial") {
    const auto cfg = full3_config(4, zset({0}));
    const auto c = certify_shapes(cfg, full_shift(GroupKind::Z, 3)).at(0);
    CHECK(c.boundary == 0);
    CHECK(c.cond1);
    CHECK(c.core == c.shape);
}

TEST_CASE("rederive_chain rejects tampered certificates") {
    const auto cfg = full3_config(8, zset({0, 1}));
    const auto good = certify_shapes(cfg, full_shift(GroupKind::Z, 3)).at(0);
    auto bad = good;
    bad.n2 = 100;  // flags no longer match
    CHECK_FALSE(rederive_chain(bad, cfg, 3));
    bad = good;
    bad.cond2 = false;
    CHECK_FALSE(rederive_chain(bad, cfg, 3));
    bad = good;
    bad.n1 = 7000;  // above N_{S_D}·l^{|S∖S_D|}
    CHECK_FALSE(rederive_chain(bad, cfg, 3));
    bad = good;
    bad.boundary = 2;
    CHECK_FALSE(rederive_chain(bad, cfg, 3));
}

TEST_CASE("construction is refused when the chain fails") {
    const auto cfg = full3_config(2, zset({0, 1}));
    CHECK_THROWS_AS(build_phi(cfg, full_shift(GroupKind::Z, 3)), ConstructionRefused);
    try {
        build_phi(cfg, full_shift(GroupKind::Z, 3));
    } catch (const ConstructionRefused& e) {
        REQUIRE(e.certificates.size() == 1);
        CHECK(e.certificates[0].n2 == 3);
        CHECK_FALSE(e.certificates[0].chain);
    }
}

TEST_CASE("phi ranking rule") {
    const auto table = build_phi(full3_config(4, zset({0})), full_shift(GroupKind::Z, 3));
    const std::vector<Symbol> zeros{0, 0, 0, 0};
    CHECK(word_string(*table.phi(0, zeros)) == "1111");
    // rank 17 = 0,1,2,2 in base 3
    const auto p17 = table.core_space(0).unrank(17);
    CHECK(p17 == std::vector<Symbol>{0, 1, 2, 2});
    CHECK(word_string(*table.phi(0, p17)) == "1112");
    CHECK(table.image_size(0, 1000) == 16);
    for (int r = 0; r < 81; ++r) {
        const auto w = *table.phi(0, table.core_space(0).unrank(r));
        CHECK(table.word_rank(0, w) == r % 16);
    }
    CHECK(table.minimal_preimage(0, table.word_at(0, 5)) == table.core_space(0).unrank(5));
}

TEST_CASE("phi is onto for every shape") {
    const TilingSpec cyc(ShapeFamily(GroupKind::Z, {interval(0, 4), interval(0, 5)}), Placement::cycle, z(0));
    EncoderConfig cfg{2, 1.2, zset({0}), std::log2(3.0), cyc, AdmissibilityConfig(GroupKind::Z)};
    const auto table = build_phi(cfg, full_shift(GroupKind::Z, 3));
    CHECK(table.image_size(0, 10000) == 16);
    CHECK(table.image_size(1, 10000) == 32);
    const auto t2 = build_phi(no00_config(), no00());
    CHECK(t2.image_size(0, 100000) == 256);
}

TEST_CASE("encode examples") {
    const auto table = build_phi(full3_config(4, zset({0})), full_shift(GroupKind::Z, 3));
    const auto& tiling = table.config().tiling;
    const ProductPoint zeros{Pattern(interval(0, 8), std::vector<Symbol>(8, 0)), tiling};

    const auto none = encode(table, zeros, interval(1, 3));
    CHECK(none.y.domain.empty());
    CHECK(none.uncovered == interval(1, 3));

    const auto one = encode(table, zeros, interval(0, 4));
    CHECK(word_string(one.y.values) == "1111");

    auto vals = table.core_space(0).unrank(17);
    vals.resize(8, 0);
    const auto two = encode(table, ProductPoint{Pattern(interval(0, 8), vals), tiling}, interval(0, 8));
    CHECK(word_string(two.y.values) == "11121111");
    CHECK(two.tiles.size() == 2);

    // x missing on a core site
    CHECK_THROWS_AS(encode(table, ProductPoint{Pattern(interval(0, 3), {0, 0, 0}), tiling}, interval(0, 4)), Error);
}

TEST_CASE("encode rejects inadmissible cores") {
    const auto table = build_phi(no00_config(), no00());
    std::vector<Symbol> v(8, 1);
    v[2] = v[3] = 0;
    CHECK_THROWS_AS(encode(table, ProductPoint{Pattern(interval(0, 8), v), table.config().tiling}, interval(0, 8)),
                    Error);
}

TEST_CASE("locality: y on a tile only depends on x on its core") {
    const auto table = build_phi(no00_config(), no00());
    std::mt19937_64 rng(40);
    const auto w = interval(0, 24);
    for (int i = 0; i < 30; ++i) {
        const auto x = *sample_pattern(table.spec(), w, table.config().admissibility, rng);
        const auto y = encode(table, {x, table.config().tiling}, w).y;
        // change x at the last site of the middle tile (outside its core)
        auto changed = x;
        for (Symbol s = 1; s < 5; ++s) {
            changed.values[15] = s;
            const auto y2 = encode(table, {changed, table.config().tiling}, w).y;
            for (Coord h = 8; h < 16; ++h) CHECK(y.at(z(h)) == y2.at(z(h)));
        }
    }
}

TEST_CASE("equivariance") {
    const auto table = build_phi(full3_config(4, zset({0})), full_shift(GroupKind::Z, 3));
    std::mt19937_64 rng(41);
    const auto w = interval(0, 12);
    for (Coord g : {0, 4, 1, -3, 7}) {
        const auto x = *sample_pattern(table.spec(), right_translate(w, z(g)), table.config().admissibility, rng);
        const auto r = check_equivariance(table, {x, table.config().tiling}, z(g), w);
        CHECK(r.equal);
        CHECK(r.sites_compared == 12);
    }
    for (const auto& s : sample_equivariance(table, w, 50, 10, rng)) CHECK(s.result.equal);

    const auto t2 = build_phi(no00_config(), no00());
    for (const auto& s : sample_equivariance(t2, interval(0, 24), 30, 12, rng)) CHECK(s.result.equal);
}

TEST_CASE("equivariance holds in Z2 and H3") {
    std::mt19937_64 rng(42);
    const EncoderConfig z2cfg{2, 1.2, FiniteSubset(GroupKind::Z2, {z2(0, 0)}), std::log2(3.0),
                              box_tiling(GroupKind::Z2, {2, 2}), AdmissibilityConfig(GroupKind::Z2)};
    const auto t2 = build_phi(z2cfg, full_shift(GroupKind::Z2, 3));
    for (const auto& s : sample_equivariance(t2, box(GroupKind::Z2, {4, 4}), 30, 6, rng)) CHECK(s.result.equal);

    const EncoderConfig h3cfg{2, 1.2, FiniteSubset(GroupKind::H3, {h3(0, 0, 0)}), std::log2(3.0),
                              box_tiling(GroupKind::H3, {2, 2, 2}), AdmissibilityConfig(GroupKind::H3)};
    const auto t3 = build_phi(h3cfg, full_shift(GroupKind::H3, 3));
    for (const auto& s : sample_equivariance(t3, box(GroupKind::H3, {4, 4, 4}), 20, 5, rng)) CHECK(s.result.equal);
}

TEST_CASE("preimage of a single tile is the rank-0 pattern") {
    const auto table = build_phi(full3_config(4, zset({0})), full_shift(GroupKind::Z, 3));
    const auto tiles = std::vector<TileInstance>{tile_containing(table.config().tiling, z(0))};
    const auto y = y_on_tiles(table, tiles, {0, 0, 0, 0});
    const auto p = preimage(table, y, tiles);
    CHECK(p.x.values == std::vector<Symbol>{0, 0, 0, 0});
}

TEST_CASE("preimage round trip, full 3-shift onto the 2-shift, exhaustive over 3 tiles") {
    const auto table = build_phi(full3_config(4, zset({0})), full_shift(GroupKind::Z, 3));
    std::vector<TileInstance> tiles;
    for (Coord a : {0, 4, 8}) tiles.push_back(tile_containing(table.config().tiling, z(a)));
    std::size_t ok = 0;
    oracle::for_each_word(12, 2, [&](const std::vector<Symbol>& word) {
        const auto y = y_on_tiles(table, tiles, word);
        const auto p = preimage(table, y, tiles);
        ok += encode(table, p, y.domain).y == y;
    });
    CHECK(ok == 4096);
}

TEST_CASE("preimage round trip with nontrivial gluing") {
    const auto table = build_phi(no00_config(), no00());
    std::mt19937_64 rng(43);
    std::vector<TileInstance> tiles;
    for (Coord a : {0, 8}) tiles.push_back(tile_containing(table.config().tiling, z(a)));
    for (int i = 0; i < 50; ++i) {
        const auto y = y_on_tiles(table, tiles, random_word(rng, 16, 2));
        const auto p = preimage(table, y, tiles);
        CHECK(oracle::locally_admissible(table.spec(), p.x.domain, p.x.values));
        CHECK(encode(table, p, y.domain).y == y);
    }
    // tiles out of order work as well
    std::reverse(tiles.begin(), tiles.end());
    const auto y = y_on_tiles(table, tiles, random_word(rng, 16, 2));
    CHECK(encode(table, preimage(table, y, tiles), y.domain).y == y);
}

TEST_CASE("preimage input validation") {
    const auto table = build_phi(full3_config(4, zset({0})), full_shift(GroupKind::Z, 3));
    const auto t0 = tile_containing(table.config().tiling, z(0));
    auto fake = t0;
    fake.anchor = z(1);
    const auto y = y_on_tiles(table, {t0}, {0, 0, 0, 0});
    CHECK_THROWS_AS(preimage(table, y, {fake}), Error);
    CHECK_THROWS_AS(preimage(table, y, {t0, t0}), Error);
    CHECK_THROWS_AS(preimage(table, restrict_to(y, interval(0, 3)), {t0}), Error);
}

TEST_CASE("preimage reports the failing step when gluing is impossible") {
    // 0 may only be followed by 0, and 1 only by 1: two tiles with different
    // symbols cannot sit next to each other
    const auto spec = forbid_words(Alphabet::digits(4), {"01", "02", "03", "10", "12", "13", "20", "21", "30", "31"});
    // h_ref overstates the entropy (which is 1) so that gamma = 1.2 is accepted
    const EncoderConfig cfg{2, 1.2, zset({0}), 1.25, box_tiling(GroupKind::Z, {4}),
                            AdmissibilityConfig(GroupKind::Z, AdmissibilityMode::exact1d)};
    const auto table = build_phi(cfg, spec);
    std::vector<TileInstance> tiles;
    for (Coord a : {0, 4}) tiles.push_back(tile_containing(cfg.tiling, z(a)));
    // word rank 0 comes from the all-0 core, word rank 1 from the all-1 core
    const auto y = y_on_tiles(table, tiles, {0, 0, 0, 0, 0, 0, 0, 1});
    try {
        preimage(table, y, tiles);
        FAIL("expected a gluing failure");
    } catch (const PreimageFailure& e) {
        CHECK(e.step == 2);
    }
}

TEST_CASE("product entropy accounting for full shifts") {
    const auto r = product_entropy_estimate(full_shift(GroupKind::Z, 3), box_tiling(GroupKind::Z, {4}), 16,
                                            AdmissibilityConfig(GroupKind::Z));
    CHECK(r.h_x == doctest::Approx(std::log2(3.0)));
    CHECK(r.tiling_rate == doctest::Approx(std::log2(4.0) / 16));
    CHECK(r.h_product == doctest::Approx(r.h_x + r.tiling_rate));
    CHECK(r.h_product == doctest::Approx(std::log2(3.0) + 0.125));
    const auto r2 = product_entropy_estimate(full_shift(GroupKind::Z2, 3), box_tiling(GroupKind::Z2, {2, 2}), 16,
                                             AdmissibilityConfig(GroupKind::Z2));
    CHECK(std::abs(r2.h_product - std::log2(3.0)) < 0.05);
}
