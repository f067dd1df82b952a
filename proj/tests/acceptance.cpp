// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "support.hpp"
#include "symext/cli.hpp"
#include "symext/encoder.hpp"
#include "symext/gluing.hpp"
#include "symext/json_io.hpp"

using namespace symext;
using namespace support;
using nlohmann::json;

namespace {

const AdmissibilityConfig kExact(GroupKind::Z, AdmissibilityMode::exact1d);

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

EncoderConfig full3_z(Coord len, FiniteSubset d) {
    return {2, 1.2, std::move(d), std::log2(3.0), box_tiling(GroupKind::Z, {len}), AdmissibilityConfig(GroupKind::Z)};
}

EncoderConfig no00_config() {
    return {2, 1.5, zset({0, 1}), std::log2(2 + 2 * std::sqrt(2.0)), box_tiling(GroupKind::Z, {8}), kExact};
}

ShiftSpaceSpec no00() { return forbid_words(Alphabet::digits(5), {"00"}); }

EncoderConfig full3_z2() {
    return {2, 1.2, FiniteSubset(GroupKind::Z2, {z2(0, 0)}), std::log2(3.0), box_tiling(GroupKind::Z2, {2, 2}),
            AdmissibilityConfig(GroupKind::Z2)};
}

EncoderConfig full3_h3() {
    return {2, 1.2, FiniteSubset(GroupKind::H3, {h3(0, 0, 0)}), std::log2(3.0), box_tiling(GroupKind::H3, {2, 2, 2}),
            AdmissibilityConfig(GroupKind::H3)};
}

Pattern y_on_tiles(const EncoderTable& table, const std::vector<TileInstance>& tiles, const std::vector<Symbol>& word) {
    std::vector<std::pair<GroupElement, Symbol>> pairs;
    for (const auto& t : tiles)
        for (const auto& s : table.shape(t.shape_index)) pairs.emplace_back(multiply(s, t.anchor), word[pairs.size()]);
    return pattern_from_pairs(table.spec().group, pairs);
}

std::vector<Symbol> random_word(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(0, 1);
    std::vector<Symbol> w(n);
    for (auto& s : w) s = static_cast<Symbol>(d(rng));
    return w;
}

// preimage then encode; counts words that come back unchanged
std::size_t round_trips(const EncoderTable& table, const std::vector<TileInstance>& tiles,
                        const std::vector<std::vector<Symbol>>& words) {
    std::size_t ok = 0;
    for (const auto& w : words) {
        const auto y = y_on_tiles(table, tiles, w);
        try {
            const auto p = preimage(table, y, tiles);
            ok += encode(table, p, y.domain).y == y;
        } catch (const PreimageFailure&) {
        }
    }
    return ok;
}

std::vector<TileInstance> tiles_at(const TilingSpec& spec, const std::vector<GroupElement>& anchors) {
    std::vector<TileInstance> out;
    for (const auto& a : anchors) out.push_back(tile_containing(spec, a));
    return out;
}

Outcome criterion1() {
    Outcome o;
    const double h = entropy_estimate(golden_mean_shift(), 16, kExact);
    o.require(std::abs(h - oracle::kLog2Phi) <= 0.08, fmt("golden n=16 estimate %.5f vs %.5f", h, oracle::kLog2Phi));
    for (auto kind : {GroupKind::Z, GroupKind::Z2})
        for (int l : {2, 3}) {
            const auto spec = full_shift(kind, l);
            const AdmissibilityConfig cfg(kind);
            for (int n = 1; n <= 8; ++n) {
                const auto f = folner_set(kind, n);
                const BigInt expected = boost::multiprecision::pow(BigInt(l), static_cast<unsigned>(f.size()));
                const auto count = count_patterns(spec, f, cfg);
                const double e = entropy_estimate(spec, n, cfg);
                o.require(count == expected && std::abs(e - std::log2(static_cast<double>(l))) <= 1e-12,
                          std::string(to_string(kind)) + " full " + std::to_string(l) + "-shift n=" + std::to_string(n));
            }
        }
    if (o.pass) o.detail = fmt("golden n=16 estimate %.5f, full shifts exact for n <= 8", h);
    return o;
}

Outcome criterion2() {
    Outcome o;
    for (int len = 8; len <= 16; ++len) {
        const auto r = check_counting_bound(golden_mean_shift(), interval(0, len), oracle::kLog2Phi, 0.1, kExact);
        o.require(r.holds, "length " + std::to_string(len));
    }
    if (o.pass) o.detail = "N_T > 2^{(h-0.1)|T|} for lengths 8..16";
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto golden = golden_mean_shift();
    const auto fail = check_gluing_property(golden, zset({0}), interval(0, 8), {}, kExact);
    o.require(fail.verdict == GluingVerdict::fail && fail.witness && fail.witness->a == Pattern(zset({0}), {1}) &&
                  fail.witness->b == Pattern(zset({1}), {1}),
              "D={0} witness");
    std::size_t pairs = 0;
    for (int len = 1; len <= 8; ++len) {
        const auto r = check_gluing_property(golden, zset({0, 1}), interval(0, len), {}, kExact);
        o.require(r.verdict == GluingVerdict::pass && r.pairs_examined == r.pairs_total,
                  "D={0,1} window " + std::to_string(len));
        pairs += r.pairs_examined;
    }
    if (o.pass) o.detail = "D={0} witness ({0},{1},1,1); D={0,1} exhaustive over " + std::to_string(pairs) + " pairs";
    return o;
}

Outcome criterion4() {
    Outcome o;
    const auto cfg = full3_z(8, zset({0, 1}));
    const auto certs = certify_shapes(cfg, full_shift(GroupKind::Z, 3));
    o.require(certs.size() == 1, "one shape");
    if (!o.pass) return o;
    const auto& c = certs[0];
    o.require(c.n1 == 6561, "N1");
    o.require(c.n2 == 2187, "N2");
    o.require(std::abs(c.log2_cond2_threshold - 9.6) < 1e-12, "threshold 2^9.6");
    o.require(c.word_count == 256, "threshold 2^8");
    o.require(c.cond1 && c.cond2 && c.chain, "bounds");
    o.require(rederive_chain(c, cfg, 3), "re-derivation");
    if (o.pass) o.detail = "N1=6561 N2=2187, 2^9.6 and 2^8, chain re-derived";
    return o;
}

Outcome criterion5() {
    Outcome o;
    const auto table = build_phi(full3_z(4, zset({0})), full_shift(GroupKind::Z, 3));
    const auto tiles = tiles_at(table.config().tiling, {z(0), z(4), z(8)});
    std::vector<std::vector<Symbol>> words;
    oracle::for_each_word(12, 2, [&](const std::vector<Symbol>& w) { words.push_back(w); });
    const auto ok = round_trips(table, tiles, words);
    o.require(ok == 4096, std::to_string(ok) + "/4096 round trips");
    if (o.pass) o.detail = "4096/4096 words over 3 tiles";
    return o;
}

Outcome criterion6() {
    Outcome o;
    const auto cfg = no00_config();
    const auto spec = no00();
    const auto g = check_gluing_property(spec, cfg.distance, interval(0, 8), {}, kExact);
    o.require(g.verdict == GluingVerdict::pass && g.pairs_examined == g.pairs_total, "gluing search");
    const auto table = build_phi(cfg, spec);
    const auto tiles = tiles_at(cfg.tiling, {z(0), z(8)});
    std::mt19937_64 rng(6);
    std::vector<std::vector<Symbol>> words;
    for (int i = 0; i < 200; ++i) words.push_back(random_word(rng, 16));
    const auto ok = round_trips(table, tiles, words);
    o.require(ok == 200, std::to_string(ok) + "/200 round trips");
    if (o.pass)
        o.detail = "gluing exhaustive on a length-8 window (" + std::to_string(g.pairs_total) +
                   " pairs), 200/200 round trips";
    return o;
}

Outcome criterion7() {
    Outcome o;
    const auto table = build_phi(full3_z2(), full_shift(GroupKind::Z2, 3));
    const auto& tiling = table.config().tiling;
    std::vector<std::vector<Symbol>> words;
    oracle::for_each_word(4, 2, [&](const std::vector<Symbol>& w) { words.push_back(w); });
    const auto one = round_trips(table, tiles_at(tiling, {z2(0, 0)}), words);
    o.require(one == 16, std::to_string(one) + "/16 on one tile");
    std::mt19937_64 rng(7);
    words.clear();
    for (int i = 0; i < 100; ++i) words.push_back(random_word(rng, 16));
    const auto four = round_trips(table, tiles_at(tiling, {z2(0, 0), z2(0, 2), z2(2, 0), z2(2, 2)}), words);
    o.require(four == 100, std::to_string(four) + "/100 on 2x2 tiles");
    std::size_t equal = 0;
    for (const auto& s : sample_equivariance(table, box(GroupKind::Z2, {4, 4}), 100, 6, rng)) equal += s.result.equal;
    o.require(equal == 100, std::to_string(equal) + "/100 equivariance samples");
    if (o.pass) o.detail = "16/16 one tile, 100/100 on 2x2 tiles, 100/100 equivariance samples";
    return o;
}

Outcome criterion8() {
    Outcome o;
    struct System {
        std::string name;
        EncoderConfig cfg;
        ShiftSpaceSpec spec;
        FiniteSubset window;
        Coord radius;
    };
    const std::vector<System> systems{
        {"Z full3 tile4", full3_z(4, zset({0})), full_shift(GroupKind::Z, 3), interval(0, 16), 12},
        {"Z full3 tile8", full3_z(8, zset({0, 1})), full_shift(GroupKind::Z, 3), interval(0, 24), 12},
        {"Z no00 tile8", no00_config(), no00(), interval(0, 24), 12},
        {"Z2 full3 2x2", full3_z2(), full_shift(GroupKind::Z2, 3), box(GroupKind::Z2, {4, 4}), 6},
        {"H3 full3 2x2x2", full3_h3(), full_shift(GroupKind::H3, 3), box(GroupKind::H3, {4, 4, 4}), 5}};
    std::mt19937_64 rng(8);
    std::string summary;
    for (const auto& s : systems) {
        const auto table = build_phi(s.cfg, s.spec);
        std::size_t equal = 0, off_lattice = 0;
        for (const auto& r : sample_equivariance(table, s.window, 100, s.radius, rng)) {
            equal += r.result.equal;
            const auto t = shift_tiling(s.cfg.tiling, r.tiling_shift);
            off_lattice += !(shift_tiling(t, r.g) == t);
        }
        o.require(equal == 100, s.name + " " + std::to_string(equal) + "/100");
        o.require(off_lattice > 0, s.name + " has no partial-tile shift");
        if (!summary.empty()) summary += ", ";
        summary += s.name + " " + std::to_string(off_lattice) + " off-lattice";
    }
    if (o.pass) o.detail = "100/100 per system (" + summary + ")";
    return o;
}

Outcome criterion9() {
    Outcome o;
    const std::vector<std::pair<std::string, TilingSpec>> tilings{
        {"Z [0,4)", box_tiling(GroupKind::Z, {4})},
        {"Z [0,8)", box_tiling(GroupKind::Z, {8})},
        {"Z cycle 4,5",
         TilingSpec(ShapeFamily(GroupKind::Z, {interval(0, 4), interval(0, 5)}), Placement::cycle, z(0))},
        {"Z2 2x2", box_tiling(GroupKind::Z2, {2, 2})},
        {"Z3 2x2x2", box_tiling(GroupKind::Z3, {2, 2, 2})},
        {"H3 2x2x2", box_tiling(GroupKind::H3, {2, 2, 2})}};
    std::string rates;
    for (const auto& [name, spec] : tilings) {
        const auto c = tiling_complexity(spec, 16);
        const double rate =
            std::log2(static_cast<double>(c.back())) / static_cast<double>(folner_set(spec.group(), 16).size());
        o.require(rate < 0.05, name + fmt(" rate %.4f", rate));
        if (!rates.empty()) rates += ", ";
        rates += name + fmt(" %.4f", rate);
    }
    const std::vector<std::pair<std::string, EncoderConfig>> configs{
        {"Z full3 tile4", full3_z(4, zset({0}))}, {"Z full3 tile8", full3_z(8, zset({0, 1}))}, {"Z2 full3", full3_z2()}};
    for (const auto& [name, cfg] : configs) {
        const auto r = product_entropy_estimate(full_shift(cfg.tiling.group(), 3), cfg.tiling, 16,
                                                AdmissibilityConfig(cfg.tiling.group()));
        o.require(std::abs(r.h_product - cfg.h_ref) <= 0.05, name + fmt(" product %.4f vs %.4f", r.h_product, cfg.h_ref));
    }
    if (o.pass) o.detail = "rates at n=16: " + rates;
    return o;
}

std::string run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return std::to_string(code) + "\n" + out.str();
}

std::string table_arg(const std::string& built) {
    auto j = json::parse(built.substr(built.find('\n') + 1));
    j.erase("manifest");
    return j.dump();
}

Outcome criterion10() {
    Outcome o;
    const std::string full3 = R"({"group":"Z","alphabet":["1","2","3"]})";
    const std::string full3z2 = R"({"group":"Z2","alphabet":["1","2","3"]})";
    const std::string no00j = json_io::to_json(no00()).dump();
    const std::string t4 = R"({"group":"Z","shapes":[[0,1,2,3]]})";
    const std::string t8 = R"({"group":"Z","shapes":[[0,1,2,3,4,5,6,7]]})";
    const std::string sq = R"({"group":"Z2","shapes":[[[0,0],[0,1],[1,0],[1,1]]]})";

    const std::vector<std::pair<std::string, std::function<std::string()>>> runs{
        {"certify",
         [&] {
             return run_cli({"certify", "--sft", full3, "--tiling", t8, "--distance", "{0,1}", "--k", "2", "--gamma",
                             "1.2"});
         }},
        {"surjectivity Z",
         [&] {
             const auto b = run_cli({"build-encoder", "--sft", full3, "--tiling", t4, "--distance", "{0}", "--k", "2",
                                     "--gamma", "1.2", "--seed", "5"});
             return b + run_cli({"preimage", "--table", table_arg(b), "--word", "121122211121", "--tiles", "3"});
         }},
        {"no00",
         [&] {
             const auto g = run_cli({"check-gluing", "--sft", no00j, "--mode", "exact1d", "--distance", "{0,1}",
                                     "--window", "{0..7}"});
             const auto b = run_cli({"build-encoder", "--sft", no00j, "--mode", "exact1d", "--tiling", t8,
                                     "--distance", "{0,1}", "--k", "2", "--gamma", "1.5", "--seed", "6"});
             return g + b +
                    run_cli({"preimage", "--table", table_arg(b), "--word", "1211222111212221", "--tiles", "2"}) +
                    run_cli({"check-equivariance", "--table", table_arg(b), "--n", "24", "--samples", "20", "--seed",
                             "6"});
         }},
        {"Z2",
         [&] {
             const auto b = run_cli({"build-encoder", "--sft", full3z2, "--tiling", sq, "--distance", "{(0,0)}", "--k",
                                     "2", "--gamma", "1.2", "--seed", "7"});
             return b +
                    run_cli({"preimage", "--table", table_arg(b), "--word", "1211222111212221", "--tiles",
                             "[[0,0],[0,2],[2,0],[2,2]]"}) +
                    run_cli({"check-equivariance", "--table", table_arg(b), "--n", "4", "--samples", "100", "--seed",
                             "7"});
         }}};
    for (const auto& [name, f] : runs) {
        const auto a = f();
        const auto b = f();
        o.require(a == b, name + " differs between runs");
        o.require(a.rfind("0\n", 0) == 0, name + " did not exit 0");
    }
    if (o.pass) o.detail = "certify, build-encoder, preimage, check-gluing, check-equivariance byte-identical";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
