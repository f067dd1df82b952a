#include "symext/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "symext/encoder.hpp"
#include "symext/gluing.hpp"
#include "symext/json_io.hpp"
#include "symext/shift_space.hpp"
#include "symext/tiling.hpp"

#ifndef SYMEXT_VERSION
#define SYMEXT_VERSION "0.0.0"
#endif

namespace symext::cli {

namespace {

using nlohmann::json;
namespace jio = symext::json_io;

class InputError : public Error {
public:
    using Error::Error;
};

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

class ShorthandParser {
public:
    ShorthandParser(std::string_view text, GroupKind kind) : t_(text), kind_(kind) {}

    FiniteSubset parse() {
        skip();
        expect('{');
        std::vector<GroupElement> out;
        skip();
        if (peek() == '}') {
            ++pos_;
        } else {
            for (;;) {
                item(out);
                skip();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                expect('}');
                break;
            }
        }
        skip();
        if (pos_ != t_.size()) fail("unexpected trailing characters");
        return FiniteSubset(kind_, std::move(out));
    }

private:
    char peek() const { return pos_ < t_.size() ? t_[pos_] : '\0'; }
    void skip() {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(msg + " at column " + std::to_string(pos_ + 1) + " of '" + std::string(t_) + "'");
    }
    void expect(char c) {
        skip();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    Coord integer() {
        skip();
        const std::size_t start = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        const char* first = t_.data() + start + (t_[start] == '+' ? 1 : 0);
        Coord v = 0;
        auto [ptr, ec] = std::from_chars(first, t_.data() + pos_, v);
        if (ec != std::errc() || ptr != t_.data() + pos_ || pos_ == start) {
            pos_ = start;
            fail("expected an integer");
        }
        return v;
    }

    void item(std::vector<GroupElement>& out) {
        skip();
        const int d = dimension(kind_);
        if (peek() == '(') {
            ++pos_;
            std::vector<Coord> c{integer()};
            skip();
            while (peek() == ',') {
                ++pos_;
                c.push_back(integer());
                skip();
            }
            if (static_cast<int>(c.size()) != d)
                fail("element needs " + std::to_string(d) + " coordinates in group " + std::string(to_string(kind_)));
            expect(')');
            out.emplace_back(kind_, std::span<const Coord>(c));
            return;
        }
        if (d != 1) fail("elements of " + std::string(to_string(kind_)) + " are written as tuples like (0,1)");
        const Coord a = integer();
        skip();
        if (t_.substr(pos_, 2) == "..") {
            pos_ += 2;
            const Coord b = integer();
            if (b < a) fail("empty range");
            if (b - a > 1'000'000) fail("range too long");
            for (Coord v = a; v <= b; ++v) out.push_back(GroupElement(kind_, {v}));
            return;
        }
        out.push_back(GroupElement(kind_, {a}));
    }

    std::string_view t_;
    GroupKind kind_;
    std::size_t pos_ = 0;
};

struct Options {
    std::string sft, group, tiling, distance, window, margin, mode, table, point, word, tiles, shift, output;
    std::optional<int> n, k;
    std::optional<double> gamma, h_ref;
    double eps = 0.1;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::size_t max_size = 8;
    std::size_t max_pairs = 0;
    std::size_t samples = 100;
    std::size_t limit = 1000;
    std::uint64_t extensional_limit = 4096;
    Coord radius = 16;
    bool timing = false;
};

json tiles_to_json(const std::vector<TileInstance>& tiles) {
    json out = json::array();
    for (const auto& t : tiles)
        out.push_back({{"shape_index", t.shape_index}, {"anchor", jio::to_json(t.anchor)}, {"contained", t.contained}});
    return out;
}

class Command {
public:
    Command(std::string name, const Options& o) : name_(std::move(name)), o_(o) {}

    const std::string& name() const { return name_; }
    json& inputs() { return inputs_; }
    const std::optional<AdmissibilityMode>& mode_used() const { return mode_used_; }

    int execute(json& res) {
        if (name_ == "entropy") return entropy(res);
        if (name_ == "blocks") return blocks(res);
        if (name_ == "check-gluing") return check_gluing(res);
        if (name_ == "make-tiling") return make_tiling(res);
        if (name_ == "certify") return certify(res);
        if (name_ == "build-encoder") return build_encoder(res);
        if (name_ == "encode") return encode_cmd(res);
        if (name_ == "preimage") return preimage_cmd(res);
        if (name_ == "check-equivariance") return check_equivariance_cmd(res);
        throw InputError("unknown command '" + name_ + "'");
    }

private:
    static const std::string& require(const std::string& v, const char* flag) {
        if (v.empty()) throw InputError(std::string(flag) + " is required");
        return v;
    }
    template <class T>
    static T require(const std::optional<T>& v, const char* flag) {
        if (!v) throw InputError(std::string(flag) + " is required");
        return *v;
    }

    // Inline text if it looks like JSON or shorthand, otherwise a file path.
    std::string load(const char* flag, const std::string& value) {
        const auto t = trim(value);
        std::string text, source;
        if (!t.empty() && (t.front() == '{' || t.front() == '[' || t.front() == '(' || t.front() == '-' ||
                           std::isdigit(static_cast<unsigned char>(t.front())))) {
            text = std::string(t);
            source = "inline";
        } else {
            std::ifstream in{std::string(t), std::ios::binary};
            if (!in) throw InputError(std::string(flag) + ": cannot read file '" + std::string(t) + "'");
            std::ostringstream ss;
            ss << in.rdbuf();
            text = ss.str();
            source = std::string(t);
        }
        inputs_[flag] = {{"source", source}, {"sha256", sha256_hex(text)}};
        return text;
    }

    json load_json(const char* flag, const std::string& value) {
        const auto text = load(flag, value);
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw InputError(std::string(flag) + ": malformed JSON: " + e.what());
        }
    }

    template <class F>
    auto decode(const char* flag, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const json::exception& e) {
            throw InputError(std::string(flag) + ": " + e.what());
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            throw InputError(std::string(flag) + ": " + e.what());
        }
    }

    FiniteSubset subset(const char* flag, const std::string& value, GroupKind kind) {
        const auto text = load(flag, value);
        return decode(flag, [&] { return parse_subset(text, kind); });
    }

    GroupElement element(const char* flag, const std::string& value, GroupKind kind) {
        const auto text = std::string(trim(load(flag, value)));
        return decode(flag, [&] {
            if (!text.empty() && text.front() == '(') {
                const auto s = parse_subset("{" + text + "}", kind);
                return s[0];
            }
            return jio::element_from_json(json::parse(text), kind);
        });
    }

    ShiftSpaceSpec sft() {
        const auto j = load_json("--sft", require(o_.sft, "--sft"));
        return decode("--sft", [&] { return jio::sft_from_json(j); });
    }

    std::optional<GroupKind> explicit_group() {
        if (o_.group.empty()) return std::nullopt;
        return decode("--group", [&] { return parse_group_kind(o_.group); });
    }

    TilingSpec tiling(std::optional<GroupKind> fallback) {
        const auto j = load_json("--tiling", require(o_.tiling, "--tiling"));
        if (!fallback) fallback = explicit_group();
        return decode("--tiling", [&] { return jio::tiling_from_json(j, fallback); });
    }

    EncoderTable table() {
        const auto j = load_json("--table", require(o_.table, "--table"));
        auto t = decode("--table", [&] { return jio::table_from_json(j); });
        mode_used_ = t.config().admissibility.mode;
        return t;
    }

    AdmissibilityConfig admissibility(GroupKind kind) {
        AdmissibilityMode mode = AdmissibilityMode::local;
        if (!o_.mode.empty()) mode = parse_mode(o_.mode);
        else if (!o_.margin.empty()) mode = AdmissibilityMode::margin;
        mode_used_ = mode;
        if (!o_.margin.empty()) {
            auto m = subset("--margin", o_.margin, kind);
            return decode("--margin", [&] { return AdmissibilityConfig(mode, std::move(m)); });
        }
        return AdmissibilityConfig(kind, mode);
    }

    FiniteSubset window_or_folner(GroupKind kind) {
        if (!o_.window.empty()) return subset("--window", o_.window, kind);
        if (o_.n) return folner_set(kind, *o_.n);
        throw InputError("--window (or --n for the Følner set F_n) is required");
    }

    int entropy(json& res) {
        const auto spec = sft();
        const int n = require(o_.n, "--n");
        const auto cfg = admissibility(spec.group);
        const auto r = entropy_report(spec, n, cfg);
        res = {{"n", r.n},
               {"domain_size", r.domain_size},
               {"count", to_string(r.count)},
               {"log2_count", log2_big(r.count)},
               {"h_estimate", r.h_estimate},
               {"mode", std::string(to_string(r.mode))}};
        if (spec.forbidden.empty()) res["h_exact"] = std::log2(static_cast<double>(spec.alphabet.size()));
        else if (spec.group == GroupKind::Z && is_memory_one(spec)) res["h_transfer_matrix"] = transfer_matrix_entropy(spec);
        return kExitOk;
    }

    int blocks(json& res) {
        const auto spec = sft();
        const auto cfg = admissibility(spec.group);
        const auto domain = window_or_folner(spec.group);
        const PatternSpace space(spec, domain, cfg);
        const auto count = space.count();
        res = {{"domain", jio::to_json(domain)}, {"count", to_string(count)}, {"mode", std::string(to_string(cfg.mode))}};
        if (count <= o_.limit) {
            json pats = json::array();
            space.for_each([&](std::span<const Symbol> v) {
                json p = json::array();
                for (auto s : v) p.push_back(spec.alphabet.token(s));
                pats.push_back(std::move(p));
                return true;
            });
            res["patterns"] = std::move(pats);
        } else {
            res["patterns_omitted"] = true;
        }
        if (o_.h_ref) {
            const auto b = check_counting_bound(spec, domain, *o_.h_ref, o_.eps, cfg);
            res["counting_bound"] = {{"count", to_string(b.count)}, {"bound", b.bound},
                                     {"log2_count", b.log2_count}, {"log2_bound", b.log2_bound},
                                     {"h_ref", *o_.h_ref},         {"eps", o_.eps},
                                     {"holds", b.holds}};
            if (!b.holds) return kExitVerificationFailed;
        }
        return kExitOk;
    }

    int check_gluing(json& res) {
        const auto spec = sft();
        const auto cfg = admissibility(spec.group);
        const auto d = subset("--distance", require(o_.distance, "--distance"), spec.group);
        const auto w = subset("--window", require(o_.window, "--window"), spec.group);
        const auto r = check_gluing_property(spec, d, w, {o_.max_size, o_.max_pairs}, cfg, o_.jobs);
        res = jio::to_json(r, spec.alphabet);
        res["distance"] = jio::to_json(d);
        return r.verdict == GluingVerdict::fail ? kExitVerificationFailed : kExitOk;
    }

    int make_tiling(json& res) {
        auto t = tiling(std::nullopt);
        const GroupKind kind = t.group();
        if (!o_.shift.empty()) t = shift_tiling(t, element("--shift", o_.shift, kind));
        const auto w = window_or_folner(kind);
        const auto tiles = tiles_in_window(t, w);
        const auto x = encode_tiling_point(t, w);
        json symbols = json::array();
        for (auto v : x.values) symbols.push_back(v);
        res = {{"tiling", jio::to_json(t)},
               {"tiles", tiles_to_json(tiles)},
               {"x_T", {{"domain", jio::to_json(x.domain)}, {"symbols", symbols}}}};
        if (!o_.distance.empty()) {
            json inv = json::array();
            for (const auto& r : shape_invariance_report(t.family, subset("--distance", o_.distance, kind)))
                inv.push_back(jio::to_json(r));
            res["shape_invariance"] = std::move(inv);
        }
        if (o_.n) {
            const auto c = tiling_complexity(t, *o_.n);
            res["complexity"] = c;
            res["complexity_rate"] = std::log2(static_cast<double>(c.back())) /
                                     static_cast<double>(folner_set(kind, *o_.n).size());
        }
        return kExitOk;
    }

    std::pair<EncoderConfig, ShiftSpaceSpec> encoder_inputs(json& res) {
        auto spec = sft();
        auto t = tiling(spec.group);
        auto d = subset("--distance", require(o_.distance, "--distance"), spec.group);
        auto cfg = admissibility(spec.group);
        double h_ref = 0.0;
        std::string source;
        if (o_.h_ref) {
            h_ref = *o_.h_ref;
            source = "given";
        } else if (spec.forbidden.empty()) {
            h_ref = std::log2(static_cast<double>(spec.alphabet.size()));
            source = "full-shift";
        } else if (spec.group == GroupKind::Z && is_memory_one(spec)) {
            h_ref = transfer_matrix_entropy(spec);
            source = "transfer-matrix";
        } else {
            throw InputError("--h-ref is required for this shift space");
        }
        res["h_ref"] = h_ref;
        res["h_ref_source"] = source;
        EncoderConfig config{require(o_.k, "--k"), require(o_.gamma, "--gamma"), std::move(d), h_ref, std::move(t),
                             std::move(cfg)};
        decode("--gamma", [&] {
            config.validate();
            return 0;
        });
        return {std::move(config), std::move(spec)};
    }

    int certify(json& res) {
        const auto [config, spec] = encoder_inputs(res);
        const auto certs = certify_shapes(config, spec);
        json list = json::array();
        bool ok = true;
        for (const auto& c : certs) {
            auto j = jio::to_json(c);
            j["rederived"] = rederive_chain(c, config, spec.alphabet.size());
            ok = ok && c.chain && j["rederived"].get<bool>();
            list.push_back(std::move(j));
        }
        res["certificates"] = std::move(list);
        res["k"] = config.k;
        res["gamma"] = config.gamma;
        res["all_chain"] = ok;
        return ok ? kExitOk : kExitVerificationFailed;
    }

    int build_encoder(json& res) {
        auto [config, spec] = encoder_inputs(res);
        try {
            const auto table = build_phi(config, spec);
            auto out = jio::table_to_json(table, o_.extensional_limit);
            bool surjective = true;
            for (std::size_t j = 0; j < table.shape_count(); ++j) {
                if (table.certificates()[j].n2 > o_.extensional_limit) continue;
                const auto img = table.image_size(j, BigInt(o_.extensional_limit));
                out["shapes"][j]["image_size"] = to_string(img);
                surjective = surjective && img == table.certificates()[j].word_count;
            }
            out["h_ref_source"] = res["h_ref_source"];
            res = std::move(out);
            return surjective ? kExitOk : kExitVerificationFailed;
        } catch (const ConstructionRefused& e) {
            json list = json::array();
            for (const auto& c : e.certificates) list.push_back(jio::to_json(c));
            res["refused"] = e.what();
            res["certificates"] = std::move(list);
            return kExitVerificationFailed;
        }
    }

    ProductPoint point(const EncoderTable& table) {
        const auto j = load_json("--point", require(o_.point, "--point"));
        return decode("--point", [&] {
            const auto& spec = table.spec();
            auto x = jio::pattern_from_json(j.at("x"), spec.group, spec.alphabet);
            if (j.contains("tiling")) return ProductPoint{std::move(x), jio::tiling_from_json(j.at("tiling"), spec.group)};
            return ProductPoint{std::move(x), table.config().tiling};
        });
    }

    int encode_cmd(json& res) {
        const auto table = this->table();
        const auto p = point(table);
        const auto w = o_.window.empty() ? p.x.domain : subset("--window", o_.window, table.spec().group);
        const auto r = encode(table, p, w);
        res = {{"y", jio::output_pattern_to_json(r.y, table.config().k)},
               {"uncovered", jio::to_json(r.uncovered)},
               {"tiles", tiles_to_json(r.tiles)}};
        return kExitOk;
    }

    std::vector<TileInstance> select_tiles(const TilingSpec& t) {
        const auto text = std::string(trim(load("--tiles", require(o_.tiles, "--tiles"))));
        const GroupKind kind = t.group();
        if (!text.empty() && text.front() == '[') {
            return decode("--tiles", [&] {
                std::vector<TileInstance> out;
                for (const auto& a : json::parse(text)) {
                    const auto anchor = jio::element_from_json(a, kind);
                    auto tile = tile_containing(t, anchor);
                    if (tile.anchor != anchor) throw InputError("no tile is anchored at " + anchor.str());
                    tile.contained = true;
                    out.push_back(tile);
                }
                return out;
            });
        }
        std::size_t count = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), count);
        if (ec != std::errc() || ptr != text.data() + text.size() || count == 0)
            throw InputError("--tiles: expected a positive tile count or a JSON array of anchors");
        std::vector<TileInstance> out;
        if (!o_.window.empty()) {
            for (const auto& tile : tiles_in_window(t, subset("--window", o_.window, kind)))
                if (tile.contained && out.size() < count) out.push_back(tile);
            if (out.size() < count) throw InputError("--tiles: the window contains fewer tiles than requested");
            return out;
        }
        // walk along the first coordinate starting at the tile containing e
        auto site = GroupElement::identity(kind);
        for (std::size_t i = 0; i < count; ++i) {
            auto tile = tile_containing(t, site);
            tile.contained = true;
            out.push_back(tile);
            const auto& shape = t.family[tile.shape_index];
            std::array<Coord, 3> c{};
            for (int a = 0; a < dimension(kind); ++a) c[a] = tile.anchor[a];
            c[0] += shape.max()[0] + 1;
            site = GroupElement(kind, std::span<const Coord>(c.data(), dimension(kind)));
        }
        return out;
    }

    int preimage_cmd(json& res) {
        const auto table = this->table();
        const int k = table.config().k;
        const auto tiles = select_tiles(table.config().tiling);
        const auto word_text = std::string(trim(load("--word", require(o_.word, "--word"))));
        const auto word = decode("--word", [&] {
            return jio::word_from_json(word_text.front() == '[' ? json::parse(word_text) : json(word_text), k);
        });
        std::vector<std::pair<GroupElement, Symbol>> pairs;
        const auto& family = table.config().tiling.family;
        for (const auto& tile : tiles)
            for (const auto& s : family[tile.shape_index]) {
                if (pairs.size() == word.size())
                    throw InputError("--word: " + std::to_string(word.size()) + " symbols do not cover the tiles");
                pairs.emplace_back(multiply(s, tile.anchor), word[pairs.size()]);
            }
        if (pairs.size() != word.size())
            throw InputError("--word: " + std::to_string(word.size()) + " symbols for " +
                             std::to_string(pairs.size()) + " tile sites");
        const auto y = pattern_from_pairs(table.spec().group, std::move(pairs));
        res["tiles"] = tiles_to_json(tiles);
        res["y"] = jio::output_pattern_to_json(y, k);
        try {
            const auto p = preimage(table, y, tiles);
            const auto again = encode(table, p, y.domain);
            const bool ok = again.y == y;
            res["point"] = jio::to_json(p, table.spec().alphabet);
            res["reencoded"] = jio::output_pattern_to_json(again.y, k);
            res["round_trip"] = ok;
            return ok ? kExitOk : kExitVerificationFailed;
        } catch (const PreimageFailure& e) {
            res["failure"] = {{"step", e.step}, {"message", e.what()}};
            return kExitVerificationFailed;
        }
    }

    int check_equivariance_cmd(json& res) {
        const auto table = this->table();
        const GroupKind kind = table.spec().group;
        if (!o_.point.empty()) {
            const auto p = point(table);
            const auto g = element("--shift", require(o_.shift, "--shift"), kind);
            const auto w = o_.window.empty() ? right_translate(p.x.domain, inverse(g)) : subset("--window", o_.window, kind);
            const auto r = check_equivariance(table, p, g, w);
            res = {{"g", jio::to_json(g)}, {"equal", r.equal}, {"sites_compared", r.sites_compared}};
            if (r.first_mismatch) res["first_mismatch"] = jio::to_json(*r.first_mismatch);
            return r.equal ? kExitOk : kExitVerificationFailed;
        }
        const auto w = window_or_folner(kind);
        std::mt19937_64 rng(o_.seed);
        const auto samples = sample_equivariance(table, w, o_.samples, o_.radius, rng);
        json list = json::array();
        bool all = true;
        for (const auto& s : samples) {
            json j = {{"g", jio::to_json(s.g)},
                      {"tiling_shift", jio::to_json(s.tiling_shift)},
                      {"equal", s.result.equal},
                      {"sites_compared", s.result.sites_compared}};
            if (s.result.first_mismatch) j["first_mismatch"] = jio::to_json(*s.result.first_mismatch);
            all = all && s.result.equal;
            list.push_back(std::move(j));
        }
        res = {{"window", jio::to_json(w)}, {"samples", list}, {"all_equal", all}};
        return all ? kExitOk : kExitVerificationFailed;
    }

    std::string name_;
    const Options& o_;
    json inputs_ = json::object();
    std::optional<AdmissibilityMode> mode_used_;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--output", o.output, "write the JSON result to this file");
    sub->add_option("--seed", o.seed, "seed for sampling-based checks");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", o.timing, "record wall time in the manifest");
}

void add_sft(CLI::App* sub, Options& o, bool required) {
    auto* opt = sub->add_option("--sft", o.sft, "shift space (JSON file or inline JSON)");
    if (required) opt->required();
    sub->add_option("--mode", o.mode, "admissibility mode")->check(CLI::IsMember({"local", "margin", "exact1d"}));
    sub->add_option("--margin", o.margin, "margin set for margin mode");
}

}  // namespace

FiniteSubset parse_subset(std::string_view text, GroupKind kind) {
    const auto t = trim(text);
    if (!t.empty() && t.front() == '{') return ShorthandParser(t, kind).parse();
    json j;
    try {
        j = json::parse(t);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    return json_io::subset_from_json(j, kind);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    Options o;
    CLI::App app{"Symbolic extensions onto full shifts"};
    app.name("symext");
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", SYMEXT_VERSION);

    auto* entropy = app.add_subcommand("entropy", "entropy estimate (1/|F_n|) log2 N_{F_n}");
    add_sft(entropy, o, true);
    entropy->add_option("--n", o.n, "Følner index")->required()->check(CLI::PositiveNumber);

    auto* blocks = app.add_subcommand("blocks", "admissible patterns on a window, optional counting bound");
    add_sft(blocks, o, true);
    blocks->add_option("--window", o.window, "domain T");
    blocks->add_option("--n", o.n, "use F_n as the domain")->check(CLI::PositiveNumber);
    blocks->add_option("--h-ref", o.h_ref, "entropy reference for the counting bound");
    blocks->add_option("--eps", o.eps, "slack in 2^{(h_ref - eps)|T|}");
    blocks->add_option("--limit", o.limit, "list patterns only up to this count");

    auto* gluing = app.add_subcommand("check-gluing", "bounded search for gluing counterexamples");
    add_sft(gluing, o, true);
    gluing->add_option("--distance", o.distance, "gluing distance D")->required();
    gluing->add_option("--window", o.window, "window W")->required();
    gluing->add_option("--max-size", o.max_size, "bound on |T1|+|T2|");
    gluing->add_option("--max-pairs", o.max_pairs, "bound on examined pairs (0 = none)");

    auto* tiling = app.add_subcommand("make-tiling", "tiles and x_T on a window");
    tiling->add_option("--tiling", o.tiling, "tiling spec")->required();
    tiling->add_option("--group", o.group, "group, when the tiling spec has none");
    tiling->add_option("--window", o.window, "window W");
    tiling->add_option("--n", o.n, "F_n window and complexity bound")->check(CLI::PositiveNumber);
    tiling->add_option("--distance", o.distance, "K for the shape invariance report");
    tiling->add_option("--shift", o.shift, "report g·T instead of T");

    auto add_encoder = [&](CLI::App* sub) {
        add_sft(sub, o, true);
        sub->add_option("--tiling", o.tiling, "tiling spec")->required();
        sub->add_option("--distance", o.distance, "gluing distance D")->required();
        sub->add_option("--k", o.k, "target alphabet size")->required();
        sub->add_option("--gamma", o.gamma, "gamma with 1 < gamma < h/log2 k")->required();
        sub->add_option("--h-ref", o.h_ref, "entropy of X (defaults for full shifts and memory-one Z SFTs)");
    };
    auto* certify = app.add_subcommand("certify", "shape certificates for the counting chain");
    add_encoder(certify);
    auto* build = app.add_subcommand("build-encoder", "build the phi_S table");
    add_encoder(build);
    build->add_option("--extensional-limit", o.extensional_limit, "list core patterns up to this count");

    auto* encode = app.add_subcommand("encode", "apply the factor map on a window");
    encode->add_option("--table", o.table, "encoder table")->required();
    encode->add_option("--point", o.point, "product point {\"x\": pattern, \"tiling\": ...}")->required();
    encode->add_option("--window", o.window, "window W (default: domain of x)");

    auto* pre = app.add_subcommand("preimage", "construct a preimage of a word on consecutive tiles");
    pre->add_option("--table", o.table, "encoder table")->required();
    pre->add_option("--word", o.word, "output word, e.g. 1112 or [1,1,1,2]")->required();
    pre->add_option("--tiles", o.tiles, "tile count or JSON array of anchors")->required();
    pre->add_option("--window", o.window, "take the tiles contained in this window");

    auto* equi = app.add_subcommand("check-equivariance", "compare phi(g x) with the shifted phi(x)");
    equi->add_option("--table", o.table, "encoder table")->required();
    equi->add_option("--point", o.point, "single product point (otherwise sampled)");
    equi->add_option("--shift", o.shift, "g for a single point");
    equi->add_option("--window", o.window, "window W");
    equi->add_option("--n", o.n, "use F_n as the window")->check(CLI::PositiveNumber);
    equi->add_option("--samples", o.samples, "number of sampled (g, point) pairs");
    equi->add_option("--radius", o.radius, "coordinates of g and tiling shifts lie in [-radius, radius]");

    for (auto* sub : {entropy, blocks, gluing, tiling, certify, build, encode, pre, equi}) add_common(sub, o);

    auto fail_json = [&](const std::string& kind, const std::string& msg) {
        err << "symext: " << msg << "\n";
        out << json{{"error", {{"kind", kind}, {"message", msg}}}}.dump(2) << "\n";
        return kExitUsage;
    };

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail_json("usage", e.what());
    }

    CLI::App* sub = app.get_subcommands().front();
    Command cmd(sub->get_name(), o);
    json res = json::object();
    int code = kExitOk;
    try {
        code = cmd.execute(res);
    } catch (const InputError& e) {
        return fail_json("input", e.what());
    } catch (const json::exception& e) {
        return fail_json("input", e.what());
    } catch (const Error& e) {
        return fail_json("input", e.what());
    }

    json manifest = {{"command", cmd.name()},
                     {"version", SYMEXT_VERSION},
                     {"ranking_version", std::string(kRankingVersion)},
                     {"seed", o.seed},
                     {"inputs", cmd.inputs()}};
    json arguments = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        const auto& r = opt->results();
        arguments[opt->get_name()] = r.size() == 1 ? json(r.front()) : json(r);
    }
    manifest["arguments"] = std::move(arguments);
    manifest["mode"] = cmd.mode_used() ? json(std::string(to_string(*cmd.mode_used()))) : json(nullptr);
    if (o.timing)
        manifest["wall_time_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    res["manifest"] = std::move(manifest);
    if (code != kExitOk) res["status"] = "verification_failed";

    const auto text = res.dump(2) + "\n";
    if (!o.output.empty()) {
        std::ofstream f(o.output, std::ios::binary);
        if (!f) return fail_json("input", "cannot write --output file '" + o.output + "'");
        f << text;
    } else {
        out << text;
    }
    return code;
}

}  // namespace symext::cli
