#include "symext/json_io.hpp"

#include <cmath>

namespace symext::json_io {

namespace {

void expect(bool ok, const std::string& what) {
    if (!ok) throw Error("invalid JSON: " + what);
}

const json& field(const json& j, const char* name) {
    expect(j.is_object() && j.contains(name), std::string("missing field \"") + name + "\"");
    return j.at(name);
}

std::string token_of(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw Error("invalid JSON: alphabet symbols must be strings or integers");
}

}  // namespace

GroupKind group_from_json(const json& j) {
    if (j.is_object()) return group_from_json(field(j, "group"));
    expect(j.is_string(), "group must be a string");
    return parse_group_kind(j.get<std::string>());
}

json to_json(GroupKind kind) { return std::string(to_string(kind)); }

GroupElement element_from_json(const json& j, GroupKind kind) {
    std::vector<Coord> c;
    if (j.is_number_integer()) {
        c.push_back(j.get<Coord>());
    } else {
        expect(j.is_array(), "group element must be an integer array");
        for (const auto& v : j) {
            expect(v.is_number_integer(), "group element coordinates must be integers");
            c.push_back(v.get<Coord>());
        }
    }
    expect(static_cast<int>(c.size()) == dimension(kind),
           "element " + j.dump() + " needs " + std::to_string(dimension(kind)) + " coordinates");
    return GroupElement(kind, std::span<const Coord>(c));
}

json to_json(const GroupElement& g) {
    json out = json::array();
    for (auto c : g.coords()) out.push_back(c);
    return out;
}

FiniteSubset subset_from_json(const json& j, GroupKind kind) {
    expect(j.is_array(), "finite subset must be an array of elements");
    std::vector<GroupElement> e;
    for (const auto& v : j) e.push_back(element_from_json(v, kind));
    return FiniteSubset(kind, std::move(e));
}

json to_json(const FiniteSubset& s) {
    json out = json::array();
    for (const auto& g : s) out.push_back(to_json(g));
    return out;
}

Pattern pattern_from_json(const json& j, GroupKind kind, const Alphabet& alphabet) {
    const auto& dom = field(j, "domain");
    const auto& sym = field(j, "symbols");
    expect(dom.is_array() && sym.is_array() && dom.size() == sym.size(),
           "pattern needs equally long \"domain\" and \"symbols\" arrays");
    std::vector<std::pair<GroupElement, Symbol>> pairs;
    for (std::size_t i = 0; i < dom.size(); ++i)
        pairs.emplace_back(element_from_json(dom[i], kind), alphabet.index_of(token_of(sym[i])));
    return pattern_from_pairs(kind, std::move(pairs));
}

json to_json(const Pattern& p, const Alphabet& alphabet) {
    json syms = json::array();
    for (auto v : p.values) syms.push_back(alphabet.token(v));
    return {{"domain", to_json(p.domain)}, {"symbols", syms}};
}

ShiftSpaceSpec sft_from_json(const json& j) {
    const GroupKind kind = group_from_json(field(j, "group"));
    const auto& alph = field(j, "alphabet");
    expect(alph.is_array(), "\"alphabet\" must be an array");
    std::vector<std::string> tokens;
    for (const auto& t : alph) tokens.push_back(token_of(t));
    Alphabet alphabet(std::move(tokens));
    std::vector<Pattern> forbidden;
    if (j.contains("forbidden")) {
        expect(j.at("forbidden").is_array(), "\"forbidden\" must be an array");
        for (const auto& f : j.at("forbidden")) forbidden.push_back(pattern_from_json(f, kind, alphabet));
    }
    return ShiftSpaceSpec(kind, std::move(alphabet), std::move(forbidden));
}

json to_json(const ShiftSpaceSpec& spec) {
    json forb = json::array();
    for (const auto& f : spec.forbidden) forb.push_back(to_json(f, spec.alphabet));
    return {{"alphabet", spec.alphabet.tokens()}, {"group", to_json(spec.group)}, {"forbidden", forb}};
}

TilingSpec tiling_from_json(const json& j, std::optional<GroupKind> fallback) {
    GroupKind kind;
    if (j.contains("group")) kind = group_from_json(j.at("group"));
    else if (fallback) kind = *fallback;
    else throw Error("invalid JSON: tiling needs a \"group\" field");
    const auto& shapes_j = field(j, "shapes");
    expect(shapes_j.is_array(), "\"shapes\" must be an array of subsets");
    std::vector<FiniteSubset> shapes;
    for (const auto& s : shapes_j) shapes.push_back(subset_from_json(s, kind));
    Placement placement = Placement::grid;
    if (j.contains("placement")) {
        const auto p = j.at("placement").get<std::string>();
        if (p == "cycle") placement = Placement::cycle;
        else expect(p == "grid", "placement must be \"grid\" or \"cycle\"");
    }
    GroupElement offset = GroupElement::identity(kind);
    if (j.contains("offset")) offset = element_from_json(j.at("offset"), kind);
    std::vector<std::size_t> seq;
    if (j.contains("sequence")) seq = j.at("sequence").get<std::vector<std::size_t>>();
    return TilingSpec(ShapeFamily(kind, std::move(shapes)), placement, offset, std::move(seq));
}

json to_json(const TilingSpec& t) {
    json shapes = json::array();
    for (const auto& s : t.family.shapes()) shapes.push_back(to_json(s));
    json out = {{"group", to_json(t.group())},
                {"shapes", shapes},
                {"placement", t.placement == Placement::grid ? "grid" : "cycle"},
                {"offset", to_json(t.offset)}};
    if (t.placement == Placement::cycle) out["sequence"] = t.sequence;
    return out;
}

AdmissibilityConfig admissibility_from_json(const json& j, GroupKind kind) {
    const auto mode = parse_mode(field(j, "mode").get<std::string>());
    if (j.contains("margin")) return AdmissibilityConfig(mode, subset_from_json(j.at("margin"), kind));
    return AdmissibilityConfig(kind, mode);
}

json to_json(const AdmissibilityConfig& cfg) {
    return {{"mode", std::string(to_string(cfg.mode))}, {"margin", to_json(cfg.margin)}};
}

json to_json(const ShapeCertificate& c) {
    return {{"shape", to_json(c.shape)},
            {"core", to_json(c.core)},
            {"n1", to_string(c.n1)},
            {"n2", to_string(c.n2)},
            {"word_count", to_string(c.word_count)},
            {"boundary", c.boundary},
            {"cond1_rhs", c.cond1_rhs},
            {"log2_cond2_threshold", c.log2_cond2_threshold},
            {"cond2_threshold", std::exp2(c.log2_cond2_threshold)},
            {"cond1", c.cond1},
            {"cond2", c.cond2},
            {"chain", c.chain}};
}

json to_json(const GluingReport& r, const Alphabet& alphabet) {
    json out = {{"verdict", std::string(to_string(r.verdict))},
                {"search_bounds",
                 {{"window", to_json(r.window)},
                  {"max_size", r.max_size},
                  {"pairs_total", r.pairs_total},
                  {"pairs_examined", r.pairs_examined}}},
                {"mode", std::string(to_string(r.mode))}};
    if (r.witness)
        out["witness"] = {{"T1", to_json(r.witness->a.domain)},
                          {"T2", to_json(r.witness->b.domain)},
                          {"A", to_json(r.witness->a, alphabet)},
                          {"B", to_json(r.witness->b, alphabet)}};
    return out;
}

json to_json(const Ratio& r) {
    return {{"num", r.numerator()}, {"den", r.denominator()}, {"value", boost::rational_cast<double>(r)}};
}

json word_to_json(std::span<const Symbol> word, int k) {
    if (k <= 9) {
        std::string s;
        for (auto d : word) s.push_back(static_cast<char>('1' + d));
        return s;
    }
    json out = json::array();
    for (auto d : word) out.push_back(d + 1);
    return out;
}

json output_pattern_to_json(const Pattern& y, int k) {
    return {{"domain", to_json(y.domain)}, {"word", word_to_json(y.values, k)}};
}

std::vector<Symbol> word_from_json(const json& j, int k) {
    std::vector<Symbol> out;
    auto push = [&](long long v) {
        if (v < 1 || v > k) throw Error("word symbol " + std::to_string(v) + " outside {1.." + std::to_string(k) + "}");
        out.push_back(static_cast<Symbol>(v - 1));
    };
    if (j.is_string()) {
        for (char c : j.get<std::string>()) {
            if (c < '0' || c > '9') throw Error("word strings may only contain digits");
            push(c - '0');
        }
    } else {
        expect(j.is_array(), "word must be a digit string or an integer array");
        for (const auto& v : j) push(v.get<long long>());
    }
    return out;
}

json table_to_json(const EncoderTable& table, std::uint64_t extensional_limit) {
    const auto& cfg = table.config();
    const auto& spec = table.spec();
    json shapes = json::array();
    for (std::size_t j = 0; j < table.shape_count(); ++j) {
        const auto& cert = table.certificates()[j];
        json s = {{"shape", to_json(cert.shape)},
                  {"core", to_json(cert.core)},
                  {"core_pattern_count", to_string(cert.n2)},
                  {"word_count", to_string(cert.word_count)},
                  {"certificate", to_json(cert)}};
        if (cert.n2 <= extensional_limit) {
            json pats = json::array();
            table.core_space(j).for_each([&](std::span<const Symbol> v) {
                json p = json::array();
                for (auto x : v) p.push_back(spec.alphabet.token(x));
                pats.push_back(std::move(p));
                return true;
            });
            s["core_patterns"] = std::move(pats);
        }
        shapes.push_back(std::move(s));
    }
    return {{"version", std::string(kRankingVersion)},
            {"k", cfg.k},
            {"gamma", cfg.gamma},
            {"h_ref", cfg.h_ref},
            {"distance", to_json(cfg.distance)},
            {"admissibility", to_json(cfg.admissibility)},
            {"tiling", to_json(cfg.tiling)},
            {"sft", to_json(spec)},
            {"shapes", shapes}};
}

EncoderTable table_from_json(const json& j) {
    const auto version = field(j, "version").get<std::string>();
    if (version != kRankingVersion) throw Error("unsupported encoder table version '" + version + "'");
    auto spec = sft_from_json(field(j, "sft"));
    const GroupKind kind = spec.group;
    EncoderConfig cfg{field(j, "k").get<int>(),
                      field(j, "gamma").get<double>(),
                      subset_from_json(field(j, "distance"), kind),
                      field(j, "h_ref").get<double>(),
                      tiling_from_json(field(j, "tiling"), kind),
                      admissibility_from_json(field(j, "admissibility"), kind)};
    EncoderTable table(std::move(cfg), std::move(spec));
    if (j.contains("shapes")) {
        const auto& shapes = j.at("shapes");
        expect(shapes.is_array() && shapes.size() == table.shape_count(), "table shape list does not match the tiling");
        for (std::size_t s = 0; s < shapes.size(); ++s) {
            const auto stored = field(shapes[s], "core_pattern_count").get<std::string>();
            if (stored != to_string(table.certificates()[s].n2))
                throw Error("table shape " + std::to_string(s) + ": stored core count " + stored +
                            " differs from the rebuilt count " + to_string(table.certificates()[s].n2));
            if (!shapes[s].contains("core_patterns")) continue;
            BigInt r = 0;
            for (const auto& p : shapes[s].at("core_patterns")) {
                std::vector<Symbol> vals;
                for (const auto& t : p) vals.push_back(table.spec().alphabet.index_of(token_of(t)));
                if (table.core_space(s).rank(vals) != std::optional<BigInt>(r))
                    throw Error("table shape " + std::to_string(s) + ": listed core patterns disagree with the ranking");
                ++r;
            }
        }
    }
    return table;
}

ProductPoint point_from_json(const json& j, const ShiftSpaceSpec& spec) {
    return {pattern_from_json(field(j, "x"), spec.group, spec.alphabet), tiling_from_json(field(j, "tiling"), spec.group)};
}

json to_json(const ProductPoint& p, const Alphabet& alphabet) {
    return {{"x", to_json(p.x, alphabet)}, {"tiling", to_json(p.tiling)}};
}

}  // namespace symext::json_io
