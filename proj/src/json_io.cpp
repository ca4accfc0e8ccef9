#include "ainfss/json_io.hpp"

#include <json.hpp>

namespace ainfss {

using ordered_json = nlohmann::ordered_json;

const AInfinityAlgebra& AlgebraDocument::algebra() const {
    if (kind != Kind::algebra) throw validation_error("document is not a plain algebra");
    return value.base();
}

FilteredAInfinity AlgebraDocument::filtered() const {
    if (kind != Kind::filtered) throw validation_error("document is not a filtered algebra");
    return FilteredAInfinity(value);
}

const char* AlgebraDocument::kind_name(Kind k) {
    switch (k) {
        case Kind::algebra: return "algebra";
        case Kind::deformation: return "deformation";
        case Kind::filtered: return "filtered";
    }
    return "?";
}

namespace {

constexpr const char* kFormat = "ainfss/1";
constexpr const char* kPagesFormat = "ainfss-pages/1";

void require_keys(const ordered_json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const char* what) {
    for (const char* k : required)
        if (!j.contains(k)) throw validation_error(std::string(what) + ": missing field \"" + k + "\"");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : required) known = known || it.key() == k;
        for (const char* k : optional) known = known || it.key() == k;
        if (!known) throw validation_error(std::string(what) + ": unknown field \"" + it.key() + "\"");
    }
}

Bidegree parse_bidegree_key(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw validation_error("bad bidegree key \"" + s + "\"");
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw validation_error("bad bidegree key \"" + s + "\"");
    }
}

}  // namespace

AlgebraDocument parse_document(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw validation_error("document must be a JSON object");
    require_keys(j, {"format", "field", "kind", "s_type", "basis", "maps"}, {"unit"}, "document");
    if (j["format"] != kFormat)
        throw validation_error("unsupported format " + j["format"].dump() + " (expected \"" + kFormat + "\")");

    Field field = Field::from_string(j["field"].get<std::string>());
    std::string kind_s = j["kind"].get<std::string>();
    AlgebraDocument::Kind kind;
    if (kind_s == "algebra")
        kind = AlgebraDocument::Kind::algebra;
    else if (kind_s == "deformation")
        kind = AlgebraDocument::Kind::deformation;
    else if (kind_s == "filtered")
        kind = AlgebraDocument::Kind::filtered;
    else
        throw validation_error("unknown kind \"" + kind_s + "\"");

    int s_type = j["s_type"].get<int>();
    if (s_type < 0) throw validation_error("s_type must be nonnegative");
    if (kind == AlgebraDocument::Kind::filtered && s_type != 0)
        throw validation_error("filtered documents must have s_type 0");

    std::vector<BasisElement> basis;
    for (const auto& b : j["basis"]) {
        if (!b.is_array() || b.size() != 3 || !b[0].is_string() || !b[1].is_number_integer() ||
            !b[2].is_number_integer())
            throw validation_error("basis entries must be [name, p, q]");
        basis.push_back({b[0].get<std::string>(), {b[1].get<int>(), b[2].get<int>()}});
    }
    SpacePtr sp = make_space(field, std::move(basis));

    std::optional<std::string> unit;
    if (j.contains("unit")) {
        unit = j["unit"].get<std::string>();
        if (!sp->index_of(*unit)) throw validation_error("unit \"" + *unit + "\" is not declared");
    }

    FormalBigradedDeformation value{AInfinityAlgebra(sp, s_type, unit)};

    // gather entries per (arity, order), then install atomically per component
    std::map<std::pair<int, int>, MultiMap> comps;
    std::set<std::tuple<int, int, std::vector<std::size_t>>> seen;
    for (const auto& m : j["maps"]) {
        if (!m.is_object()) throw validation_error("map entries must be objects");
        require_keys(m, {"arity", "order", "in", "out"}, {}, "map entry");
        int arity = m["arity"].get<int>();
        int order = m["order"].get<int>();
        if (arity < 1) throw validation_error("map arity must be >= 1");
        if (order < 0) throw validation_error("map order must be >= 0");
        if (kind == AlgebraDocument::Kind::algebra && order != 0)
            throw validation_error("plain algebras only carry order-0 maps");
        std::vector<std::size_t> key;
        for (const auto& name : m["in"]) {
            auto idx = sp->index_of(name.get<std::string>());
            if (!idx) throw validation_error("undeclared basis name " + name.dump() + " in a map input");
            key.push_back(*idx);
        }
        if (static_cast<int>(key.size()) != arity)
            throw validation_error("map input tuple length does not match the arity");
        LinComb val;
        for (const auto& term : m["out"]) {
            if (!term.is_array() || term.size() != 2)
                throw validation_error("map outputs must be [name, coefficient] pairs");
            auto idx = sp->index_of(term[0].get<std::string>());
            if (!idx) throw validation_error("undeclared basis name " + term[0].dump() + " in a map output");
            Scalar c = Scalar::parse(field, term[1].get<std::string>());
            if (c.is_zero()) throw validation_error("zero coefficients must be omitted");
            LinComb probe = val;
            probe.add(*idx, c);
            if (probe.terms().size() != val.terms().size() + 1)
                throw validation_error("repeated output name in a map entry");
            val = std::move(probe);
        }
        if (val.is_zero()) throw validation_error("empty map entries must be omitted");
        if (!seen.emplace(arity, order, key).second) throw validation_error("duplicate map entry");
        auto [it, fresh] = comps.try_emplace(
            std::make_pair(arity, order),
            MultiMap(sp, sp, arity, deformation_bidegree(s_type, arity, order)));
        it->second.set_entry(std::move(key), std::move(val));
    }
    for (auto& [k, comp] : comps) value.set_component(k.second, std::move(comp));

    AlgebraDocument doc{kind, std::move(value)};
    return doc;
}

std::string serialize_document(const AlgebraDocument& doc) {
    const FormalBigradedDeformation& d = doc.value;
    const SpacePtr& sp = d.space();
    ordered_json j;
    j["format"] = kFormat;
    j["field"] = sp->field().to_string();
    j["kind"] = AlgebraDocument::kind_name(doc.kind);
    j["s_type"] = d.s_type();
    if (auto u = d.base().unit_name()) j["unit"] = *u;
    j["basis"] = ordered_json::array();
    for (const auto& b : sp->basis()) j["basis"].push_back({b.name, b.deg.p, b.deg.q});
    j["maps"] = ordered_json::array();
    auto emit = [&](int arity, int order, const MultiMap& m) {
        for (const auto& [key, val] : m.entries()) {
            ordered_json e;
            e["arity"] = arity;
            e["order"] = order;
            e["in"] = ordered_json::array();
            for (auto i : key) e["in"].push_back(sp->element(i).name);
            e["out"] = ordered_json::array();
            for (const auto& [i, c] : val.terms()) e["out"].push_back({sp->element(i).name, c.to_string()});
            j["maps"].push_back(std::move(e));
        }
    };
    // orders ascending inside each arity
    std::map<std::pair<int, int>, const MultiMap*> comps;
    for (const auto& [arity, m] : d.base().maps()) comps[{arity, 0}] = &m;
    for (const auto& [key, m] : d.higher()) comps[{key.first, key.second}] = &m;
    for (const auto& [key, m] : comps) emit(key.first, key.second, *m);
    return j.dump(2) + "\n";
}

AlgebraDocument document_from(const AInfinityAlgebra& a) {
    return AlgebraDocument{AlgebraDocument::Kind::algebra, FormalBigradedDeformation(a)};
}

AlgebraDocument document_from(const FormalBigradedDeformation& d) {
    return AlgebraDocument{AlgebraDocument::Kind::deformation, d};
}

AlgebraDocument document_from(const FilteredAInfinity& f) {
    return AlgebraDocument{AlgebraDocument::Kind::filtered, f.rep()};
}

std::string serialize_pages(const PageSet& ps) {
    ordered_json j;
    j["format"] = kPagesFormat;
    j["start"] = ps.start;
    j["pages"] = ordered_json::array();
    for (int r = ps.start; r <= ps.last(); ++r) {
        const PageData& p = ps.page(r);
        ordered_json pj;
        pj["r"] = r;
        pj["dims"] = ordered_json::object();
        for (const auto& [deg, n] : p.dims) pj["dims"][deg.to_string()] = n;
        pj["d_ranks"] = ordered_json::object();
        for (const auto& [deg, n] : p.d_ranks) pj["d_ranks"][deg.to_string()] = n;
        pj["mu_ranks"] = ordered_json::object();
        for (const auto& [degs, n] : p.mu_ranks)
            pj["mu_ranks"][degs.first.to_string() + "|" + degs.second.to_string()] = n;
        j["pages"].push_back(std::move(pj));
    }
    j["einf"] = ordered_json::object();
    for (const auto& [deg, n] : ps.einf) j["einf"][deg.to_string()] = n;
    return j.dump(2) + "\n";
}

PageSet parse_pages(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("JSON parse error: ") + e.what());
    }
    require_keys(j, {"format", "start", "pages", "einf"}, {}, "page report");
    if (j["format"] != kPagesFormat) throw validation_error("unsupported page report format");
    PageSet ps;
    ps.start = j["start"].get<int>();
    int expect = ps.start;
    for (const auto& pj : j["pages"]) {
        require_keys(pj, {"r", "dims", "d_ranks", "mu_ranks"}, {}, "page");
        if (pj["r"].get<int>() != expect++) throw validation_error("page indices must be consecutive");
        PageData p;
        for (auto it = pj["dims"].begin(); it != pj["dims"].end(); ++it)
            p.dims[parse_bidegree_key(it.key())] = it.value().get<std::size_t>();
        for (auto it = pj["d_ranks"].begin(); it != pj["d_ranks"].end(); ++it)
            p.d_ranks[parse_bidegree_key(it.key())] = it.value().get<std::size_t>();
        for (auto it = pj["mu_ranks"].begin(); it != pj["mu_ranks"].end(); ++it) {
            auto bar = it.key().find('|');
            if (bar == std::string::npos) throw validation_error("bad product rank key");
            p.mu_ranks[{parse_bidegree_key(it.key().substr(0, bar)),
                        parse_bidegree_key(it.key().substr(bar + 1))}] = it.value().get<std::size_t>();
        }
        ps.pages.push_back(std::move(p));
    }
    for (auto it = j["einf"].begin(); it != j["einf"].end(); ++it)
        ps.einf[parse_bidegree_key(it.key())] = it.value().get<std::size_t>();
    return ps;
}

}  // namespace ainfss
