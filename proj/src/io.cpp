#include "weil/io.hpp"

#include <filesystem>
#include <fstream>

namespace weil {

namespace {

void need(bool ok, const char* code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

std::vector<Rat> parse_coords(const Json& arr, const char* code, const std::string& what) {
    need(arr.is_array(), code, what + " must be an array of rational strings");
    std::vector<Rat> out;
    for (const auto& e : arr) {
        need(e.is_string(), code, what + " entries must be strings");
        out.push_back(parse_rat(e.get<std::string>()));
    }
    return out;
}

Json coords_json(const std::vector<Rat>& cs) {
    Json a = Json::array();
    for (const auto& c : cs) a.push_back(rat_str(c));
    return a;
}

RationalPlace parse_rational_place(const std::string& s) {
    if (s == "inf") return RationalPlace::infinity();
    return RationalPlace::prime(parse_int(s));
}

} // namespace

std::string real_str(const Real& x) {
    int digits = static_cast<int>(static_cast<double>(x.prec()) * 0.30103) + 3;
    return x.str(digits);
}

Json field_to_json(FieldPtr k) {
    Json j;
    j["label"] = k->label();
    Json mp = Json::array();
    for (const auto& c : k->min_poly().c) mp.push_back(int_str(c));
    j["min_poly"] = mp;
    if (k->automorphism_count() > 1) {
        Json auts = Json::array();
        for (size_t i = 0; i < k->automorphism_count(); ++i)
            auts.push_back(coords_json(k->automorphism(i).image));
        j["automorphisms"] = auts;
    }
    return j;
}

FieldPtr field_from_json(const Json& j) {
    need(j.is_object(), "BadField", "field description must be an object");
    need(j.contains("label") && j.at("label").is_string(), "BadField",
         "field description needs a string label");
    need(j.contains("min_poly") && j.at("min_poly").is_array(), "BadField",
         "field description needs a min_poly array");
    std::vector<Int> cs;
    for (const auto& e : j.at("min_poly")) {
        need(e.is_string(), "BadField", "min_poly entries must be integer strings");
        cs.push_back(parse_int(e.get<std::string>()));
    }
    IntPoly mp{std::move(cs)};
    if (mp == IntPoly::x()) return NumberField::rationals();
    std::optional<std::vector<std::vector<Rat>>> auts;
    if (j.contains("automorphisms")) {
        need(j.at("automorphisms").is_array(), "BadField", "automorphisms must be an array");
        auts.emplace();
        for (const auto& a : j.at("automorphisms"))
            auts->push_back(parse_coords(a, "BadField", "automorphism image"));
    }
    return NumberField::create(std::move(mp), j.at("label").get<std::string>(), auts);
}

Json tower_to_json(const Tower& t) {
    Json j;
    Json levels = Json::array();
    for (size_t i = 0; i < t.level_count(); ++i) levels.push_back(field_to_json(t.level(i)));
    j["levels"] = levels;
    Json embs = Json::array();
    for (size_t i = 0; i + 1 < t.level_count(); ++i)
        embs.push_back(coords_json(t.embedding_image(i).coords));
    j["embeddings"] = embs;
    return j;
}

TowerPtr tower_from_json(const Json& j) {
    need(j.is_object() && j.contains("levels") && j.at("levels").is_array(), "BadTower",
         "tower description needs a levels array");
    need(j.contains("embeddings") && j.at("embeddings").is_array(), "BadTower",
         "tower description needs an embeddings array");
    std::vector<FieldPtr> levels;
    for (const auto& f : j.at("levels")) levels.push_back(field_from_json(f));
    need(j.at("embeddings").size() + 1 == levels.size(), "BadTower",
         "need one embedding per consecutive pair of levels");
    std::vector<FieldElement> embs;
    for (size_t i = 0; i + 1 < levels.size(); ++i)
        embs.push_back(make_element(
            levels[i + 1],
            parse_coords(j.at("embeddings").at(i), "BadTower", "embedding image")));
    return Tower::create(std::move(levels), std::move(embs));
}

std::string tower_label(const Tower& t) {
    std::string out;
    for (size_t i = 0; i < t.level_count(); ++i) {
        if (i) out += "<";
        out += t.level(i)->label();
    }
    return out;
}

Json function_to_json(const StepFunction& F) {
    Json j;
    j["tower"] = tower_label(*F.tower);
    j["level"] = F.level;
    Json sup = Json::array();
    for (const auto& rp : F.support) sup.push_back(rp.str());
    j["support"] = sup;
    Json vals = Json::array();
    for (const auto& [id, v] : F.values) vals.push_back(Json::array({id, real_str(v)}));
    j["values"] = vals;
    j["precision_bits"] = F.precision_bits;
    return j;
}

StepFunction function_from_json(TowerPtr t, const Json& j) {
    need(j.is_object() && j.contains("tower") && j.at("tower").is_string(), "BadShape",
         "function table needs a tower label");
    need(j.contains("level") && j.at("level").is_number_unsigned(), "BadShape",
         "function table needs a level");
    need(j.contains("support") && j.at("support").is_array(), "BadShape",
         "function table needs a support array");
    need(j.contains("values") && j.at("values").is_array(), "BadShape",
         "function table needs a values array");
    need(j.contains("precision_bits") && j.at("precision_bits").is_number_integer(),
         "BadShape", "function table needs precision_bits");
    std::string label = j.at("tower").get<std::string>();
    if (label != tower_label(*t))
        fail("FieldMismatch",
             "function table is for tower " + label + ", not " + tower_label(*t));
    long bits = j.at("precision_bits").get<long>();
    std::vector<RationalPlace> support;
    for (const auto& s : j.at("support")) {
        need(s.is_string(), "BadShape", "support entries must be strings");
        support.push_back(parse_rational_place(s.get<std::string>()));
    }
    std::map<std::string, Real> values;
    for (const auto& pair : j.at("values")) {
        need(pair.is_array() && pair.size() == 2 && pair.at(0).is_string() &&
                 pair.at(1).is_string(),
             "BadShape", "values entries must be [place_id, decimal] pairs");
        values.emplace(pair.at(0).get<std::string>(),
                       Real::of_str(pair.at(1).get<std::string>(), bits + 96));
    }
    return make_step_function(t, j.at("level").get<size_t>(), std::move(support),
                              std::move(values), bits);
}

Corpus corpus_from_json(const Json& j) {
    need(j.is_object() && j.contains("items") && j.at("items").is_array(), "BadShape",
         "corpus needs an items array");
    Corpus c;
    for (const auto& it : j.at("items")) {
        need(it.is_object() && it.contains("field") && it.at("field").is_string() &&
                 it.contains("elem") && it.at("elem").is_string(),
             "BadShape", "corpus items need field and elem strings");
        c.items.push_back(
            CorpusItem{it.at("field").get<std::string>(), it.at("elem").get<std::string>()});
    }
    if (j.contains("towers")) {
        need(j.at("towers").is_array(), "BadShape", "corpus towers must be an array");
        for (const auto& t : j.at("towers")) {
            need(t.is_string(), "BadShape", "corpus tower entries must be paths");
            c.tower_paths.push_back(t.get<std::string>());
        }
    }
    return c;
}

Json place_record(const Place& v) {
    Json j;
    j["place_id"] = v.place_id;
    switch (v.kind) {
        case PlaceKind::Real: j["kind"] = "real"; break;
        case PlaceKind::ComplexPair: j["kind"] = "complex"; break;
        case PlaceKind::Finite: j["kind"] = "finite"; break;
    }
    if (v.kind == PlaceKind::Finite) {
        j["p"] = int_str(v.p);
        j["e"] = v.e;
        j["f"] = v.f;
    }
    j["d_v"] = v.local_degree;
    return j;
}

Json local_value_record(const LocalValue& lv) {
    Json j;
    j["place_id"] = lv.place_id;
    j["log_unnormalized"] = real_str(lv.log_unnormalized);
    j["log_normalized"] = real_str(lv.log_normalized);
    if (lv.valuation) j["valuation"] = *lv.valuation;
    return j;
}

Json partition_record(const MeasuredPartition& mu) {
    Json j;
    j["level"] = mu.level;
    j["place"] = mu.base.str();
    Json cells = Json::array();
    for (const auto& cell : mu.cells) {
        Json c;
        c["place_id"] = cell.place.place_id;
        c["weight"] = rat_str(cell.weight);
        cells.push_back(c);
    }
    j["cells"] = cells;
    return j;
}

Json permutation_record(const PlacePermutation& p) {
    Json j;
    j["place"] = p.base.str();
    j["automorphism"] = coords_json(p.automorphism.image);
    Json m = Json::array();
    for (const auto& [src, dst] : p.mapping) m.push_back(Json::array({src, dst}));
    j["mapping"] = m;
    return j;
}

Json approx_record(const ApproxSolution& s) {
    Json j;
    Json cs = Json::array();
    for (const auto& c : s.coefficients) cs.push_back(rat_str(c));
    j["coefficients"] = cs;
    j["residual_l1"] = real_str(s.residual_l1);
    j["residual_l2"] = real_str(s.residual_l2);
    j["denominator_bound"] = int_str(s.denominator_bound);
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("BadFile", "cannot open " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) fail("BadFile", "cannot parse " + path);
    return j;
}

std::string join_path(const std::string& dir, const std::string& rel) {
    if (rel.size() && rel[0] == '/') return rel;
    if (dir.empty()) return rel;
    return (std::filesystem::path(dir) / rel).string();
}

std::string dir_of(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

} // namespace weil
