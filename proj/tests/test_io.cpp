#include "weil/checks.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "doctest.h"

using namespace weil;

namespace {

constexpr long kBits = 128;

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "<none>";
}

FieldPtr q() {
    static FieldPtr k = NumberField::rationals();
    return k;
}

FieldPtr qi() {
    static FieldPtr k = NumberField::create(IntPoly{1, 0, 1}, "Q(i)");
    return k;
}

TowerPtr t_qi() {
    static TowerPtr t = Tower::create({q(), qi()}, {zero_element(qi())});
    return t;
}

Rat rat(long n, long d = 1) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

// scratch directory for corpus fixtures that must live on disk
std::string scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "weil_io_test";
    std::filesystem::create_directories(dir);
    return dir.string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
}

} // namespace

TEST_CASE("io: field descriptions round-trip") {
    for (FieldPtr k : {q(), qi(), NumberField::create(IntPoly{-2, 0, 1}, "Q(sqrt2)"),
                       NumberField::cyclotomic_field(5, "Q(zeta5)"),
                       NumberField::cyclotomic_field(8, "Q(zeta8)")}) {
        Json j = field_to_json(k);
        FieldPtr back = field_from_json(j);
        CHECK(back->label() == k->label());
        CHECK(back->min_poly() == k->min_poly());
        CHECK(back->degree() == k->degree());
        CHECK(back->automorphism_count() == k->automorphism_count());
        CHECK(back->galois() == k->galois());
        // serialization is stable: a second trip emits identical bytes
        CHECK(field_to_json(back).dump() == j.dump());
    }

    CHECK(code_of([] { field_from_json(Json::array()); }) == "BadField");
    CHECK(code_of([] { field_from_json(Json{{"label", "X"}}); }) == "BadField");
    Json bad;
    bad["label"] = "X";
    bad["min_poly"] = Json::array({"4", "4", "1"});  // (x+2)^2
    CHECK(code_of([&] { field_from_json(bad); }) == "NotIrreducible");
}

TEST_CASE("io: tower descriptions round-trip") {
    FieldPtr z8 = NumberField::cyclotomic_field(8, "Q(zeta8)");
    TowerPtr t = Tower::create({q(), qi(), z8},
                               {zero_element(qi()),
                                make_element(z8, {rat(0), rat(0), rat(1), rat(0)})});
    Json j = tower_to_json(*t);
    TowerPtr back = tower_from_json(j);
    CHECK(back->level_count() == 3);
    CHECK(tower_label(*back) == "Q<Q(i)<Q(zeta8)");
    CHECK(back->embedding_image(1).coords == t->embedding_image(1).coords);
    CHECK(tower_to_json(*back).dump() == j.dump());

    // the reloaded tower produces the same measured fibers
    auto mu = partition(*back, 2, RationalPlace::prime(Int(5)), kBits);
    CHECK(mu.cells.size() == 2);
    CHECK(mu.cells[0].weight == rat(1, 2));

    Json nolevels;
    nolevels["embeddings"] = Json::array();
    CHECK(code_of([&] { tower_from_json(nolevels); }) == "BadTower");
    Json short_emb = j;
    short_emb["embeddings"] = Json::array();
    CHECK(code_of([&] { tower_from_json(short_emb); }) == "BadTower");
}

TEST_CASE("io: function tables round-trip exactly") {
    FieldElement a = make_element(qi(), {rat(2), rat(1)});
    StepFunction f = embed_fa(t_qi(), 1, a, kBits);
    Json j = function_to_json(f);
    CHECK(j["tower"] == "Q<Q(i)");
    CHECK(j["level"] == 1);

    StepFunction back = function_from_json(t_qi(), j);
    CHECK(back.level == f.level);
    CHECK(back.support.size() == f.support.size());
    REQUIRE(back.values.size() == f.values.size());
    for (const auto& [id, v] : f.values) {
        // decimal emission carries enough digits to reproduce the bits
        CHECK(abs(step_value(back, id) - v).is_zero());
    }
    CHECK(function_to_json(back).dump() == j.dump());

    Json wrong = j;
    wrong["tower"] = "Q";
    CHECK(code_of([&] { function_from_json(t_qi(), wrong); }) == "FieldMismatch");
    Json chopped = j;
    chopped.erase("values");
    CHECK(code_of([&] { function_from_json(t_qi(), chopped); }) == "BadShape");
    Json partial = j;
    partial["values"].erase(0);
    CHECK(code_of([&] { function_from_json(t_qi(), partial); }) == "BadCoordinates");
}

TEST_CASE("io: corpus files drive the check suite") {
    std::string dir = scratch_dir();
    write_file(dir + "/q.json", R"({"label":"Q","min_poly":["0","1"]})");
    write_file(dir + "/qi.json", R"js({"label":"Q(i)","min_poly":["1","0","1"]})js");
    write_file(dir + "/tqi.json",
               R"js({"levels":[{"label":"Q","min_poly":["0","1"]},)js"
               R"js({"label":"Q(i)","min_poly":["1","0","1"]}],"embeddings":[["0","0"]]})js");

    Json cj;
    cj["items"] = Json::array({Json{{"field", "q.json"}, {"elem", "2"}},
                               Json{{"field", "q.json"}, {"elem", "-1"}},
                               Json{{"field", "qi.json"}, {"elem", "2+t"}}});
    cj["towers"] = Json::array({"tqi.json"});
    Corpus c = corpus_from_json(cj);
    c.base_dir = dir;
    CHECK(c.items.size() == 3);
    CHECK(c.tower_paths.size() == 1);

    CheckReport rep = run_corpus_checks(c, kBits);
    CHECK(rep.failures == 0);
    CHECK(rep.rows.size() > 20);
    Json out = check_report_json(rep);
    CHECK(out["ok"] == true);
    CHECK(out["failures"] == 0);

    // failures are counted, not masked: the zero element cannot embed
    Json cbad;
    cbad["items"] = Json::array({Json{{"field", "q.json"}, {"elem", "0"}}});
    Corpus b = corpus_from_json(cbad);
    b.base_dir = dir;
    CheckReport bad = run_corpus_checks(b, kBits);
    CHECK(bad.failures == 1);
    CHECK(bad.rows[0].check == "element");
    CHECK(bad.rows[0].detail == "ZeroElement");

    CHECK(code_of([] { read_json_file("/nonexistent/x.json"); }) == "BadFile");
    CHECK(code_of([] { corpus_from_json(Json::array()); }) == "BadShape");
    std::filesystem::remove_all(dir);
}
