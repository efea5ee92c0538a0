#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "weil/checks.hpp"

using namespace weil;

namespace {

RationalPlace place_of_flag(const std::string& s) {
    if (s == "inf") return RationalPlace::infinity();
    return RationalPlace::prime(parse_int(s));
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

Json run_height(const std::string& field_path, const std::string& elem, long bits) {
    FieldPtr k = field_from_json(read_json_file(field_path));
    FieldElement a = parse_element(k, elem);
    HeightResult sum = height(a, bits);
    HeightResult mahler = height_mahler(a, bits);
    Real tol = pow2(-(bits / 4), 64);
    Json out;
    out["command"] = "height";
    out["field"] = k->label();
    out["elem"] = elem;
    out["value"] = real_str(sum.value);
    out["precision_bits"] = bits;
    out["method_agreement"] = !(abs(sum.value - mahler.value) > tol);
    out["mahler"] = real_str(mahler.value);
    out["product_formula_defect"] = real_str(sum.defect);
    return out;
}

Json run_places(const std::string& field_path, const std::string& place_s,
                const std::string& elem, long bits) {
    FieldPtr k = field_from_json(read_json_file(field_path));
    std::optional<FieldElement> a;
    if (!elem.empty()) a = parse_element(k, elem);

    std::vector<RationalPlace> sel;
    if (!place_s.empty()) {
        sel.push_back(place_of_flag(place_s));
    } else {
        sel.push_back(RationalPlace::infinity());
        if (a)
            for (const Int& p : support_primes(*a)) sel.push_back(RationalPlace::prime(p));
    }

    Json out;
    out["command"] = "places";
    out["field"] = k->label();
    out["precision_bits"] = bits;
    Json places = Json::array();
    Json values = Json::array();
    for (const auto& rp : sel) {
        std::vector<Place> fiber =
            rp.infinite ? arch_places(k, bits) : finite_places(k, rp.p);
        for (const auto& v : fiber) {
            places.push_back(place_record(v));
            if (a) values.push_back(local_value_record(log_abs(v, *a, bits)));
        }
    }
    out["places"] = places;
    if (a) {
        out["elem"] = elem;
        out["values"] = values;
    }
    return out;
}

Json run_fa(const std::string& tower_path, size_t level, const std::string& elem, long bits,
            const std::string& output_path) {
    TowerPtr t = tower_from_json(read_json_file(tower_path));
    FieldElement a = parse_element(t->level(level), elem);
    StepFunction f = embed_fa(t, level, a, bits);
    Json table = function_to_json(f);
    if (!output_path.empty()) {
        std::ofstream os(output_path);
        if (!os) fail("BadFile", "cannot write " + output_path);
        os << table.dump(2) << "\n";
    }
    Json out;
    out["command"] = "fa";
    out["elem"] = elem;
    out["function"] = table;
    out["integral"] = real_str(integral(f));
    out["norm_l1"] = real_str(lp_norm(f, Rat(1)));
    out["norm_l2"] = real_str(lp_norm(f, Rat(2)));
    if (!output_path.empty()) out["output"] = output_path;
    return out;
}

Json run_partition(const std::string& tower_path, size_t level, const std::string& place_s,
                   long bits) {
    TowerPtr t = tower_from_json(read_json_file(tower_path));
    MeasuredPartition mu = partition(*t, level, place_of_flag(place_s), bits);
    Json out;
    out["command"] = "partition";
    out["tower"] = tower_label(*t);
    const Json rec = partition_record(mu);
    for (const auto& [key, val] : rec.items()) out[key] = val;
    return out;
}

Json run_galois(const std::string& field_path, const std::string& place_s, long bits) {
    FieldPtr k = field_from_json(read_json_file(field_path));
    RationalPlace rp = place_of_flag(place_s.empty() ? "inf" : place_s);
    Json out;
    out["command"] = "galois";
    out["field"] = k->label();
    out["place"] = rp.str();
    out["automorphisms"] = k->automorphism_count();
    Json orbs = Json::array();
    for (const auto& o : orbit(k, rp, bits)) {
        Json ids = Json::array();
        for (const auto& id : o) ids.push_back(id);
        orbs.push_back(ids);
    }
    out["orbits"] = orbs;
    Json perms = Json::array();
    for (size_t i = 0; i < k->automorphism_count(); ++i)
        perms.push_back(permutation_record(place_permutation(k->automorphism(i), rp, bits)));
    out["permutations"] = perms;
    return out;
}

Json run_check(const std::string& corpus_path, long bits, int& rc) {
    Corpus c = corpus_from_json(read_json_file(corpus_path));
    c.base_dir = dir_of(corpus_path);
    CheckReport rep = run_corpus_checks(c, bits);
    rc = rep.failures ? 1 : 0;
    Json out;
    out["command"] = "check";
    const Json body = check_report_json(rep);
    for (const auto& [key, val] : body.items()) out[key] = val;
    return out;
}

Json run_approx(const std::string& target_path, const std::string& tower_path,
                const std::string& basis_s, const std::string& den_s, long bits) {
    Json table = read_json_file(target_path);
    TowerPtr t;
    if (!tower_path.empty()) {
        t = tower_from_json(read_json_file(tower_path));
    } else {
        // only the rational ground tower can be reconstructed from its label
        if (!table.is_object() || !table.contains("tower") ||
            table.at("tower") != Json("Q"))
            fail("BadTower",
                 "pass --tower for targets above Q; only tower label Q is implicit");
        t = Tower::create({NumberField::rationals()}, {});
    }
    StepFunction target = function_from_json(t, table);
    FieldPtr k = t->level(target.level);
    std::vector<FieldElement> basis;
    std::vector<std::string> exprs = split_commas(basis_s);
    for (const auto& e : exprs) basis.push_back(parse_element(k, e));
    ApproxSolution sol = approximate(target, basis, parse_int(den_s), bits);
    Json out;
    out["command"] = "approx";
    Json b = Json::array();
    for (const auto& e : exprs) b.push_back(e);
    out["basis"] = b;
    const Json rec = approx_record(sol);
    for (const auto& [key, val] : rec.items()) out[key] = val;
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weilspace: Weil heights, places, and measured place fibers"};
    app.require_subcommand(1);

    long bits = 128;
    std::string field_path, tower_path, elem, place_s, corpus_path, target_path;
    std::string basis_s, den_s, output_path;
    size_t level = 0;

    auto add_bits = [&](CLI::App* c) {
        c->add_option("--precision_bits", bits, "working precision, >= 53")
            ->capture_default_str();
    };

    CLI::App* c_height = app.add_subcommand("height", "Weil height of an element");
    c_height->add_option("--field", field_path, "field description file")->required();
    c_height->add_option("--elem", elem, "element expression in t")->required();
    add_bits(c_height);

    CLI::App* c_places = app.add_subcommand("places", "list places and local values");
    c_places->add_option("--field", field_path, "field description file")->required();
    c_places->add_option("--place", place_s, "inf or a prime");
    c_places->add_option("--elem", elem, "element expression in t");
    add_bits(c_places);

    CLI::App* c_fa = app.add_subcommand("fa", "embed an element as a step function");
    c_fa->add_option("--tower", tower_path, "tower description file")->required();
    c_fa->add_option("--level", level, "tower level of the element")->required();
    c_fa->add_option("--elem", elem, "element expression in t")->required();
    c_fa->add_option("--output", output_path, "write the bare function table here");
    add_bits(c_fa);

    CLI::App* c_part = app.add_subcommand("partition", "measured fiber over a place");
    c_part->add_option("--tower", tower_path, "tower description file")->required();
    c_part->add_option("--level", level, "tower level")->required();
    c_part->add_option("--place", place_s, "inf or a prime")->required();
    add_bits(c_part);

    CLI::App* c_gal = app.add_subcommand("galois", "automorphism action on a fiber");
    c_gal->add_option("--field", field_path, "field description file")->required();
    c_gal->add_option("--place", place_s, "inf or a prime (default inf)");
    add_bits(c_gal);

    CLI::App* c_check = app.add_subcommand("check", "run the invariant suite on a corpus");
    c_check->add_option("--corpus", corpus_path, "corpus file")->required();
    add_bits(c_check);

    CLI::App* c_approx = app.add_subcommand("approx", "rational approximation in the basis");
    c_approx->add_option("--target", target_path, "function table file")->required();
    c_approx->add_option("--tower", tower_path, "tower description file");
    c_approx->add_option("--basis", basis_s, "comma-separated element expressions")
        ->required();
    c_approx->add_option("--den", den_s, "denominator bound")->required();
    add_bits(c_approx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        Json err;
        err["error"] = "Usage";
        err["message"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    }

    int rc = 0;
    try {
        if (bits < 53) fail("Usage", "precision_bits must be at least 53");
        Json out;
        if (app.got_subcommand(c_height)) {
            out = run_height(field_path, elem, bits);
        } else if (app.got_subcommand(c_places)) {
            out = run_places(field_path, place_s, elem, bits);
        } else if (app.got_subcommand(c_fa)) {
            out = run_fa(tower_path, level, elem, bits, output_path);
        } else if (app.got_subcommand(c_part)) {
            out = run_partition(tower_path, level, place_s, bits);
        } else if (app.got_subcommand(c_gal)) {
            out = run_galois(field_path, place_s, bits);
        } else if (app.got_subcommand(c_check)) {
            out = run_check(corpus_path, bits, rc);
        } else {
            out = run_approx(target_path, tower_path, basis_s, den_s, bits);
        }
        std::cout << out.dump(2) << "\n";
    } catch (const Error& e) {
        Json err;
        err["error"] = e.code();
        err["message"] = e.what();
        std::cout << err.dump(2) << "\n";
        return (e.code() == std::string("BadFile") || e.code() == std::string("Usage")) ? 2
                                                                                       : 1;
    }
    return rc;
}
