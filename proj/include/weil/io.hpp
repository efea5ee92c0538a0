#ifndef WEIL_IO_HPP
#define WEIL_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "weil/galois.hpp"
#include "weil/heightspace.hpp"

namespace weil {

// Insertion-ordered documents so that every emitter is byte-deterministic.
using Json = nlohmann::ordered_json;

// Decimal rendering with enough digits to reproduce the exact binary value
// on re-parse at the same precision.
std::string real_str(const Real& x);

// ----- field files: { label, min_poly: [int strings, low-to-high],
//                      automorphisms: [[coord strings]]? }

Json field_to_json(FieldPtr k);
FieldPtr field_from_json(const Json& j);

// ----- tower files: { levels: [field descriptions], embeddings: [[coord strings]] }

Json tower_to_json(const Tower& t);
TowerPtr tower_from_json(const Json& j);
// Level labels joined with "<", e.g. "Q<Q(i)<Q(zeta8)".
std::string tower_label(const Tower& t);

// ----- function table files: { tower: label, level, support, values: [[place_id,
//       decimal string]], precision_bits }

Json function_to_json(const StepFunction& F);
// The table's tower label must match the supplied tower.  Errors:
// FieldMismatch; plus everything make_step_function raises.
StepFunction function_from_json(TowerPtr t, const Json& j);

// ----- corpus files: { items: [{field, elem}], towers: [paths] }, with the
//       file paths inside resolved against the corpus file's directory

struct CorpusItem {
    std::string field_path;
    std::string elem;
};

struct Corpus {
    std::vector<CorpusItem> items;
    std::vector<std::string> tower_paths;
    std::string base_dir;
};

Corpus corpus_from_json(const Json& j);

// ----- records shared by the CLI

Json place_record(const Place& v);
Json local_value_record(const LocalValue& lv);
Json partition_record(const MeasuredPartition& mu);
Json permutation_record(const PlacePermutation& p);
Json approx_record(const ApproxSolution& s);

// ----- files

// Read and parse, or fail with code "BadFile" (the CLI treats that as a
// usage problem, not a domain one).
Json read_json_file(const std::string& path);
std::string join_path(const std::string& dir, const std::string& rel);
std::string dir_of(const std::string& path);

} // namespace weil

#endif
