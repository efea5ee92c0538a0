#ifndef WEIL_TOWER_HPP
#define WEIL_TOWER_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weil/places.hpp"

namespace weil {

// The archimedean place of Q, or a prime p.
struct RationalPlace {
    bool infinite = true;
    Int p;

    static RationalPlace infinity() { return RationalPlace{}; }
    static RationalPlace prime(Int q) { return RationalPlace{false, std::move(q)}; }
    std::string str() const { return infinite ? "inf" : int_str(p); }
    bool operator==(const RationalPlace& o) const {
        return infinite == o.infinite && (infinite || p == o.p);
    }
};

struct MeasuredCell {
    Place place;
    Rat weight;  // d_w / [L_j : Q], exact
};

// The fiber over one rational place at one tower level, with exact weights
// summing to 1.
struct MeasuredPartition {
    size_t level = 0;
    RationalPlace base;
    std::vector<MeasuredCell> cells;
};

// Assignment of each level-(j+1) place in a fiber to the unique level-j place
// it lies over; total and surjective.
struct RefinementMap {
    size_t coarse_level = 0;
    RationalPlace base;
    std::vector<std::pair<std::string, std::string>> assignment;  // fine id -> coarse id
};

struct RefinementCheck {
    size_t coarse_level = 0;
    std::string coarse_id;
    Rat coarse_weight;
    Rat fine_weight_sum;
};

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

// A chain Q = L_0 < L_1 < ... of Galois fields.  embeddings[j] is an element
// of L_{j+1} holding the image of L_j's generator, verified exactly against
// L_j's minimal polynomial at construction.
class Tower {
public:
    // Errors: NotGalois; BadEmbedding (with the residual coordinates);
    // FieldMismatch (embedding element in the wrong field); BadTower.
    static TowerPtr create(std::vector<FieldPtr> levels, std::vector<FieldElement> embeddings);

    size_t level_count() const { return levels_.size(); }
    FieldPtr level(size_t j) const;
    // image of level j's generator inside level j+1 (0 <= j < count-1)
    const FieldElement& embedding_image(size_t j) const;

    // first level whose field matches k (by minimal polynomial)
    std::optional<size_t> level_of(const NumberField& k) const;

    // re-express an element of some level at a higher level, exactly
    FieldElement lift(const FieldElement& a, size_t to_level) const;

private:
    Tower() = default;
    std::vector<FieldPtr> levels_;
    std::vector<FieldElement> embeddings_;

    mutable std::mutex mu_;
    mutable std::map<std::string, MeasuredPartition> partition_cache_;
    mutable std::map<std::string, RefinementMap> refinement_cache_;

    friend MeasuredPartition partition(const Tower&, size_t, const RationalPlace&, long);
    friend RefinementMap refinement_map(const Tower&, size_t, const RationalPlace&, long);
};

// The measured fiber over rp at level j: cells weighted d_w/[L_j:Q], summing
// to 1 exactly.  Errors: BadLevel; NonMaximalOrder; NotPrime.
MeasuredPartition partition(const Tower& t, size_t level, const RationalPlace& rp,
                            long precision_bits);

// The connecting map from level j+1 down to level j over rp.  Finite fibers
// are matched by exact valuation fingerprints (generator, generator + c, and
// residue-factor probes); archimedean fibers by certified nearest-root
// matching of the embedded generator, with one precision doubling before
// AmbiguousRestriction.  Errors: BadLevel; AmbiguousRestriction;
// NonMaximalOrder.
RefinementMap refinement_map(const Tower& t, size_t coarse_level, const RationalPlace& rp,
                             long precision_bits);

// For every adjacent level pair, verify coarse weight = sum of fine weights
// over the preimage, exactly; returns the full list of checked identities.
// Errors: RefinementMismatch (must never fire on a valid tower).
std::vector<RefinementCheck> check_measure_refinement(const Tower& t, const RationalPlace& rp,
                                                      long precision_bits);

// Probe elements used for fingerprint matching over a fiber of k: the
// generator, generator + 1, 2, 3, and one residue-factor evaluation per
// finite place when the fiber has siblings; zero probes are dropped.
std::vector<FieldElement> fiber_probes(FieldPtr k, const std::vector<Place>& fiber);

} // namespace weil

#endif
