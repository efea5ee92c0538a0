#include "weil/tower.hpp"

#include <algorithm>
#include <set>

#include "weil/roots.hpp"

namespace weil {

namespace {

std::string coords_str(const std::vector<Rat>& c) {
    std::string s = "[";
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ", ";
        s += rat_str(c[i]);
    }
    return s + "]";
}

long working_bits(long precision_bits) { return precision_bits + 96; }

} // namespace

std::vector<FieldElement> fiber_probes(FieldPtr k, const std::vector<Place>& fiber) {
    std::vector<FieldElement> probes;
    auto put = [&](FieldElement e) {
        if (!is_zero(e)) probes.push_back(std::move(e));
    };
    FieldElement theta = generator(k);
    put(theta);
    for (long c = 1; c <= 3; ++c) put(add(theta, element_of_rat(k, Rat(c))));
    if (fiber.size() >= 2)
        for (const Place& v : fiber)
            if (v.kind == PlaceKind::Finite) put(eval_at(v.residue_factor, theta));
    return probes;
}

TowerPtr Tower::create(std::vector<FieldPtr> levels, std::vector<FieldElement> embeddings) {
    if (levels.empty()) fail("BadTower", "a tower needs at least one level");
    if (levels[0]->degree() != 1) fail("BadTower", "level 0 must be the rational field");
    for (const auto& k : levels)
        if (!k->galois()) fail("NotGalois", k->label() + " is not flagged galois");
    if (embeddings.size() + 1 != levels.size())
        fail("BadTower", "need exactly one embedding per level above the base");
    for (size_t j = 0; j < embeddings.size(); ++j) {
        if (!embeddings[j].field || !embeddings[j].field->same_field_as(*levels[j + 1]))
            fail("FieldMismatch", "embedding " + std::to_string(j) + " is not a level-" +
                                      std::to_string(j + 1) + " element");
        FieldElement residual = eval_at(levels[j]->min_poly(), embeddings[j]);
        if (!is_zero(residual))
            fail("BadEmbedding", "image of level-" + std::to_string(j) +
                                     " generator fails its minimal polynomial; residual " +
                                     coords_str(residual.coords));
    }
    auto t = std::shared_ptr<Tower>(new Tower());
    t->levels_ = std::move(levels);
    t->embeddings_ = std::move(embeddings);
    return t;
}

FieldPtr Tower::level(size_t j) const {
    if (j >= levels_.size()) fail("BadLevel", "level " + std::to_string(j) + " out of range");
    return levels_[j];
}

const FieldElement& Tower::embedding_image(size_t j) const {
    if (j + 1 >= levels_.size()) fail("BadLevel", "no embedding out of level " + std::to_string(j));
    return embeddings_[j];
}

std::optional<size_t> Tower::level_of(const NumberField& k) const {
    for (size_t j = 0; j < levels_.size(); ++j)
        if (levels_[j]->same_field_as(k)) return j;
    return std::nullopt;
}

FieldElement Tower::lift(const FieldElement& a, size_t to_level) const {
    if (to_level >= levels_.size()) fail("BadLevel", "lift target out of range");
    if (!a.field) fail("FieldMismatch", "element without a field");
    auto from = level_of(*a.field);
    if (!from) fail("FieldMismatch", "element does not belong to any tower level");
    if (*from > to_level) fail("BadLevel", "cannot lift downward");
    FieldElement cur = a;
    for (size_t j = *from; j < to_level; ++j) cur = eval_at(cur.coords, embeddings_[j]);
    return cur;
}

MeasuredPartition partition(const Tower& t, size_t level, const RationalPlace& rp,
                            long precision_bits) {
    if (level >= t.levels_.size()) fail("BadLevel", "level " + std::to_string(level));
    std::string key = std::to_string(level) + "|" + rp.str() + "|" + std::to_string(precision_bits);
    {
        std::lock_guard<std::mutex> lock(t.mu_);
        auto it = t.partition_cache_.find(key);
        if (it != t.partition_cache_.end()) return it->second;
    }
    FieldPtr k = t.levels_[level];
    std::vector<Place> fiber =
        rp.infinite ? arch_places(k, precision_bits) : finite_places(k, rp.p);
    MeasuredPartition part;
    part.level = level;
    part.base = rp;
    Rat total = 0;
    for (auto& v : fiber) {
        Rat w(v.local_degree, k->degree());
        w.canonicalize();
        total += w;
        part.cells.push_back(MeasuredCell{std::move(v), std::move(w)});
    }
    if (total != 1) fail("Internal", "fiber weights do not sum to 1");
    std::lock_guard<std::mutex> lock(t.mu_);
    return t.partition_cache_.emplace(key, std::move(part)).first->second;
}

RefinementMap refinement_map(const Tower& t, size_t coarse_level, const RationalPlace& rp,
                             long precision_bits) {
    if (coarse_level + 1 >= t.levels_.size())
        fail("BadLevel", "no finer level above " + std::to_string(coarse_level));
    std::string key =
        std::to_string(coarse_level) + "|" + rp.str() + "|" + std::to_string(precision_bits);
    {
        std::lock_guard<std::mutex> lock(t.mu_);
        auto it = t.refinement_cache_.find(key);
        if (it != t.refinement_cache_.end()) return it->second;
    }
    FieldPtr ck = t.levels_[coarse_level];
    FieldPtr fk = t.levels_[coarse_level + 1];
    const FieldElement& eps = t.embeddings_[coarse_level];

    RefinementMap rm;
    rm.coarse_level = coarse_level;
    rm.base = rp;

    if (!rp.infinite) {
        std::vector<Place> coarse = finite_places(ck, rp.p);
        std::vector<Place> fine = finite_places(fk, rp.p);
        if (coarse.size() == 1) {
            for (const auto& w : fine) rm.assignment.emplace_back(w.place_id, coarse[0].place_id);
        } else {
            std::vector<FieldElement> probes = fiber_probes(ck, coarse);
            std::vector<FieldElement> lifted;
            lifted.reserve(probes.size());
            for (const auto& x : probes) lifted.push_back(eval_at(x.coords, eps));
            std::vector<std::vector<Rat>> coarse_fp;
            for (const auto& v : coarse)
                coarse_fp.push_back(valuation_fingerprint(v, probes, precision_bits));
            for (const auto& w : fine) {
                std::vector<Rat> fp = valuation_fingerprint(w, lifted, precision_bits);
                size_t hits = 0, match = 0;
                for (size_t i = 0; i < coarse.size(); ++i)
                    if (coarse_fp[i] == fp) {
                        ++hits;
                        match = i;
                    }
                if (hits != 1)
                    fail("AmbiguousRestriction",
                         "fingerprint of " + w.place_id + " matches " + std::to_string(hits) +
                             " coarse places above p = " + rp.str());
                rm.assignment.emplace_back(w.place_id, coarse[match].place_id);
            }
        }
    } else {
        bool done = false;
        for (int attempt = 0; attempt < 2 && !done; ++attempt) {
            long bits = precision_bits << attempt;
            long w = working_bits(bits);
            std::vector<Place> coarse = arch_places(ck, bits);
            std::vector<Place> fine = arch_places(fk, bits);
            RootSet croots = complex_roots(ck->min_poly(), bits);
            RootSet froots = complex_roots(fk->min_poly(), bits);
            rm.assignment.clear();
            bool ok = true;
            for (const auto& fw : fine) {
                const ComplexApprox& z = froots.roots[fw.root_index];
                Complex ev = eval_poly_complex(eps.coords, Complex{z.re, z.im}, w);
                auto m = match_arch_place(coarse, croots, ev, bits);
                if (!m) {
                    ok = false;
                    break;
                }
                rm.assignment.emplace_back(fw.place_id, coarse[*m].place_id);
            }
            done = ok;
        }
        if (!done)
            fail("AmbiguousRestriction",
                 "archimedean matching stayed ambiguous after doubling precision");
    }

    // surjectivity: a connecting map onto a nonempty coarse fiber must hit
    // every coarse place
    std::set<std::string> hit;
    for (const auto& [fid, cid] : rm.assignment) {
        (void)fid;
        hit.insert(cid);
    }
    size_t coarse_count =
        rp.infinite ? arch_places(ck, precision_bits).size() : finite_places(ck, rp.p).size();
    if (hit.size() != coarse_count) fail("Internal", "refinement map is not surjective");

    std::lock_guard<std::mutex> lock(t.mu_);
    return t.refinement_cache_.emplace(key, std::move(rm)).first->second;
}

std::vector<RefinementCheck> check_measure_refinement(const Tower& t, const RationalPlace& rp,
                                                      long precision_bits) {
    std::vector<RefinementCheck> report;
    for (size_t j = 0; j + 1 < t.level_count(); ++j) {
        MeasuredPartition coarse = partition(t, j, rp, precision_bits);
        MeasuredPartition fine = partition(t, j + 1, rp, precision_bits);
        RefinementMap rm = refinement_map(t, j, rp, precision_bits);
        std::map<std::string, Rat> fine_sum;
        for (const auto& [fid, cid] : rm.assignment) {
            for (const auto& cell : fine.cells)
                if (cell.place.place_id == fid) fine_sum[cid] += cell.weight;
        }
        for (const auto& cell : coarse.cells) {
            RefinementCheck rc;
            rc.coarse_level = j;
            rc.coarse_id = cell.place.place_id;
            rc.coarse_weight = cell.weight;
            rc.fine_weight_sum = fine_sum[cell.place.place_id];
            if (rc.coarse_weight != rc.fine_weight_sum)
                fail("RefinementMismatch",
                     "cell " + rc.coarse_id + " at level " + std::to_string(j) + " over " +
                         rp.str() + ": coarse " + rat_str(rc.coarse_weight) + " vs fine sum " +
                         rat_str(rc.fine_weight_sum));
            report.push_back(std::move(rc));
        }
    }
    return report;
}

} // namespace weil
