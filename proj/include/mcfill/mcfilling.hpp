#pragma once

#include <vector>

#include "mcfill/family.hpp"
#include "mcfill/model.hpp"
#include "mcfill/partition_enum.hpp"
#include "mcfill/verdict.hpp"

namespace mcfill {

struct McOptions {
    int max_points = 10;  // partition sweeps enumerate Bell(points) partitions
    int threads = 1;
    SearchLimits search;
};

struct McValueResult {
    Rational value;
    PointSet member;             // maximizing F (at most one point per hit part)
    std::vector<int> parts_hit;  // part indices F meets
};

// max over members F of mu*(union of the parts F meets). The witness uses
// at most one point per hit part (sound by heredity). For the empty
// family the value is 0 with no member.
McValueResult mc_value(const GroundModel& model, const HereditaryFamily& family,
                       const std::vector<PointSet>& parts, const SearchLimits& limits = {});

// Same game, but the adversary's covers are explicit measurable sets
// A_m >= hull(part m) and the payoff is mu of the union of hit covers.
McValueResult cover_mc_value(const GroundModel& model, const HereditaryFamily& family,
                             const std::vector<PointSet>& parts,
                             const std::vector<MeasurableSet>& covers,
                             const SearchLimits& limits = {});

// Replay evaluators: value of a specific F.
Rational partition_value(const GroundModel& model, const std::vector<PointSet>& parts,
                         const PointSet& f);
Rational cover_value(const GroundModel& model, const std::vector<PointSet>& parts,
                     const std::vector<MeasurableSet>& covers, const PointSet& f);

std::vector<MeasurableSet> hull_covers(const GroundModel& model,
                                       const std::vector<PointSet>& parts);

// Sweeps every partition of the points (restricted growth order); holds
// iff every partition admits F with value > epsilon. A refutation
// certificate carries the first refuting partition; a positive verdict
// carries the minimizing partition as a spot check.
Verdict check_mc_filling(const GroundModel& model, const HereditaryFamily& family,
                         const Rational& epsilon, const McOptions& options = {});

// The cover variant: the adversary also picks covers, evaluated at hulls
// (larger covers only help the member player, so hulls are adversary-
// optimal). Must agree with check_mc_filling on every block model.
Verdict check_mc_filling_covers(const GroundModel& model, const HereditaryFamily& family,
                                const Rational& epsilon, const McOptions& options = {});

// The supremal epsilon: exact minimax over all partitions. The family is
// MC-filling at epsilon iff threshold > epsilon.
Rational mc_filling_threshold(const GroundModel& model, const HereditaryFamily& family,
                              const McOptions& options = {});
Rational mc_filling_threshold_covers(const GroundModel& model, const HereditaryFamily& family,
                                     const McOptions& options = {});

// ---------------------------------------------------------------------------
// filling => MC-filling pipeline

struct PipelineOptions {
    bool verify_filling = false;  // run is_filling on A first (sweeps 2^|A| subsets)
    int filling_max_h = 12;
    SearchLimits search;
};

struct PipelineResult {
    WeightedSelection selection;  // F and mu(union of hit covers)
    Rational bound;               // epsilon * (eta - eta1); selection.value > bound
    Rational eta, eta1, eta2, eta3, theta;
    int m0 = 0;
    BigInt q;
    std::vector<int> tag_counts;        // p_m per part (0 when unused)
    PointSet witness_pool;              // H
    std::vector<MeasurableSet> covers;  // A_m = hull(part m), caller's model
    bool filling_verified = false;      // else assumed, and reported as such
};

// Runs the constructive reduction: restrict to a prefix of parts capturing
// mu*(A) up to eta2 = eta1/2, disjointify the hull covers into B_m, pick
// alpha_m = p_m/q with mu(B_m) > alpha_m > mu(B_m) - eta3 over one common
// denominator q (eta3 = (eta1-eta2)/(2*m0)), equipartition each B_m into
// p_m pieces of measure theta = 1/q (refining blocks internally where the
// measures demand it; the pieces carry no tags so the refinement never
// leaks into reported measures), collect p_m tag points from each A-part
// intersection, and extract a filling member F from that pool. The result
// satisfies mu(union of hit covers) > epsilon*(eta - eta1), asserted.
PipelineResult filling_to_mc_pipeline(const GroundModel& model, const PointSet& a,
                                      const HereditaryFamily& family, const Rational& epsilon,
                                      const Rational& eta1, const std::vector<PointSet>& parts,
                                      const PipelineOptions& options = {});

// ---------------------------------------------------------------------------
// greedy witness engine

// Fibers partition the points; class alpha (1-based) = fibers[alpha-1].
// Every fiber must have full outer measure: it meets every block of
// positive measure.
struct TransversalSystem {
    std::vector<PointSet> fibers;
};

void validate_transversals(const GroundModel& model, const TransversalSystem& ts);

struct GreedyResult {
    PointSet member;                  // F
    Rational value;                   // mu*(union of hit parts), > epsilon
    std::vector<int> chosen_classes;  // D (1-based class indices), |D| = n
    int n = 0;
    std::vector<int> k_of_class;      // k(alpha) per class, 1-based prefix length
    std::vector<int> class_sequence;  // alpha_j per selection step
    std::vector<int> part_sequence;   // m_j per selection step (0-based)
};

// The inductive selection: k(alpha) = least k with
// mu*(Z_alpha ∩ parts[0..k)) > epsilon, P_n = {alpha : k(alpha) = n},
// D = first size-n member of the class family inside some P_n (n scanned
// ascending), then pick t_j in Z_{alpha_j} ∩ Omega_{m_j} with fresh m_j
// until the hit parts exceed epsilon. phi is injective on F and
// phi(F) ⊆ D is a family member.
GreedyResult greedy_select(const GroundModel& model, const TransversalSystem& ts,
                           const HereditaryFamily& class_family,
                           const std::vector<PointSet>& parts, const Rational& epsilon,
                           const SearchLimits& limits = {});

}  // namespace mcfill
