#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcfill/family.hpp"
#include "mcfill/mcfilling.hpp"
#include "mcfill/model.hpp"
#include "mcfill/verdict.hpp"

namespace mcfill {

// The McShane-sum object: pairwise disjoint measurable pieces, each with
// a tag point. Tags may repeat across pieces.
struct TaggedPiece {
    MeasurableSet piece;
    PointId tag;
};
using TaggedFamily = std::vector<TaggedPiece>;

void validate_tagged(const GroundModel& model, const TaggedFamily& tagged);

// Indicator-valued function as data: functional lambda composed with f is
// the indicator of functional_sets[lambda]. Order is part of the value
// (argmax tie-breaks follow it).
struct IndicatorFunctionModel {
    std::vector<std::pair<std::string, PointSet>> functionals;
};

void validate_indicator_model(const GroundModel& model, const IndicatorFunctionModel& fm);

struct RiemannValue {
    Rational value;
    std::string functional;  // first maximizer; empty when there are none
    PointSet tags_in;        // tags of the pieces that functional counts
};

// sup over functionals of mu(union of pieces whose tag the functional's
// set contains); pieces are disjoint, so a plain per-functional sum.
RiemannValue riemann_norm(const GroundModel& model, const IndicatorFunctionModel& fm,
                          const TaggedFamily& tagged);

// Same supremum when the functionals are the members of a hereditary
// family (evaluation functionals of the indicator embedding): a weighted
// member search with w(t) = total measure of the pieces tagged t.
WeightedSelection riemann_norm_family(const GroundModel& model, const HereditaryFamily& family,
                                      const TaggedFamily& tagged,
                                      const SearchLimits& limits = {});

// All members of the family over the model's points, as explicit
// functional sets (sorted, names "F0".."Fk").
IndicatorFunctionModel build_indicator_model(const GroundModel& model,
                                             const HereditaryFamily& family,
                                             const SearchLimits& limits = {});

// f(t) = e_gamma on class gamma: classes <-> one functional set per class
// ("C1".."Ck"), mutually inverse with partition_from_c0_model.
IndicatorFunctionModel c0_model_from_partition(const GroundModel& model,
                                               const std::vector<PointSet>& classes);
std::vector<PointSet> partition_from_c0_model(const GroundModel& model,
                                              const IndicatorFunctionModel& fm);

struct DecideOptions {
    int max_points = 10;
    bool require_null = true;  // demand mu*(C_lambda) = 0 for every functional
    SearchLimits search;
};

// Decides, at the given epsilon, whether every partition (with hull
// covers) admits a tagged assembly from the disjointified covers whose
// Riemann norm exceeds epsilon. holds = true means the function is NOT
// MC-integrable at this epsilon. Assemblies take the disjointified cover
// piece of every compatible part, tagged inside the functional's set;
// thickness is settled by the monotone eta->0 reduction, so only fully
// covering assemblies are searched.
Verdict decide_mc_integrability(const GroundModel& model, const IndicatorFunctionModel& fm,
                                const Rational& epsilon, const DecideOptions& options = {});

// min over partitions of the best assembly norm: decide holds iff this
// exceeds epsilon.
Rational mc3_threshold(const GroundModel& model, const IndicatorFunctionModel& fm,
                       const DecideOptions& options = {});

// Best assembly norm for one partition (certificate replay).
Rational mc3_partition_value(const GroundModel& model, const IndicatorFunctionModel& fm,
                             const std::vector<PointSet>& parts);

// ---------------------------------------------------------------------------
// signature selection

struct GammaSelection {
    std::vector<int> signature;  // A: part indices (0-based)
    std::vector<int> finite_b;   // B ⊆ A (finite already at this scale)
    int gamma = 0;               // 1-based class index
    PointSet member;             // F ⊆ C_gamma meeting every part in B
    Rational value;              // mu*(union of parts F meets), > epsilon
};

// Groups classes by the set of parts they meet, picks the first signature
// whose class union has outer measure > epsilon, and selects one point of
// the chosen class per part of the signature.
GammaSelection gamma_select(const GroundModel& model, const std::vector<PointSet>& classes,
                            const std::vector<PointSet>& parts, const Rational& epsilon);

// ---------------------------------------------------------------------------
// cube witness

// {0,1}^kappa with coordinate classes: D_alpha = all-zero on class alpha,
// E_alpha = D_alpha minus the earlier D's. Points are bit masks with
// coordinate gamma (1-based) at bit gamma-1.
struct CubeModel {
    int kappa = 0;
    std::vector<std::vector<int>> classes;  // partition of {1..kappa}, nonempty
    std::vector<std::uint64_t> class_masks;
};

CubeModel make_cube(int kappa, std::vector<std::vector<int>> classes);

using CubePoint = std::uint64_t;

bool cube_in_d(const CubeModel& cube, int alpha, CubePoint x);  // alpha 1-based
bool cube_in_e(const CubeModel& cube, int alpha, CubePoint x);

// Partial assignment: coordinate (1-based) -> bit.
using CubeAssignment = std::vector<std::pair<int, int>>;

// Lands inside the cylinder and inside E_beta: copies a compatible z on
// the classes the cylinder touches, zeroes class beta, ones elsewhere.
// beta must not be a touched class, and z must avoid the touched D's
// (both checked; violations are input errors).
CubePoint cube_witness(const CubeModel& cube, const CubeAssignment& fixed, int beta);

// ---------------------------------------------------------------------------
// uniform-control partition

// Orthonormal system: the standard basis of R^dimension, grouped; each
// point rides one basis vector, injectively.
struct OrthoSystem {
    int dimension = 0;
    std::vector<std::vector<int>> groups;  // partition of {1..dimension}
    std::vector<int> vector_of_point;      // point id -> 1..dimension
};

void validate_ortho(const GroundModel& model, const OrthoSystem& ortho, const Rational& epsilon);

struct UecResult {
    std::vector<PointSet> parts;                    // cells, a partition of the points
    std::vector<MeasurableSet> covers;              // one block per cell
    std::vector<std::pair<int, int>> cell_labels;   // (group m, cover n), 1-based
    bool certified = false;
    Rational epsilon;
    Rational max_norm_sq;       // largest Euclidean norm^2 over swept assemblies
    Rational norm_bound_sq;     // (2*epsilon)^2
    std::uint64_t assemblies_swept = 0;
    std::uint64_t functionals_swept = 0;
    std::string grid;           // what the functional sweep covered
};

// Builds the control partition (group preimages refined by small-measure
// block covers with mu <= eps/(2^m m)), then certifies by exhaustive
// sweep over assemblies respecting it and the declared functional grid
// that every Riemann sum has norm <= 2*eps.
UecResult uec_partition(const GroundModel& model, const OrthoSystem& ortho,
                        const Rational& epsilon);

}  // namespace mcfill
