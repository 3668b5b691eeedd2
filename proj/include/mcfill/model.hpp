#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcfill/rational.hpp"
#include "mcfill/sets.hpp"

namespace mcfill {

struct Block {
    Rational measure;  // >= 0
    PointSet points;   // sorted ids; may be empty (unmarked mass)
};

// Finite block probability model. The measurable algebra is generated by
// the blocks; arbitrary point sets are usually non-measurable, which is
// what gives the outer measure its bite. Zero-measure blocks host the
// outer-measure-0 point sets, zero-point blocks host unmarked mass.
//
// Immutable after construction; refine_block returns a new model.
class GroundModel {
public:
    // Validates: every point in exactly one block, measures >= 0 summing
    // to exactly 1, names unique. Throws InputError.
    static GroundModel make(std::vector<Block> blocks, std::vector<std::string> point_names);

    // Convenience for tests: points named "p0".."p{n-1}".
    static GroundModel make(std::vector<Block> blocks);

    int point_count() const { return static_cast<int>(point_names_.size()); }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const Block& block(BlockId b) const;
    BlockId block_of(PointId p) const;
    const std::string& point_name(PointId p) const;
    std::optional<PointId> find_point(const std::string& name) const;
    PointId require_point(const std::string& name) const;  // InputError if unknown

    PointSet all_points() const;

    void validate_points(std::span<const PointId> s) const;   // InputError on bad id
    void validate_blocks(std::span<const BlockId> s) const;

    Rational measure(const MeasurableSet& e) const;

    // Total measure of the blocks meeting S; equals the minimum measure of
    // a measurable cover of S.
    Rational outer_measure(const PointSet& s) const;

    // The minimal measurable cover: blocks meeting S.
    MeasurableSet hull(const PointSet& s) const;

    // mu(Omega \ union(families)) <= eta. Negative eta is an input error.
    bool is_eta_thick(const std::vector<MeasurableSet>& families, const Rational& eta) const;

    // Splits block b into piece_count equal-measure blocks placed where b
    // was (pieces at indices b, b+1, ..; later blocks shift). piece_of[i]
    // assigns block(b).points[i] to a piece; empty means all to piece 0.
    GroundModel refine_block(BlockId b, int piece_count, const std::vector<int>& piece_of = {}) const;

private:
    std::vector<Block> blocks_;
    std::vector<std::string> point_names_;
    std::unordered_map<std::string, PointId> name_to_id_;
    std::vector<BlockId> block_of_point_;
};

// E_1 = A_1, E_i = A_i \ (A_1 u .. u A_{i-1}). Outputs are pairwise
// disjoint, E_i subset of A_i, and the union is preserved.
std::vector<MeasurableSet> disjointify(const std::vector<MeasurableSet>& sets);

// Splits B into floor(mu(B)/theta) disjoint measurable pieces of measure
// exactly theta. Requires theta > 0 and every block inside B to have
// measure exactly theta or 0; a block with measure k*theta (k >= 2)
// cannot be split inside the block algebra, so the error names the block
// and the refine_block call that fixes it.
std::vector<MeasurableSet> equipartition(const GroundModel& model, const MeasurableSet& b,
                                         const Rational& theta);

}  // namespace mcfill
