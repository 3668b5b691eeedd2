#include "mcfill/model.hpp"

#include <set>

#include "mcfill/errors.hpp"

namespace mcfill {

GroundModel GroundModel::make(std::vector<Block> blocks, std::vector<std::string> point_names) {
    GroundModel m;
    m.blocks_ = std::move(blocks);
    m.point_names_ = std::move(point_names);
    m.block_of_point_.assign(m.point_names_.size(), -1);

    Rational total = 0;
    for (std::size_t b = 0; b < m.blocks_.size(); ++b) {
        Block& blk = m.blocks_[b];
        if (blk.measure < 0)
            throw InputError("block " + std::to_string(b) + " has negative measure");
        total += blk.measure;
        blk.points = normalized(std::move(blk.points));
        for (PointId p : blk.points) {
            if (p < 0 || p >= static_cast<int>(m.block_of_point_.size()))
                throw InputError("block " + std::to_string(b) + " references unknown point id " +
                                 std::to_string(p));
            if (m.block_of_point_[p] != -1)
                throw InputError("point '" + m.point_names_[p] + "' appears in two blocks");
            m.block_of_point_[p] = static_cast<BlockId>(b);
        }
    }
    if (total != 1)
        throw InputError("block measures sum to " + format_rational(total) + ", expected 1");
    for (std::size_t p = 0; p < m.block_of_point_.size(); ++p)
        if (m.block_of_point_[p] == -1)
            throw InputError("point '" + m.point_names_[p] + "' belongs to no block");
    for (std::size_t p = 0; p < m.point_names_.size(); ++p) {
        auto [it, fresh] = m.name_to_id_.emplace(m.point_names_[p], static_cast<PointId>(p));
        if (!fresh) throw InputError("duplicate point name '" + m.point_names_[p] + "'");
    }
    return m;
}

GroundModel GroundModel::make(std::vector<Block> blocks) {
    int n = 0;
    for (const Block& b : blocks)
        for (PointId p : b.points) n = std::max(n, p + 1);
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
    return make(std::move(blocks), std::move(names));
}

const Block& GroundModel::block(BlockId b) const {
    if (b < 0 || b >= block_count()) throw InputError("unknown block id " + std::to_string(b));
    return blocks_[b];
}

BlockId GroundModel::block_of(PointId p) const {
    if (p < 0 || p >= point_count()) throw InputError("unknown point id " + std::to_string(p));
    return block_of_point_[p];
}

const std::string& GroundModel::point_name(PointId p) const {
    if (p < 0 || p >= point_count()) throw InputError("unknown point id " + std::to_string(p));
    return point_names_[p];
}

std::optional<PointId> GroundModel::find_point(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end()) return std::nullopt;
    return it->second;
}

PointId GroundModel::require_point(const std::string& name) const {
    auto p = find_point(name);
    if (!p) throw InputError("unknown point '" + name + "'");
    return *p;
}

PointSet GroundModel::all_points() const {
    PointSet s(point_count());
    for (int i = 0; i < point_count(); ++i) s[i] = i;
    return s;
}

void GroundModel::validate_points(std::span<const PointId> s) const {
    for (PointId p : s)
        if (p < 0 || p >= point_count())
            throw InputError("unknown point id " + std::to_string(p));
}

void GroundModel::validate_blocks(std::span<const BlockId> s) const {
    for (BlockId b : s)
        if (b < 0 || b >= block_count())
            throw InputError("unknown block id " + std::to_string(b));
}

Rational GroundModel::measure(const MeasurableSet& e) const {
    validate_blocks(e);
    Rational total = 0;
    BlockId prev = -1;
    for (BlockId b : e) {
        if (b != prev) total += blocks_[b].measure;
        prev = b;
    }
    return total;
}

Rational GroundModel::outer_measure(const PointSet& s) const {
    return measure(hull(s));
}

MeasurableSet GroundModel::hull(const PointSet& s) const {
    validate_points(s);
    MeasurableSet blocks;
    blocks.reserve(s.size());
    for (PointId p : s) blocks.push_back(block_of_point_[p]);
    return normalized(std::move(blocks));
}

bool GroundModel::is_eta_thick(const std::vector<MeasurableSet>& families,
                               const Rational& eta) const {
    if (eta < 0) throw InputError("eta must be nonnegative");
    MeasurableSet all;
    for (const MeasurableSet& e : families) all = set_union(all, e);
    return Rational(1) - measure(all) <= eta;
}

GroundModel GroundModel::refine_block(BlockId b, int piece_count,
                                      const std::vector<int>& piece_of) const {
    const Block& target = block(b);
    if (piece_count < 1) throw InputError("piece count must be >= 1");
    if (!piece_of.empty() && piece_of.size() != target.points.size())
        throw InputError("piece assignment size does not match block point count");
    for (int piece : piece_of)
        if (piece < 0 || piece >= piece_count)
            throw InputError("piece assignment out of range");

    std::vector<Block> pieces(piece_count);
    for (Block& piece : pieces) piece.measure = target.measure / piece_count;
    for (std::size_t i = 0; i < target.points.size(); ++i) {
        int piece = piece_of.empty() ? 0 : piece_of[i];
        pieces[piece].points.push_back(target.points[i]);
    }

    std::vector<Block> out;
    out.reserve(blocks_.size() + piece_count - 1);
    for (BlockId i = 0; i < block_count(); ++i) {
        if (i == b)
            for (Block& piece : pieces) out.push_back(std::move(piece));
        else
            out.push_back(blocks_[i]);
    }
    return make(std::move(out), point_names_);
}

std::vector<MeasurableSet> disjointify(const std::vector<MeasurableSet>& sets) {
    std::vector<MeasurableSet> out;
    out.reserve(sets.size());
    MeasurableSet seen;
    for (const MeasurableSet& a : sets) {
        MeasurableSet norm = normalized(a);
        out.push_back(set_difference(norm, seen));
        seen = set_union(seen, norm);
    }
    return out;
}

std::vector<MeasurableSet> equipartition(const GroundModel& model, const MeasurableSet& b,
                                         const Rational& theta) {
    if (theta <= 0) throw InputError("theta must be positive");
    MeasurableSet blocks = normalized(b);
    model.validate_blocks(blocks);

    std::vector<MeasurableSet> pieces;
    for (BlockId id : blocks) {
        const Rational& m = model.block(id).measure;
        if (m == 0) continue;
        if (m == theta) {
            pieces.push_back({id});
            continue;
        }
        Rational ratio = m / theta;
        if (denominator(ratio) != 1)
            throw InputError("block " + std::to_string(id) + " has measure " +
                             format_rational(m) + ", not an integer multiple of theta = " +
                             format_rational(theta));
        throw InputError("block " + std::to_string(id) + " has measure " + format_rational(m) +
                         " = " + format_rational(ratio) + " * theta; refine_block(" +
                         std::to_string(id) + ", " + format_rational(ratio) +
                         ") first so each piece has measure theta");
    }
    return pieces;
}

}  // namespace mcfill
