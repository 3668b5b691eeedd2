#include "mcfill/partition_enum.hpp"

#include "mcfill/errors.hpp"

namespace mcfill {

std::uint64_t bell_number(int n) {
    if (n < 0) throw InputError("bell_number of negative n");
    // Bell triangle; n <= 25 keeps it inside 64 bits comfortably
    if (n > 25) throw ResourceError("bell_number overflow guard (n > 25)");
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next(i + 1);
        next[0] = row.back();
        for (int j = 1; j <= i; ++j) next[j] = next[j - 1] + row[j - 1];
        row = std::move(next);
    }
    return row[0];
}

void for_each_partition(
    int n, const std::function<bool(std::span<const int> rgs, int part_count)>& visit) {
    if (n < 0) throw InputError("negative ground size");
    std::vector<int> rgs(n, 0);
    if (n == 0) {
        visit({}, 0);
        return;
    }
    auto rec = [&](auto&& self, int i, int max_seen) -> bool {
        if (i == n) return visit(rgs, max_seen + 1);
        for (int v = 0; v <= max_seen + 1; ++v) {
            rgs[i] = v;
            if (!self(self, i + 1, std::max(max_seen, v))) return false;
        }
        return true;
    };
    rec(rec, 1, 0);  // rgs[0] is fixed at 0
}

RgsTable materialize_partitions(int n) {
    RgsTable table;
    table.n = n;
    for_each_partition(n, [&](std::span<const int> rgs, int part_count) {
        for (int v : rgs) table.codes.push_back(static_cast<std::int8_t>(v));
        table.part_counts.push_back(static_cast<std::int8_t>(part_count));
        ++table.count;
        return true;
    });
    return table;
}

std::vector<PointSet> parts_from_rgs(std::span<const std::int8_t> rgs, int part_count) {
    std::vector<PointSet> parts(part_count);
    for (std::size_t i = 0; i < rgs.size(); ++i)
        parts[rgs[i]].push_back(static_cast<PointId>(i));
    return parts;
}

void validate_partition(const GroundModel& model, const std::vector<PointSet>& parts) {
    std::vector<char> seen(model.point_count(), 0);
    for (const PointSet& part : parts) {
        if (!is_sorted_unique(part)) throw InputError("partition parts must be sorted sets");
        model.validate_points(part);
        for (PointId p : part) {
            if (seen[p]) throw InputError("partition parts overlap at point '" +
                                          model.point_name(p) + "'");
            seen[p] = 1;
        }
    }
    for (PointId p = 0; p < model.point_count(); ++p)
        if (!seen[p])
            throw InputError("partition misses point '" + model.point_name(p) + "'");
}

std::vector<int> part_of_points(const GroundModel& model, const std::vector<PointSet>& parts) {
    validate_partition(model, parts);
    std::vector<int> owner(model.point_count(), -1);
    for (std::size_t m = 0; m < parts.size(); ++m)
        for (PointId p : parts[m]) owner[p] = static_cast<int>(m);
    return owner;
}

}  // namespace mcfill
