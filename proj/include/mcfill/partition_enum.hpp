#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mcfill/model.hpp"
#include "mcfill/sets.hpp"

namespace mcfill {

// Set partitions of {0..n-1} enumerated as restricted growth strings:
// rgs[0] = 0 and rgs[i] <= 1 + max(rgs[0..i-1]). Part indices follow
// first occurrence, so the enumeration order and every certificate
// derived from it are canonical.

std::uint64_t bell_number(int n);

// Visits every partition in RGS order; return false to stop early.
// n = 0 visits the single empty partition once.
void for_each_partition(int n,
                        const std::function<bool(std::span<const int> rgs, int part_count)>& visit);

// Flat table of all RGS codes, for index-addressed (parallel) sweeps.
struct RgsTable {
    int n = 0;
    std::size_t count = 0;
    std::vector<std::int8_t> codes;        // count * n entries
    std::vector<std::int8_t> part_counts;  // count entries

    std::span<const std::int8_t> row(std::size_t i) const {
        return {codes.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
};

RgsTable materialize_partitions(int n);

std::vector<PointSet> parts_from_rgs(std::span<const std::int8_t> rgs, int part_count);

// Checks parts are pairwise disjoint point sets covering every model
// point (empty parts permitted); throws InputError otherwise.
void validate_partition(const GroundModel& model, const std::vector<PointSet>& parts);

// part index of each point, -1 padded; requires a valid partition
std::vector<int> part_of_points(const GroundModel& model, const std::vector<PointSet>& parts);

}  // namespace mcfill
