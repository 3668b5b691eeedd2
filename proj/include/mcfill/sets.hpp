#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace mcfill {

// Point ids and block ids are dense nonnegative ints; names live at the
// I/O boundary. Finite sets are sorted ascending vectors without
// duplicates (the trie order and every deterministic tie-break rely on it).
using PointId = int;
using BlockId = int;
using PointSet = std::vector<PointId>;
using MeasurableSet = std::vector<BlockId>;

inline std::vector<int> normalized(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool is_sorted_unique(std::span<const int> v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

inline bool set_contains(std::span<const int> sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

inline bool is_subset(std::span<const int> a, std::span<const int> b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::vector<int> set_union(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> set_difference(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> set_intersection(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool sets_intersect(std::span<const int> a, std::span<const int> b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) ++i; else ++j;
    }
    return false;
}

}  // namespace mcfill
