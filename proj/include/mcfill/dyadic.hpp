#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcfill/sets.hpp"

namespace mcfill {

// Nodes of the dyadic tree are stored as their breadth-first numbers:
// code 1 is the root, and appending bit c to a node maps code n to 2n+c.
// Equivalently, code = 1 b1 b2 .. bk in binary for the node (b1,..,bk).
// This single integer doubles as the fixed bijection between the tree and
// the naturals, so "the Schreier set of tree nodes" is literally the
// Schreier condition on codes. Codes are kept in int (leaf length <= 29).
using NodeCode = int;

constexpr NodeCode kRootCode = 1;
constexpr int kMaxLeafLength = 29;

int node_depth(NodeCode code);
bool is_valid_node(NodeCode code);
bool is_valid_leaf(NodeCode code, int length);

// "0110" -> node; empty string is the root. Leaves must have exactly
// `length` bits when length >= 0.
NodeCode parse_node(const std::string& bits);
std::string format_node(NodeCode code);

NodeCode node_parent(NodeCode code);
NodeCode node_child(NodeCode code, int bit);
bool is_prefix(NodeCode prefix, NodeCode code);

// Longest common prefix under the tree order.
NodeCode node_meet(NodeCode a, NodeCode b);

// |S| <= min(S) on naturals >= 1 (∅ passes). Works on plain naturals and
// on node codes alike.
bool schreier_contains(std::span<const int> sorted_set);

// The last ceil(|H|/2) elements of H ascending: always a Schreier set of
// size >= |H|/2.
std::vector<int> schreier_extract(std::span<const int> h);

struct Divergence {
    int index;        // 1-based first disagreeing coordinate
    NodeCode prefix;  // common prefix of length index-1
};

// First disagreement of two distinct leaves of equal length.
Divergence divergence(NodeCode x, NodeCode y, int length);

// { v(x,y) : x != y in D }: the pairwise divergence nodes, sorted by code.
// For |D| >= 1 this has exactly |D|-1 elements and is meet-closed.
std::vector<NodeCode> v_set(std::span<const NodeCode> leaves, int length);

// A chain of length floor(log2 |C|)+1 inside a meet-closed C, by the
// min-split recursion: take the minimum, split the rest by its child
// branch, recurse into the larger part (ties to the 0-branch). Verifies
// meet-closedness on the way and reports a violating pair if it fails.
std::vector<NodeCode> chain_extract(std::span<const NodeCode> nodes);

// Membership in the family D: v_set(D) is Schreier as a code set.
bool dyadicD_contains(std::span<const NodeCode> leaves, int length);

struct DyadicExtraction {
    std::vector<NodeCode> member;  // D ⊆ A, a member of the family
    std::vector<NodeCode> chain;   // U: the extracted chain in v_set(A)
    std::vector<NodeCode> top;     // W: the Schreier top half of U
};

// From any A with |A| >= 2 extracts D ⊆ A in the family with
// |D| > log2(|A|-1)/2 + 1: chain in v_set(A), Schreier top half W, then
// one witness per chain node -- the lexicographically least leaf of A
// extending w_i away from the next chain node, and the least pair
// diverging exactly at the top node. v_set(D) equals W.
DyadicExtraction dyadicD_extract(std::span<const NodeCode> leaves, int length);

}  // namespace mcfill
