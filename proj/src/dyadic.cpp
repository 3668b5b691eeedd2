#include "mcfill/dyadic.hpp"

#include <algorithm>
#include <bit>

#include "mcfill/errors.hpp"
#include "mcfill/rational.hpp"

namespace mcfill {

int node_depth(NodeCode code) {
    return std::bit_width(static_cast<unsigned>(code)) - 1;
}

bool is_valid_node(NodeCode code) {
    return code >= 1 && node_depth(code) <= kMaxLeafLength;
}

bool is_valid_leaf(NodeCode code, int length) {
    return code >= 1 && node_depth(code) == length;
}

NodeCode parse_node(const std::string& bits) {
    if (bits.size() > kMaxLeafLength) throw InputError("node deeper than supported: " + bits);
    NodeCode code = kRootCode;
    for (char c : bits) {
        if (c != '0' && c != '1') throw InputError("bad bit string '" + bits + "'");
        code = (code << 1) | (c - '0');
    }
    return code;
}

std::string format_node(NodeCode code) {
    if (!is_valid_node(code)) throw InputError("bad node code " + std::to_string(code));
    int depth = node_depth(code);
    std::string out(depth, '0');
    for (int i = 0; i < depth; ++i)
        out[i] = ((code >> (depth - 1 - i)) & 1) ? '1' : '0';
    return out;
}

NodeCode node_parent(NodeCode code) {
    if (code <= kRootCode) throw InputError("the root has no parent");
    return code >> 1;
}

NodeCode node_child(NodeCode code, int bit) {
    if (bit != 0 && bit != 1) throw InputError("bit must be 0 or 1");
    return (code << 1) | bit;
}

bool is_prefix(NodeCode prefix, NodeCode code) {
    int shift = node_depth(code) - node_depth(prefix);
    return shift >= 0 && (code >> shift) == prefix;
}

NodeCode node_meet(NodeCode a, NodeCode b) {
    int da = node_depth(a), db = node_depth(b);
    if (da > db) a >>= (da - db);
    if (db > da) b >>= (db - da);
    while (a != b) {
        a >>= 1;
        b >>= 1;
    }
    return a;
}

bool schreier_contains(std::span<const int> sorted_set) {
    if (sorted_set.empty()) return true;
    if (sorted_set.front() < 1) throw InputError("Schreier elements must be naturals >= 1");
    return static_cast<int>(sorted_set.size()) <= sorted_set.front();
}

std::vector<int> schreier_extract(std::span<const int> h) {
    if (!is_sorted_unique(h)) throw InputError("schreier_extract expects a sorted set");
    if (!h.empty() && h.front() < 1) throw InputError("Schreier elements must be naturals >= 1");
    std::size_t keep = (h.size() + 1) / 2;
    return std::vector<int>(h.end() - keep, h.end());
}

Divergence divergence(NodeCode x, NodeCode y, int length) {
    if (!is_valid_leaf(x, length) || !is_valid_leaf(y, length))
        throw InputError("divergence expects two leaves of length " + std::to_string(length));
    if (x == y) throw InputError("divergence of a leaf with itself is undefined");
    int diff_width = std::bit_width(static_cast<unsigned>(x ^ y));
    int index = length - diff_width + 1;
    return Divergence{index, static_cast<NodeCode>(x >> (length - index + 1))};
}

std::vector<NodeCode> v_set(std::span<const NodeCode> leaves, int length) {
    for (NodeCode x : leaves)
        if (!is_valid_leaf(x, length))
            throw InputError("v_set: not a leaf of length " + std::to_string(length) + ": " +
                             std::to_string(x));
    std::vector<NodeCode> sorted(leaves.begin(), leaves.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("v_set: duplicate leaves");
    std::vector<NodeCode> nodes;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t j = i + 1; j < sorted.size(); ++j)
            nodes.push_back(node_meet(sorted[i], sorted[j]));
    return normalized(std::move(nodes));
}

namespace {

// Min-split recursion; rearranges the span in place. Both branches are
// walked so the whole input gets certified meet-closed (every element must
// extend the local minimum at every level; the meet of a non-extending
// pair is provably absent). Only the larger branch extends the chain.
void chain_extract_rec(std::span<NodeCode> c, std::vector<NodeCode>* chain) {
    auto min_it = std::min_element(c.begin(), c.end());
    std::iter_swap(c.begin(), min_it);
    NodeCode t = c.front();
    for (NodeCode s : c)
        if (!is_prefix(t, s))
            throw InputError("chain_extract: input not meet-closed (inf of " + format_node(s) +
                             " and " + format_node(t) + " is missing)");
    if (chain) chain->push_back(t);
    auto rest = c.subspan(1);
    if (rest.empty()) return;

    // split the strict extensions of t by the child branch they take
    int shift_base = node_depth(t) + 1;
    auto takes_zero = [&](NodeCode s) {
        return ((s >> (node_depth(s) - shift_base)) & 1) == 0;
    };
    auto mid = std::partition(rest.begin(), rest.end(), takes_zero);
    std::size_t zero_count = static_cast<std::size_t>(mid - rest.begin());
    std::span<NodeCode> b0 = rest.subspan(0, zero_count);
    std::span<NodeCode> b1 = rest.subspan(zero_count);
    if (b1.size() > b0.size()) {
        if (!b0.empty()) chain_extract_rec(b0, nullptr);
        chain_extract_rec(b1, chain);
    } else {
        if (!b1.empty()) chain_extract_rec(b1, nullptr);
        chain_extract_rec(b0, chain);
    }
}

}  // namespace

std::vector<NodeCode> chain_extract(std::span<const NodeCode> nodes) {
    if (nodes.empty()) throw InputError("chain_extract: empty input");
    std::vector<NodeCode> c(nodes.begin(), nodes.end());
    for (NodeCode s : c)
        if (!is_valid_node(s)) throw InputError("chain_extract: bad node code");
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
        throw InputError("chain_extract: duplicate nodes");
    std::vector<NodeCode> chain;
    chain_extract_rec(std::span<NodeCode>(c), &chain);
    return chain;
}

bool dyadicD_contains(std::span<const NodeCode> leaves, int length) {
    if (leaves.size() <= 1) {
        for (NodeCode x : leaves)
            if (!is_valid_leaf(x, length))
                throw InputError("dyadicD: not a leaf of length " + std::to_string(length));
        return true;
    }
    std::vector<NodeCode> v = v_set(leaves, length);
    return schreier_contains(v);
}

namespace {

// Lexicographically least element of A extending `prefix`; for equal-depth
// leaves lex order on bit strings is numeric order on codes.
NodeCode least_extension(std::span<const NodeCode> sorted_leaves, NodeCode prefix) {
    for (NodeCode x : sorted_leaves)
        if (is_prefix(prefix, x)) return x;
    throw InvariantError("no leaf extends " + format_node(prefix));
}

}  // namespace

DyadicExtraction dyadicD_extract(std::span<const NodeCode> leaves, int length) {
    if (leaves.size() < 2) throw InputError("dyadicD_extract needs at least two leaves");
    std::vector<NodeCode> a(leaves.begin(), leaves.end());
    std::sort(a.begin(), a.end());

    std::vector<NodeCode> divergences = v_set(a, length);
    std::vector<NodeCode> chain = chain_extract(divergences);

    // chain order is code order here (a chain's extensions have larger
    // codes), so the Schreier top half is its tail
    std::vector<NodeCode> top = schreier_extract(chain);
    const std::size_t m = top.size();

    std::vector<NodeCode> member;
    member.reserve(m + 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        // w_{i+1} extends child(w_i, bit); pick the least leaf leaving the
        // chain at w_i through the other child
        int shift = node_depth(top[i + 1]) - node_depth(top[i]) - 1;
        int bit = (top[i + 1] >> shift) & 1;
        member.push_back(least_extension(a, node_child(top[i], 1 - bit)));
    }
    member.push_back(least_extension(a, node_child(top[m - 1], 0)));
    member.push_back(least_extension(a, node_child(top[m - 1], 1)));
    member = normalized(std::move(member));

    if (member.size() != m + 1)
        throw InvariantError("dyadic extraction produced colliding witnesses");
    if (v_set(member, length) != top)
        throw InvariantError("dyadic extraction: v(D) differs from the Schreier top half");
    // |D| > log2(|A|-1)/2 + 1, exactly: 4^(|D|-1) > |A|-1
    BigInt lhs = BigInt(1) << (2 * (member.size() - 1));
    if (lhs <= BigInt(a.size()) - 1)
        throw InvariantError("dyadic extraction bound violated");
    return DyadicExtraction{std::move(member), std::move(chain), std::move(top)};
}

}  // namespace mcfill
