#ifndef HYPERALG_HYPERCUBE_HPP
#define HYPERALG_HYPERCUBE_HPP

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Combinatorics of the directed L-dimensional hypercube: states, acquisition
// edges, adjacency, variable counts, and the canonical variable-elimination
// choice shared by the system generator and the likelihood parametrization.
//
// A state is a binary string of length L, feature k (1-based, leftmost
// character first) stored in bit k-1.  With this packing the label "001"
// corresponds to the integer 4, and the canonical orderings below are plain
// integer comparisons.

namespace hyperalg {

#ifndef HYPERALG_MAX_DIMENSION
#define HYPERALG_MAX_DIMENSION 16
#endif
inline constexpr int kMaxDimension = HYPERALG_MAX_DIMENSION;

struct NodeId {
  std::uint32_t bits = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Edge {
  NodeId src;
  NodeId dst;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline void check_dimension(int L) {
  if (L < 1 || L > kMaxDimension)
    throw std::invalid_argument("hypercube dimension L must be in [1, " +
                                std::to_string(kMaxDimension) + "], got " +
                                std::to_string(L));
}

inline int level(NodeId n) { return std::popcount(n.bits); }

inline void check_node(NodeId n, int L) {
  check_dimension(L);
  if (n.bits >= (std::uint32_t{1} << L))
    throw std::invalid_argument("node " + std::to_string(n.bits) +
                                " out of range for L=" + std::to_string(L));
}

inline NodeId full_node(int L) {
  return NodeId{(std::uint32_t{1} << L) - 1};
}

/// Renders a node as its L-character binary label, feature 1 first.
inline std::string node_label(NodeId n, int L) {
  check_node(n, L);
  std::string s(static_cast<std::size_t>(L), '0');
  for (int k = 0; k < L; ++k)
    if (n.bits >> k & 1u) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

/// Parses a binary label; the label length fixes L.
inline NodeId parse_node(std::string_view label) {
  if (label.empty() || label.size() > static_cast<std::size_t>(kMaxDimension))
    throw std::invalid_argument("bad node label '" + std::string(label) + "'");
  NodeId n;
  for (std::size_t k = 0; k < label.size(); ++k) {
    if (label[k] == '1')
      n.bits |= std::uint32_t{1} << k;
    else if (label[k] != '0')
      throw std::invalid_argument("bad character in node label '" +
                                  std::string(label) + "'");
  }
  return n;
}

inline bool is_edge(Edge e, int L) {
  check_node(e.src, L);
  check_node(e.dst, L);
  std::uint32_t gained = e.src.bits ^ e.dst.bits;
  return (e.dst.bits & e.src.bits) == e.src.bits && std::popcount(gained) == 1;
}

inline std::vector<Edge> outgoing(NodeId i, int L) {
  check_node(i, L);
  std::vector<Edge> out;
  for (int k = 0; k < L; ++k) {
    std::uint32_t m = std::uint32_t{1} << k;
    if (!(i.bits & m)) out.push_back(Edge{i, NodeId{i.bits | m}});
  }
  return out;
}

inline std::vector<Edge> incoming(NodeId j, int L) {
  check_node(j, L);
  std::vector<Edge> in;
  for (int k = L - 1; k >= 0; --k) {  // ascending by source bits
    std::uint32_t m = std::uint32_t{1} << k;
    if (j.bits & m) in.push_back(Edge{NodeId{j.bits & ~m}, j});
  }
  return in;
}

/// All 2^{L-1}·L acquisition edges, ascending by (src.bits, dst.bits).
inline std::vector<Edge> all_edges(int L) {
  check_dimension(L);
  std::vector<Edge> edges;
  edges.reserve((std::size_t{1} << (L - 1)) * static_cast<std::size_t>(L));
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << L); ++s)
    for (const Edge& e : outgoing(NodeId{s}, L)) edges.push_back(e);
  return edges;
}

/// Inner nodes (levels 1..L-1) ordered by (level, bits).
inline std::vector<NodeId> inner_nodes_by_level(int L) {
  check_dimension(L);
  std::vector<NodeId> nodes;
  for (int lv = 1; lv < L; ++lv)
    for (std::uint32_t b = 0; b < (std::uint32_t{1} << L); ++b)
      if (std::popcount(b) == lv) nodes.push_back(NodeId{b});
  return nodes;
}

struct VarCounts {
  long free_a = 0;
  long free_b = 0;
  long reduced_generators = 0;
};

/// Closed-form counts of free variables and reduced generators.
inline VarCounts free_var_counts(int L) {
  check_dimension(L);
  auto choose = [](int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  VarCounts c;
  for (int k = 0; k <= L - 2; ++k) c.free_a += choose(L, k) * (L - 1 - k);
  for (int k = 2; k <= L; ++k) c.free_b += choose(L, k) * (k - 1);
  c.reduced_generators = ((long{1} << L) - L - 1) + c.free_b;
  return c;
}

// Canonical elimination choice.  Per source node with several outgoing edges
// the a-variable on the largest destination is eliminated through the
// sum-to-one constraint; per destination node with several incoming edges the
// b-variable on the smallest source is eliminated.  Single outgoing edges out
// of level L-1 and single incoming edges into level 1 are forced to 1.  This
// reproduces the worked L=3 reduction exactly.
enum class VarStatus { free_var, eliminated, forced };

struct Eliminations {
  std::vector<Edge> free_a;
  std::vector<Edge> eliminated_a;  // one per node with out-degree >= 2
  std::vector<Edge> forced_a;      // edges out of level L-1
  std::vector<Edge> free_b;
  std::vector<Edge> eliminated_b;  // one per node with in-degree >= 2
  std::vector<Edge> forced_b;      // edges into level 1
};

inline Eliminations canonical_eliminations(int L) {
  check_dimension(L);
  Eliminations el;
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << L); ++b) {
    NodeId n{b};
    int lv = level(n);
    if (lv < L) {
      auto out = outgoing(n, L);  // ascending dst
      if (lv == L - 1) {
        el.forced_a.push_back(out.front());
      } else {
        for (std::size_t k = 0; k + 1 < out.size(); ++k)
          el.free_a.push_back(out[k]);
        el.eliminated_a.push_back(out.back());
      }
    }
    if (lv > 0) {
      auto in = incoming(n, L);  // ascending src
      if (lv == 1) {
        el.forced_b.push_back(in.front());
      } else {
        el.eliminated_b.push_back(in.front());
        for (std::size_t k = 1; k < in.size(); ++k) el.free_b.push_back(in[k]);
      }
    }
  }
  return el;
}

/// The I1 generator dropped per level is the one of the largest node.
inline NodeId dropped_node_at_level(int L, int lv) {
  check_dimension(L);
  if (lv < 1 || lv > L - 1) throw std::invalid_argument("level out of range");
  std::uint32_t best = 0;
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << L); ++b)
    if (std::popcount(b) == lv && b > best) best = b;
  return NodeId{best};
}

}  // namespace hyperalg

#endif  // HYPERALG_HYPERCUBE_HPP
