#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dbnad {

/// Directed edge between 0-based node indices.
struct Edge {
  int from = 0;
  int to = 0;
  auto operator<=>(const Edge&) const = default;
};

/// True iff the candidate edge set over `n` nodes is well formed (in range,
/// no self-loops, no duplicates) and admits a topological order.
bool is_dag(int n, std::span<const Edge> edges);

/// Directed acyclic graph with dense adjacency.
///
/// The acyclicity invariant is established by `from_edges` and preserved by
/// `add_edge`, which refuses edges that would close a cycle.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int n);

  /// Throws StructuralError for cycles, self-loops, duplicates or
  /// out-of-range nodes.
  static Dag from_edges(int n, std::span<const Edge> edges);

  int size() const { return n_; }
  bool has_edge(int from, int to) const { return adj_[index(from, to)] != 0; }
  /// An edge exists in either orientation.
  bool connected(int i, int j) const { return has_edge(i, j) || has_edge(j, i); }
  int edge_count() const { return edge_count_; }

  /// Edges sorted by (from, to).
  std::vector<Edge> edges() const;
  /// Parents of `node` in ascending index order.
  std::vector<int> parents(int node) const;

  /// Directed path from `from` to `to` (a node reaches itself).
  bool reaches(int from, int to) const;
  /// Adding from->to keeps the graph acyclic and simple.
  bool can_add(int from, int to) const;

  /// Throws StructuralError if the edge exists or would create a cycle.
  void add_edge(int from, int to);
  /// Throws StructuralError if the edge is absent.
  void remove_edge(int from, int to);

  bool operator==(const Dag& other) const = default;

  /// 64-bit FNV-1a over the adjacency bytes; stable across platforms.
  std::uint64_t hash() const;

 private:
  std::size_t index(int from, int to) const { return static_cast<std::size_t>(from) * n_ + to; }
  void check_node(int v) const;

  int n_ = 0;
  int edge_count_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Topological order in which, among nodes that are simultaneously
/// available, the one with the larger volatility comes first (ties broken by
/// ascending index). Throws StructuralError on a cycle.
std::vector<int> topological_order(const Dag& dag, std::span<const double> volatilities);

struct ChangeCaps {
  int a_max = 0;
  int d_max = 0;
};

/// d_max is the edge count; a_max counts unordered pairs with no edge.
ChangeCaps max_changes(const Dag& dag);

/// Edge-list text form: a "n=<count>" header then one "i j" line per edge,
/// 1-based.
void write_edge_list(std::ostream& out, const Dag& dag);
Dag read_edge_list(std::istream& in);
std::string to_edge_list_string(const Dag& dag);

}  // namespace dbnad
