#include "dbnad/dag.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "dbnad/error.hpp"

namespace dbnad {

bool is_dag(int n, std::span<const Edge> edges) {
  if (n < 0) return false;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n || e.from == e.to) return false;
    auto& cell = seen[static_cast<std::size_t>(e.from) * n + e.to];
    if (cell) return false;
    cell = 1;
    children[e.from].push_back(e.to);
    ++indegree[e.to];
  }
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) stack.push_back(v);
  int visited = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++visited;
    for (int c : children[v])
      if (--indegree[c] == 0) stack.push_back(c);
  }
  return visited == n;
}

Dag::Dag(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 0) throw StructuralError("negative node count");
}

Dag Dag::from_edges(int n, std::span<const Edge> edges) {
  if (!is_dag(n, edges)) throw StructuralError("edge set is not a simple DAG on " + std::to_string(n) + " nodes");
  Dag g(n);
  for (const auto& e : edges) g.adj_[g.index(e.from, e.to)] = 1;
  g.edge_count_ = static_cast<int>(edges.size());
  return g;
}

void Dag::check_node(int v) const {
  if (v < 0 || v >= n_) throw StructuralError("node " + std::to_string(v) + " out of range");
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (adj_[index(i, j)]) out.push_back({i, j});
  return out;
}

std::vector<int> Dag::parents(int node) const {
  check_node(node);
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (adj_[index(i, node)]) out.push_back(i);
  return out;
}

bool Dag::reaches(int from, int to) const {
  check_node(from);
  check_node(to);
  if (from == to) return true;
  std::vector<std::uint8_t> visited(n_, 0);
  std::vector<int> stack{from};
  visited[from] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c = 0; c < n_; ++c) {
      if (!adj_[index(v, c)] || visited[c]) continue;
      if (c == to) return true;
      visited[c] = 1;
      stack.push_back(c);
    }
  }
  return false;
}

bool Dag::can_add(int from, int to) const {
  check_node(from);
  check_node(to);
  return from != to && !connected(from, to) && !reaches(to, from);
}

void Dag::add_edge(int from, int to) {
  if (!can_add(from, to))
    throw StructuralError("cannot add edge " + std::to_string(from + 1) + "->" + std::to_string(to + 1));
  adj_[index(from, to)] = 1;
  ++edge_count_;
}

void Dag::remove_edge(int from, int to) {
  check_node(from);
  check_node(to);
  if (!adj_[index(from, to)])
    throw StructuralError("edge " + std::to_string(from + 1) + "->" + std::to_string(to + 1) + " not present");
  adj_[index(from, to)] = 0;
  --edge_count_;
}

std::uint64_t Dag::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int k = 0; k < 4; ++k) mix(static_cast<std::uint8_t>(n_ >> (8 * k)));
  for (auto b : adj_) mix(b);
  return h;
}

std::vector<int> topological_order(const Dag& dag, std::span<const double> volatilities) {
  const int n = dag.size();
  if (static_cast<int>(volatilities.size()) != n) throw StructuralError("volatility vector size mismatch");
  // Max-heap on (volatility, -index).
  auto before = [&](int a, int b) {
    if (volatilities[a] != volatilities[b]) return volatilities[a] < volatilities[b];
    return a > b;
  };
  std::priority_queue<int, std::vector<int>, decltype(before)> ready(before);
  std::vector<int> indegree(n, 0);
  for (int j = 0; j < n; ++j) indegree[j] = static_cast<int>(dag.parents(j).size());
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int c = 0; c < n; ++c)
      if (dag.has_edge(v, c) && --indegree[c] == 0) ready.push(c);
  }
  if (static_cast<int>(order.size()) != n) throw StructuralError("cycle detected in topological_order");
  return order;
}

ChangeCaps max_changes(const Dag& dag) {
  const int n = dag.size();
  int free_pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!dag.connected(i, j)) ++free_pairs;
  return {free_pairs, dag.edge_count()};
}

void write_edge_list(std::ostream& out, const Dag& dag) {
  out << "n=" << dag.size() << '\n';
  for (const auto& e : dag.edges()) out << e.from + 1 << ' ' << e.to + 1 << '\n';
}

std::string to_edge_list_string(const Dag& dag) {
  std::ostringstream os;
  write_edge_list(os, dag);
  return os.str();
}

Dag read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (n < 0) {
      if (line.rfind("n=", 0) != 0) throw DataError("edge list line " + std::to_string(line_no) + ": expected n=<count>");
      try {
        n = std::stoi(line.substr(2));
      } catch (const std::exception&) {
        throw DataError("edge list line " + std::to_string(line_no) + ": bad node count");
      }
      continue;
    }
    std::istringstream ls(line);
    int i = 0, j = 0;
    if (!(ls >> i >> j)) throw DataError("edge list line " + std::to_string(line_no) + ": expected 'i j'");
    edges.push_back({i - 1, j - 1});
  }
  if (n < 0) throw DataError("edge list: missing n=<count> header");
  if (!is_dag(n, edges)) throw DataError("edge list does not describe a DAG");
  return Dag::from_edges(n, edges);
}

}  // namespace dbnad
