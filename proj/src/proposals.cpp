#include "dbnad/proposals.hpp"

#include <algorithm>
#include <cmath>

#include "dbnad/error.hpp"

namespace dbnad {

std::vector<StructureMove> valid_moves(const Dag& g) {
  std::vector<StructureMove> moves;
  const int n = g.size();
  Dag scratch = g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (g.has_edge(i, j)) {
        moves.push_back({MoveKind::Delete, {i, j}});
        scratch.remove_edge(i, j);
        if (scratch.can_add(j, i)) moves.push_back({MoveKind::Reverse, {i, j}});
        scratch.add_edge(i, j);
      } else if (!g.has_edge(j, i) && g.can_add(i, j)) {
        moves.push_back({MoveKind::Add, {i, j}});
      }
    }
  return moves;
}

Dag apply_move(const Dag& g, const StructureMove& move) {
  Dag out = g;
  const auto [i, j] = move.edge;
  switch (move.kind) {
    case MoveKind::Add:
      out.add_edge(i, j);
      break;
    case MoveKind::Delete:
      out.remove_edge(i, j);
      break;
    case MoveKind::Reverse:
      out.remove_edge(i, j);
      out.add_edge(j, i);
      break;
  }
  return out;
}

StructureProposal multistep_structure_proposal(const Dag& g, Rng& rng, int max_steps) {
  StructureProposal p{g, 0.0, 0};
  const int steps = uniform_int(rng, 1, std::max(1, max_steps));
  auto moves = valid_moves(p.graph);
  if (moves.empty()) return p;
  const double start_count = static_cast<double>(moves.size());
  for (int s = 0; s < steps && !moves.empty(); ++s) {
    const auto& m = moves[uniform_int(rng, 0, static_cast<int>(moves.size()) - 1)];
    p.graph = apply_move(p.graph, m);
    ++p.steps;
    moves = valid_moves(p.graph);
  }
  // Every move is reversible, so the backward sequence exists and the
  // intermediate neighbourhood sizes cancel.
  p.log_ratio = std::log(start_count) - std::log(static_cast<double>(moves.size()));
  return p;
}

double randomwalk_kernel_prob(int from, int to) {
  if (from < 0 || to < 0) return 0.0;
  if (from == 0) return (to == 0 || to == 1) ? 0.5 : 0.0;
  return std::abs(to - from) <= 1 ? 1.0 / 3.0 : 0.0;
}

double randomwalk_element_ratio(int from, int to) {
  const double fwd = randomwalk_kernel_prob(from, to);
  if (fwd == 0.0) return 0.0;
  return randomwalk_kernel_prob(to, from) / fwd;
}

namespace {

int rw_step(int current, Rng& rng) {
  if (current == 0) return uniform_int(rng, 0, 1);
  return current + uniform_int(rng, -1, 1);
}

void pick_block(int T, int min_block, int max_block, Rng& rng, int& tau, int& block) {
  block = uniform_int(rng, min_block, std::max(min_block, std::min(max_block, T - 1)));
  tau = uniform_int(rng, 2, T - block + 1);
}

}  // namespace

CountProposal randomwalk_move(std::span<const int> adds, std::span<const int> dels, Rng& rng, int max_block) {
  const int T = static_cast<int>(adds.size());
  if (T < 2 || dels.size() != adds.size()) throw ConfigError("randomwalk_move: need two sequences of length >= 2");
  CountProposal p;
  p.adds.assign(adds.begin(), adds.end());
  p.dels.assign(dels.begin(), dels.end());
  pick_block(T, 1, max_block, rng, p.tau, p.block);
  for (int t = p.tau; t < p.tau + p.block; ++t) {
    for (auto* seq : {&p.adds, &p.dels}) {
      int& v = (*seq)[t - 1];
      const int next = rw_step(v, rng);
      p.log_ratio += std::log(randomwalk_element_ratio(v, next));
      v = next;
    }
  }
  return p;
}

void rotate_right(std::span<int> block) { std::rotate(block.rbegin(), block.rbegin() + 1, block.rend()); }

void rotate_left(std::span<int> block) { std::rotate(block.begin(), block.begin() + 1, block.end()); }

CountProposal cyclic_move(std::span<const int> adds, std::span<const int> dels, Rng& rng, int max_block) {
  const int T = static_cast<int>(adds.size());
  if (T < 3 || dels.size() != adds.size()) throw ConfigError("cyclic_move: need two sequences of length >= 3");
  CountProposal p;
  p.adds.assign(adds.begin(), adds.end());
  p.dels.assign(dels.begin(), dels.end());
  pick_block(T, 2, max_block, rng, p.tau, p.block);
  const bool right = uniform01(rng) < 0.5;
  for (auto* seq : {&p.adds, &p.dels}) {
    std::span<int> blk(seq->data() + (p.tau - 1), static_cast<std::size_t>(p.block));
    right ? rotate_right(blk) : rotate_left(blk);
  }
  return p;
}

}  // namespace dbnad
