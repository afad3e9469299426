#pragma once

#include <span>
#include <vector>

#include "dbnad/dag.hpp"
#include "dbnad/rng.hpp"

namespace dbnad {

enum class MoveKind { Add, Delete, Reverse };

struct StructureMove {
  MoveKind kind = MoveKind::Add;
  Edge edge;  ///< the edge added, deleted, or reversed (before reversal)
};

/// Every single-edge move that keeps `g` acyclic, in a fixed order.
std::vector<StructureMove> valid_moves(const Dag& g);
Dag apply_move(const Dag& g, const StructureMove& move);

struct StructureProposal {
  Dag graph;
  double log_ratio = 0.0;  ///< log q(g' -> g) - log q(g -> g')
  int steps = 0;
};

/// M ~ U{1..max_steps} uniformly chosen valid single-edge moves. The transition
/// ratio telescopes to |moves(g)| / |moves(g')|. A graph with no valid move is
/// returned unchanged with ratio 1.
StructureProposal multistep_structure_proposal(const Dag& g, Rng& rng, int max_steps = 5);

/// Proposal over the addition/deletion sequences. Both vectors are indexed by
/// t - 1 and entry 0 (t = 1) is never touched.
struct CountProposal {
  std::vector<int> adds;
  std::vector<int> dels;
  int tau = 2;    ///< first changed time index (1-based)
  int block = 1;  ///< block length
  double log_ratio = 0.0;
};

/// Kernel of one random-walk element: from 0 propose {0, 1} with 1/2 each,
/// otherwise current + {-1, 0, +1} with 1/3 each.
double randomwalk_kernel_prob(int from, int to);

/// q(to -> from) / q(from -> to) for one element; 0 off the support.
double randomwalk_element_ratio(int from, int to);

/// B ~ U{1..max_block} (capped at T - 1), tau ~ U{2..T-B+1}; every element in
/// the block of both sequences takes a random-walk step.
CountProposal randomwalk_move(std::span<const int> adds, std::span<const int> dels, Rng& rng, int max_block = 10);

/// B ~ U{2..max_block} (capped at T - 1); the block of both sequences is
/// rotated one place right or left with probability 1/2 each. Ratio 1.
/// Requires T >= 3.
CountProposal cyclic_move(std::span<const int> adds, std::span<const int> dels, Rng& rng, int max_block = 10);

/// Last element moves to the front.
void rotate_right(std::span<int> block);
/// First element moves to the back.
void rotate_left(std::span<int> block);

}  // namespace dbnad
