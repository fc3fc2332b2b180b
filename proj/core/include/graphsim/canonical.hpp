// Canonical labeling by individualization-refinement.
//
// Two graphs are isomorphic iff their canonical forms have identical edge
// lists. Structure-level quantities are computed on the canonical form so
// that every relabeling of a graph yields bitwise-identical results.
#pragma once

#include <cstdint>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

struct CanonicalForm {
  Graph graph;                    // same structure under canonical labels (id preserved)
  std::vector<int> to_canonical;  // original node v -> canonical node to_canonical[v]
  std::uint64_t hash = 0;         // label-independent structure hash
};

// Exact canonical form: color refinement to a fixpoint, branching over the
// smallest non-singleton color class (twin candidates pruned), taking the
// lexicographically smallest relabeled edge list over all leaves.
CanonicalForm canonical_form(const Graph& g);

// Hash of the canonical edge list; equal for isomorphic graphs.
std::uint64_t canonical_hash(const Graph& g);

}  // namespace graphsim
