#pragma once

#include <vector>

#include "loopcorrect/model.hpp"

namespace loopcorrect {

/// Normalized node and edge beliefs; edge tables are indexed [x_a][x_b]
/// for edge (a, b).
struct PairwiseBeliefs {
  std::vector<NodeTable> node;
  std::vector<PairTable> edge;
};

/// Normalized node and factor beliefs; factor tables use the factor's
/// scope order (first variable most significant).
struct FactorBeliefs {
  std::vector<NodeTable> node;
  std::vector<std::vector<double>> factor;
};

}  // namespace loopcorrect
