#pragma once
#include <vector>

#include "slotlab/partition.hpp"

namespace slotlab {

enum class QuadScheme { GaussLegendreTensor, MidpointTensor };

// Tensor quadrature over one phase-space slot.
struct QuadratureRule {
  int nodes_x = 8;
  int nodes_p = 8;
  QuadScheme scheme = QuadScheme::GaussLegendreTensor;
};

// Nodes/weights on [-1, 1]; cached per order.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Per-axis nodes and weights covering slot k of the partition.
struct SlotNodes {
  std::vector<double> x, wx;
  std::vector<double> p, wp;
};
SlotNodes slot_nodes(const SlotPartition& part, SlotKey k,
                     const QuadratureRule& rule);

// Node counts that resolve a sigma-width Gaussian across a coarse slot:
// max(base, ceil(2*delta/sigma)) per axis.
QuadratureRule quadrature_for(const SlotPartition& part, double sigma_x,
                              int base = 8);

}  // namespace slotlab
