#pragma once
#include <Eigen/Core>
#include <functional>
#include <vector>

#include "slotlab/grid.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/quadrature.hpp"

// Husimi transform Q(x,p) = |<x p|psi>|^2 / (2 pi hbar) and its slot
// integrals p_ij = Int_slot Q dx dp, evaluated lazily at Gauss-Legendre
// nodes (no fixed lattice).

namespace slotlab {

// Overlap block amp(a,b) ~ <x_a p_b|psi> computed over a clipped grid
// window [k_lo, k_hi). The pure phase exp(+i p_b x_a / hbar) is dropped
// from every entry: it cancels identically in the P psi synthesis used by
// the measurement module and never enters |amp|^2.
struct AmpBlock {
  Eigen::MatrixXcd amp;    // rows: x nodes, cols: p nodes
  Eigen::MatrixXd gauss;   // exp(-(y-x_a)^2/4s^2), x-node rows over window
  Eigen::MatrixXcd phase;  // exp(-i p_b y/hbar), window rows, p-node cols
  int k_lo = 0, k_hi = 0;
};
AmpBlock coherent_amp_block(const WaveFunction& psi,
                            const std::vector<double>& xs,
                            const std::vector<double>& ps, double sigma_x);

// Q at a single phase-space point. Probes beyond the grid's Nyquist band
// return 0: the discrete overlap integral aliases there, and the true
// Husimi density of any representable state is negligible that far out.
double husimi_point(const WaveFunction& psi, double sigma_x, double x,
                    double p);

// Rectangular sample lattice and the Husimi field on it.
struct PhaseLattice {
  double x_lo = 0.0, p_lo = 0.0;
  double dx = 1.0, dp = 1.0;
  int nx = 0, np = 0;
};
struct HusimiField {
  PhaseLattice lattice;
  Eigen::MatrixXd values;  // nx x np, clamped at 0
  double riemann_sum() const;
};
HusimiField husimi(const WaveFunction& psi, double sigma_x,
                   const PhaseLattice& lattice);

// One slot integral of Q.
double slot_probability(const WaveFunction& psi, const SlotPartition& part,
                        SlotKey key, double sigma_x,
                        const QuadratureRule& rule);

// Distribution over an explicit window, or over every slot intersecting
// the grid's phase-space rectangle [x_min, x_max] x [-p_nyq, p_nyq] when no
// window is given. Node counts follow quadrature_for(part, sigma_x).
SlotDistribution slot_probabilities(const WaveFunction& psi,
                                    const SlotPartition& part, double sigma_x);
SlotDistribution slot_probabilities(const WaveFunction& psi,
                                    const SlotPartition& part, double sigma_x,
                                    const SlotWindow& window);

// Window of all slots intersecting the grid's phase-space rectangle.
SlotWindow grid_slot_window(const Grid& grid, const SlotPartition& part);

double distribution_mass(const SlotDistribution& d);

// sum_ij A(x_i, p_j) p_ij over slot centers.
double coarse_observable_expectation(
    const SlotDistribution& dist, const SlotPartition& part,
    const std::function<double(double, double)>& a);

}  // namespace slotlab
