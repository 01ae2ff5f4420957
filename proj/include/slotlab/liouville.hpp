#pragma once
#include <Eigen/Core>
#include <functional>
#include <vector>

#include "slotlab/hamiltonian.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/quadrature.hpp"

// Classical reference dynamics on the slot lattice: the discrete Liouville
// update with one-sided differences, a semi-Lagrangian continuum solver
// (backtraced characteristics, per-slot quadrature), Hamiltonian
// characteristics, discrete index-space characteristics, and the total
// variation comparison metric.

namespace slotlab {

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

// Dense real field over a slot window.
struct ClassicalField {
  SlotPartition part;
  SlotWindow window;
  Eigen::MatrixXd values;  // (i - i_lo) rows, (j - j_lo) cols

  double& at(int i, int j) { return values(i - window.i_lo, j - window.j_lo); }
  double at(int i, int j) const {
    return values(i - window.i_lo, j - window.j_lo);
  }
  bool contains(SlotKey k) const { return window.contains(k); }
  double mass() const { return values.sum(); }
  SlotDistribution to_distribution() const;
};

ClassicalField zero_field(const SlotPartition& part, const SlotWindow& window);

// h_ij = H(slot centers), evaluated exactly.
ClassicalField classical_hamiltonian_values(const HamiltonianSpec& spec,
                                            const SlotPartition& part,
                                            const SlotWindow& window);

// One forward-Euler step of
//   d p_ij/dt = (D_x h/dx)(D_p p/dp) - (D_p h/dp)(D_x p/dx)
// with one-sided forward differences; values outside the field window count
// as zero. Throws NumericalGuardError when dt violates the CFL guard
// dt max|DH| (1/dx + 1/dp) < 0.5. Linear in p; mass is conserved up to the
// flux through the window boundary.
ClassicalField discrete_liouville_step(const ClassicalField& p,
                                       const ClassicalField& h, double dt);

// RK4 flow of Hamilton's equations; t may be negative (backtrace). Throws
// NumericalGuardError when the trajectory leaves the bounding box.
struct FlowOptions {
  double dt = 1e-3;
  double box_x = 1e9;  // |x| bound
  double box_p = 1e9;  // |p| bound
};
PhasePoint characteristics_solve(const HamiltonianSpec& spec, PhasePoint start,
                                 double t, const FlowOptions& opt);

// p_ij(t) = Int_slot q0(flow_{-t}(x,p)) via tensor Gauss-Legendre nodes.
// Nodes whose backtrace escapes the box contribute zero; their quadrature
// weight is accumulated in escaped_weight.
struct SemiLagrangianResult {
  ClassicalField field;
  double escaped_weight = 0.0;
};
SemiLagrangianResult semi_lagrangian_evolve(
    const std::function<double(double, double)>& q0, const HamiltonianSpec& spec,
    const SlotPartition& part, const SlotWindow& window, double t,
    const QuadratureRule& rule, const FlowOptions& opt);

// Discrete classical Poisson flow on continuous slot indices (mu,nu), where
// x = x_origin + (mu + 1/2) dx:
//   mu' = [H(mu,nu+1) - H(mu,nu-1)] / (2 dx dp)
//   nu' = -[H(mu+1,nu) - H(mu-1,nu)] / (2 dx dp)
// integrated with RK4 and snapped to integers (floor(u + 0.5), exact halves
// toward positive) at each measurement time k tau. Optional per-step
// snapping after every observation instant.
struct DiscreteTrajectoryOptions {
  int substeps = 64;          // RK4 substeps per tau
  bool snap_each_step = false;
  double index_bound = 1e6;   // |mu|,|nu| guard
};
struct DiscreteTrajectory {
  std::vector<SlotKey> slots;  // length n+1 unless truncated
  bool truncated = false;      // left the index bound before finishing
};
DiscreteTrajectory discrete_characteristics(SlotKey start,
                                            const HamiltonianSpec& spec,
                                            const SlotPartition& part,
                                            double tau, int n,
                                            const DiscreteTrajectoryOptions& opt = {});

// Total variation distance (1/2) sum |a - b| over the union of supports.
double total_variation(const SlotDistribution& a, const SlotDistribution& b);
// Field overloads require matching partitions (ConfigError otherwise).
double total_variation(const ClassicalField& a, const ClassicalField& b);
double total_variation(const SlotDistribution& a, const ClassicalField& b);

}  // namespace slotlab
