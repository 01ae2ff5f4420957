#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "slotlab/grid.hpp"
#include "slotlab/hamiltonian.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/quadrature.hpp"

// Dense-matrix laboratory for the slot POVM: builds the elements
// P_ij = (1/2 pi hbar) Int_slot |x p><x p| dx dp on a truncated grid and
// measures how far they sit from textbook projector algebra (projectivity
// defect, commutator identities, derivative errors, effective Hamiltonian).
//
// Conventions: operators are plain matrices acting on amplitude vectors;
// the inner product carries the grid weight, <phi|psi> = dx * phi^H psi,
// so expectation values are dx * psi^H A psi while traces, products and
// eigenvalues need no extra weight.

namespace slotlab {

struct OperatorMatrix {
  Eigen::MatrixXcd m;
  Grid grid;
};

bool is_hermitian(const OperatorMatrix& a, double rel_tol = 1e-10);

// Sum of singular values. (Anti-)Hermitian inputs go through a real
// eigendecomposition; anything else falls back to an SVD.
double trace_norm(const Eigen::MatrixXcd& a);
double spectral_norm(const Eigen::MatrixXcd& a);

// dx * psi^H A psi
std::complex<double> operator_expectation(const OperatorMatrix& a,
                                          const WaveFunction& psi);

struct PovmOptions {
  QuadratureRule rule{};
  // Periodize the coherent states over the grid period. Folded elements
  // tile the torus exactly (sum over a full momentum band = identity) and
  // are translation covariant to roundoff; unfolded ones leak ~1e-3 near
  // the window edge and exist mainly as a cross-check.
  bool folded = true;
  // Grow node counts to max(rule, ceil(2*delta/sigma)) per axis so coarse
  // slots stay resolved.
  bool auto_nodes = true;
};

// Position, momentum, translation and Hamiltonian matrices on the grid.
// p_operator and translation_operator are spectral (exact on band-limited
// states); translation by a multiple of dx is an exact index rotation.
OperatorMatrix x_operator(const Grid& grid);
OperatorMatrix p_operator(const Grid& grid);
OperatorMatrix translation_operator(const Grid& grid, double a);
OperatorMatrix hamiltonian_matrix(const HamiltonianSpec& spec,
                                  const Grid& grid);

// One POVM element. Throws ConfigError when an unfolded slot leaves less
// than 6 sigma_x of window margin or when the quadrature underresolves the
// packet width (node spacing > sigma/2 on either axis).
OperatorMatrix build_povm_element(SlotKey key, const SlotPartition& part,
                                  double sigma_x, const Grid& grid,
                                  const PovmOptions& opt = {});

using StripeWindow = SlotWindow;

// j-range that tiles the full momentum band exactly (ConfigError when
// delta_p does not divide the band width).
StripeWindow full_band_stripe_window(const SlotPartition& part,
                                     const Grid& grid, int i_lo, int i_hi);

struct StripeSet {
  SlotPartition part;
  StripeWindow window;
  std::vector<int> x_index;
  std::vector<OperatorMatrix> x_stripe;  // P_{x_i} = sum_j P_ij
  std::vector<int> p_index;
  std::vector<OperatorMatrix> p_stripe;  // P_{p_j} = sum_i P_ij
};

StripeSet build_stripe_projectors(const SlotPartition& part, double sigma_x,
                                  const Grid& grid, const StripeWindow& win,
                                  const PovmOptions& opt = {});

// delta_x = x - sum_i x_i P_{x_i}, delta_p = p - sum_j p_j P_{p_j}
struct FluctuationOperators {
  OperatorMatrix delta_x;
  OperatorMatrix delta_p;
};
FluctuationOperators fluctuation_operators(const StripeSet& stripes);

// Projectivity defect epsilon = ||P^2 - P||_1 / ||P||_1 and its analytic
// companions. The closed form uses F(u) = (exp(-u^2)-1)/u + sqrt(pi) erf(u),
// epsilon = 1 - F(dx/2sx) F(dp/2sp) / pi. The asymptote is the large-slot
// expansion; the Monte Carlo form samples the defect double integral.
double projectivity_error_numeric(const OperatorMatrix& p);
double projectivity_error_closed_form(const SlotPartition& part,
                                      double sigma_x);
double projectivity_error_asymptote(const SlotPartition& part, double sigma_x);
double projectivity_error_mc(const SlotPartition& part, double sigma_x,
                             std::uint64_t samples, std::uint64_t seed);

// Residuals of the translation-generator identities around slot (i,j).
// residual_p compares [delta_p, P_ij] against i hbar (P_{i+1,j}-P_ij)/dx in
// trace norm (residual_x analogously with -i hbar and the j neighbor);
// generator_* swaps delta_p for the full p (resp. x). The delta substitution
// [delta_p, A] = [p, A] holds at two levels: on the stripes themselves it is
// exact up to roundoff under full-band tiling (stripe_identity_*, both sides
// are functions of one canonical operator), while on a single element the
// residual element_identity_* = ||[delta_p - p, P_ij]||_1 / ||[p, P_ij]||_1
// stays O(1) because the stripe sum only commutes with P_ij in the idealized
// orthogonal-projector algebra. translation_covariance_* checks that
// conjugation by T(delta_x) (resp. the boost by delta_p) permutes elements.
struct CommutatorReport {
  double residual_p = 0.0;
  double residual_x = 0.0;
  double residual_p_spectral = 0.0;
  double residual_x_spectral = 0.0;
  double generator_residual_p = 0.0;
  double generator_residual_x = 0.0;
  double element_identity_p = 0.0;
  double element_identity_x = 0.0;
  double stripe_identity_p = 0.0;
  double stripe_identity_x = 0.0;
  double translation_covariance_x = 0.0;
  double translation_covariance_p = 0.0;
};
CommutatorReport commutator_check(SlotKey key, const SlotPartition& part,
                                  double sigma_x, const Grid& grid,
                                  const StripeSet& stripes,
                                  const PovmOptions& opt = {});

// eps_d = dx_slot * || (P_{i+1,j}-P_ij)/dx_slot - d/dx P_ij ||_1 with the
// derivative taken as a central difference of origin-shifted elements at
// shift h = delta_x/16; `predicted` is the second-order estimate
// (dx_slot^2/2) ||d^2/dx^2 P_ij||_1 and eps_d_half_h repeats the measurement
// at h/2 for the refinement check.
struct DerivativeErrorReport {
  double eps_d = 0.0;
  double predicted = 0.0;
  double h = 0.0;
  double eps_d_half_h = 0.0;
};
DerivativeErrorReport discrete_derivative_error(SlotKey key,
                                                const SlotPartition& part,
                                                double sigma_x,
                                                const Grid& grid,
                                                const PovmOptions& opt = {});

// Linearized Hamiltonian over the stripes,
//   H_eff = sum_j (p_j^2/2m + (p_j/m) delta_p) P_{p_j}
//         + sum_{i,n} c_n (x_i^n + n x_i^(n-1) delta_x) P_{x_i},
// symmetrized as (A + A^H)/2 since delta_x and the stripes do not commute
// exactly.
OperatorMatrix effective_hamiltonian(const HamiltonianSpec& spec,
                                     const SlotPartition& part,
                                     const StripeSet& stripes,
                                     const FluctuationOperators& fluct);

// Quadratic fluctuation part of H - H_eff,
//   delta_p^2/2m + sum_k (D2V(x_k)/dx_slot^2) delta_x^2 P_{x_k},
// symmetrized the same way. D2V is the exact symmetric second difference of
// the potential at the slot center.
OperatorMatrix delta_h_quadratic(const HamiltonianSpec& spec,
                                 const SlotPartition& part,
                                 const StripeSet& stripes,
                                 const FluctuationOperators& fluct);

}  // namespace slotlab
