#include "slotlab/operator_lab.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "slotlab/errors.hpp"
#include "slotlab/units.hpp"

namespace slotlab {

using std::complex;
static const complex<double> kI(0.0, 1.0);

bool is_hermitian(const OperatorMatrix& a, double rel_tol) {
  double scale = a.m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  double dev = (a.m - a.m.adjoint()).cwiseAbs().maxCoeff();
  return dev < rel_tol * scale;
}

// Most matrices here are Hermitian or anti-Hermitian (commutators of
// Hermitian operators), so a real eigendecomposition covers them; the SVD
// path only serves odd inputs.
double trace_norm(const Eigen::MatrixXcd& a) {
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double herm = (a - a.adjoint()).cwiseAbs().maxCoeff();
  double anti = (a + a.adjoint()).cwiseAbs().maxCoeff();
  if (herm < 1e-12 * scale || anti < 1e-12 * scale) {
    Eigen::MatrixXcd h = (herm <= anti) ? a : (kI * a).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().sum();
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double herm = (a - a.adjoint()).cwiseAbs().maxCoeff();
  double anti = (a + a.adjoint()).cwiseAbs().maxCoeff();
  if (herm < 1e-12 * scale || anti < 1e-12 * scale) {
    Eigen::MatrixXcd h = (herm <= anti) ? a : (kI * a).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().maxCoeff();
}

std::complex<double> operator_expectation(const OperatorMatrix& a,
                                          const WaveFunction& psi) {
  if (!(a.grid == psi.grid))
    throw ConfigError("operator_expectation: operator and state grids differ");
  return (psi.amp.adjoint() * (a.m * psi.amp))(0, 0) * a.grid.dx;
}

OperatorMatrix x_operator(const Grid& grid) {
  OperatorMatrix out{Eigen::MatrixXcd::Zero(grid.n, grid.n), grid};
  for (int k = 0; k < grid.n; ++k) out.m(k, k) = grid.x(k);
  return out;
}

static Eigen::MatrixXcd dft_matrix(int n) {
  Eigen::MatrixXcd f(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      f(k, l) = std::exp(complex<double>(0.0, -2.0 * M_PI * k * l / n));
  return f;
}

// F^H diag(g(p_k)) F / n: exact for band-limited states.
static Eigen::MatrixXcd spectral_matrix(const Grid& grid,
                                        const Eigen::VectorXcd& diag) {
  Eigen::MatrixXcd f = dft_matrix(grid.n);
  return (f.adjoint() * diag.asDiagonal() * f) / double(grid.n);
}

OperatorMatrix p_operator(const Grid& grid) {
  Eigen::VectorXcd d = grid.p_vector().cast<complex<double>>();
  OperatorMatrix out{spectral_matrix(grid, d), grid};
  out.m = 0.5 * (out.m + out.m.adjoint()).eval();
  return out;
}

OperatorMatrix translation_operator(const Grid& grid, double a) {
  Eigen::VectorXcd d(grid.n);
  for (int k = 0; k < grid.n; ++k)
    d[k] = std::exp(complex<double>(0.0, -grid.p(k) * a / kHbar));
  return {spectral_matrix(grid, d), grid};
}

OperatorMatrix hamiltonian_matrix(const HamiltonianSpec& spec,
                                  const Grid& grid) {
  spec.validate();
  Eigen::VectorXcd kin(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    double p = grid.p(k);
    kin[k] = p * p / (2.0 * spec.mass);
  }
  Eigen::MatrixXcd h = spectral_matrix(grid, kin);
  for (int k = 0; k < grid.n; ++k) h(k, k) += spec.potential(grid.x(k));
  OperatorMatrix out{std::move(h), grid};
  out.m = 0.5 * (out.m + out.m.adjoint()).eval();
  return out;
}

static QuadratureRule resolve_rule(const SlotPartition& part, double sigma_x,
                                   const PovmOptions& opt) {
  QuadratureRule rule = opt.rule;
  if (opt.auto_nodes) {
    QuadratureRule base = quadrature_for(part, sigma_x, 8);
    rule.nodes_x = std::max(rule.nodes_x, base.nodes_x);
    rule.nodes_p = std::max(rule.nodes_p, base.nodes_p);
  }
  double sigma_p = kHbar / (2.0 * sigma_x);
  if (part.delta_x / rule.nodes_x > 0.5 * sigma_x)
    throw ConfigError(
        "build_povm_element: x quadrature underresolved (node spacing "
        "exceeds sigma_x/2)");
  if (part.delta_p / rule.nodes_p > 0.5 * sigma_p)
    throw ConfigError(
        "build_povm_element: p quadrature underresolved (node spacing "
        "exceeds sigma_p/2)");
  return rule;
}

// Coherent-state columns at the quadrature nodes, analytic plane
// normalization (2 pi sigma^2)^(-1/4) with no per-column renormalization;
// that keeps the folded band tiling an exact resolution of the identity.
static void fill_columns(Eigen::MatrixXcd& phi, const Grid& g,
                         const std::vector<double>& xs,
                         const std::vector<double>& ps, double sigma_x,
                         bool folded) {
  const int n = g.n;
  const double norm = std::pow(2.0 * M_PI * sigma_x * sigma_x, -0.25);
  const double L = g.length();
  const int images =
      folded ? 1 + static_cast<int>(std::ceil(12.0 * sigma_x / L)) : 0;
  const double inv4s2 = 1.0 / (4.0 * sigma_x * sigma_x);
  int col = 0;
  for (double x0 : xs) {
    for (double p0 : ps) {
      for (int k = 0; k < n; ++k) {
        complex<double> acc(0.0, 0.0);
        for (int w = -images; w <= images; ++w) {
          double d = g.x(k) - x0 + w * L;
          acc += std::exp(complex<double>(-d * d * inv4s2, p0 * d / kHbar));
        }
        phi(k, col) = norm * acc;
      }
      ++col;
    }
  }
}

OperatorMatrix build_povm_element(SlotKey key, const SlotPartition& part,
                                  double sigma_x, const Grid& grid,
                                  const PovmOptions& opt) {
  part.validate();
  if (!(sigma_x > 0))
    throw ConfigError("build_povm_element: sigma_x must be positive");
  QuadratureRule rule = resolve_rule(part, sigma_x, opt);
  if (!opt.folded) {
    double lo = part.x_lo(key.i), hi = lo + part.delta_x;
    if (lo - 6.0 * sigma_x < grid.x_min ||
        hi + 6.0 * sigma_x > grid.x_min + grid.length())
      throw ConfigError(
          "build_povm_element: unfolded slot needs 6 sigma_x of window "
          "margin");
    double sigma_p = kHbar / (2.0 * sigma_x);
    double pmax = std::max(std::abs(part.p_lo(key.j)),
                           std::abs(part.p_lo(key.j) + part.delta_p));
    if (pmax + 3.0 * sigma_p > grid.p_nyquist())
      throw ConfigError(
          "build_povm_element: unfolded slot leaves the Nyquist band");
  }

  SlotNodes nodes = slot_nodes(part, key, rule);
  const int ncols =
      static_cast<int>(nodes.x.size()) * static_cast<int>(nodes.p.size());
  Eigen::MatrixXcd phi(grid.n, ncols);
  fill_columns(phi, grid, nodes.x, nodes.p, sigma_x, opt.folded);

  Eigen::VectorXd w(ncols);
  int col = 0;
  for (double wx : nodes.wx)
    for (double wp : nodes.wp) w[col++] = wx * wp / (2.0 * M_PI * kHbar);

  OperatorMatrix out{Eigen::MatrixXcd(), grid};
  out.m.noalias() = (phi * w.asDiagonal() * phi.adjoint()) * grid.dx;
  out.m = 0.5 * (out.m + out.m.adjoint()).eval();
  return out;
}

StripeWindow full_band_stripe_window(const SlotPartition& part,
                                     const Grid& grid, int i_lo, int i_hi) {
  part.validate();
  double band = 2.0 * grid.p_nyquist();
  double ratio = band / part.delta_p;
  long tiles = std::lround(ratio);
  if (tiles < 1 || std::abs(ratio - double(tiles)) > 1e-9 * ratio)
    throw ConfigError(
        "full_band_stripe_window: delta_p must divide the momentum band for "
        "exact tiling");
  int j_lo = static_cast<int>(
      std::lround((-grid.p_nyquist() - part.p_origin) / part.delta_p));
  return {i_lo, i_hi, j_lo, j_lo + static_cast<int>(tiles) - 1};
}

StripeSet build_stripe_projectors(const SlotPartition& part, double sigma_x,
                                  const Grid& grid, const StripeWindow& win,
                                  const PovmOptions& opt) {
  if (win.i_hi < win.i_lo || win.j_hi < win.j_lo)
    throw ConfigError("build_stripe_projectors: empty stripe window");
  StripeSet set;
  set.part = part;
  set.window = win;
  const int ni = win.i_hi - win.i_lo + 1;
  const int nj = win.j_hi - win.j_lo + 1;
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(grid.n, grid.n);
  for (int i = 0; i < ni; ++i) {
    set.x_index.push_back(win.i_lo + i);
    set.x_stripe.push_back({zero, grid});
  }
  for (int j = 0; j < nj; ++j) {
    set.p_index.push_back(win.j_lo + j);
    set.p_stripe.push_back({zero, grid});
  }
  for (int i = win.i_lo; i <= win.i_hi; ++i) {
    for (int j = win.j_lo; j <= win.j_hi; ++j) {
      OperatorMatrix e = build_povm_element({i, j}, part, sigma_x, grid, opt);
      set.x_stripe[i - win.i_lo].m += e.m;
      set.p_stripe[j - win.j_lo].m += e.m;
    }
  }
  return set;
}

FluctuationOperators fluctuation_operators(const StripeSet& stripes) {
  if (stripes.x_stripe.empty() || stripes.p_stripe.empty())
    throw ConfigError("fluctuation_operators: empty stripe set");
  const Grid& grid = stripes.x_stripe.front().grid;
  Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(grid.n, grid.n);
  for (size_t k = 0; k < stripes.x_stripe.size(); ++k) {
    double xi = stripes.part.x_lo(stripes.x_index[k]) +
                0.5 * stripes.part.delta_x;
    sx += xi * stripes.x_stripe[k].m;
  }
  Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(grid.n, grid.n);
  for (size_t k = 0; k < stripes.p_stripe.size(); ++k) {
    double pj = stripes.part.p_lo(stripes.p_index[k]) +
                0.5 * stripes.part.delta_p;
    sp += pj * stripes.p_stripe[k].m;
  }
  FluctuationOperators out{{x_operator(grid).m - sx, grid},
                           {p_operator(grid).m - sp, grid}};
  out.delta_x.m = 0.5 * (out.delta_x.m + out.delta_x.m.adjoint()).eval();
  out.delta_p.m = 0.5 * (out.delta_p.m + out.delta_p.m.adjoint()).eval();
  return out;
}

double projectivity_error_numeric(const OperatorMatrix& p) {
  if (!is_hermitian(p, 1e-8))
    throw ConfigError("projectivity_error_numeric: matrix is not Hermitian");
  Eigen::MatrixXcd defect = p.m * p.m - p.m;
  return trace_norm(defect) / trace_norm(p.m);
}

static double closed_form_f(double u) {
  return (std::exp(-u * u) - 1.0) / u + std::sqrt(M_PI) * std::erf(u);
}

double projectivity_error_closed_form(const SlotPartition& part,
                                      double sigma_x) {
  part.validate();
  if (!(sigma_x > 0))
    throw ConfigError("projectivity_error_closed_form: sigma_x must be > 0");
  double sigma_p = kHbar / (2.0 * sigma_x);
  double a = part.delta_x / (2.0 * sigma_x);
  double b = part.delta_p / (2.0 * sigma_p);
  return 1.0 - closed_form_f(a) * closed_form_f(b) / M_PI;
}

double projectivity_error_asymptote(const SlotPartition& part,
                                    double sigma_x) {
  part.validate();
  double sigma_p = kHbar / (2.0 * sigma_x);
  return 2.0 / std::sqrt(M_PI) *
             (sigma_x / part.delta_x + sigma_p / part.delta_p) -
         4.0 * sigma_x * sigma_p / (M_PI * part.delta_x * part.delta_p);
}

// Importance-sampled Monte Carlo of the defect double integral:
// 1 - eps = (2 sx sp / (hbar dX dP)) E[(dX-|u|)+ (dP-|v|)+] with u, v drawn
// from the Gaussian overlap kernel (std sqrt(2) sx, sqrt(2) sp).
double projectivity_error_mc(const SlotPartition& part, double sigma_x,
                             std::uint64_t samples, std::uint64_t seed) {
  part.validate();
  if (samples == 0) throw ConfigError("projectivity_error_mc: zero samples");
  double sigma_p = kHbar / (2.0 * sigma_x);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gu(0.0, std::sqrt(2.0) * sigma_x);
  std::normal_distribution<double> gv(0.0, std::sqrt(2.0) * sigma_p);
  double acc = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double u = std::abs(gu(rng)), v = std::abs(gv(rng));
    if (u < part.delta_x && v < part.delta_p)
      acc += (part.delta_x - u) * (part.delta_p - v);
  }
  double mean = acc / double(samples);
  double one_minus =
      2.0 * sigma_x * sigma_p * mean / (kHbar * part.delta_x * part.delta_p);
  return 1.0 - one_minus;
}

CommutatorReport commutator_check(SlotKey key, const SlotPartition& part,
                                  double sigma_x, const Grid& grid,
                                  const StripeSet& stripes,
                                  const PovmOptions& opt) {
  OperatorMatrix p00 = build_povm_element(key, part, sigma_x, grid, opt);
  OperatorMatrix p10 =
      build_povm_element({key.i + 1, key.j}, part, sigma_x, grid, opt);
  OperatorMatrix p01 =
      build_povm_element({key.i, key.j + 1}, part, sigma_x, grid, opt);
  FluctuationOperators fl = fluctuation_operators(stripes);
  OperatorMatrix xop = x_operator(grid);
  OperatorMatrix pop = p_operator(grid);

  auto comm = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return Eigen::MatrixXcd(a * b - b * a);
  };

  CommutatorReport rep;
  Eigen::MatrixXcd gen_p = kI * kHbar * (p10.m - p00.m) / part.delta_x;
  Eigen::MatrixXcd c_dp = comm(fl.delta_p.m, p00.m);
  Eigen::MatrixXcd c_p = comm(pop.m, p00.m);
  rep.residual_p = trace_norm(c_dp - gen_p) / trace_norm(c_dp);
  rep.residual_p_spectral = spectral_norm(c_dp - gen_p) / spectral_norm(c_dp);
  rep.generator_residual_p = trace_norm(c_p - gen_p) / trace_norm(c_p);
  rep.element_identity_p = trace_norm(c_dp - c_p) / trace_norm(c_p);

  Eigen::MatrixXcd gen_x = -kI * kHbar * (p01.m - p00.m) / part.delta_p;
  Eigen::MatrixXcd c_dx = comm(fl.delta_x.m, p00.m);
  Eigen::MatrixXcd c_x = comm(xop.m, p00.m);
  rep.residual_x = trace_norm(c_dx - gen_x) / trace_norm(c_dx);
  rep.residual_x_spectral = spectral_norm(c_dx - gen_x) / spectral_norm(c_dx);
  rep.generator_residual_x = trace_norm(c_x - gen_x) / trace_norm(c_x);
  rep.element_identity_x = trace_norm(c_dx - c_x) / trace_norm(c_x);

  // stripe-level identity: [delta, stripe] - [full, stripe] collapses to
  // -[coarse sum, stripe], which vanishes to roundoff because both factors
  // are diagonal in the same basis under full-band tiling
  auto find_stripe = [](const std::vector<int>& idx,
                        const std::vector<OperatorMatrix>& ops, int want)
      -> const OperatorMatrix& {
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] == want) return ops[k];
    throw ConfigError("commutator_check: slot outside the stripe window");
  };
  const OperatorMatrix& sx = find_stripe(stripes.x_index, stripes.x_stripe,
                                         key.i);
  const OperatorMatrix& sp = find_stripe(stripes.p_index, stripes.p_stripe,
                                         key.j);
  Eigen::MatrixXcd coarse_x = xop.m - fl.delta_x.m;
  Eigen::MatrixXcd coarse_p = pop.m - fl.delta_p.m;
  rep.stripe_identity_x = trace_norm(comm(coarse_x, sx.m)) / trace_norm(c_x);
  rep.stripe_identity_p = trace_norm(comm(coarse_p, sp.m)) / trace_norm(c_p);

  OperatorMatrix tr = translation_operator(grid, part.delta_x);
  rep.translation_covariance_x =
      trace_norm(tr.m * p00.m * tr.m.adjoint() - p10.m) / trace_norm(p00.m);
  Eigen::VectorXcd boost(grid.n);
  for (int k = 0; k < grid.n; ++k)
    boost[k] = std::exp(complex<double>(0.0, part.delta_p * grid.x(k) / kHbar));
  Eigen::MatrixXcd bst = boost.asDiagonal();
  rep.translation_covariance_p =
      trace_norm(bst * p00.m * bst.adjoint() - p01.m) / trace_norm(p00.m);
  return rep;
}

DerivativeErrorReport discrete_derivative_error(SlotKey key,
                                                const SlotPartition& part,
                                                double sigma_x,
                                                const Grid& grid,
                                                const PovmOptions& opt) {
  OperatorMatrix p00 = build_povm_element(key, part, sigma_x, grid, opt);
  OperatorMatrix p10 =
      build_povm_element({key.i + 1, key.j}, part, sigma_x, grid, opt);
  Eigen::MatrixXcd fd = (p10.m - p00.m) / part.delta_x;

  auto shifted = [&](double s) {
    SlotPartition ps = part;
    ps.x_origin += s;
    return build_povm_element(key, ps, sigma_x, grid, opt);
  };
  auto eps_at = [&](double h) {
    Eigen::MatrixXcd d1 = (shifted(h).m - shifted(-h).m) / (2.0 * h);
    return part.delta_x * trace_norm(fd - d1);
  };

  DerivativeErrorReport rep;
  rep.h = part.delta_x / 16.0;
  rep.eps_d = eps_at(rep.h);
  rep.eps_d_half_h = eps_at(0.5 * rep.h);
  Eigen::MatrixXcd d2 =
      (shifted(rep.h).m - 2.0 * p00.m + shifted(-rep.h).m) / (rep.h * rep.h);
  rep.predicted = 0.5 * part.delta_x * part.delta_x * trace_norm(d2);
  return rep;
}

OperatorMatrix effective_hamiltonian(const HamiltonianSpec& spec,
                                     const SlotPartition& part,
                                     const StripeSet& stripes,
                                     const FluctuationOperators& fluct) {
  spec.validate();
  if (!(stripes.part == part))
    throw ConfigError("effective_hamiltonian: stripe partition mismatch");
  const Grid& grid = fluct.delta_x.grid;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(grid.n, grid.n);
  for (size_t k = 0; k < stripes.p_stripe.size(); ++k) {
    double pj = part.p_lo(stripes.p_index[k]) + 0.5 * part.delta_p;
    a += (pj * pj / (2.0 * spec.mass)) * stripes.p_stripe[k].m +
         (pj / spec.mass) * (fluct.delta_p.m * stripes.p_stripe[k].m);
  }
  for (size_t k = 0; k < stripes.x_stripe.size(); ++k) {
    double xi = part.x_lo(stripes.x_index[k]) + 0.5 * part.delta_x;
    for (auto [n, c] : spec.coeffs) {
      a += c * std::pow(xi, n) * stripes.x_stripe[k].m;
      if (n > 0)
        a += c * n * std::pow(xi, n - 1) *
             (fluct.delta_x.m * stripes.x_stripe[k].m);
    }
  }
  OperatorMatrix out{0.5 * (a + a.adjoint()), grid};
  return out;
}

OperatorMatrix delta_h_quadratic(const HamiltonianSpec& spec,
                                 const SlotPartition& part,
                                 const StripeSet& stripes,
                                 const FluctuationOperators& fluct) {
  spec.validate();
  if (!(stripes.part == part))
    throw ConfigError("delta_h_quadratic: stripe partition mismatch");
  const Grid& grid = fluct.delta_x.grid;
  Eigen::MatrixXcd a =
      fluct.delta_p.m * fluct.delta_p.m / (2.0 * spec.mass);
  Eigen::MatrixXcd dx2 = fluct.delta_x.m * fluct.delta_x.m;
  for (size_t k = 0; k < stripes.x_stripe.size(); ++k) {
    double xi = part.x_lo(stripes.x_index[k]) + 0.5 * part.delta_x;
    double curv = spec.second_difference(xi, part.delta_x) /
                  (part.delta_x * part.delta_x);
    a += curv * (dx2 * stripes.x_stripe[k].m);
  }
  OperatorMatrix out{0.5 * (a + a.adjoint()), grid};
  return out;
}

}  // namespace slotlab
