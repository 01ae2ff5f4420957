#include "slotlab/liouville.hpp"

#include <cmath>

#include "slotlab/errors.hpp"

namespace slotlab {

SlotDistribution ClassicalField::to_distribution() const {
  SlotDistribution out;
  for (int i = window.i_lo; i <= window.i_hi; ++i)
    for (int j = window.j_lo; j <= window.j_hi; ++j) out[{i, j}] = at(i, j);
  return out;
}

ClassicalField zero_field(const SlotPartition& part, const SlotWindow& window) {
  part.validate();
  if (window.count() <= 0)
    throw ConfigError("zero_field: empty slot window");
  ClassicalField f;
  f.part = part;
  f.window = window;
  f.values = Eigen::MatrixXd::Zero(window.i_hi - window.i_lo + 1,
                                   window.j_hi - window.j_lo + 1);
  return f;
}

ClassicalField classical_hamiltonian_values(const HamiltonianSpec& spec,
                                            const SlotPartition& part,
                                            const SlotWindow& window) {
  spec.validate();
  ClassicalField f = zero_field(part, window);
  for (int i = window.i_lo; i <= window.i_hi; ++i)
    for (int j = window.j_lo; j <= window.j_hi; ++j) {
      auto [x, p] = part.center({i, j});
      f.at(i, j) = spec.classical(x, p);
    }
  return f;
}

ClassicalField discrete_liouville_step(const ClassicalField& p,
                                       const ClassicalField& h, double dt) {
  if (!(p.part == h.part))
    throw ConfigError("discrete_liouville_step: partition mismatch");
  if (!(dt > 0)) throw ConfigError("discrete_liouville_step: dt must be > 0");
  const double dx = p.part.delta_x, dp = p.part.delta_p;

  // forward differences; values beyond a window count as zero
  auto hval = [&](int i, int j) {
    return h.contains({i, j}) ? h.at(i, j) : 0.0;
  };
  auto pval = [&](int i, int j) {
    return p.contains({i, j}) ? p.at(i, j) : 0.0;
  };

  double gmax = 0.0;
  for (int i = h.window.i_lo; i <= h.window.i_hi; ++i)
    for (int j = h.window.j_lo; j <= h.window.j_hi; ++j) {
      if (i + 1 <= h.window.i_hi)
        gmax = std::max(gmax, std::abs(hval(i + 1, j) - hval(i, j)) / dx);
      if (j + 1 <= h.window.j_hi)
        gmax = std::max(gmax, std::abs(hval(i, j + 1) - hval(i, j)) / dp);
    }
  if (dt * gmax * (1.0 / dx + 1.0 / dp) >= 0.5)
    throw NumericalGuardError(
        "discrete_liouville_step: CFL guard violated; reduce dt");

  ClassicalField out = p;
  for (int i = p.window.i_lo; i <= p.window.i_hi; ++i)
    for (int j = p.window.j_lo; j <= p.window.j_hi; ++j) {
      double dhx = (hval(i + 1, j) - hval(i, j)) / dx;
      double dhp = (hval(i, j + 1) - hval(i, j)) / dp;
      double dpx = (pval(i + 1, j) - pval(i, j)) / dx;
      double dpp = (pval(i, j + 1) - pval(i, j)) / dp;
      out.at(i, j) = p.at(i, j) + dt * (dhx * dpp - dhp * dpx);
    }
  return out;
}

static void rk4_flow(const HamiltonianSpec& spec, double& x, double& p,
                     double t, const FlowOptions& opt) {
  if (t == 0.0) return;
  long n = std::max(1L, static_cast<long>(std::ceil(std::abs(t) / opt.dt)));
  double h = t / double(n);
  double inv_m = 1.0 / spec.mass;
  for (long s = 0; s < n; ++s) {
    double k1x = p * inv_m, k1p = -spec.dpotential(x);
    double k2x = (p + 0.5 * h * k1p) * inv_m,
           k2p = -spec.dpotential(x + 0.5 * h * k1x);
    double k3x = (p + 0.5 * h * k2p) * inv_m,
           k3p = -spec.dpotential(x + 0.5 * h * k2x);
    double k4x = (p + h * k3p) * inv_m,
           k4p = -spec.dpotential(x + h * k3x);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (std::abs(x) > opt.box_x || std::abs(p) > opt.box_p ||
        !std::isfinite(x) || !std::isfinite(p))
      throw NumericalGuardError(
          "characteristics_solve: trajectory escaped the bounding box");
  }
}

PhasePoint characteristics_solve(const HamiltonianSpec& spec, PhasePoint start,
                                 double t, const FlowOptions& opt) {
  spec.validate();
  if (!(opt.dt > 0)) throw ConfigError("characteristics_solve: dt must be > 0");
  double x = start.x, p = start.p;
  rk4_flow(spec, x, p, t, opt);
  return {x, p};
}

SemiLagrangianResult semi_lagrangian_evolve(
    const std::function<double(double, double)>& q0,
    const HamiltonianSpec& spec, const SlotPartition& part,
    const SlotWindow& window, double t, const QuadratureRule& rule,
    const FlowOptions& opt) {
  spec.validate();
  if (!(t >= 0))
    throw ConfigError("semi_lagrangian_evolve: time must be non-negative");
  SemiLagrangianResult res;
  res.field = zero_field(part, window);
  for (int i = window.i_lo; i <= window.i_hi; ++i)
    for (int j = window.j_lo; j <= window.j_hi; ++j) {
      SlotNodes nodes = slot_nodes(part, {i, j}, rule);
      double acc = 0.0;
      for (size_t a = 0; a < nodes.x.size(); ++a)
        for (size_t b = 0; b < nodes.p.size(); ++b) {
          double w = nodes.wx[a] * nodes.wp[b];
          double x = nodes.x[a], p = nodes.p[b];
          try {
            rk4_flow(spec, x, p, -t, opt);
          } catch (const NumericalGuardError&) {
            res.escaped_weight += w;
            continue;
          }
          acc += w * q0(x, p);
        }
      res.field.at(i, j) = acc;
    }
  return res;
}

DiscreteTrajectory discrete_characteristics(
    SlotKey start, const HamiltonianSpec& spec, const SlotPartition& part,
    double tau, int n, const DiscreteTrajectoryOptions& opt) {
  spec.validate();
  part.validate();
  if (n < 0) throw ConfigError("discrete_characteristics: n must be >= 0");
  if (!(tau > 0) && n > 0)
    throw ConfigError("discrete_characteristics: tau must be positive");
  const double dx = part.delta_x, dp = part.delta_p;
  auto hidx = [&](double mu, double nu) {
    double x = part.x_origin + (mu + 0.5) * dx;
    double p = part.p_origin + (nu + 0.5) * dp;
    return spec.classical(x, p);
  };
  auto mu_dot = [&](double mu, double nu) {
    return (hidx(mu, nu + 1.0) - hidx(mu, nu - 1.0)) / (2.0 * dx * dp);
  };
  auto nu_dot = [&](double mu, double nu) {
    return -(hidx(mu + 1.0, nu) - hidx(mu - 1.0, nu)) / (2.0 * dx * dp);
  };
  auto snap = [](double u) { return int(std::floor(u + 0.5)); };

  DiscreteTrajectory out;
  double mu = start.i, nu = start.j;
  out.slots.push_back({snap(mu), snap(nu)});
  const int nsub = std::max(1, opt.substeps);
  const double h = tau / nsub;
  for (int k = 0; k < n; ++k) {
    for (int s = 0; s < nsub; ++s) {
      double k1m = mu_dot(mu, nu), k1n = nu_dot(mu, nu);
      double k2m = mu_dot(mu + 0.5 * h * k1m, nu + 0.5 * h * k1n),
             k2n = nu_dot(mu + 0.5 * h * k1m, nu + 0.5 * h * k1n);
      double k3m = mu_dot(mu + 0.5 * h * k2m, nu + 0.5 * h * k2n),
             k3n = nu_dot(mu + 0.5 * h * k2m, nu + 0.5 * h * k2n);
      double k4m = mu_dot(mu + h * k3m, nu + h * k3n),
             k4n = nu_dot(mu + h * k3m, nu + h * k3n);
      mu += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
      nu += h / 6.0 * (k1n + 2.0 * k2n + 2.0 * k3n + k4n);
    }
    if (std::abs(mu) > opt.index_bound || std::abs(nu) > opt.index_bound ||
        !std::isfinite(mu) || !std::isfinite(nu)) {
      out.truncated = true;
      return out;
    }
    out.slots.push_back({snap(mu), snap(nu)});
    if (opt.snap_each_step) {
      mu = out.slots.back().i;
      nu = out.slots.back().j;
    }
  }
  return out;
}

double total_variation(const SlotDistribution& a, const SlotDistribution& b) {
  double acc = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    acc += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) acc += std::abs(v);
  return 0.5 * acc;
}

double total_variation(const ClassicalField& a, const ClassicalField& b) {
  if (!(a.part == b.part))
    throw ConfigError("total_variation: partition mismatch");
  return total_variation(a.to_distribution(), b.to_distribution());
}

double total_variation(const SlotDistribution& a, const ClassicalField& b) {
  return total_variation(a, b.to_distribution());
}

}  // namespace slotlab
