#include "slotlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "slotlab/errors.hpp"

namespace slotlab {

// Golub-free classic: Newton iteration on P_n with symmetric initial guesses.
static void compute_gl(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ConfigError("gauss_legendre: order must be >= 1");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::pair<std::vector<double>, std::vector<double>> e;
    compute_gl(n, e.first, e.second);
    it = cache.emplace(n, std::move(e)).first;
  }
  nodes = it->second.first;
  weights = it->second.second;
}

static void axis_nodes(double lo, double hi, int n, QuadScheme scheme,
                       std::vector<double>& pts, std::vector<double>& wts) {
  pts.resize(n);
  wts.resize(n);
  double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  if (scheme == QuadScheme::MidpointTensor) {
    for (int k = 0; k < n; ++k) {
      pts[k] = lo + (k + 0.5) * (hi - lo) / n;
      wts[k] = (hi - lo) / n;
    }
    return;
  }
  std::vector<double> t, w;
  gauss_legendre(n, t, w);
  for (int k = 0; k < n; ++k) {
    pts[k] = c + h * t[k];
    wts[k] = h * w[k];
  }
}

SlotNodes slot_nodes(const SlotPartition& part, SlotKey k, const QuadratureRule& rule) {
  if (rule.nodes_x < 4 || rule.nodes_p < 4)
    throw ConfigError("slot_nodes: need at least 4 nodes per axis");
  SlotNodes sn;
  axis_nodes(part.x_lo(k.i), part.x_lo(k.i + 1), rule.nodes_x, rule.scheme, sn.x, sn.wx);
  axis_nodes(part.p_lo(k.j), part.p_lo(k.j + 1), rule.nodes_p, rule.scheme, sn.p, sn.wp);
  return sn;
}

QuadratureRule quadrature_for(const SlotPartition& part, double sigma_x, int base) {
  if (!(sigma_x > 0)) throw ConfigError("quadrature_for: sigma_x must be positive");
  double sigma_p = 0.5 / sigma_x;  // hbar = 1
  QuadratureRule r;
  r.nodes_x = std::max(base, (int)std::ceil(2.0 * part.delta_x / sigma_x));
  r.nodes_p = std::max(base, (int)std::ceil(2.0 * part.delta_p / sigma_p));
  return r;
}

}  // namespace slotlab
