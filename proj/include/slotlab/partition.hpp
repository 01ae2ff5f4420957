#pragma once
#include <compare>
#include <cstdint>
#include <map>
#include <utility>

namespace slotlab {

struct SlotKey {
  int i = 0;  // position slot index
  int j = 0;  // momentum slot index
  auto operator<=>(const SlotKey&) const = default;
};

// Sparse distribution over slots; map keeps deterministic (sorted) order.
using SlotDistribution = std::map<SlotKey, double>;

// Inclusive rectangle of slot indices.
struct SlotWindow {
  int i_lo = 0, i_hi = -1;
  int j_lo = 0, j_hi = -1;
  bool contains(SlotKey k) const {
    return k.i >= i_lo && k.i <= i_hi && k.j >= j_lo && k.j <= j_hi;
  }
  long count() const {
    if (i_hi < i_lo || j_hi < j_lo) return 0;
    return long(i_hi - i_lo + 1) * long(j_hi - j_lo + 1);
  }
};

// Rectangular phase-space partition. Slot (i,j) covers
//   [x_origin + i*delta_x, x_origin + (i+1)*delta_x) x
//   [p_origin + j*delta_p, p_origin + (j+1)*delta_p).
struct SlotPartition {
  double delta_x = 1.0;
  double delta_p = 1.0;
  double x_origin = 0.0;
  double p_origin = 0.0;

  void validate() const;  // ConfigError on non-positive slot sides

  // number of hbar cells per slot; >> 1 in the coarse-grained regime
  double coarseness() const;

  SlotKey slot_of(double x, double p) const;  // ConfigError on non-finite input
  std::pair<double, double> center(SlotKey k) const;
  double x_lo(int i) const { return x_origin + i * delta_x; }
  double p_lo(int j) const { return p_origin + j * delta_p; }

  bool operator==(const SlotPartition&) const = default;
};

}  // namespace slotlab
