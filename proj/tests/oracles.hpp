#pragma once

// Closed-form references written independently of the library code paths.

#include <algorithm>
#include <cmath>

namespace oracle {

struct CellModel {
  double a0 = 4.2, a1 = -0.1102178, a2 = 0.0103368, a3 = -4.3778e-4;
  double b0 = 0.0015778, b1 = -7.7608e-5, b2 = 0.0069498, r_min = 0.0045;
  double tau = 3.3, k = 0.00104846;
};

inline double ocv(const CellModel& m, double e) {
  return m.a0 + m.a1 * e + m.a2 * e * e + m.a3 * e * e * e;
}

// End-of-discharge E_cell under a long constant load: the RC branch has settled
// at k P, the running mean power equals P, and the terminal voltage equals the
// cutoff. From U^2 - (U0 - Ucap) U + R0 P = 0 at U = cutoff:
//   U0(E) = cutoff + k P + R0 P / cutoff
// then bisection on the (decreasing) open-circuit polynomial.
inline double quasi_static_end_energy(const CellModel& m, double p_cell, double c_cell,
                                      double cutoff = 3.5) {
  const double r0 = std::max(m.b0 + m.b1 * p_cell + m.b2 * c_cell, m.r_min);
  const double target = cutoff + m.k * p_cell + r0 * p_cell / cutoff;
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ocv(m, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Exact first-order lag response from zero.
inline double lag_step(const CellModel& m, double p_cell, double t) {
  return m.k * p_cell * (1.0 - std::exp(-t / m.tau));
}

}  // namespace oracle
