#pragma once

#include <string>

#include "xyfid/chain.hpp"
#include "xyfid/finite_diff.hpp"

namespace xyfid {

enum class Method {
  exact,
  ppa,
  tla,
  ground_even,
  ground_odd,
};

const char* method_name(Method m);

struct SusceptibilityResult {
  double value = 0.0;
  Method method = Method::exact;
  double step_used = 0.0;
  GibbsPoint point;
};

enum class Parity { even, odd };

// chi(beta, g) = -d^2/ddelta^2 F(beta,g | beta,g+delta) at delta = 0,
// via the 5-point stencil; F from the selected backend (exact, ppa, or the
// two-level approximation).
SusceptibilityResult chi_field(const GibbsPoint& point, Method method,
                               StencilSpec spec);
SusceptibilityResult chi_field(const GibbsPoint& point, Method method);

// Closed-form ground-state fidelity susceptibilities chi0+-(g) for the
// Ising chain, g > 0. The removable singularity at g = 1 is evaluated by
// an explicit limit branch, chi0+-(1+e) = chi0+-(1)(1 - 2e) + O(e^2),
// inside |g-1| < 1e-5:
//   chi0+(1) = N(N-1)/32,  chi0-(1) = (N-1)(N-2)/96.
double chi_ground(const ChainSpec& chain, Parity parity);

// Two-level susceptibility at the critical point (gamma = 1, g = 1):
//   chi_TLA = chi0+/(1+e^{-beta pi/2N}) + chi0-/(1+e^{beta pi/2N}) + R,
//   R = x^2/(16 cosh^2 x) (16N^2/pi^2 + 8N/pi + 1),  x = beta pi / 4N.
double chi_tla(double beta, const ChainSpec& chain);

// Thermal fidelity susceptibility
//   xi = -(d^2/ddelta^2) ln F(beta-delta/2, g | beta+delta/2, g) at 0,
// equal to Cv/(4 beta^2). Requires beta - 2h > 0.
double xi_thermal(const GibbsPoint& point, Method method, StencilSpec spec);
double xi_thermal(const GibbsPoint& point, Method method);

// Cv = 4 beta^2 xi.
double cv(const GibbsPoint& point, Method method, StencilSpec spec);
double cv(const GibbsPoint& point, Method method);

struct PeakScan {
  double beta_star = 0.0;
  double chi_max = 0.0;
  std::string scan_grid;
  bool on_boundary = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Locates max_beta chi(beta, g=1) on the interval: 64-point coarse grid,
// then golden-section refinement to 1e-4 relative in beta. A maximum on
// the interval boundary is flagged, not fatal.
PeakScan peak_scan(const ChainSpec& chain, Interval beta_range, Method method);

}  // namespace xyfid
