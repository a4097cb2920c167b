#pragma once

#include <algorithm>
#include <cmath>

#include "xyfid/chain.hpp"

namespace xyfid {

// Finite-difference step of the susceptibility stencils.
struct StencilSpec {
  double step = 1e-3;
};

inline double default_field_step() { return 1e-3; }
inline double default_beta_step(double beta) {
  return std::max(1e-3, 1e-4 * beta);
}

// 4th-order central 5-point stencil for f''(x):
//   ( -f(x-2h) + 16 f(x-h) - 30 f(x) + 16 f(x+h) - f(x+2h) ) / (12 h^2)
// Exact for polynomials of degree <= 5, truncation O(h^4). With the
// integer numerators the coefficients sum to an exact 0, so a constant f
// differentiates to exactly 0.
template <typename F>
double second_derivative(F&& f, double x, StencilSpec spec) {
  const double h = spec.step;
  if (!(h > 0.0))
    throw Error(ErrorCode::domain, "stencil step must be positive");
  const double fm2 = f(x - 2.0 * h);
  const double fm1 = f(x - h);
  const double f0 = f(x);
  const double fp1 = f(x + h);
  const double fp2 = f(x + 2.0 * h);
  for (double v : {fm2, fm1, f0, fp1, fp2}) {
    if (!std::isfinite(v))
      throw Error(ErrorCode::evaluation,
                  "non-finite function value in finite-difference stencil");
  }
  return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
}

}  // namespace xyfid
