#include "xyfid/response.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "xyfid/fidelity.hpp"
#include "xyfid/partition.hpp"

namespace xyfid {

namespace {
constexpr double kPi = std::numbers::pi;
// Width of the explicit-limit branch around the removable singularity of
// the closed-form ground susceptibilities at g = 1.
constexpr double kGroundLimitBand = 1e-5;
}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::ppa: return "ppa";
    case Method::tla: return "tla";
    case Method::ground_even: return "ground_even";
    case Method::ground_odd: return "ground_odd";
  }
  return "unknown";
}

SusceptibilityResult chi_field(const GibbsPoint& point, Method method,
                               StencilSpec spec) {
  validate(point);
  if (method != Method::exact && method != Method::ppa && method != Method::tla)
    throw Error(ErrorCode::domain,
                "chi_field backend must be exact, ppa, or tla");
  if (method == Method::tla && !is_ising(point.chain))
    throw Error(ErrorCode::unsupported_regime,
                "the tla backend requires anisotropy = 1");

  const SpectrumData sa = spectrum_data(point.chain);
  const auto f = [&](double d) -> double {
    if (method == Method::tla)
      return fidelity_tla_field(point.beta, point.chain, d);
    ChainSpec shifted = point.chain;
    shifted.field += d;
    const SpectrumData sb = spectrum_data(shifted);
    return method == Method::exact
               ? std::exp(detail::log_fidelity_exact(sa, point.beta, sb,
                                                     point.beta))
               : std::exp(detail::log_fidelity_ppa(sa, point.beta, sb,
                                                   point.beta));
  };
  SusceptibilityResult r;
  r.value = -second_derivative(f, 0.0, spec);
  r.method = method;
  r.step_used = spec.step;
  r.point = point;
  return r;
}

SusceptibilityResult chi_field(const GibbsPoint& point, Method method) {
  return chi_field(point, method, StencilSpec{default_field_step()});
}

double chi_ground(const ChainSpec& chain, Parity parity) {
  validate(chain);
  if (!is_ising(chain))
    throw Error(ErrorCode::unsupported_regime,
                "closed-form ground susceptibilities require anisotropy = 1");
  const double g = chain.field;
  if (!(g > 0.0))
    throw Error(ErrorCode::domain,
                "chi_ground requires g > 0; use the evenness chi(g) = chi(-g) "
                "upstream");
  const double n = chain.n_sites;

  if (std::abs(g - 1.0) < kGroundLimitBand) {
    // chi0+-(1+e) = chi0+-(1) (1 - 2e) + O(e^2)
    const double c0 = parity == Parity::even ? n * (n - 1.0) / 32.0
                                             : (n - 1.0) * (n - 2.0) / 96.0;
    return c0 * (1.0 - 2.0 * (g - 1.0));
  }

  const double lg = std::log(g);
  const double t = n * lg;             // g^N = e^t
  const double q = std::exp(-std::abs(t));
  const double g2m1 = std::expm1(2.0 * lg);  // g^2 - 1, no cancellation

  if (parity == Parity::even) {
    const double first = n * n / (16.0 * g * g) * q / ((1.0 + q) * (1.0 + q));
    // (g^N - g^2)/(g^N + 1) without forming the large/cancelling pieces.
    const double ratio = t > 0.0
                             ? -std::expm1((2.0 - n) * lg) / (1.0 + q)
                             : g * g * std::expm1((n - 2.0) * lg) / (1.0 + q);
    return first + n / (16.0 * g * g) * ratio / g2m1;
  }

  // odd parity
  const double em = std::expm1(-std::abs(t));  // in (-1, 0)
  const double first = -n * n / (16.0 * g * g) * q / (em * em);
  const double ratio = t > 0.0
                           ? (1.0 + g * g * q) / (-em)
                           : (q + g * g) / std::expm1(t);
  return first + n / (16.0 * g * g) * ratio / g2m1;
}

double chi_tla(double beta, const ChainSpec& chain) {
  validate(chain);
  if (!is_ising(chain) || chain.field != 1.0)
    throw Error(ErrorCode::unsupported_regime,
                "chi_tla is the critical-point closed form (anisotropy = 1, "
                "g = 1)");
  if (!(beta >= 0.0)) throw Error(ErrorCode::domain, "beta must be >= 0");
  const double n = chain.n_sites;
  const double y = beta * kPi / (2.0 * n);
  const double x = beta * kPi / (4.0 * n);
  const double chi0p = chi_ground(chain, Parity::even);
  const double chi0m = chi_ground(chain, Parity::odd);
  // x^2 sech^2 x evaluated overflow-free.
  const double ex = std::exp(-x);
  const double sech = 2.0 * ex / (1.0 + ex * ex);
  const double r = x * x * sech * sech / 16.0 *
                   (16.0 * n * n / (kPi * kPi) + 8.0 * n / kPi + 1.0);
  return chi0p / (1.0 + std::exp(-y)) + chi0m / (1.0 + std::exp(y)) + r;
}

double xi_thermal(const GibbsPoint& point, Method method, StencilSpec spec) {
  validate(point);
  if (method != Method::exact && method != Method::ppa && method != Method::tla)
    throw Error(ErrorCode::domain,
                "xi_thermal backend must be exact, ppa, or tla");
  if (!(point.beta > 0.0))
    throw Error(ErrorCode::domain, "xi_thermal requires beta > 0");
  if (point.beta - 2.0 * spec.step <= 0.0)
    throw Error(ErrorCode::step_domain,
                "beta - 2h <= 0: stencil step too large for this beta");

  const double beta = point.beta;
  if (method == Method::tla) {
    const auto f = [&](double d) {
      return detail::log_fidelity_tla_thermal(point.chain, beta - 0.5 * d, d);
    };
    return -second_derivative(f, 0.0, spec);
  }
  const SpectrumData sd = spectrum_data(point.chain);
  const bool ppa = method == Method::ppa;
  const auto f = [&](double d) {
    return detail::log_fidelity_commuting(sd, beta - 0.5 * d, beta + 0.5 * d,
                                          ppa);
  };
  return -second_derivative(f, 0.0, spec);
}

double xi_thermal(const GibbsPoint& point, Method method) {
  return xi_thermal(point, method, StencilSpec{default_beta_step(point.beta)});
}

double cv(const GibbsPoint& point, Method method, StencilSpec spec) {
  return 4.0 * point.beta * point.beta * xi_thermal(point, method, spec);
}

double cv(const GibbsPoint& point, Method method) {
  return cv(point, method, StencilSpec{default_beta_step(point.beta)});
}

PeakScan peak_scan(const ChainSpec& chain, Interval beta_range, Method method) {
  validate(chain);
  if (!is_ising(chain) || chain.field != 1.0)
    throw Error(ErrorCode::unsupported_regime,
                "peak_scan is defined at the critical point (anisotropy = 1, "
                "g = 1)");
  if (!(beta_range.lo > 0.0) || !(beta_range.hi > beta_range.lo))
    throw Error(ErrorCode::domain, "peak_scan needs 0 < lo < hi");

  const auto chi_at = [&](double beta) {
    if (method == Method::tla) return chi_tla(beta, chain);
    return chi_field(GibbsPoint{chain, beta}, method).value;
  };

  constexpr int kCoarse = 64;
  const bool log_grid = beta_range.hi / beta_range.lo > 20.0;
  std::vector<double> grid(kCoarse), vals(kCoarse);
  for (int i = 0; i < kCoarse; ++i) {
    const double t = static_cast<double>(i) / (kCoarse - 1);
    grid[i] = log_grid ? beta_range.lo *
                             std::pow(beta_range.hi / beta_range.lo, t)
                       : beta_range.lo + t * (beta_range.hi - beta_range.lo);
    vals[i] = chi_at(grid[i]);
  }
  int imax = 0;
  for (int i = 1; i < kCoarse; ++i)
    if (vals[i] > vals[imax]) imax = i;

  PeakScan scan;
  {
    std::ostringstream os;
    os << kCoarse << "-point " << (log_grid ? "log" : "linear") << " grid on ["
       << beta_range.lo << ", " << beta_range.hi
       << "] + golden-section (rel tol 1e-4)";
    scan.scan_grid = os.str();
  }
  if (imax == 0 || imax == kCoarse - 1) {
    scan.on_boundary = true;
    scan.beta_star = grid[imax];
    scan.chi_max = vals[imax];
    return scan;
  }

  // Golden-section on the bracketing coarse cells.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = grid[imax - 1], hi = grid[imax + 1];
  double c1 = hi - phi * (hi - lo), c2 = lo + phi * (hi - lo);
  double f1 = chi_at(c1), f2 = chi_at(c2);
  while (hi - lo > 1e-4 * hi) {
    if (f1 < f2) {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + phi * (hi - lo);
      f2 = chi_at(c2);
    } else {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - phi * (hi - lo);
      f1 = chi_at(c1);
    }
  }
  scan.beta_star = 0.5 * (lo + hi);
  scan.chi_max = chi_at(scan.beta_star);
  return scan;
}

}  // namespace xyfid
