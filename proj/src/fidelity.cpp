#include "xyfid/fidelity.hpp"

#include <cmath>
#include <limits>

#include "xyfid/partition.hpp"
#include "xyfid/response.hpp"

namespace xyfid {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

void require_same_size(const ChainSpec& a, const ChainSpec& b) {
  if (a.n_sites != b.n_sites)
    throw Error(ErrorCode::dimension_mismatch,
                "fidelity requires equal chain sizes, got " +
                    std::to_string(a.n_sites) + " and " +
                    std::to_string(b.n_sites));
}

void require_angle(double theta, double k) {
  if (std::isnan(theta))
    throw Error(ErrorCode::degenerate_mode,
                "vanishing quasiparticle energy at k = " + std::to_string(k) +
                    ": Bogoliubov angle undefined");
}

// Log factors of one (k,-k) pair, anchored by p = (x_a + x_b)/2 with
// x = energy_scale * beta * eps (so e^{p} is divided out):
//   plus  = ln[( sqrt(u^2+v^2) + 2 ) e^{-p}]
//   minus = ln[( sqrt(u^2+v^2) - 2 ) e^{-p}]   (-inf when exactly 2)
// The minus factor is computed from the sinh-weighted coefficients
// u0 = 2 sinh(p) cos, v0 = 2 sinh(m) sin via
//   u^2 + v^2 - 4 = u0^2 + v0^2,
// which keeps full relative accuracy where the direct subtraction cancels.
struct PairFactors {
  double plus;
  double minus;
};

PairFactors pair_factors(double eps_a, double theta_a, double eps_b,
                         double theta_b, double beta_a, double beta_b,
                         double energy_scale) {
  const double xa = energy_scale * beta_a * eps_a;
  const double xb = energy_scale * beta_b * eps_b;
  const double half = (theta_a - theta_b) / 2.0;
  const double c = std::cos(half);
  const double s = std::sin(half);

  const double ea = std::exp(-xa);
  const double eb = std::exp(-xb);
  const double ut = (1.0 + ea * eb) * c;
  const double vt = (eb + ea) * s;
  const double uo = -std::expm1(-(xa + xb)) * c;
  const double vo = (xa >= xb ? -eb * std::expm1(-(xa - xb))
                              : ea * std::expm1(-(xb - xa))) *
                    s;
  const double r = std::hypot(ut, vt);
  const double ep = std::exp(-0.5 * (xa + xb));
  const double fplus = r + 2.0 * ep;
  const double small = uo * uo + vo * vo;
  PairFactors f;
  f.plus = std::log(fplus);
  f.minus = small == 0.0 ? kNegInf : std::log(small) - f.plus;
  return f;
}

struct FidelityTerms {
  // All logs relative to the numerator anchor (energy_scale/2)(ba Sa+ + bb Sb+).
  double log_plus_sum;      // ln F+ (anchored)
  double log_minus_mag;     // ln|F-| (anchored)
  int minus_sign;
  bool cancelled;
  double anchor_num;        // numerator anchor
  double anchor_den;        // (ba Sa+ + bb Sb+), the sqrt(Za Zb) anchor
  SignedLog f_plus;         // anchored SignedLogs of the two numerator parts
  SignedLog f_minus;
};

FidelityTerms fidelity_terms(const SpectrumData& a, double beta_a,
                             const SpectrumData& b, double beta_b,
                             double energy_scale) {
  require_same_size(a.chain, b.chain);
  if (!(beta_a >= 0.0) || !(beta_b >= 0.0))
    throw Error(ErrorCode::domain, "beta must be >= 0");

  double ap = 0.0, am = 0.0;
  for (size_t i = 0; i < a.eps_pos.size(); ++i) {
    require_angle(a.theta_pos[i], a.k_pos[i]);
    require_angle(b.theta_pos[i], b.k_pos[i]);
    const PairFactors f =
        pair_factors(a.eps_pos[i], a.theta_pos[i], b.eps_pos[i],
                     b.theta_pos[i], beta_a, beta_b, energy_scale);
    ap += f.plus;
    am += f.minus;
  }

  double apn = 0.0, amn = 0.0;
  for (size_t i = 0; i < a.eps_neg.size(); ++i) {
    require_angle(a.theta_neg[i], a.k_neg[i]);
    require_angle(b.theta_neg[i], b.k_neg[i]);
    const PairFactors f =
        pair_factors(a.eps_neg[i], a.theta_neg[i], b.eps_neg[i],
                     b.theta_neg[i], beta_a, beta_b, energy_scale);
    apn += f.plus;
    amn += f.minus;
  }

  // 0 and pi boundary modes: 4 cosh(s0) cosh(spi) and 4 sinh(s0) sinh(spi),
  // anchored by |s0| + |spi|. eps0 = g - 1 enters signed.
  const double s0 = 0.5 * (beta_a * a.eps0 + beta_b * b.eps0);
  const double spi = 0.5 * (beta_a * a.eps_pi + beta_b * b.eps_pi);
  const double bc = std::log1p(std::exp(-2.0 * std::abs(s0))) +
                    std::log1p(std::exp(-2.0 * std::abs(spi)));
  double bs;
  {
    const double t0 = std::expm1(-2.0 * std::abs(s0));
    const double tp = std::expm1(-2.0 * std::abs(spi));
    bs = (t0 == -1.0 || tp == -1.0)
             ? kNegInf
             : std::log(-t0) + std::log(-tp);
  }
  const int sgn_b = sign_of(s0) * sign_of(spi);

  FidelityTerms t;
  t.anchor_num = 0.5 * energy_scale *
                 (beta_a * a.sum_eps_pos + beta_b * b.sum_eps_pos);
  t.anchor_den = beta_a * a.sum_eps_pos + beta_b * b.sum_eps_pos;
  // Odd-sector offset: beta-linear pieces combined from O(1) per-chain
  // constants before multiplying by beta.
  const double d = 0.5 * energy_scale *
                       (beta_a * (a.sum_eps_neg - a.sum_eps_pos) +
                        beta_b * (b.sum_eps_neg - b.sum_eps_pos)) +
                   std::abs(s0) + std::abs(spi);

  SignedLog fp = SignedLog::from_log(ap - kLn2) + SignedLog::from_log(am - kLn2);
  SignedLog fm = SignedLog::from_log(d + bc + apn - kLn2) -
                 SignedLog::from_log(d + bs + amn - kLn2, sgn_b);
  t.f_plus = fp;
  t.f_minus = fm;
  t.log_plus_sum = fp.log_mag;
  t.log_minus_mag = fm.log_mag;
  t.minus_sign = fm.sign;
  t.cancelled = fp.cancelled || fm.cancelled;
  return t;
}

}  // namespace

namespace detail {

double log_fidelity_exact(const SpectrumData& a, double beta_a,
                          const SpectrumData& b, double beta_b,
                          bool* cancelled, double energy_scale) {
  const FidelityTerms t = fidelity_terms(a, beta_a, b, beta_b, energy_scale);
  const SignedLog num = t.f_plus + t.f_minus;
  if (num.sign <= 0)
    throw Error(ErrorCode::internal_inconsistency,
                "fidelity numerator cancelled to a non-positive value");
  const double wa = log_z_residual(a, beta_a);
  const double wb = log_z_residual(b, beta_b);
  if (cancelled) *cancelled = num.cancelled;
  return (t.anchor_num - t.anchor_den) + num.log_mag - 0.5 * (wa + wb);
}

double log_fidelity_ppa(const SpectrumData& a, double beta_a,
                        const SpectrumData& b, double beta_b,
                        double energy_scale) {
  require_same_size(a.chain, b.chain);
  double ap = 0.0;
  for (size_t i = 0; i < a.eps_pos.size(); ++i) {
    require_angle(a.theta_pos[i], a.k_pos[i]);
    require_angle(b.theta_pos[i], b.k_pos[i]);
    ap += pair_factors(a.eps_pos[i], a.theta_pos[i], b.eps_pos[i],
                       b.theta_pos[i], beta_a, beta_b, energy_scale)
              .plus;
  }
  const double anchor_num =
      0.5 * energy_scale * (beta_a * a.sum_eps_pos + beta_b * b.sum_eps_pos);
  const double anchor_den = beta_a * a.sum_eps_pos + beta_b * b.sum_eps_pos;
  return (anchor_num - anchor_den) + ap -
         0.5 * (log_z_ppa_residual(a, beta_a) + log_z_ppa_residual(b, beta_b));
}

double log_fidelity_commuting(const SpectrumData& sd, double beta_a,
                              double beta_b, bool ppa) {
  if (!(beta_a >= 0.0) || !(beta_b >= 0.0))
    throw Error(ErrorCode::domain, "beta must be >= 0");
  const double mid = 0.5 * (beta_a + beta_b);
  // The 2 beta S+ anchors of the three evaluations cancel identically.
  if (ppa)
    return log_z_ppa_residual(sd, mid) -
           0.5 * (log_z_ppa_residual(sd, beta_a) + log_z_ppa_residual(sd, beta_b));
  return log_z_residual(sd, mid) -
         0.5 * (log_z_residual(sd, beta_a) + log_z_residual(sd, beta_b));
}

double log_fidelity_tla_thermal(const ChainSpec& chain, double beta,
                                double delta) {
  if (!is_ising(chain))
    throw Error(ErrorCode::unsupported_regime,
                "the two-level approximation is implemented for the Ising "
                "chain (anisotropy = 1) only");
  if (!(beta >= 0.0) || !(beta + delta >= 0.0))
    throw Error(ErrorCode::domain, "beta must stay >= 0 across the shift");
  const double gap = symmetry_breaking_gap(chain);
  const auto phi = [gap](double s) { return std::log1p(std::exp(-s * gap)); };
  // e^{-beta E0+} prefactors of the three Z_TLA evaluations cancel exactly.
  return phi(beta + 0.5 * delta) - 0.5 * (phi(beta) + phi(beta + delta));
}

}  // namespace detail

ModePairOverlap mode_overlap(double k, const GibbsPoint& a, const GibbsPoint& b) {
  validate(a);
  validate(b);
  require_same_size(a.chain, b.chain);
  const Mode ma = mode(a.chain, k);
  const Mode mb = mode(b.chain, k);
  const double half = (ma.angle - mb.angle) / 2.0;
  // E_k = 2 eps_k; overflows to +inf for beta*eps beyond ~350 (the fidelity
  // kernels use the anchored log form instead).
  ModePairOverlap ov;
  ov.u = 2.0 * std::cosh(a.beta * ma.energy + b.beta * mb.energy) * std::cos(half);
  ov.v = 2.0 * std::cosh(a.beta * ma.energy - b.beta * mb.energy) * std::sin(half);
  return ov;
}

FidelityReport fidelity_exact(const GibbsPoint& a, const GibbsPoint& b) {
  validate(a);
  validate(b);
  const SpectrumData sa = spectrum_data(a.chain);
  const SpectrumData sb = spectrum_data(b.chain);
  const FidelityTerms t = fidelity_terms(sa, a.beta, sb, b.beta, 2.0);
  const SignedLog num = t.f_plus + t.f_minus;
  if (num.sign <= 0)
    throw Error(ErrorCode::internal_inconsistency,
                "fidelity numerator cancelled to a non-positive value");
  const double wa = detail::log_z_residual(sa, a.beta);
  const double wb = detail::log_z_residual(sb, b.beta);

  FidelityReport report;
  report.positive_part = SignedLog::from_log(t.anchor_num + t.log_plus_sum);
  report.positive_part.cancelled = t.f_plus.cancelled;
  report.negative_part =
      SignedLog::from_log(t.anchor_num + t.log_minus_mag, t.minus_sign);
  report.negative_part.cancelled = t.f_minus.cancelled;
  report.normalization =
      SignedLog::from_log(t.anchor_den + 0.5 * (wa + wb));
  report.cancellation_flag = num.cancelled;
  report.value = std::exp((t.anchor_num - t.anchor_den) + num.log_mag -
                          0.5 * (wa + wb));
  return report;
}

double fidelity_ppa(const GibbsPoint& a, const GibbsPoint& b) {
  validate(a);
  validate(b);
  return std::exp(detail::log_fidelity_ppa(spectrum_data(a.chain), a.beta,
                                           spectrum_data(b.chain), b.beta));
}

double fidelity_commuting(double beta_a, double beta_b, const ChainSpec& chain) {
  validate(chain);
  return std::exp(detail::log_fidelity_commuting(spectrum_data(chain), beta_a,
                                                 beta_b, /*ppa=*/false));
}

double fidelity_tla_field(double beta, const ChainSpec& chain, double delta) {
  validate(chain);
  if (!is_ising(chain))
    throw Error(ErrorCode::unsupported_regime,
                "the two-level approximation is implemented for the Ising "
                "chain (anisotropy = 1) only");
  if (!(beta >= 0.0)) throw Error(ErrorCode::domain, "beta must be >= 0");
  ChainSpec shifted = chain;
  shifted.field += delta;
  const double gap_a = symmetry_breaking_gap(chain);
  const double gap_b = symmetry_breaking_gap(shifted);
  // Thermal weights 1/sqrt((1+e^{-+beta gap})(1+e^{-+beta gap'})); ground
  // fidelities through the quadratic expansion in delta.
  const double f0p = 1.0 - 0.5 * delta * delta * chi_ground(chain, Parity::even);
  const double f0m = 1.0 - 0.5 * delta * delta * chi_ground(chain, Parity::odd);
  const double wp =
      1.0 / std::sqrt((1.0 + std::exp(-beta * gap_a)) *
                      (1.0 + std::exp(-beta * gap_b)));
  const double wm =
      1.0 / std::sqrt((1.0 + std::exp(beta * gap_a)) *
                      (1.0 + std::exp(beta * gap_b)));
  return wp * f0p + wm * f0m;
}

double fidelity_tla_thermal(double beta, double delta, const ChainSpec& chain) {
  validate(chain);
  return std::exp(detail::log_fidelity_tla_thermal(chain, beta, delta));
}

}  // namespace xyfid
