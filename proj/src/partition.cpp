#include "xyfid/partition.hpp"

#include <cmath>
#include <limits>

namespace xyfid {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// log(2cosh(x)) - |x| and log|2sinh(x)| - |x|; both stay O(1) for any x.
inline double log_2cosh_res(double absx) { return std::log1p(std::exp(-2.0 * absx)); }
inline double log_2sinh_res(double absx) {
  const double t = std::expm1(-2.0 * absx);  // in (-1, 0]
  return t == -1.0 ? kNegInf : std::log(-t);
}

}  // namespace

namespace detail {

AnchoredZ anchored_z(const SpectrumData& sd, double beta) {
  AnchoredZ az;
  az.anchor = 2.0 * beta * sd.sum_eps_pos;

  double rfp = 0.0, rbp = 0.0;
  int sbp = 1;
  for (double e : sd.eps_pos) {
    const double x = beta * e;
    rfp += 2.0 * log_2cosh_res(x);
    const double r = log_2sinh_res(x);
    if (r == kNegInf) sbp = 0;
    rbp += 2.0 * r;
  }
  az.r_f_plus = rfp;
  az.r_b_plus = rbp;
  az.s_b_plus = sbp;

  const double b0 = beta * std::abs(sd.eps0);
  const double bpi = beta * std::abs(sd.eps_pi);
  // Odd-sector anchor offset relative to 2*beta*S+; the beta-independent
  // constant is accumulated first so the product with beta involves only
  // O(1) magnitudes.
  const double offset_const =
      2.0 * (sd.sum_eps_neg - sd.sum_eps_pos) + std::abs(sd.eps0) + std::abs(sd.eps_pi);
  az.d_minus = beta * offset_const;

  double rfm = log_2cosh_res(b0) + log_2cosh_res(bpi);
  double rbm = 0.0;
  int sbm = sign_of(beta * sd.eps0) * sign_of(beta * sd.eps_pi);
  {
    const double r0 = log_2sinh_res(b0);
    const double rp = log_2sinh_res(bpi);
    rbm = r0 + rp;
  }
  for (double e : sd.eps_neg) {
    const double x = beta * e;
    rfm += 2.0 * log_2cosh_res(x);
    const double r = log_2sinh_res(x);
    if (r == kNegInf) sbm = 0;
    rbm += 2.0 * r;
  }
  az.r_f_minus = rfm;
  az.r_b_minus = rbm;
  az.s_b_minus = sbm;

  SignedLog sum = SignedLog::from_log(az.r_f_plus);
  sum = sum + SignedLog::from_log(az.r_b_plus, sbp);
  sum = sum + SignedLog::from_log(az.d_minus + az.r_f_minus);
  sum = sum - SignedLog::from_log(az.d_minus + az.r_b_minus, sbm);
  sum = sum * SignedLog::from_log(-kLn2);
  az.residual = sum;
  return az;
}

double log_z_residual(const SpectrumData& sd, double beta) {
  const AnchoredZ az = anchored_z(sd, beta);
  if (az.residual.sign <= 0)
    throw Error(ErrorCode::internal_inconsistency,
                "partition function cancelled to a non-positive value");
  return az.residual.log_mag;
}

double log_z_ppa_residual(const SpectrumData& sd, double beta) {
  double r = 0.0;
  for (double e : sd.eps_pos) r += 2.0 * log_2cosh_res(beta * e);
  return r;
}

}  // namespace detail

ZParts z_parts(const GibbsPoint& point) {
  validate(point);
  const SpectrumData sd = spectrum_data(point.chain);
  const detail::AnchoredZ az = detail::anchored_z(sd, point.beta);
  ZParts parts;
  parts.z_f_plus = SignedLog::from_log(az.anchor + az.r_f_plus);
  parts.z_b_plus = SignedLog::from_log(az.anchor + az.r_b_plus, az.s_b_plus);
  parts.z_f_minus = SignedLog::from_log(az.anchor + az.d_minus + az.r_f_minus);
  parts.z_b_minus =
      SignedLog::from_log(az.anchor + az.d_minus + az.r_b_minus, az.s_b_minus);
  return parts;
}

SignedLog z_full(const GibbsPoint& point) {
  validate(point);
  const SpectrumData sd = spectrum_data(point.chain);
  const detail::AnchoredZ az = detail::anchored_z(sd, point.beta);
  if (az.residual.sign <= 0)
    throw Error(ErrorCode::internal_inconsistency,
                "partition function cancelled to a non-positive value");
  SignedLog z = az.residual;
  z.log_mag += az.anchor;
  return z;
}

SignedLog z_ppa(const GibbsPoint& point) {
  validate(point);
  const SpectrumData sd = spectrum_data(point.chain);
  return SignedLog::from_log(2.0 * point.beta * sd.sum_eps_pos +
                             detail::log_z_ppa_residual(sd, point.beta));
}

SignedLog z_tla(const GibbsPoint& point) {
  validate(point);
  if (!is_ising(point.chain))
    throw Error(ErrorCode::unsupported_regime,
                "the two-level approximation is implemented for the Ising "
                "chain (anisotropy = 1) only");
  const auto [e0p, e0m] = ground_energies(point.chain);
  const double lo = std::min(e0p, e0m);
  const double hi = std::max(e0p, e0m);
  // Relative to the lower level, so the log stays finite at any beta.
  return SignedLog::from_log(-point.beta * lo +
                             std::log1p(std::exp(-point.beta * (hi - lo))));
}

}  // namespace xyfid
