#pragma once

#include <cmath>
#include <limits>

#include "xyfid/chain.hpp"

namespace xyfid {

// Sign plus natural-log-magnitude representation of a real number,
// x = sign * exp(log_mag). Products of ~N factors like 2cosh(beta eps)
// overflow native doubles for beta*N beyond a few hundred; this type keeps
// them finite. `cancelled` records catastrophic cancellation in add() and
// propagates through subsequent operations.
struct SignedLog {
  int sign = 0;
  double log_mag = -std::numeric_limits<double>::infinity();
  bool cancelled = false;

  static SignedLog zero() { return {}; }
  static SignedLog one() { return {1, 0.0, false}; }

  static SignedLog from_value(double x) {
    if (x == 0.0) return zero();
    return {x > 0.0 ? 1 : -1, std::log(std::abs(x)), false};
  }

  static SignedLog from_log(double log_mag, int sign = 1) {
    if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity())
      return zero();
    return {sign > 0 ? 1 : -1, log_mag, false};
  }

  // May over/underflow to +-inf / 0 outside native range; the log form is
  // the authoritative value.
  double value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_mag);
  }

  bool is_zero() const { return sign == 0; }
};

// Relative difference of magnitudes below which an opposite-sign add is
// reported as exact cancellation: 1 - e^{-d} < 1e-14 <=> d < ~1e-14.
inline constexpr double kCancellationLogGap = 1e-14;

inline SignedLog signedlog_mul(SignedLog a, SignedLog b) {
  SignedLog r;
  r.cancelled = a.cancelled || b.cancelled;
  if (a.sign == 0 || b.sign == 0) return r;  // zero absorbs
  r.sign = a.sign * b.sign;
  r.log_mag = a.log_mag + b.log_mag;
  return r;
}

inline SignedLog signedlog_add(SignedLog a, SignedLog b) {
  bool flag = a.cancelled || b.cancelled;
  if (a.sign == 0) {
    b.cancelled = flag;
    return b;
  }
  if (b.sign == 0) {
    a.cancelled = flag;
    return a;
  }
  if (a.log_mag < b.log_mag) std::swap(a, b);
  const double d = a.log_mag - b.log_mag;  // >= 0
  SignedLog r;
  r.cancelled = flag;
  if (a.sign == b.sign) {
    r.sign = a.sign;
    r.log_mag = a.log_mag + std::log1p(std::exp(-d));
    return r;
  }
  if (d < kCancellationLogGap) {
    r.sign = 0;
    r.cancelled = true;
    return r;
  }
  r.sign = a.sign;
  r.log_mag = a.log_mag + std::log(-std::expm1(-d));
  return r;
}

inline SignedLog signedlog_sqrt(SignedLog a) {
  if (a.sign < 0)
    throw Error(ErrorCode::domain, "signedlog_sqrt of a negative value");
  if (a.sign == 0) return a;
  return {1, 0.5 * a.log_mag, a.cancelled};
}

inline SignedLog operator*(SignedLog a, SignedLog b) { return signedlog_mul(a, b); }
inline SignedLog operator+(SignedLog a, SignedLog b) { return signedlog_add(a, b); }
inline SignedLog operator-(SignedLog a, SignedLog b) {
  b.sign = -b.sign;
  return signedlog_add(a, b);
}

inline SignedLog operator/(SignedLog a, SignedLog b) {
  if (b.sign == 0) throw Error(ErrorCode::domain, "signedlog division by zero");
  SignedLog inv{b.sign, -b.log_mag, b.cancelled};
  return signedlog_mul(a, inv);
}

}  // namespace xyfid
