#pragma once

#include "xyfid/chain.hpp"
#include "xyfid/signed_log.hpp"
#include "xyfid/spectrum.hpp"

namespace xyfid {

// The four components of the partition function,
//   Z = 1/2 [ Z_F+ + Z_B+ + Z_F- - Z_B- ],
// with products over the full momentum sets realized as squared half-grid
// products times the 0/pi boundary factors. z_b_minus carries the sign of
// sinh(beta eps_0) sinh(beta eps_pi) (negative for g < 1, beta > 0).
struct ZParts {
  SignedLog z_f_plus;
  SignedLog z_b_plus;
  SignedLog z_f_minus;
  SignedLog z_b_minus;
};

ZParts z_parts(const GibbsPoint& point);

// Full partition function as a positive SignedLog; throws
// internal_inconsistency if the half-sum cancels to a non-positive value.
SignedLog z_full(const GibbsPoint& point);

// Positive Fermionic part only: prod_{K+} 2cosh(beta eps_k).
SignedLog z_ppa(const GibbsPoint& point);

// Two-level truncation e^{-beta E0+} + e^{-beta E0-}; Ising only.
SignedLog z_tla(const GibbsPoint& point);

namespace detail {

// Log-domain pieces of Z relative to the anchor 2*beta*S+ (= -beta E0+).
// Differences of ln Z at nearby beta cancel the anchor analytically, which
// keeps the thermal-susceptibility stencils rounding-noise free at large
// beta*N.
struct AnchoredZ {
  double anchor = 0.0;       // 2*beta*S+
  double r_f_plus = 0.0;     // ln Z_F+ - anchor
  double r_b_plus = 0.0;     // ln Z_B+ - anchor (magnitude part)
  int s_b_plus = 1;          // 0 when some beta*eps_k = 0
  double d_minus = 0.0;      // odd-sector anchor offset
  double r_f_minus = 0.0;    // ln Z_F- - anchor - d_minus
  double r_b_minus = 0.0;    // ln|Z_B-| - anchor - d_minus
  int s_b_minus = 1;         // sign of Z_B-
  SignedLog residual;        // ln Z - anchor, with cancellation flag
};

AnchoredZ anchored_z(const SpectrumData& sd, double beta);

// w(beta) = ln Z - 2*beta*S+ as a plain double (throws on non-positive Z).
double log_z_residual(const SpectrumData& sd, double beta);

// ln Z_F+ - 2*beta*S+ = 2 sum_{k+} log1p(e^{-2 beta eps}).
double log_z_ppa_residual(const SpectrumData& sd, double beta);

}  // namespace detail

}  // namespace xyfid
