#pragma once

#include <utility>
#include <vector>

#include "xyfid/chain.hpp"

namespace xyfid {

// One Bogoliubov mode at momentum k in (0, pi).
//   energy = sqrt((g - cos k)^2 + (gamma sin k)^2)
//   (sin angle, cos angle) = (gamma sin k, g - cos k) / energy
struct Mode {
  double momentum = 0.0;
  double energy = 0.0;
  double angle = 0.0;  // in [0, 2*pi); in fact always in [0, pi]
};

// Even-parity half grid k+ = { (2j-1)pi/N : j = 1..N/2 }, strictly increasing.
std::vector<double> positive_momenta(const ChainSpec& chain);

// Odd-parity half grid k- = { 2j pi/N : j = 1..N/2-1 }; the 0 and pi modes
// are handled by special_mode_energies.
std::vector<double> negative_momenta(const ChainSpec& chain);

// Throws degenerate_mode when the quasiparticle energy vanishes (the
// Bogoliubov angle is undefined there).
Mode mode(const ChainSpec& chain, double k);

// (eps_0, eps_pi) = (g - 1, g + 1). Signed on purpose: the sinh factors of
// the odd-parity boundary terms need the sign.
std::pair<double, double> special_mode_energies(const ChainSpec& chain);

// Sector ground energies (E0+, E0-):
//   E0+ = -2 sum_{k+} eps_k,   E0- = -2 sum_{k-} eps_k - 2.
std::pair<double, double> ground_energies(const ChainSpec& chain);

// Delta(g) = E0-(g) - E0+(g); Ising only (gamma = 1). At g = 1 equals
// 2 tan(pi/4N) exactly.
double symmetry_breaking_gap(const ChainSpec& chain);

// Lowest single-pair excitation scale within the even sector per the closed
// form sqrt(g^2 - 2 g cos(pi/N) + 1) = eps_{pi/N}; Ising only. The lowest
// even-sector many-body excitation is a pair carrying twice this per
// quasiparticle (E1+ - E0+ = 4 eps_{pi/N}), checked against the ED oracle.
double dynamical_gap(const ChainSpec& chain);

// Per-chain spectral tables shared by the partition and fidelity kernels.
// Angles of degenerate modes (eps = 0, possible only at isolated parameter
// points such as gamma = 0, g = cos k) are stored as NaN; consumers that
// need angles must reject them.
struct SpectrumData {
  ChainSpec chain;
  std::vector<double> k_pos, eps_pos, theta_pos;
  std::vector<double> k_neg, eps_neg, theta_neg;
  double eps0 = 0.0;
  double eps_pi = 0.0;
  double sum_eps_pos = 0.0;  // S+ = sum_{k+} eps_k
  double sum_eps_neg = 0.0;  // S- = sum_{k-} eps_k
};

SpectrumData spectrum_data(const ChainSpec& chain);

}  // namespace xyfid
