#include "xyfid/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace xyfid {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_chain: return "invalid_chain";
    case ErrorCode::degenerate_mode: return "degenerate_mode";
    case ErrorCode::unsupported_regime: return "unsupported_regime";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::step_domain: return "step_domain";
    case ErrorCode::evaluation: return "evaluation";
    case ErrorCode::internal_inconsistency: return "internal_inconsistency";
    case ErrorCode::resource_limit: return "resource_limit";
    case ErrorCode::domain: return "domain";
    case ErrorCode::classification: return "classification";
    case ErrorCode::no_convergence: return "no_convergence";
  }
  return "unknown";
}

void validate(const ChainSpec& chain) {
  if (chain.n_sites < 2 || chain.n_sites % 2 != 0)
    throw Error(ErrorCode::invalid_chain,
                "n_sites must be even and >= 2, got " +
                    std::to_string(chain.n_sites));
  if (!(chain.anisotropy >= 0.0 && chain.anisotropy <= 1.0))
    throw Error(ErrorCode::invalid_chain,
                "anisotropy must lie in [0, 1], got " +
                    std::to_string(chain.anisotropy));
  if (!std::isfinite(chain.field))
    throw Error(ErrorCode::invalid_chain, "field must be finite");
}

void validate(const GibbsPoint& point) {
  validate(point.chain);
  if (!(point.beta >= 0.0) || !std::isfinite(point.beta))
    throw Error(ErrorCode::invalid_chain,
                "beta must be finite and >= 0, got " +
                    std::to_string(point.beta));
}

std::vector<double> positive_momenta(const ChainSpec& chain) {
  validate(chain);
  const int half = chain.n_sites / 2;
  std::vector<double> ks(half);
  // Generated from integer indices, never by accumulating increments.
  for (int j = 1; j <= half; ++j)
    ks[j - 1] = (2.0 * j - 1.0) * kPi / chain.n_sites;
  return ks;
}

std::vector<double> negative_momenta(const ChainSpec& chain) {
  validate(chain);
  const int half = chain.n_sites / 2;
  std::vector<double> ks(half - 1);
  for (int j = 1; j <= half - 1; ++j)
    ks[j - 1] = 2.0 * j * kPi / chain.n_sites;
  return ks;
}

namespace {

double mode_energy(const ChainSpec& chain, double k) {
  return std::hypot(chain.field - std::cos(k), chain.anisotropy * std::sin(k));
}

// atan2(gamma sin k, g - cos k); robust in all quadrants. sin k >= 0 on
// (0, pi), so the result is already in [0, pi].
double mode_angle(const ChainSpec& chain, double k) {
  double t = std::atan2(chain.anisotropy * std::sin(k), chain.field - std::cos(k));
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

}  // namespace

Mode mode(const ChainSpec& chain, double k) {
  validate(chain);
  if (!(k > 0.0 && k < kPi))
    throw Error(ErrorCode::domain,
                "mode momentum must lie in (0, pi), got " + std::to_string(k));
  const double e = mode_energy(chain, k);
  if (e == 0.0)
    throw Error(ErrorCode::degenerate_mode,
                "vanishing quasiparticle energy at k = " + std::to_string(k) +
                    ": Bogoliubov angle undefined");
  return Mode{k, e, mode_angle(chain, k)};
}

std::pair<double, double> special_mode_energies(const ChainSpec& chain) {
  validate(chain);
  return {chain.field - 1.0, chain.field + 1.0};
}

std::pair<double, double> ground_energies(const ChainSpec& chain) {
  const SpectrumData sd = spectrum_data(chain);
  return {-2.0 * sd.sum_eps_pos, -2.0 * sd.sum_eps_neg - 2.0};
}

double symmetry_breaking_gap(const ChainSpec& chain) {
  validate(chain);
  if (!is_ising(chain))
    throw Error(ErrorCode::unsupported_regime,
                "symmetry-breaking gap is defined for the Ising chain "
                "(anisotropy = 1) only");
  auto [e0p, e0m] = ground_energies(chain);
  return e0m - e0p;
}

double dynamical_gap(const ChainSpec& chain) {
  validate(chain);
  if (!is_ising(chain))
    throw Error(ErrorCode::unsupported_regime,
                "dynamical gap is defined for the Ising chain "
                "(anisotropy = 1) only");
  const double g = chain.field;
  const double c = std::cos(kPi / chain.n_sites);
  return std::sqrt(g * g - 2.0 * g * c + 1.0);
}

SpectrumData spectrum_data(const ChainSpec& chain) {
  validate(chain);
  SpectrumData sd;
  sd.chain = chain;
  sd.k_pos = positive_momenta(chain);
  sd.k_neg = negative_momenta(chain);
  const auto fill = [&](const std::vector<double>& ks, std::vector<double>& eps,
                        std::vector<double>& theta, double& sum) {
    eps.resize(ks.size());
    theta.resize(ks.size());
    sum = 0.0;
    for (size_t i = 0; i < ks.size(); ++i) {
      eps[i] = mode_energy(chain, ks[i]);
      theta[i] = eps[i] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                               : mode_angle(chain, ks[i]);
      sum += eps[i];
    }
  };
  fill(sd.k_pos, sd.eps_pos, sd.theta_pos, sd.sum_eps_pos);
  fill(sd.k_neg, sd.eps_neg, sd.theta_neg, sd.sum_eps_neg);
  sd.eps0 = chain.field - 1.0;
  sd.eps_pi = chain.field + 1.0;
  return sd;
}

}  // namespace xyfid
