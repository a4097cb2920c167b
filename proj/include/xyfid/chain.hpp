#pragma once

#include <stdexcept>
#include <string>

namespace xyfid {

enum class ErrorCode {
  invalid_chain,
  degenerate_mode,
  unsupported_regime,
  dimension_mismatch,
  step_domain,
  evaluation,
  internal_inconsistency,
  resource_limit,
  domain,
  classification,
  no_convergence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

// Transverse-field XY chain with periodic boundaries:
//   H = -sum_i [ (1+gamma)/2 sx_i sx_{i+1} + (1-gamma)/2 sy_i sy_{i+1} ]
//       - g sum_i sz_i
// N even, gamma in [0,1], g dimensionless in units of the coupling.
struct ChainSpec {
  int n_sites = 2;
  double anisotropy = 1.0;
  double field = 1.0;
};

void validate(const ChainSpec& chain);

inline bool is_ising(const ChainSpec& chain) { return chain.anisotropy == 1.0; }

// Thermal state label: chain + inverse temperature. beta = 0 is the
// maximally mixed state.
struct GibbsPoint {
  ChainSpec chain;
  double beta = 1.0;
};

void validate(const GibbsPoint& point);

}  // namespace xyfid
