#pragma once

#include <string>
#include <vector>

namespace xyfid {

struct VerifyCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = false;
};

// Runs the oracle-equivalence grids (partition function, sector traces,
// Uhlmann fidelity, specific heat, field susceptibility) for even
// N in {6, 8, ..., max_n}. corrupt_energy_convention switches the
// quasiparticle energy factor from 2*eps to eps as a negative control; the
// self-fidelity check must then fail.
VerifyReport verify_against_oracle(int max_n, double tolerance,
                                   bool corrupt_energy_convention = false,
                                   int workers = 0);

}  // namespace xyfid
