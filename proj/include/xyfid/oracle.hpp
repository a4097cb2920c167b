#pragma once

#include <vector>

#include "xyfid/chain.hpp"

namespace xyfid::oracle {

inline constexpr int kDefaultMaxSites = 12;

// Dense real symmetric matrix in the 2^N computational basis, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  double* row(int i) { return a_.data() + static_cast<size_t>(i) * n_; }
  const double* row(int i) const { return a_.data() + static_cast<size_t>(i) * n_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// C = A * B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// C = A^T * B
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // orthonormal columns
};

// Householder tridiagonalization + implicit-shift QL; self-contained.
// Throws no_convergence with diagnostics if a QL eigenvalue fails to
// deflate within the iteration cap.
SpectralDecomposition eigensolve(const DenseMatrix& a);
std::vector<double> eigenvalues_only(DenseMatrix a);

// Singular values (descending) via Householder bidiagonalization and
// Golub-Kahan implicit-shift QR, values only.
std::vector<double> singular_values(DenseMatrix a);

// H = -sum_i [ (1+gamma)/2 sx_i sx_{i+1} + (1-gamma)/2 sy_i sy_{i+1} ]
//     - g sum_i sz_i, site N+1 = 1, assembled by Kronecker placement.
// The sy sy product is real, so H is real symmetric.
DenseMatrix build_hamiltonian(const ChainSpec& chain,
                              int max_sites = kDefaultMaxSites);

// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) from spectral
// decompositions, computed as the nuclear norm of
// D_b^{1/2} (V_b^T V_a) D_a^{1/2} with normalized Gibbs weights D.
double gibbs_and_fidelity(const GibbsPoint& a, const GibbsPoint& b,
                          int max_sites = kDefaultMaxSites);

// Same, from precomputed Hamiltonian decompositions; lets callers sweeping
// many (beta, beta') pairs reuse the expensive eigensolves.
double fidelity_from_decompositions(const SpectralDecomposition& a,
                                    double beta_a,
                                    const SpectralDecomposition& b,
                                    double beta_b);

struct SectorObservables {
  double z_plus = 0.0;   // Tr[P+ e^{-beta H}]
  double z_minus = 0.0;  // Tr[P- e^{-beta H}]
  double e0_plus = 0.0;
  double e0_minus = 0.0;
  double e1_plus = 0.0;
  double cv = 0.0;       // beta^2 (<H^2> - <H>^2)
};

// Parity-resolved traces and sector energies. Eigenvectors are classified
// by <v|P|v| with |.| > 0.99 required; degenerate clusters are resolved by
// diagonalizing P within the cluster first.
SectorObservables sector_observables(const GibbsPoint& point,
                                     int max_sites = kDefaultMaxSites);

}  // namespace xyfid::oracle
