#include "xyfid/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace xyfid::oracle {

namespace {

inline double sign_like(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Householder reduction of a symmetric matrix to tridiagonal form.
// On return d holds the diagonal and e[1..n-1] the subdiagonal. With
// accumulate = true, `a` is replaced by the orthogonal Q with
// A = Q T Q^T; otherwise `a` holds scratch and d is read off the
// transformed diagonal.
void tridiagonalize(DenseMatrix& a, std::vector<double>& d,
                    std::vector<double>& e, bool accumulate) {
  const int n = a.size();
  d.assign(n, 0.0);
  e.assign(n, 0.0);

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(a.at(i, k));
      if (scale == 0.0) {
        e[i] = a.at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a.at(i, k) /= scale;
          h += a.at(i, k) * a.at(i, k);
        }
        double f = a.at(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a.at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          a.at(j, i) = a.at(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a.at(j, k) * a.at(i, k);
          for (int k = j + 1; k <= l; ++k) g += a.at(k, j) * a.at(i, k);
          e[j] = g / h;
          f += e[j] * a.at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a.at(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k)
            a.at(j, k) -= f * e[k] + g * a.at(i, k);
        }
      }
    } else {
      e[i] = a.at(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;

  if (!accumulate) {
    for (int i = 0; i < n; ++i) d[i] = a.at(i, i);
    return;
  }
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += a.at(i, k) * a.at(k, j);
        for (int k = 0; k <= l; ++k) a.at(k, j) -= g * a.at(k, i);
      }
    }
    d[i] = a.at(i, i);
    a.at(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) a.at(j, i) = a.at(i, j) = 0.0;
  }
}

// Implicit-shift QL on a symmetric tridiagonal (d, e); rotations are
// accumulated into the columns of *z when z != nullptr.
void ql_implicit(std::vector<double>& d, std::vector<double>& e,
                 DenseMatrix* z) {
  const int n = static_cast<int>(d.size());
  constexpr int kMaxIter = 64;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m != l) {
        if (iter++ == kMaxIter)
          throw Error(ErrorCode::no_convergence,
                      "QL failed to deflate eigenvalue " + std::to_string(l) +
                          " of " + std::to_string(n) + " after " +
                          std::to_string(kMaxIter) + " iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            for (int k = 0; k < n; ++k) {
              f = z->at(k, i + 1);
              z->at(k, i + 1) = s * z->at(k, i) + c * f;
              z->at(k, i) = c * z->at(k, i) - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void sort_pairs_ascending(std::vector<double>& d, DenseMatrix* z) {
  const int n = static_cast<int>(d.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return d[i] < d[j]; });
  std::vector<double> ds(n);
  for (int i = 0; i < n; ++i) ds[i] = d[idx[i]];
  d = std::move(ds);
  if (z) {
    DenseMatrix zs(n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) zs.at(r, c) = z->at(r, idx[c]);
    *z = std::move(zs);
  }
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  const int n = a.size();
  DenseMatrix c(n);
  for (int i = 0; i < n; ++i) {
    double* ci = c.row(i);
    for (int k = 0; k < n; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  const int n = a.size();
  DenseMatrix c(n);
  for (int k = 0; k < n; ++k) {
    const double* ak = a.row(k);
    const double* bk = b.row(k);
    for (int i = 0; i < n; ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* ci = c.row(i);
      for (int j = 0; j < n; ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

SpectralDecomposition eigensolve(const DenseMatrix& a) {
  SpectralDecomposition sd;
  sd.eigenvectors = a;
  std::vector<double> e;
  tridiagonalize(sd.eigenvectors, sd.eigenvalues, e, /*accumulate=*/true);
  ql_implicit(sd.eigenvalues, e, &sd.eigenvectors);
  sort_pairs_ascending(sd.eigenvalues, &sd.eigenvectors);
  return sd;
}

std::vector<double> eigenvalues_only(DenseMatrix a) {
  std::vector<double> d, e;
  tridiagonalize(a, d, e, /*accumulate=*/false);
  ql_implicit(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> singular_values(DenseMatrix a) {
  const int n = a.size();
  constexpr int kMaxIter = 64;
  std::vector<double> w(n, 0.0), rv1(n, 0.0);
  double g = 0.0, scale = 0.0, anorm = 0.0;

  // Householder bidiagonalization (square input, values only).
  for (int i = 0; i < n; ++i) {
    const int l = i + 1;
    rv1[i] = scale * g;
    g = scale = 0.0;
    double s = 0.0;
    for (int k = i; k < n; ++k) scale += std::abs(a.at(k, i));
    if (scale != 0.0) {
      for (int k = i; k < n; ++k) {
        a.at(k, i) /= scale;
        s += a.at(k, i) * a.at(k, i);
      }
      double f = a.at(i, i);
      g = -sign_like(std::sqrt(s), f);
      const double h = f * g - s;
      a.at(i, i) = f - g;
      for (int j = l; j < n; ++j) {
        s = 0.0;
        for (int k = i; k < n; ++k) s += a.at(k, i) * a.at(k, j);
        f = s / h;
        for (int k = i; k < n; ++k) a.at(k, j) += f * a.at(k, i);
      }
      for (int k = i; k < n; ++k) a.at(k, i) *= scale;
    }
    w[i] = scale * g;
    g = scale = 0.0;
    s = 0.0;
    if (i != n - 1) {
      for (int k = l; k < n; ++k) scale += std::abs(a.at(i, k));
      if (scale != 0.0) {
        for (int k = l; k < n; ++k) {
          a.at(i, k) /= scale;
          s += a.at(i, k) * a.at(i, k);
        }
        double f = a.at(i, l);
        g = -sign_like(std::sqrt(s), f);
        const double h = f * g - s;
        a.at(i, l) = f - g;
        for (int k = l; k < n; ++k) rv1[k] = a.at(i, k) / h;
        for (int j = l; j < n; ++j) {
          s = 0.0;
          for (int k = l; k < n; ++k) s += a.at(j, k) * a.at(i, k);
          for (int k = l; k < n; ++k) a.at(j, k) += s * rv1[k];
        }
        for (int k = l; k < n; ++k) a.at(i, k) *= scale;
      }
    }
    anorm = std::max(anorm, std::abs(w[i]) + std::abs(rv1[i]));
  }

  // Golub-Kahan QR on the bidiagonal, values only.
  const double eps = std::numeric_limits<double>::epsilon();
  for (int k = n - 1; k >= 0; --k) {
    for (int its = 0;; ++its) {
      bool flag = true;
      int l, nm = 0;
      for (l = k; l >= 0; --l) {
        nm = l - 1;
        if (std::abs(rv1[l]) <= eps * anorm) {
          flag = false;
          break;
        }
        if (std::abs(w[nm]) <= eps * anorm) break;
      }
      if (flag) {
        double c = 0.0, s = 1.0;
        for (int i = l; i <= k; ++i) {
          double f = s * rv1[i];
          rv1[i] = c * rv1[i];
          if (std::abs(f) <= eps * anorm) break;
          g = w[i];
          double h = std::hypot(f, g);
          w[i] = h;
          h = 1.0 / h;
          c = g * h;
          s = -f * h;
        }
      }
      double z = w[k];
      if (l == k) {
        if (z < 0.0) w[k] = -z;
        break;
      }
      if (its == kMaxIter)
        throw Error(ErrorCode::no_convergence,
                    "SVD failed to deflate singular value " +
                        std::to_string(k) + " of " + std::to_string(n));
      double x = w[l];
      nm = k - 1;
      double y = w[nm];
      g = rv1[nm];
      double h = rv1[k];
      double f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
      g = std::hypot(f, 1.0);
      f = ((x - z) * (x + z) + h * (y / (f + sign_like(g, f)) - h)) / x;
      double c = 1.0, s = 1.0;
      for (int j = l; j <= nm; ++j) {
        const int i = j + 1;
        g = rv1[i];
        y = w[i];
        h = s * g;
        g = c * g;
        z = std::hypot(f, h);
        rv1[j] = z;
        c = f / z;
        s = h / z;
        f = x * c + g * s;
        g = g * c - x * s;
        h = y * s;
        y *= c;
        z = std::hypot(f, h);
        w[j] = z;
        if (z != 0.0) {
          z = 1.0 / z;
          c = f * z;
          s = h * z;
        }
        f = c * g + s * y;
        x = c * y - s * g;
      }
      rv1[l] = 0.0;
      rv1[k] = f;
      w[k] = x;
    }
  }
  std::sort(w.begin(), w.end(), std::greater<double>());
  return w;
}

DenseMatrix build_hamiltonian(const ChainSpec& chain, int max_sites) {
  validate(chain);
  if (chain.n_sites > max_sites)
    throw Error(ErrorCode::resource_limit,
                "oracle Hamiltonian capped at N = " + std::to_string(max_sites) +
                    ", requested " + std::to_string(chain.n_sites));
  const int n = chain.n_sites;
  const int dim = 1 << n;
  const double jx = 0.5 * (1.0 + chain.anisotropy);
  const double jy = 0.5 * (1.0 - chain.anisotropy);
  DenseMatrix h(dim);

  for (int s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i)
      diag -= chain.field * (1.0 - 2.0 * ((s >> i) & 1));
    h.at(s, s) += diag;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;  // the i<->i+1 bond appears twice when N = 2
      const int mask = (1 << i) | (1 << j);
      const int t = s ^ mask;
      const bool aligned = ((s >> i) & 1) == ((s >> j) & 1);
      // <t| sx sx |s> = 1, <t| sy sy |s> = -1 for aligned bits, +1 otherwise
      h.at(t, s) += -(jx + jy * (aligned ? -1.0 : 1.0));
    }
  }
  return h;
}

namespace {

std::vector<double> gibbs_weights(const std::vector<double>& eigenvalues,
                                  double beta) {
  const double e0 = eigenvalues.front();
  std::vector<double> w(eigenvalues.size());
  double z = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(-beta * (eigenvalues[i] - e0));
    z += w[i];
  }
  for (double& x : w) x /= z;
  return w;
}

}  // namespace

double fidelity_from_decompositions(const SpectralDecomposition& a,
                                    double beta_a,
                                    const SpectralDecomposition& b,
                                    double beta_b) {
  if (a.eigenvectors.size() != b.eigenvectors.size())
    throw Error(ErrorCode::dimension_mismatch,
                "oracle fidelity requires equal dimensions");
  const int dim = a.eigenvectors.size();
  const std::vector<double> wa = gibbs_weights(a.eigenvalues, beta_a);
  const std::vector<double> wb = gibbs_weights(b.eigenvalues, beta_b);

  // F = || sqrt(sigma) sqrt(rho) ||_1 = sum sv( D_b^{1/2} V_b^T V_a D_a^{1/2} ).
  // The diagonal scaling keeps the error of each tiny entry proportional to
  // its own magnitude, so the nuclear norm comes out to near machine
  // precision, unlike eigenvalues of the explicit sqrt(rho) sigma sqrt(rho).
  DenseMatrix g = matmul_tn(b.eigenvectors, a.eigenvectors);
  for (int i = 0; i < dim; ++i) {
    const double ri = std::sqrt(wb[i]);
    double* row = g.row(i);
    for (int j = 0; j < dim; ++j) row[j] *= ri * std::sqrt(wa[j]);
  }
  const std::vector<double> sv = singular_values(std::move(g));
  // Ascending accumulation keeps the many tiny values from being absorbed.
  double f = 0.0;
  for (auto it = sv.rbegin(); it != sv.rend(); ++it) f += *it;
  return f;
}

double gibbs_and_fidelity(const GibbsPoint& a, const GibbsPoint& b,
                          int max_sites) {
  validate(a);
  validate(b);
  if (a.chain.n_sites != b.chain.n_sites)
    throw Error(ErrorCode::dimension_mismatch,
                "oracle fidelity requires equal chain sizes");
  const SpectralDecomposition sa = eigensolve(build_hamiltonian(a.chain, max_sites));
  const SpectralDecomposition sb = eigensolve(build_hamiltonian(b.chain, max_sites));
  return fidelity_from_decompositions(sa, a.beta, sb, b.beta);
}

SectorObservables sector_observables(const GibbsPoint& point, int max_sites) {
  validate(point);
  const int n = point.chain.n_sites;
  const int dim = 1 << n;
  DenseMatrix h = build_hamiltonian(point.chain, max_sites);
  SpectralDecomposition sd = eigensolve(h);

  std::vector<double> parity_diag(dim);
  for (int s = 0; s < dim; ++s)
    parity_diag[s] = std::popcount(static_cast<unsigned>(s)) % 2 == 0 ? 1.0 : -1.0;

  std::vector<double>& lam = sd.eigenvalues;
  DenseMatrix& v = sd.eigenvectors;
  std::vector<int> parity(dim, 0);

  double scale = 0.0;
  for (double x : lam) scale = std::max(scale, std::abs(x));
  const double cluster_tol = std::max(1e-9 * scale, 1e-13);

  int start = 0;
  while (start < dim) {
    int end = start + 1;
    while (end < dim && lam[end] - lam[end - 1] <= cluster_tol) ++end;
    const int c = end - start;
    if (c == 1) {
      double pexp = 0.0;
      for (int s = 0; s < dim; ++s)
        pexp += parity_diag[s] * v.at(s, start) * v.at(s, start);
      if (std::abs(pexp) < 0.99)
        throw Error(ErrorCode::classification,
                    "ambiguous parity <P> = " + std::to_string(pexp) +
                        " for a non-degenerate eigenvector");
      parity[start] = pexp > 0.0 ? 1 : -1;
    } else {
      // Simultaneous diagonalization: split the degenerate block by P,
      // then re-diagonalize H within each parity subspace.
      DenseMatrix pc(c);
      for (int i = 0; i < c; ++i)
        for (int j = i; j < c; ++j) {
          double sum = 0.0;
          for (int s = 0; s < dim; ++s)
            sum += v.at(s, start + i) * parity_diag[s] * v.at(s, start + j);
          pc.at(i, j) = pc.at(j, i) = sum;
        }
      SpectralDecomposition pe = eigensolve(pc);
      for (double pv : pe.eigenvalues)
        if (std::abs(std::abs(pv) - 1.0) > 0.01)
          throw Error(ErrorCode::classification,
                      "degenerate block has parity eigenvalue " +
                          std::to_string(pv) + " away from +-1");
      // Rotate the block: B' = B * U.
      std::vector<std::vector<double>> rotated(
          c, std::vector<double>(dim, 0.0));
      for (int col = 0; col < c; ++col)
        for (int i = 0; i < c; ++i) {
          const double u = pe.eigenvectors.at(i, col);
          if (u == 0.0) continue;
          for (int s = 0; s < dim; ++s)
            rotated[col][s] += v.at(s, start + i) * u;
        }
      // Refine eigenvalues by Rayleigh quotients (the rotation is only
      // guaranteed to respect H within the cluster tolerance).
      std::vector<std::pair<double, int>> refined(c);
      std::vector<double> hv(dim);
      for (int col = 0; col < c; ++col) {
        std::fill(hv.begin(), hv.end(), 0.0);
        for (int s = 0; s < dim; ++s) {
          const double xs = rotated[col][s];
          if (xs == 0.0) continue;
          const double* hr = h.row(s);
          for (int t = 0; t < dim; ++t) hv[t] += hr[t] * xs;
        }
        double num = 0.0;
        for (int s = 0; s < dim; ++s) num += rotated[col][s] * hv[s];
        refined[col] = {num, pe.eigenvalues[col] > 0.0 ? 1 : -1};
      }
      std::stable_sort(refined.begin(), refined.end());
      for (int i = 0; i < c; ++i) {
        lam[start + i] = refined[i].first;
        parity[start + i] = refined[i].second;
      }
    }
    start = end;
  }

  SectorObservables out;
  const double beta = point.beta;
  bool seen_plus = false, seen_minus = false;
  int count_plus = 0;
  out.e1_plus = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < dim; ++i) {
    const double bw = std::exp(-beta * lam[i]);
    if (parity[i] > 0) {
      out.z_plus += bw;
      if (!seen_plus) {
        out.e0_plus = lam[i];
        seen_plus = true;
      } else if (++count_plus == 1) {
        out.e1_plus = lam[i];
      }
    } else {
      out.z_minus += bw;
      if (!seen_minus) {
        out.e0_minus = lam[i];
        seen_minus = true;
      }
    }
  }

  // Cv = beta^2 Var(H) from shifted Gibbs weights.
  const double e0 = lam.front();
  double z = 0.0, mean = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double w = std::exp(-beta * (lam[i] - e0));
    z += w;
    mean += w * lam[i];
  }
  mean /= z;
  double var = 0.0;
  for (int i = 0; i < dim; ++i)
    var += std::exp(-beta * (lam[i] - e0)) * (lam[i] - mean) * (lam[i] - mean);
  var /= z;
  out.cv = beta * beta * var;
  return out;
}

}  // namespace xyfid::oracle
