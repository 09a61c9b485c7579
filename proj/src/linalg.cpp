#include "basex/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "basex/errors.hpp"
#include "basex/simd.hpp"

namespace basex::linalg {

SymmetricMatrix::SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<double> values)
    : n_(n), a_(std::move(values)) {
  if (a_.size() != n * n) {
    throw InputError("matrix storage size does not match dimension");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double avg = 0.5 * (a_[i * n_ + j] + a_[j * n_ + i]);
      a_[i * n_ + j] = avg;
      a_[j * n_ + i] = avg;
    }
  }
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  SymmetricMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
  return m;
}

double SymmetricMatrix::max_diagonal() const {
  double mx = 0.0;
  for (std::size_t i = 0; i < n_; ++i) mx = std::max(mx, a_[i * n_ + i]);
  return mx;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
  return t;
}

double SymmetricMatrix::frobenius_norm() const {
  return std::sqrt(simd::dot(a_.data(), a_.data(), a_.size()));
}

double SymmetricMatrix::max_abs() const {
  double mx = 0.0;
  for (double v : a_) mx = std::max(mx, std::abs(v));
  return mx;
}

double default_psd_tolerance(const SymmetricMatrix& m) {
  return 1e-12 * std::max(m.max_diagonal(), 0.0);
}

Subset full_subset(std::size_t n) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return Subset(std::move(idx));
}

SymmetricMatrix principal_submatrix(const SymmetricMatrix& m, const Subset& s) {
  const std::size_t k = s.size();
  for (int v : s) {
    if (v < 0 || static_cast<std::size_t>(v) >= m.dim()) {
      throw InputError("submatrix index " + std::to_string(v) + " out of range");
    }
  }
  SymmetricMatrix out(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      out.at(i, j) = m(static_cast<std::size_t>(s[i]), static_cast<std::size_t>(s[j]));
    }
  }
  return out;
}

std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& m, double tol) {
  if (tol < 0.0) tol = default_psd_tolerance(m);
  const std::size_t n = m.dim();
  CholeskyFactor f;
  f.n = n;
  f.lower.assign(n * n, 0.0);
  f.logdet = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double* rowj = f.lower.data() + j * n;
    const double pivot = m(j, j) - simd::dot(rowj, rowj, j);
    if (pivot <= tol) return std::nullopt;
    const double ljj = std::sqrt(pivot);
    rowj[j] = ljj;
    f.logdet += 2.0 * std::log(ljj);
    for (std::size_t i = j + 1; i < n; ++i) {
      double* rowi = f.lower.data() + i * n;
      rowi[j] = (m(i, j) - simd::dot(rowi, rowj, j)) / ljj;
    }
  }
  return f;
}

double det_psd(const SymmetricMatrix& m, double tol) {
  const auto ld = logdet_psd(m, tol);
  return ld ? std::exp(*ld) : 0.0;
}

std::optional<double> logdet_psd(const SymmetricMatrix& m, double tol) {
  const auto f = cholesky(m, tol);
  if (!f) return std::nullopt;
  return f->logdet;
}

double schur_complement(const SymmetricMatrix& m, const CholeskyFactor& f,
                        const Subset& s, int j) {
  if (s.contains(j)) {
    throw InputError("extension index " + std::to_string(j) + " already in subset");
  }
  if (j < 0 || static_cast<std::size_t>(j) >= m.dim()) {
    throw InputError("extension index " + std::to_string(j) + " out of range");
  }
  const std::size_t k = s.size();
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) {  // forward substitution F v = M_{S,j}
    const double* rowi = f.lower.data() + i * f.n;
    v[i] = (m(static_cast<std::size_t>(s[i]), static_cast<std::size_t>(j)) -
            simd::dot(rowi, v.data(), i)) /
           rowi[i];
  }
  return m(static_cast<std::size_t>(j), static_cast<std::size_t>(j)) -
         simd::dot(v.data(), v.data(), k);
}

double extend_det(const SymmetricMatrix& m, const CholeskyFactor& f,
                  const Subset& s, int j, double tol) {
  if (tol < 0.0) tol = default_psd_tolerance(m);
  const double schur = schur_complement(m, f, s, j);
  if (schur <= tol) return 0.0;
  return std::exp(f.logdet) * schur;
}

EigenDecomposition symmetric_eigen(const SymmetricMatrix& m, bool compute_vectors,
                                   int max_sweeps) {
  const std::size_t n = m.dim();
  EigenDecomposition out;
  out.n = n;
  if (n == 0) return out;

  std::vector<double> a = m.data();
  std::vector<double> vt;  // row i = candidate eigenvector i
  if (compute_vectors) {
    vt.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;
  }

  const double norm = m.frobenius_norm();
  const double target = 1e-12 * norm;

  auto off_norm = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) acc += a[i * n + j] * a[i * n + j];
      }
    }
    return std::sqrt(acc);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (++sweep > max_sweeps) {
      throw NumericalError("Jacobi eigensolver did not converge in " +
                           std::to_string(max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Left rotation on rows p,q; the 2x2 block is rewritten in closed
        // form, then rows are mirrored into columns to restore symmetry.
        simd::rotate(a.data() + q * n, a.data() + p * n, c, s, n);
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          a[i * n + p] = a[p * n + i];
          a[i * n + q] = a[q * n + i];
        }
        if (compute_vectors) {
          simd::rotate(vt.data() + q * n, vt.data() + p * n, c, s, n);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] < a[y * n + y];
  });

  out.eigenvalues.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.eigenvalues[j] = a[order[j] * n + order[j]];
  if (compute_vectors) {
    out.eigenvectors.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        out.eigenvectors[i * n + j] = vt[order[j] * n + i];
      }
    }
  }
  return out;
}

}  // namespace basex::linalg
