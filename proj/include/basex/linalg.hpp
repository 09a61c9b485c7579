#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "basex/subset.hpp"

namespace basex::linalg {

// Dense symmetric matrix, row-major. Entries are symmetrized on
// construction by averaging so entries(i,j) == entries(j,i) exactly.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n);
  // values: row-major n*n entries.
  SymmetricMatrix(std::size_t n, std::vector<double> values);

  static SymmetricMatrix diagonal(const std::vector<double>& d);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const double* row(std::size_t i) const { return a_.data() + i * n_; }
  const std::vector<double>& data() const { return a_; }

  double max_diagonal() const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// Lower-triangular Cholesky factor F with F F^T = M and
// logdet = 2 * sum(log diag(F)) = log det(M).
struct CholeskyFactor {
  std::size_t n = 0;
  std::vector<double> lower;  // row-major n x n, upper part zero
  double logdet = 0.0;

  double operator()(std::size_t i, std::size_t j) const { return lower[i * n + j]; }
};

struct EigenDecomposition {
  std::size_t n = 0;
  std::vector<double> eigenvalues;   // ascending
  std::vector<double> eigenvectors;  // row-major; column j = eigenvector j

  double vec(std::size_t i, std::size_t j) const { return eigenvectors[i * n + j]; }
};

// Pivot threshold used to call a submatrix "mass zero": anything at or
// below 1e-12 * (max diagonal of the full matrix).
double default_psd_tolerance(const SymmetricMatrix& m);

Subset full_subset(std::size_t n);

// Rows/columns of M indexed by S, in sorted order. S may be empty.
SymmetricMatrix principal_submatrix(const SymmetricMatrix& m, const Subset& s);

// nullopt signals a pivot <= tol (not positive definite beyond tol);
// callers treat that as determinant <= 0, i.e. mass zero.
// tol < 0 selects default_psd_tolerance(m).
std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& m, double tol = -1.0);

// det(M) for symmetric M, with NotPD mapped to 0. The 0x0 matrix has
// determinant 1.
double det_psd(const SymmetricMatrix& m, double tol = -1.0);
// log det(M); nullopt when the determinant is treated as zero.
std::optional<double> logdet_psd(const SymmetricMatrix& m, double tol = -1.0);

// det(M_{S+j}) from the factor F of M_S: det(M_S) * (M_jj - v^T v) with
// F v = M_{S,j}. Returns 0 when the Schur complement is at or below tol.
double extend_det(const SymmetricMatrix& m, const CholeskyFactor& f,
                  const Subset& s, int j, double tol = -1.0);
// The Schur complement M_jj - v^T v itself (the extend_det ratio); used by
// the greedy initializer, which compares extensions of a common prefix.
double schur_complement(const SymmetricMatrix& m, const CholeskyFactor& f,
                        const Subset& s, int j);

// Cyclic Jacobi. Sweeps until the off-diagonal Frobenius mass is at most
// 1e-12 * ||M||_F, up to max_sweeps (NumericalError past that).
EigenDecomposition symmetric_eigen(const SymmetricMatrix& m,
                                   bool compute_vectors = true,
                                   int max_sweeps = 100);

}  // namespace basex::linalg
