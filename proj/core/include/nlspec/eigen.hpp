#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nlspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Ascending eigenvalues with orthonormal (or B-orthonormal) eigenvector columns.
struct Spectrum {
  Vector values;
  Matrix vectors;
  double max_residual = 0;   // max ‖Mv − μBv‖ / ‖M‖
  double orthogonality = 0;  // max |VᵀBV − I|
  double shift = 0;          // shift used by the sparse solver

  int size() const { return static_cast<int>(values.size()); }
  double gap() const { return values.size() > 1 ? values[1] - values[0] : 0.0; }
};

double max_abs(const Matrix& m);
double symmetry_defect(const Matrix& m);        // max|M − Mᵀ| / max|M|
double symmetry_defect(const SparseMatrix& m);  // same, sparse

// Every eigenpair of a dense symmetric matrix (divide and conquer).
Spectrum full_spectrum(const Matrix& m, bool vectors = true, double sym_tol = 1e-12);
// The k smallest eigenpairs of a dense symmetric matrix.
Spectrum lowest_dense(const Matrix& m, int k);
// A x = μ B x with B symmetric positive definite, dense.
Spectrum generalized_dense(const Matrix& a, const Matrix& b);

struct SparseEigenOptions {
  int nev = 4;
  double tol = 1e-14;
  double shift = -1e-3;  // first trial; doubled away until A − σB is positive definite
  int max_iterations = 5000;
  int ncv = 0;           // 0: automatic
};

// Smallest eigenpairs by shift-invert Lanczos below the spectrum.
Spectrum lowest_eigenpairs(const SparseMatrix& a, const SparseEigenOptions& opt = {});
Spectrum lowest_generalized(const SparseMatrix& a, const SparseMatrix& b, const SparseEigenOptions& opt = {});

struct InverseIteration {
  double value = 0;
  Vector vector;
  int iterations = 0;
};

InverseIteration inverse_iteration(const SparseMatrix& a, double shift, const Vector& start, double tol = 1e-13,
                                   int max_iterations = 500);
InverseIteration inverse_iteration(const Matrix& a, double shift, const Vector& start, double tol = 1e-13,
                                   int max_iterations = 500);

// Flip the sign so the entries sum to a nonnegative number.
void orient_positive(Eigen::Ref<Vector> v);

}  // namespace nlspec
