#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dihedral {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}

  /// Relative residual after each iteration.
  std::vector<double> residual_history;
};

/// Compressed sparse row matrix with sorted column indices.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_start;
  std::vector<int> col;
  std::vector<double> val;

  struct Entry {
    int row;
    int col;
    double value;
  };
  /// Duplicate (row, col) pairs are summed in the order given.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Entry> entries);

  void multiply(std::span<const double> x, std::span<double> y) const;
  double at(int r, int c) const;
  std::vector<double> diagonal() const;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> history;
};

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// definite matrix, starting from the supplied x. Stops when
/// ||b - Ax|| <= tol ||b||. Throws SolverError after max_iterations.
CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                            double tol, int max_iterations);

}  // namespace dihedral
