#include "dihedral/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dihedral {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_start.assign(rows + 1, 0);
  for (size_t k = 0; k < entries.size();) {
    const Entry& e = entries[k];
    double sum = 0.0;
    size_t l = k;
    for (; l < entries.size() && entries[l].row == e.row && entries[l].col == e.col; ++l)
      sum += entries[l].value;
    m.col.push_back(e.col);
    m.val.push_back(sum);
    ++m.row_start[e.row + 1];
    k = l;
  }
  for (int r = 0; r < rows; ++r) m.row_start[r + 1] += m.row_start[r];
  return m;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = row_start[r]; k < row_start[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

double CsrMatrix::at(int r, int c) const {
  const auto first = col.begin() + row_start[r], last = col.begin() + row_start[r + 1];
  const auto it = std::lower_bound(first, last, c);
  return (it != last && *it == c) ? val[it - col.begin()] : 0.0;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows);
  for (int r = 0; r < rows; ++r) d[r] = at(r, r);
  return d;
}

CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                            double tol, int max_iterations) {
  const size_t n = b.size();
  CgResult out;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return out;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  const std::vector<double> diag = a.diagonal();
  a.multiply(x, q);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  double rel = std::sqrt(dot(r, r)) / bnorm;

  while (rel > tol) {
    if (out.iterations >= max_iterations) {
      std::ostringstream msg;
      msg << "conjugate_gradient: no convergence after " << max_iterations
          << " iterations (relative residual " << rel << ")";
      throw SolverError(msg.str(), std::move(out.history));
    }
    a.multiply(p, q);
    const double alpha = rz / dot(p, q);
    for (size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    ++out.iterations;
    rel = std::sqrt(dot(r, r)) / bnorm;
    out.history.push_back(rel);
  }
  out.relative_residual = rel;
  return out;
}

}  // namespace dihedral
