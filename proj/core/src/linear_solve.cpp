#include "metastab/linear_solve.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "metastab/error.hpp"

namespace metastab {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

CgResult pcg(const MatVec& A, std::span<const double> diag, std::span<const double> b,
             std::span<double> x, double tol, int max_iter,
             const std::function<double(std::span<const double>)>& residual_norm,
             int check_every) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  auto true_residual = [&]() {
    A(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  };
  auto precond = [&]() {
    for (std::size_t i = 0; i < n; ++i) z[i] = diag[i] > 0.0 ? r[i] / diag[i] : 0.0;
  };

  CgResult res;
  true_residual();
  res.residual = residual_norm(r);
  if (res.residual <= tol) {
    res.converged = true;
    return res;
  }
  precond();
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    A(p, q);
    double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    res.iterations = it;
    if (it % check_every == 0) {
      // replace the recurrence residual by the true one to stop drift
      true_residual();
      res.residual = residual_norm(r);
      if (res.residual <= tol) {
        res.converged = true;
        return res;
      }
    }
    precond();
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  true_residual();
  res.residual = residual_norm(r);
  res.converged = res.residual <= tol;
  return res;
}

std::vector<double> dense_lu_solve(const std::vector<double>& a, int n, std::span<const double> b) {
  require(static_cast<int>(a.size()) == n * n && static_cast<int>(b.size()) == n, "dense_lu_solve: bad shapes");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(a.data(), n, n);
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  Eigen::VectorXd sol = M.partialPivLu().solve(rhs);
  return std::vector<double>(sol.data(), sol.data() + n);
}

}  // namespace metastab
