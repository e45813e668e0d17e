#pragma once

#include <functional>
#include <span>
#include <vector>

namespace metastab {

using MatVec = std::function<void(std::span<const double> x, std::span<double> y)>;

struct CgResult {
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // as measured by the caller-supplied norm
};

// Jacobi-preconditioned conjugate gradient for a symmetric positive definite operator.
// `residual_norm` maps a residual vector of A x = b to the scalar compared against tol;
// it is evaluated every `check_every` iterations and at the end.
CgResult pcg(const MatVec& A, std::span<const double> diag, std::span<const double> b,
             std::span<double> x, double tol, int max_iter,
             const std::function<double(std::span<const double>)>& residual_norm,
             int check_every = 25);

// Dense LU with partial pivoting (row-major n x n matrix).
std::vector<double> dense_lu_solve(const std::vector<double>& a, int n, std::span<const double> b);

}  // namespace metastab
