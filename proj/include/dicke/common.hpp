#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dicke {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest atom number the brute-force (2^N) paths accept by default.
inline constexpr int kDefaultOracleMax = 10;

// Error taxonomy. The CLI maps these onto exit codes:
// invalid input/configuration -> 2, convergence trouble -> 3.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct truncation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct no_coupling_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct convergence_error : std::runtime_error {
  double residual;
  convergence_error(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

struct instability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Trace norm (sum of singular values).
inline double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Re Tr[a b]; sizes must agree.
inline double real_trace_product(const Matrix& a, const Matrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

inline Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace dicke
