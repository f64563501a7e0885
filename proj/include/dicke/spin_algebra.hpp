#pragma once

// Collective spin algebra for N two-level atoms: the irreducible (Dicke)
// decomposition of the 2^N product space, spin-block operators, symmetric
// states and J^2 subspace projectors.

#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dicke/common.hpp"

namespace dicke {

using BigInt = boost::multiprecision::cpp_int;

/// Spin quantum number stored as 2j so half-integers stay exact.
struct SpinQuantumNumber {
  int twice_j = 0;

  static constexpr SpinQuantumNumber from_twice(int twice) { return {twice}; }
  constexpr int dimension() const { return twice_j + 1; }
  constexpr double value() const { return 0.5 * twice_j; }
  /// j(j+1), the J^2 eigenvalue.
  constexpr double casimir() const { return 0.25 * twice_j * (twice_j + 2); }

  friend auto operator<=>(SpinQuantumNumber, SpinQuantumNumber) = default;
};

inline std::string to_string(SpinQuantumNumber j) {
  if (j.twice_j % 2 == 0) return std::to_string(j.twice_j / 2);
  return std::to_string(j.twice_j) + "/2";
}

struct DickeSector {
  SpinQuantumNumber j;
  BigInt multiplicity;
};

struct DickeDecomposition {
  int n_atoms = 0;
  std::vector<DickeSector> sectors;  // descending in j

  BigInt total_dimension() const {
    BigInt sum = 0;
    for (const auto& s : sectors) sum += BigInt(s.j.dimension()) * s.multiplicity;
    return sum;
  }
};

/// Irreducible decomposition of N spin-1/2 particles. The multiplicity of
/// spin j is C(N, N/2-j) - C(N, N/2-j-1).
inline DickeDecomposition decompose(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("decompose: n_atoms must be positive");
  if (n_atoms > 1000000) throw std::invalid_argument("decompose: n_atoms above 10^6");

  DickeDecomposition out;
  out.n_atoms = n_atoms;
  // k = N/2 - j runs 0..floor(N/2); binomials built iteratively.
  BigInt binom = 1;       // C(N, k)
  BigInt binom_prev = 0;  // C(N, k-1)
  for (int k = 0; 2 * k <= n_atoms; ++k) {
    if (k > 0) {
      binom_prev = binom;
      binom = binom * (n_atoms - k + 1) / k;
    }
    out.sectors.push_back({SpinQuantumNumber{n_atoms - 2 * k}, binom - binom_prev});
  }
  return out;
}

/// True when j occurs in decompose(n_atoms).
inline bool sector_exists(int n_atoms, SpinQuantumNumber j) {
  return j.twice_j >= 0 && j.twice_j <= n_atoms && (n_atoms - j.twice_j) % 2 == 0;
}

/// S_- on the spin-j block in the excitation basis p = 0..2j (ground first):
/// <p|S_-|p+1> = sqrt((p+1)(2j-p)).
inline Matrix lowering_operator(SpinQuantumNumber j) {
  const int d = j.dimension();
  Matrix m = Matrix::Zero(d, d);
  for (int p = 0; p + 1 < d; ++p)
    m(p, p + 1) = std::sqrt(double(p + 1) * double(j.twice_j - p));
  return m;
}

inline Matrix raising_operator(SpinQuantumNumber j) {
  return lowering_operator(j).adjoint();
}

/// S_z on the spin-j block: diag(p - j), ground level eigenvalue -j.
inline Matrix z_operator(SpinQuantumNumber j) {
  const int d = j.dimension();
  Matrix m = Matrix::Zero(d, d);
  for (int p = 0; p < d; ++p) m(p, p) = p - 0.5 * j.twice_j;
  return m;
}

enum class Axis { x, y, z, plus, minus };

namespace detail {

inline void check_oracle_size(int n_atoms, int oracle_max, const char* who) {
  if (n_atoms < 1) throw std::invalid_argument(std::string(who) + ": n_atoms must be positive");
  if (n_atoms > oracle_max)
    throw resource_limit_error(std::string(who) + ": n_atoms " + std::to_string(n_atoms) +
                               " exceeds oracle_max " + std::to_string(oracle_max));
}

/// J_- = sum_k sigma_-^k on the 2^N space; atom 1 is the most significant
/// qubit, bit value 1 marks an excited atom.
inline Matrix collective_minus(int n_atoms) {
  const std::int64_t dim = std::int64_t(1) << n_atoms;
  Matrix m = Matrix::Zero(dim, dim);
  for (int k = 0; k < n_atoms; ++k) {
    const std::int64_t mask = std::int64_t(1) << (n_atoms - 1 - k);
    for (std::int64_t b = 0; b < dim; ++b)
      if (b & mask) m(b & ~mask, b) += 1.0;
  }
  return m;
}

}  // namespace detail

inline Matrix collective_operator(int n_atoms, Axis which, int oracle_max = kDefaultOracleMax) {
  detail::check_oracle_size(n_atoms, oracle_max, "collective_operator");
  const std::int64_t dim = std::int64_t(1) << n_atoms;
  switch (which) {
    case Axis::minus:
      return detail::collective_minus(n_atoms);
    case Axis::plus:
      return detail::collective_minus(n_atoms).adjoint();
    case Axis::z: {
      Matrix m = Matrix::Zero(dim, dim);
      for (std::int64_t b = 0; b < dim; ++b)
        m(b, b) = std::popcount(std::uint64_t(b)) - 0.5 * n_atoms;
      return m;
    }
    case Axis::x: {
      const Matrix jm = detail::collective_minus(n_atoms);
      return 0.5 * (Matrix(jm.adjoint()) + jm);
    }
    case Axis::y: {
      const Matrix jm = detail::collective_minus(n_atoms);
      return Complex(0, -0.5) * (Matrix(jm.adjoint()) - jm);
    }
  }
  throw std::invalid_argument("collective_operator: unknown axis");
}

/// J^2 = (J+J- + J-J+)/2 + Jz^2.
inline Matrix total_spin_squared(int n_atoms, int oracle_max = kDefaultOracleMax) {
  const Matrix jm = collective_operator(n_atoms, Axis::minus, oracle_max);
  const Matrix jp = jm.adjoint();
  const Matrix jz = collective_operator(n_atoms, Axis::z, oracle_max);
  return 0.5 * (jp * jm + jm * jp) + jz * jz;
}

/// Normalized equal-weight superposition of all basis states with exactly
/// `excitations` atoms excited.
inline Vector symmetric_state(int n_atoms, int excitations, int oracle_max = kDefaultOracleMax) {
  detail::check_oracle_size(n_atoms, oracle_max, "symmetric_state");
  if (excitations < 0 || excitations > n_atoms)
    throw std::invalid_argument("symmetric_state: excitations out of [0, N]");
  const std::int64_t dim = std::int64_t(1) << n_atoms;
  Vector v = Vector::Zero(dim);
  std::int64_t count = 0;
  for (std::int64_t b = 0; b < dim; ++b)
    if (std::popcount(std::uint64_t(b)) == excitations) {
      v(b) = 1.0;
      ++count;
    }
  v /= std::sqrt(double(count));
  return v;
}

/// Spectral projector of J^2 at eigenvalue j(j+1), summed over all
/// multiplicity copies of j. Built as the Lagrange polynomial in J^2.
inline Matrix sector_projector(int n_atoms, SpinQuantumNumber j, int oracle_max = kDefaultOracleMax) {
  if (!sector_exists(n_atoms, j))
    throw std::invalid_argument("sector_projector: j=" + to_string(j) + " not in decompose(" +
                                std::to_string(n_atoms) + ")");
  const Matrix j2 = total_spin_squared(n_atoms, oracle_max);
  const auto dec = decompose(n_atoms);
  const std::int64_t dim = j2.rows();
  Matrix proj = Matrix::Identity(dim, dim);
  for (const auto& s : dec.sectors) {
    if (s.j == j) continue;
    proj = proj * (j2 - s.j.casimir() * Matrix::Identity(dim, dim)) / (j.casimir() - s.j.casimir());
  }
  return proj;
}

/// Tr[P_j rho] for every sector j of decompose(N).
inline std::map<SpinQuantumNumber, double> subspace_weights(const Matrix& rho, int n_atoms,
                                                            int oracle_max = kDefaultOracleMax) {
  detail::check_oracle_size(n_atoms, oracle_max, "subspace_weights");
  const std::int64_t dim = std::int64_t(1) << n_atoms;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("subspace_weights: density matrix dimension is not 2^N");
  if (!is_hermitian(rho, 1e-10))
    throw std::invalid_argument("subspace_weights: density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument("subspace_weights: density matrix trace is not 1");

  std::map<SpinQuantumNumber, double> weights;
  for (const auto& s : decompose(n_atoms).sectors) {
    const double w = real_trace_product(sector_projector(n_atoms, s.j, oracle_max), rho);
    weights[s.j] = std::max(w, 0.0);  // clip rounding noise on empty sectors
  }
  return weights;
}

}  // namespace dicke
