#pragma once

// Brute-force verification path: assembles the Lindblad generator
// (collective, single-block, cross-rate or dephased), integrates the master
// equation to its steady state and evaluates the current functional
// directly on the state.
//
// Dissipator convention (the 1/2 of the sub-Liouvillians is folded into the
// channel rate):  rhs = sum_ch rate (2 A rho A+ - A+A rho - rho A+A).

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "dicke/engine.hpp"

namespace dicke {

inline void validate_density_matrix(const Matrix& rho, double hermitian_tol = 1e-10,
                                    double trace_tol = 1e-10, double eigen_floor = -1e-9) {
  if (rho.rows() != rho.cols() || rho.rows() < 1)
    throw std::invalid_argument("density matrix must be square");
  if (!is_hermitian(rho, hermitian_tol))
    throw std::invalid_argument("density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
    throw std::invalid_argument("density matrix trace is not 1");
  if (min_eigenvalue(rho) < eigen_floor)
    throw std::invalid_argument("density matrix has a negative eigenvalue");
}

struct LindbladChannel {
  enum class Kind { emission, absorption, dephasing, cross_emission, cross_absorption };

  Kind kind = Kind::emission;
  BathLabel bath = BathLabel::cold;
  int q = 0;
  double omega = 0.0;  // photon energy carried by this channel
  double rate = 0.0;
  Matrix jump;
  Matrix jump_dag;
  Matrix normal;  // jump+ jump

  bool is_bath_channel() const {
    return kind == Kind::emission || kind == Kind::absorption;
  }
};

inline LindbladChannel make_channel(LindbladChannel::Kind kind, Matrix jump, double rate,
                                    BathLabel bath = BathLabel::cold, int q = 0,
                                    double omega = 0.0) {
  if (rate < 0) throw std::invalid_argument("LindbladChannel: rate must be >= 0");
  LindbladChannel ch;
  ch.kind = kind;
  ch.bath = bath;
  ch.q = q;
  ch.omega = omega;
  ch.rate = rate;
  ch.jump = std::move(jump);
  ch.jump_dag = ch.jump.adjoint();
  ch.normal = ch.jump_dag * ch.jump;
  return ch;
}

// --- generator representations -------------------------------------------

struct FullCollective {
  int n_atoms = 1;
  int oracle_max = kDefaultOracleMax;
};

struct SingleBlock {
  SpinQuantumNumber j{1};
};

/// Cross-decay coefficient matrix c_ij (Hermitian, positive semidefinite).
/// The generator is the double sum over sigma_-^i rho sigma_+^j plus the
/// absorption part with one global factor e^{-x_eff}, taken as printed
/// (not per-sideband).
struct CrossRate {
  Matrix coefficients;
  int oracle_max = kDefaultOracleMax;
};

using BareRepresentation = std::variant<FullCollective, SingleBlock, CrossRate>;

struct WithDephasing {
  BareRepresentation base;
  double gamma_d = 0.0;
};

using Representation = std::variant<FullCollective, SingleBlock, CrossRate, WithDephasing>;

namespace detail {

inline Matrix site_sigma(int n_atoms, int site, const Matrix& op2) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n_atoms; ++k)
    out = kronecker(out, k == site ? op2 : Matrix(Matrix::Identity(2, 2)));
  return out;
}

inline Matrix sigma_minus_2() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

inline Matrix sigma_z_2() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

inline void append_bath_channels(std::vector<LindbladChannel>& out, const Matrix& lower,
                                 const Matrix& raise, const SidebandRates& rates) {
  for (const auto& c : rates.channels) {
    out.push_back(make_channel(LindbladChannel::Kind::emission, lower, c.emission, c.bath, c.q,
                               c.omega));
    if (c.absorption > 0)
      out.push_back(make_channel(LindbladChannel::Kind::absorption, raise, c.absorption, c.bath,
                                 c.q, c.omega));
  }
}

inline std::vector<LindbladChannel> bare_channels(const BareRepresentation& rep,
                                                  const SidebandRates& rates, double x_eff) {
  std::vector<LindbladChannel> out;
  if (const auto* full = std::get_if<FullCollective>(&rep)) {
    check_oracle_size(full->n_atoms, full->oracle_max, "build_machine_channels");
    const Matrix lower = collective_operator(full->n_atoms, Axis::minus, full->oracle_max);
    append_bath_channels(out, lower, lower.adjoint(), rates);
  } else if (const auto* block = std::get_if<SingleBlock>(&rep)) {
    const Matrix lower = lowering_operator(block->j);
    append_bath_channels(out, lower, lower.adjoint(), rates);
  } else {
    const auto& cross = std::get<CrossRate>(rep);
    const Matrix& c = cross.coefficients;
    const int n = int(c.rows());
    if (c.rows() != c.cols() || n < 1)
      throw config_error("build_machine_channels: cross-rate matrix must be square");
    check_oracle_size(n, cross.oracle_max, "build_machine_channels(cross)");
    if (!is_hermitian(c, 1e-12))
      throw std::invalid_argument("build_machine_channels: cross-rate matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw std::invalid_argument("build_machine_channels: cross-rate matrix not PSD");
    const double absorption_factor = std::exp(-x_eff);
    const Matrix sm = sigma_minus_2();
    const double eigen_floor = 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff();
    for (int k = 0; k < n; ++k) {
      const double lambda = es.eigenvalues()(k);
      if (lambda <= eigen_floor) continue;
      Matrix jump = Matrix::Zero(std::int64_t(1) << n, std::int64_t(1) << n);
      for (int i = 0; i < n; ++i) jump += es.eigenvectors()(i, k) * site_sigma(n, i, sm);
      out.push_back(make_channel(LindbladChannel::Kind::cross_emission, jump, lambda,
                                 BathLabel::cold, 0, rates.omega0));
      out.push_back(make_channel(LindbladChannel::Kind::cross_absorption, jump.adjoint(),
                                 lambda * absorption_factor, BathLabel::cold, 0, rates.omega0));
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<LindbladChannel> build_machine_channels(const Representation& rep,
                                                           const SidebandRates& rates,
                                                           double x_eff = 0.0) {
  if (const auto* deph = std::get_if<WithDephasing>(&rep)) {
    auto out = detail::bare_channels(deph->base, rates, x_eff);
    if (deph->gamma_d < 0)
      throw std::invalid_argument("build_machine_channels: gamma_d must be >= 0");
    if (deph->gamma_d > 0) {
      if (std::holds_alternative<SingleBlock>(deph->base))
        throw config_error("build_machine_channels: dephasing needs the full 2^N space");
      int n_atoms = 0;
      if (const auto* full = std::get_if<FullCollective>(&deph->base)) n_atoms = full->n_atoms;
      else {
        const auto& c = std::get<CrossRate>(deph->base).coefficients;
        n_atoms = int(c.rows());
      }
      const Matrix sz = detail::sigma_z_2();
      for (int k = 0; k < n_atoms; ++k)
        out.push_back(make_channel(LindbladChannel::Kind::dephasing,
                                   detail::site_sigma(n_atoms, k, sz), deph->gamma_d));
    }
    return out;
  }
  if (const auto* full = std::get_if<FullCollective>(&rep))
    return detail::bare_channels(*full, rates, x_eff);
  if (const auto* block = std::get_if<SingleBlock>(&rep))
    return detail::bare_channels(*block, rates, x_eff);
  return detail::bare_channels(std::get<CrossRate>(rep), rates, x_eff);
}

/// rhs of the master equation, sum_ch rate (2 A rho A+ - A+A rho - rho A+A).
inline Matrix lindblad_rhs(const Matrix& rho, const std::vector<LindbladChannel>& channels) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& ch : channels) {
    if (ch.jump.rows() != rho.rows())
      throw config_error("lindblad_rhs: channel dimension mismatch");
    out.noalias() += ch.rate * (2.0 * (ch.jump * rho * ch.jump_dag) - ch.normal * rho - rho * ch.normal);
  }
  return out;
}

enum class SteadyStateMethod { time_integration, nullspace };

inline const char* to_string(SteadyStateMethod m) {
  return m == SteadyStateMethod::time_integration ? "time_integration" : "nullspace";
}

struct SteadyStateOptions {
  SteadyStateMethod method = SteadyStateMethod::time_integration;
  double dt = 0.0;  // 0 = auto, 0.05 over the total rate scale
  double tolerance = 1e-10;
  long max_steps = 2000000;
  int check_interval = 25;
  double positivity_floor = -1e-8;
};

struct OracleResult {
  Matrix steady_state;
  long steps = 0;
  double final_residual = 0.0;
  SteadyStateMethod method = SteadyStateMethod::time_integration;
  int nullspace_degeneracy = 0;
  std::optional<EnergyCurrents> currents;
};

namespace detail {

inline double total_rate_scale(const std::vector<LindbladChannel>& channels) {
  double scale = 0.0;
  for (const auto& ch : channels) {
    const double op_norm = ch.normal.cwiseAbs().rowwise().sum().maxCoeff();
    scale += ch.rate * std::max(op_norm, 1.0);
  }
  return scale;
}

inline Matrix rk4_step(const Matrix& rho, const std::vector<LindbladChannel>& channels, double dt) {
  const Matrix k1 = lindblad_rhs(rho, channels);
  const Matrix k2 = lindblad_rhs(rho + 0.5 * dt * k1, channels);
  const Matrix k3 = lindblad_rhs(rho + 0.5 * dt * k2, channels);
  const Matrix k4 = lindblad_rhs(rho + dt * k3, channels);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline OracleResult integrate_to_steady_state(const Matrix& rho0,
                                              const std::vector<LindbladChannel>& channels,
                                              const SteadyStateOptions& opts) {
  const double rate_scale = total_rate_scale(channels);
  if (rate_scale <= 0) throw no_coupling_error("steady_state: all channel rates vanish");
  double dt = opts.dt > 0 ? opts.dt : 0.05 / rate_scale;
  if (dt * rate_scale >= 0.1)
    throw std::invalid_argument("steady_state: dt too large for the channel rates");

  OracleResult out;
  out.method = SteadyStateMethod::time_integration;
  bool halved = false;
  Matrix rho = rho0;
  for (long step = 1; step <= opts.max_steps; ++step) {
    rho = rk4_step(rho, channels, dt);
    if (step % opts.check_interval == 0 || step == opts.max_steps) {
      out.final_residual = trace_norm(lindblad_rhs(rho, channels));
      out.steps = step;
      if (out.final_residual < opts.tolerance) {
        out.steady_state = 0.5 * (rho + rho.adjoint().eval());
        return out;
      }
      if (min_eigenvalue(rho) < opts.positivity_floor) {
        if (halved)
          throw instability_error("steady_state: positivity lost twice; reduce dt");
        halved = true;
        dt *= 0.5;
        rho = rho0;
      }
    }
  }
  throw convergence_error("steady_state: no convergence after " +
                              std::to_string(opts.max_steps) + " steps",
                          out.final_residual);
}

/// Vectorized generator, column-stacking convention:
/// vec(A rho B) = (B^T (x) A) vec(rho).
inline Matrix build_superoperator(const std::vector<LindbladChannel>& channels, Eigen::Index dim) {
  Matrix sop = Matrix::Zero(dim * dim, dim * dim);
  const Matrix id = Matrix::Identity(dim, dim);
  for (const auto& ch : channels) {
    sop += ch.rate * (2.0 * kronecker(ch.jump.conjugate(), ch.jump) -
                      kronecker(id, ch.normal) - kronecker(ch.normal.transpose(), id));
  }
  return sop;
}

}  // namespace detail

/// Steady state of the channel set. Time integration (fixed-step RK4 until
/// the trace norm of the rhs drops below tolerance) is authoritative;
/// the nullspace route solves the vectorized generator and falls back to
/// time integration when the kernel is degenerate (conserved block
/// weights), reporting the kernel dimension.
inline OracleResult steady_state(const Matrix& rho0, const std::vector<LindbladChannel>& channels,
                                 const SteadyStateOptions& opts = {}) {
  validate_density_matrix(rho0);
  if (channels.empty()) throw no_coupling_error("steady_state: no channels");
  if (channels.front().jump.rows() != rho0.rows())
    throw config_error("steady_state: channel dimension mismatch");

  if (opts.method == SteadyStateMethod::time_integration)
    return detail::integrate_to_steady_state(rho0, channels, opts);

  const Eigen::Index dim = rho0.rows();
  if (dim * dim > 4096)
    throw resource_limit_error("steady_state: nullspace method limited to dim^2 <= 4096");
  const Matrix sop = detail::build_superoperator(channels, dim);
  Eigen::FullPivLU<Matrix> lu(sop);
  lu.setThreshold(1e-9);
  const Matrix kernel = lu.kernel();
  OracleResult out;
  out.method = SteadyStateMethod::nullspace;
  out.nullspace_degeneracy = int(kernel.cols());
  if (out.nullspace_degeneracy == 1) {
    Matrix rho = Eigen::Map<const Matrix>(kernel.col(0).data(), dim, dim);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-12)
      throw convergence_error("steady_state: nullspace vector has vanishing trace", 0.0);
    rho /= tr;
    if (min_eigenvalue(rho) < -1e-8) rho = -rho;  // sign of the kernel vector is arbitrary
    out.steady_state = rho;
    out.final_residual = trace_norm(lindblad_rhs(rho, channels));
    return out;
  }
  // Degenerate kernel: the steady state depends on rho0; integrate.
  auto integrated = detail::integrate_to_steady_state(rho0, channels, opts);
  out.steady_state = std::move(integrated.steady_state);
  out.steps = integrated.steps;
  out.final_residual = integrated.final_residual;
  return out;
}

/// Heat currents straight from the state: for every bath channel,
/// J_i += omega_q * rate * Tr[D[A] rho J_z], applying each sub-Liouvillian
/// separately. Dephasing and cross channels carry no photon bookkeeping.
inline EnergyCurrents currents_from_state(const Matrix& rho_ss,
                                          const std::vector<LindbladChannel>& channels,
                                          const Matrix& z_op) {
  double j_cold = 0.0, j_hot = 0.0;
  for (const auto& ch : channels) {
    if (!ch.is_bath_channel()) continue;
    // Tr[D[A] rho z] = Tr[rho (2 A+ z A - A+A z - z A+A)] for Hermitian z.
    const Matrix weight =
        2.0 * (ch.jump_dag * z_op * ch.jump) - ch.normal * z_op - z_op * ch.normal;
    const double flow = ch.omega * ch.rate * real_trace_product(weight, rho_ss);
    (ch.bath == BathLabel::cold ? j_cold : j_hot) += flow;
  }
  return assemble_currents(j_cold, j_hot);
}

/// Convenience: steady state plus currents in one result.
inline OracleResult run_oracle(const Matrix& rho0, const std::vector<LindbladChannel>& channels,
                               const Matrix& z_op, const SteadyStateOptions& opts = {}) {
  OracleResult out = steady_state(rho0, channels, opts);
  out.currents = currents_from_state(out.steady_state, channels, z_op);
  return out;
}

/// Steady currents of the dephased machine. Local sigma_z noise breaks the
/// collective symmetry; the steady state is unique and the currents equal
/// N times the single-atom values regardless of rho0.
inline EnergyCurrents dephasing_currents(int n_atoms, const SidebandRates& rates, double gamma_d,
                                         const std::optional<Matrix>& rho0 = std::nullopt,
                                         const SteadyStateOptions& opts = {},
                                         int oracle_max = kDefaultOracleMax) {
  if (!(gamma_d > 0)) throw std::invalid_argument("dephasing_currents: gamma_d must be positive");
  detail::check_oracle_size(n_atoms, oracle_max, "dephasing_currents");
  const auto channels = build_machine_channels(
      WithDephasing{FullCollective{n_atoms, oracle_max}, gamma_d}, rates);
  Matrix start;
  if (rho0) {
    start = *rho0;
  } else {
    const std::int64_t dim = std::int64_t(1) << n_atoms;
    start = Matrix::Zero(dim, dim);
    start(0, 0) = 1.0;  // all atoms in the ground state
  }
  const auto result = steady_state(start, channels, opts);
  return currents_from_state(result.steady_state, channels,
                             collective_operator(n_atoms, Axis::z, oracle_max));
}

struct TransientSeries {
  std::vector<double> time;
  std::vector<double> jz;             // <J_z>
  std::vector<double> emission_rate;  // -d<J_z>/dt
  std::vector<double> residual;       // Frobenius norm of the rhs
};

/// Superradiant decay of the fully inverted ensemble into a zero-occupation
/// bath: single collective emission channel (J_-, decay_rate). The emission
/// rate rises to a peak above the initial value N * (single-atom rate)
/// because the ladder rates (j-m+1)(j+m) peak at the central levels.
inline TransientSeries superradiant_transient(int n_atoms, double decay_rate = 0.5,
                                              double dt = 0.0, double t_max = 0.0,
                                              int oracle_max = kDefaultOracleMax) {
  detail::check_oracle_size(n_atoms, oracle_max, "superradiant_transient");
  if (!(decay_rate > 0))
    throw std::invalid_argument("superradiant_transient: decay_rate must be positive");
  const std::int64_t dim = std::int64_t(1) << n_atoms;
  const Matrix lower = collective_operator(n_atoms, Axis::minus, oracle_max);
  const Matrix jz = collective_operator(n_atoms, Axis::z, oracle_max);
  const std::vector<LindbladChannel> channels{
      make_channel(LindbladChannel::Kind::emission, lower, decay_rate, BathLabel::cold, 0, 1.0)};

  if (dt <= 0) dt = 0.05 / detail::total_rate_scale(channels);
  if (t_max <= 0) t_max = 4.0 / (decay_rate * n_atoms) + 6.0 / decay_rate;

  Matrix rho = Matrix::Zero(dim, dim);
  rho(dim - 1, dim - 1) = 1.0;  // all atoms excited

  TransientSeries series;
  double t = 0.0;
  while (true) {
    const Matrix rhs = lindblad_rhs(rho, channels);
    series.time.push_back(t);
    series.jz.push_back(real_trace_product(jz, rho));
    series.emission_rate.push_back(-real_trace_product(jz, rhs));
    series.residual.push_back(rhs.norm());
    if (t >= t_max) break;
    rho = detail::rk4_step(rho, channels, dt);
    t += dt;
  }
  return series;
}

}  // namespace dicke
