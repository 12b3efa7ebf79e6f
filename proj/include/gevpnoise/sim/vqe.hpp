#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gevpnoise/core/error.hpp"
#include "gevpnoise/qop/pauli.hpp"
#include "gevpnoise/sim/statevector.hpp"
#include "gevpnoise/sim/uccsd.hpp"

namespace gevpnoise::sim {

struct VqeConfig {
  double gradient_tolerance = 1e-6;  // Ha per unit parameter
  int max_iterations = 1000;
  int restarts = 2;
  double restart_perturbation = 1e-2;
  std::uint64_t restart_seed = 7;
  std::vector<double> initial_theta;  // empty = all zeros (HF start)
};

struct VqeResult {
  std::vector<double> theta_star;
  double energy = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  std::vector<double> gradient_trace;
};

/// E(θ) = <HF|U†(θ) H U(θ)|HF>.
inline double vqe_energy(const UccsdAnsatz& ansatz, const qop::PauliOperator& h, const std::vector<double>& theta) {
  const ComplexVector psi = ansatz.apply(theta, ansatz.reference.amplitudes());
  return psi.dot(apply_pauli(h, psi)).real();
}

/// Energy and analytic gradient by one forward and one reverse sweep:
/// dE/dθ_k = 2 Re <λ_{k+1}| τ_k |ψ_{k+1}>, with ψ_{k+1} the state after
/// factor k and λ_{k+1} the back-propagated H|ψ>.
inline double vqe_energy_and_gradient(const UccsdAnsatz& ansatz, const qop::PauliOperator& h,
                                      const std::vector<double>& theta, std::vector<double>& gradient) {
  ComplexVector psi = ansatz.apply(theta, ansatz.reference.amplitudes());
  ComplexVector lambda = apply_pauli(h, psi);
  const double energy = psi.dot(lambda).real();
  gradient.assign(theta.size(), 0.0);
  for (std::size_t k = theta.size(); k-- > 0;) {
    const ComplexVector tau_psi = apply_pauli(ansatz.generators[k], psi);
    gradient[k] = 2.0 * lambda.dot(tau_psi).real();
    psi = ansatz.exponentials[k].apply(-theta[k], std::move(psi));
    lambda = ansatz.exponentials[k].apply(-theta[k], std::move(lambda));
  }
  return energy;
}

/// Central finite-difference gradient, used to cross-check the analytic one.
inline std::vector<double> vqe_gradient_fd(const UccsdAnsatz& ansatz, const qop::PauliOperator& h,
                                           const std::vector<double>& theta, double step = 1e-5) {
  std::vector<double> g(theta.size());
  auto t = theta;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    t[k] = theta[k] + step;
    const double fp = vqe_energy(ansatz, h, t);
    t[k] = theta[k] - step;
    const double fm = vqe_energy(ansatz, h, t);
    t[k] = theta[k];
    g[k] = (fp - fm) / (2 * step);
  }
  return g;
}

namespace detail {

inline double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// BFGS on the inverse Hessian with Armijo backtracking. Returns true on convergence.
inline bool bfgs(const UccsdAnsatz& ansatz, const qop::PauliOperator& h, std::vector<double>& x, const VqeConfig& cfg,
                 VqeResult& out) {
  const auto n = static_cast<Eigen::Index>(x.size());
  RealMatrix inv_h = RealMatrix::Identity(n, n);
  std::vector<double> g;
  double f = vqe_energy_and_gradient(ansatz, h, x, g);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    const double gn = norm(g);
    out.gradient_trace.push_back(gn);
    ++out.iterations;
    if (gn < cfg.gradient_tolerance) {
      out.theta_star = x;
      out.energy = f;
      out.gradient_norm = gn;
      return true;
    }
    const RealVector gv = Eigen::Map<const RealVector>(g.data(), n);
    RealVector p = -inv_h * gv;
    double slope = p.dot(gv);
    if (slope >= 0) {
      inv_h.setIdentity();
      p = -gv;
      slope = -gv.squaredNorm();
    }
    double alpha = 1.0;
    std::vector<double> xn(x.size()), gn_vec;
    double fn = 0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (Eigen::Index i = 0; i < n; ++i) xn[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + alpha * p(i);
      fn = vqe_energy_and_gradient(ansatz, h, xn, gn_vec);
      if (fn <= f + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (inv_h.isIdentity()) return false;
      inv_h.setIdentity();
      continue;
    }
    const RealVector s = alpha * p;
    const RealVector y = Eigen::Map<const RealVector>(gn_vec.data(), n) - gv;
    const double sy = s.dot(y);
    if (sy > 1e-16) {
      const double rho = 1.0 / sy;
      const RealMatrix id = RealMatrix::Identity(n, n);
      inv_h = (id - rho * s * y.transpose()) * inv_h * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    x = xn;
    g = gn_vec;
    f = fn;
  }
  return false;
}

}  // namespace detail

/// Minimizes the UCCSD energy. Failed attempts are restarted from the initial
/// point plus a seeded uniform perturbation.
inline VqeResult vqe_minimize(const UccsdAnsatz& ansatz, const qop::PauliOperator& h, const VqeConfig& config = {}) {
  if (!h.is_hermitian()) throw NonHermitian("vqe_minimize: Hamiltonian is not Hermitian");
  if (h.n_qubits() != ansatz.n_qubits()) throw SizeMismatch("vqe_minimize: qubit count mismatch");
  std::vector<double> start = config.initial_theta.empty() ? std::vector<double>(ansatz.n_parameters(), 0.0) : config.initial_theta;
  if (start.size() != ansatz.n_parameters()) throw SizeMismatch("vqe_minimize: initial θ has the wrong length");

  std::mt19937_64 rng(config.restart_seed);
  std::uniform_real_distribution<double> jitter(-config.restart_perturbation, config.restart_perturbation);
  VqeResult out;
  for (int attempt = 0; attempt <= config.restarts; ++attempt) {
    auto x = start;
    if (attempt > 0)
      for (auto& v : x) v += jitter(rng);
    if (detail::bfgs(ansatz, h, x, config, out)) return out;
  }
  throw ConvergenceError("vqe_minimize: gradient norm did not reach " + std::to_string(config.gradient_tolerance),
                         out.gradient_trace);
}

}  // namespace gevpnoise::sim
