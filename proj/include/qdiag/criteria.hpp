// criteria.hpp
// Two-qubit diagnostics: Peres-Horodecki determinants and PPT spectrum, the
// Horodecki CHSH quantity M, standard-scheme teleportation fidelity, and two
// numerical oracles (CHSH maximization, fully entangled fraction).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "detail/search.hpp"
#include "qmat.hpp"
#include "states.hpp"

namespace qdiag {

/// Threshold band for every yes/no verdict.
inline constexpr double kSignTol = 1e-10;

/// Position of a value relative to a threshold, with a +/- kSignTol dead band.
enum class Band { Below, Boundary, Above };

inline Band band(double value, double threshold) {
  if (value > threshold + kSignTol) return Band::Above;
  if (value < threshold - kSignTol) return Band::Below;
  return Band::Boundary;
}

inline std::string_view to_string(Band b) {
  switch (b) {
    case Band::Below: return "below";
    case Band::Boundary: return "boundary";
    case Band::Above: return "above";
  }
  return "unknown";
}

/// C_ij = Tr[rho sigma_i (x) sigma_j], i, j over x, y, z.
struct CorrelationMatrix {
  RealMatrix3 c{};

  double operator()(int i, int j) const { return c[i][j]; }

  /// U = C^T C.
  RealMatrix3 gram() const {
    RealMatrix3 u{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) u[i][j] += c[k][i] * c[k][j];
    return u;
  }

  /// a^T C b for 3-vectors a, b.
  double bilinear(const std::array<double, 3>& a, const std::array<double, 3>& b) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += a[i] * c[i][j] * b[j];
    return s;
  }
};

struct Determinants {
  double w3 = 0.0;
  double w4 = 0.0;
};

struct DiagnosticsReport {
  double w3 = 0.0;
  double w4 = 0.0;
  std::array<double, 4> ppt_spectrum{};  // ascending
  std::array<double, 3> u{};             // eigenvalues of C^T C, descending
  double m_value = 0.0;
  double f_max = 0.0;
  bool entangled = false;
  bool bell_violating = false;
  bool teleport_useful = false;

  double ppt_min() const { return ppt_spectrum.front(); }
  Band entanglement_band() const { return band(-ppt_min(), 0.0); }
  Band bell_band() const { return band(m_value, 1.0); }
  Band teleport_band() const { return band(f_max, 2.0 / 3.0); }
};

/// W3 is the determinant of the upper-left 3x3 block of rho^{T2} in the basis
/// order |00>,|01>,|10>,|11>; W4 the determinant of the whole of rho^{T2}.
inline Determinants w3_w4(const TwoQubitDensity& rho) {
  const ComplexMatrix pt = partial_transpose_2(rho.matrix());
  ComplexMatrix block(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) block(i, j) = pt(i, j);
  return {determinant(block).real(), determinant(pt).real()};
}

inline std::array<double, 4> ppt_spectrum(const TwoQubitDensity& rho) {
  const auto ev = hermitian_eigenvalues(partial_transpose_2(rho.matrix()));
  return {ev[0], ev[1], ev[2], ev[3]};
}

inline CorrelationMatrix correlation_matrix(const TwoQubitDensity& rho) {
  CorrelationMatrix out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.c[i][j] = (rho.matrix() * kron(pauli::sigma(i), pauli::sigma(j))).trace().real();
    }
  return out;
}

/// Eigenvalues of U = C^T C, descending, by Jacobi on the explicit 3x3 matrix.
inline std::array<double, 3> u_eigenvalues(const CorrelationMatrix& c) {
  const RealMatrix3 u = c.gram();
  std::array<double, 9> flat{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) flat[3 * i + j] = u[i][j];
  const auto ev = symmetric_eigenvalues(flat, 3);
  return {ev[2], ev[1], ev[0]};
}

/// Sum of the two largest eigenvalues of C^T C; the state admits a local
/// hidden-variable model for every CHSH setting iff this is <= 1.
inline double m_value(const TwoQubitDensity& rho) {
  const auto u = u_eigenvalues(correlation_matrix(rho));
  return u[0] + u[1];
}

/// 1/2 (1 + 1/3 sum_i sqrt(u_i)), with sqrt(u_i) taken as the singular
/// values of C.
inline double f_max(const TwoQubitDensity& rho) {
  const auto sv = singular_values(correlation_matrix(rho).c);
  return 0.5 * (1.0 + (sv[0] + sv[1] + sv[2]) / 3.0);
}

struct OracleOptions {
  int restarts = 32;
  int iters = 200;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::array<double, 3> unit_vector(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline void check_oracle_options(const OracleOptions& opt) {
  if (opt.restarts < 1) throw DomainError("oracle: restarts must be at least 1");
  if (opt.iters < 1) throw DomainError("oracle: iters must be at least 1");
}

// Rz(alpha) Ry(beta) Rz(gamma)
inline std::array<cplx, 4> su2(double alpha, double beta, double gamma) {
  const cplx ea = std::polar(1.0, -0.5 * (alpha + gamma));
  const cplx eb = std::polar(1.0, -0.5 * (alpha - gamma));
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  return {ea * c, -eb * s, std::conj(eb) * s, std::conj(ea) * c};
}

}  // namespace detail

/// Largest CHSH expectation a.C(b+b') + a'.C(b-b') over unit vectors, each
/// given by two spherical angles. Converges to 2 sqrt(M) from below.
inline double chsh_maximize(const TwoQubitDensity& rho, const OracleOptions& opt = {}) {
  detail::check_oracle_options(opt);
  const CorrelationMatrix c = correlation_matrix(rho);
  auto chsh = [&c](std::span<const double> x) {
    const auto a = detail::unit_vector(x[0], x[1]);
    const auto a2 = detail::unit_vector(x[2], x[3]);
    const auto b = detail::unit_vector(x[4], x[5]);
    const auto b2 = detail::unit_vector(x[6], x[7]);
    return c.bilinear(a, b) + c.bilinear(a, b2) + c.bilinear(a2, b) - c.bilinear(a2, b2);
  };
  return detail::multistart_maximize(chsh, 8, {}, opt.restarts, opt.iters, opt.seed).value;
}

struct FefResult {
  double f = 0.0;
  /// (2f + 1) / 3, the best teleportation fidelity reachable with LOCC.
  double locc_fidelity = 0.0;
};

/// max <phi|rho|phi> over maximally entangled |phi> = (u (x) v)|Phi+>, u and v
/// in SU(2) by Euler angles. Seeds include the four Bell states.
inline FefResult fully_entangled_fraction(const TwoQubitDensity& rho, const OracleOptions& opt = {}) {
  detail::check_oracle_options(opt);
  const ComplexMatrix& m = rho.matrix();
  auto overlap = [&m](std::span<const double> x) {
    const auto u = detail::su2(x[0], x[1], x[2]);
    const auto v = detail::su2(x[3], x[4], x[5]);
    // (u (x) v)|Phi+>: amplitude of |ij> is (u_i0 v_j0 + u_i1 v_j1) / sqrt(2).
    std::array<cplx, 4> phi{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) phi[2 * i + j] = (u[2 * i] * v[2 * j] + u[2 * i + 1] * v[2 * j + 1]) * M_SQRT1_2;
    cplx s = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t k = 0; k < 4; ++k) s += std::conj(phi[r]) * m(r, k) * phi[k];
    return s.real();
  };
  constexpr double pi = std::numbers::pi;
  // v = I, Z, Y, X up to phase: Phi+, Phi-, Psi-, Psi+.
  const std::vector<std::vector<double>> bell_seeds = {
      {0, 0, 0, 0, 0, 0}, {0, 0, 0, pi, 0, 0}, {0, 0, 0, 0, pi, 0}, {0, 0, 0, 0, pi, pi}};
  const double f = detail::multistart_maximize(overlap, 6, bell_seeds, opt.restarts, opt.iters, opt.seed).value;
  return {f, (2.0 * f + 1.0) / 3.0};
}

inline DiagnosticsReport full_report(const TwoQubitDensity& rho) {
  DiagnosticsReport r;
  const Determinants w = w3_w4(rho);
  r.w3 = w.w3;
  r.w4 = w.w4;
  r.ppt_spectrum = ppt_spectrum(rho);
  const CorrelationMatrix c = correlation_matrix(rho);
  r.u = u_eigenvalues(c);
  r.m_value = r.u[0] + r.u[1];
  const auto sv = singular_values(c.c);
  r.f_max = 0.5 * (1.0 + (sv[0] + sv[1] + sv[2]) / 3.0);
  r.entangled = r.entanglement_band() == Band::Above;
  r.bell_violating = r.bell_band() == Band::Above;
  r.teleport_useful = r.teleport_band() == Band::Above;
  return r;
}

}  // namespace qdiag
