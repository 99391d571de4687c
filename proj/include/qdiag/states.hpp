// states.hpp
// W and GHZ states, their two-qubit reductions, the W/GHZ classical mixture,
// and validated two-qubit densities (including the JSON file format).

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmat.hpp"

namespace qdiag {

class PureState {
 public:
  PureState(int n_qubits, std::vector<cplx> amplitudes) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > 24) throw DomainError("PureState: n_qubits must lie in [1, 24]");
    if (amps_.size() != (std::size_t{1} << n_qubits)) throw DomainError("PureState: amplitude count is not 2^n");
    double norm2 = 0.0;
    for (const cplx& a : amps_) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > kEigTol * static_cast<double>(amps_.size())) {
      throw DomainError("PureState: amplitudes are not normalized");
    }
  }

  int n_qubits() const noexcept { return n_qubits_; }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::size_t dim() const noexcept { return amps_.size(); }

  /// |psi><psi| as a dense matrix; limited to 12 qubits (4^12 entries).
  ComplexMatrix projector() const {
    if (n_qubits_ > 12) throw DomainError("PureState::projector: dense projector limited to 12 qubits");
    ComplexMatrix rho(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) rho(i, j) = amps_[i] * std::conj(amps_[j]);
    return rho;
  }

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

/// Which invariant a candidate two-qubit density violated.
enum class DensityFault { Parse, Dimension, Hermiticity, Trace, Positivity };

inline std::string_view to_string(DensityFault f) {
  switch (f) {
    case DensityFault::Parse: return "parse";
    case DensityFault::Dimension: return "dimension";
    case DensityFault::Hermiticity: return "hermiticity";
    case DensityFault::Trace: return "trace";
    case DensityFault::Positivity: return "positivity";
  }
  return "unknown";
}

class DensityError : public std::runtime_error {
 public:
  DensityError(DensityFault fault, const std::string& what)
      : std::runtime_error(std::string(to_string(fault)) + " violation: " + what), fault_(fault) {}
  DensityFault fault() const noexcept { return fault_; }

 private:
  DensityFault fault_;
};

/// 4x4 Hermitian, unit-trace, positive semidefinite matrix. Only
/// constructible through validation.
class TwoQubitDensity {
 public:
  static TwoQubitDensity from_matrix(ComplexMatrix m) {
    if (m.rows() != 4 || m.cols() != 4) {
      throw DensityError(DensityFault::Dimension, "expected a 4x4 matrix, got " + std::to_string(m.rows()) + "x" +
                                                      std::to_string(m.cols()));
    }
    if (!m.all_finite()) throw DensityError(DensityFault::Parse, "non-finite entry");
    const HermiticityDefect h = hermiticity_defect(m);
    if (h.magnitude > kHermTol) {
      throw DensityError(DensityFault::Hermiticity, "entries (" + std::to_string(h.row) + "," + std::to_string(h.col) +
                                                        ") and (" + std::to_string(h.col) + "," +
                                                        std::to_string(h.row) + ") are not conjugate");
    }
    const cplx tr = m.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
      throw DensityError(DensityFault::Trace, "trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    const double min_ev = hermitian_eigenvalues(m).front();
    if (min_ev < -kTraceTol) {
      throw DensityError(DensityFault::Positivity, "negative eigenvalue " + std::to_string(min_ev));
    }
    return TwoQubitDensity(std::move(m));
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  /// Trace and positivity tolerance applied on validation.
  static constexpr double kTraceTol = 1e-10;

 private:
  explicit TwoQubitDensity(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Mixture parameters: n qubits in the parent states, weight p on the W term.
struct MixtureSpec {
  int n = 3;
  double p = 1.0;

  void validate() const {
    if (n < 3) throw DomainError("MixtureSpec: n must be at least 3");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("MixtureSpec: p must lie in [0, 1]");
  }
};

/// (|10...0> + |01...0> + ... + |0...01>) / sqrt(n)
inline PureState build_w_state(int n) {
  if (n < 2) throw DomainError("build_w_state: n must be at least 2");
  if (n > 24) throw DomainError("build_w_state: n must be at most 24");
  std::vector<cplx> amps(std::size_t{1} << n);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) amps[std::size_t{1} << (n - 1 - k)] = a;
  return PureState(n, std::move(amps));
}

/// (|0...0> + |1...1>) / sqrt(2)
inline PureState build_ghz_state(int n) {
  if (n < 2) throw DomainError("build_ghz_state: n must be at least 2");
  if (n > 24) throw DomainError("build_ghz_state: n must be at most 24");
  std::vector<cplx> amps(std::size_t{1} << n);
  amps.front() = M_SQRT1_2;
  amps.back() = M_SQRT1_2;
  return PureState(n, std::move(amps));
}

/// Reduces a pure state onto `keep` directly from amplitudes, without
/// forming the 2^n x 2^n projector.
inline ComplexMatrix reduce_pure(const PureState& psi, QubitPair keep) {
  const int n = psi.n_qubits();
  if (n < 2) throw DomainError("reduce_pure: need at least two qubits");
  if (keep.first < 0 || keep.first >= n || keep.second < 0 || keep.second >= n) {
    throw DomainError("reduce_pure: kept qubit index out of range");
  }
  if (keep.first == keep.second) throw DomainError("reduce_pure: kept qubit indices must differ");
  const std::size_t bit_a = std::size_t{1} << (n - 1 - keep.first);
  const std::size_t bit_b = std::size_t{1} << (n - 1 - keep.second);
  const auto amps = psi.amplitudes();
  ComplexMatrix out(4, 4);
  for (std::size_t rest = 0; rest < amps.size(); ++rest) {
    if (rest & (bit_a | bit_b)) continue;
    cplx local[4];
    for (std::size_t l = 0; l < 4; ++l) local[l] = amps[rest | ((l & 2) ? bit_a : 0) | ((l & 1) ? bit_b : 0)];
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) out(r, c) += local[r] * std::conj(local[c]);
  }
  return out;
}

/// (1/n) [ (n-2)|00><00| + |01><01| + |10><10| + |01><10| + |10><01| ]
inline TwoQubitDensity reduced_w_pair(int n) {
  if (n < 3) throw DomainError("reduced_w_pair: n must be at least 3");
  const double inv = 1.0 / n;
  ComplexMatrix m(4, 4);
  m(0, 0) = (n - 2.0) / n;
  m(1, 1) = inv;
  m(2, 2) = inv;
  m(1, 2) = inv;
  m(2, 1) = inv;
  return TwoQubitDensity::from_matrix(std::move(m));
}

/// diag(1/2, 0, 0, 1/2), identical for every kept pair and every n >= 2.
inline TwoQubitDensity reduced_ghz_pair(int n) {
  if (n < 3) throw DomainError("reduced_ghz_pair: n must be at least 3");
  return TwoQubitDensity::from_matrix(ComplexMatrix::diagonal({0.5, 0.0, 0.0, 0.5}));
}

/// p * Tr_{n-2}|W><W| + (1-p) * Tr_{n-2}|GHZ><GHZ|, p in [0, 1].
inline TwoQubitDensity mixture_ghz_w(const MixtureSpec& spec) {
  spec.validate();
  const double p = spec.p;
  const double n = spec.n;
  // Written as p * (W entry) + (1 - p) * (GHZ entry) so the state is affine
  // in p to the last bit.
  const double coherence = p * (1.0 / n);
  const double ghz_weight = (1.0 - p) * 0.5;
  ComplexMatrix m(4, 4);
  m(0, 0) = p * ((n - 2.0) / n) + ghz_weight;
  m(1, 1) = coherence;
  m(2, 2) = coherence;
  m(1, 2) = coherence;
  m(2, 1) = coherence;
  m(3, 3) = ghz_weight;
  return TwoQubitDensity::from_matrix(std::move(m));
}

/// Density file document: {"dim": 4, "re": [[...]x4], "im": [[...]x4]}.
inline nlohmann::json density_to_json(const TwoQubitDensity& rho) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    nlohmann::json re_row = nlohmann::json::array(), im_row = nlohmann::json::array();
    for (std::size_t j = 0; j < 4; ++j) {
      re_row.push_back(rho(i, j).real());
      im_row.push_back(rho(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  nlohmann::json doc;
  doc["dim"] = 4;
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc;
}

inline TwoQubitDensity load_density(std::string_view content) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw DensityError(DensityFault::Parse, e.what());
  }
  if (!doc.is_object()) throw DensityError(DensityFault::Parse, "document is not an object");
  for (const char* key : {"dim", "re", "im"}) {
    if (!doc.contains(key)) throw DensityError(DensityFault::Parse, std::string("missing field '") + key + "'");
  }
  if (!doc["dim"].is_number_integer()) throw DensityError(DensityFault::Parse, "'dim' is not an integer");
  const auto dim = doc["dim"].get<long long>();
  if (dim != 4) throw DensityError(DensityFault::Dimension, "dim is " + std::to_string(dim) + ", expected 4");

  auto read_grid = [&](const char* key) {
    const nlohmann::json& grid = doc[key];
    if (!grid.is_array()) throw DensityError(DensityFault::Parse, std::string("'") + key + "' is not an array");
    if (grid.size() != 4) {
      throw DensityError(DensityFault::Dimension,
                         std::string("'") + key + "' has " + std::to_string(grid.size()) + " rows, expected 4");
    }
    std::vector<double> out;
    out.reserve(16);
    for (const auto& row : grid) {
      if (!row.is_array()) throw DensityError(DensityFault::Parse, std::string("'") + key + "' row is not an array");
      if (row.size() != 4) {
        throw DensityError(DensityFault::Dimension,
                           std::string("'") + key + "' row has " + std::to_string(row.size()) + " entries, expected 4");
      }
      for (const auto& x : row) {
        if (!x.is_number()) throw DensityError(DensityFault::Parse, std::string("'") + key + "' entry is not a number");
        out.push_back(x.get<double>());
      }
    }
    return out;
  };
  const auto re = read_grid("re");
  const auto im = read_grid("im");
  std::vector<cplx> entries(16);
  for (std::size_t k = 0; k < 16; ++k) {
    if (!std::isfinite(re[k]) || !std::isfinite(im[k])) throw DensityError(DensityFault::Parse, "non-finite entry");
    entries[k] = {re[k], im[k]};
  }
  return TwoQubitDensity::from_matrix(ComplexMatrix(4, 4, std::move(entries)));
}

}  // namespace qdiag
