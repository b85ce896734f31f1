#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchan/linalg.hpp"

namespace qchan {

inline constexpr double kCptpTol = 1e-10;
inline constexpr double kUnitalTol = 1e-10;

enum class ChannelKind {
  Depolarizing,
  Erasure,
  PhaseDamping,
  BitFlip,
  BitPhaseFlip,
  PhaseFlip,
  TwoPauli,
  AmplitudeDamping,
  Splaying,
  Custom,
};

inline std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::Erasure: return "erasure";
    case ChannelKind::PhaseDamping: return "phase-damping";
    case ChannelKind::BitFlip: return "bit-flip";
    case ChannelKind::BitPhaseFlip: return "bit-phase-flip";
    case ChannelKind::PhaseFlip: return "phase-flip";
    case ChannelKind::TwoPauli: return "two-pauli";
    case ChannelKind::AmplitudeDamping: return "amplitude-damping";
    case ChannelKind::Splaying: return "splaying";
    case ChannelKind::Custom: return "custom";
  }
  return "custom";
}

/// Parses a channel kind token. Accepts the hyphenated names printed by
/// to_string plus lowercase no-hyphen variants; "spraying" is an accepted
/// alias for "splaying".
inline std::optional<ChannelKind> parse_channel_kind(const std::string& token) {
  std::string t;
  t.reserve(token.size());
  for (char c : token) {
    if (c == '-' || c == '_') continue;
    t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "depolarizing") return ChannelKind::Depolarizing;
  if (t == "erasure") return ChannelKind::Erasure;
  if (t == "phasedamping") return ChannelKind::PhaseDamping;
  if (t == "bitflip") return ChannelKind::BitFlip;
  if (t == "bitphaseflip") return ChannelKind::BitPhaseFlip;
  if (t == "phaseflip") return ChannelKind::PhaseFlip;
  if (t == "twopauli") return ChannelKind::TwoPauli;
  if (t == "amplitudedamping") return ChannelKind::AmplitudeDamping;
  if (t == "splaying" || t == "spraying") return ChannelKind::Splaying;
  return std::nullopt;
}

/// A channel in operator-sum form: rho -> sum_k E_k rho E_k^dagger.
/// Kraus operators are dim_out x dim_in.
struct QuantumChannel {
  ChannelKind kind = ChannelKind::Custom;
  std::string name;
  double eta = 0.0;
  int dim_in = 2;
  int dim_out = 2;
  std::vector<ComplexMatrix> kraus;
};

struct CptpReport {
  bool ok = false;
  double max_deviation = 0.0;
};

/// Checks the completeness relation sum_k E_k^dagger E_k = I on dim_in.
inline CptpReport validate_cptp(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("validate_cptp: empty Kraus set");
  int rows = kraus.front().rows();
  int cols = kraus.front().cols();
  for (const auto& k : kraus) {
    if (k.rows() != rows || k.cols() != cols)
      throw std::invalid_argument("validate_cptp: inconsistent Kraus shapes");
  }
  ComplexMatrix acc(cols, cols);
  for (const auto& k : kraus) acc = acc + k.adjoint() * k;
  double dev = acc.max_abs_diff(ComplexMatrix::identity(cols));
  return {dev <= kCptpTol, dev};
}

namespace detail {

inline void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("eta outside [0,1]");
}

inline ComplexMatrix kraus2(cplx a, cplx b, cplx c, cplx d) {
  ComplexMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

}  // namespace detail

/// Builds a catalog channel at noise strength eta. The splaying channel is
/// parameter-free; its eta argument is ignored. Custom channels come from
/// file ingestion, not from here.
inline QuantumChannel make_channel(ChannelKind kind, double eta) {
  using detail::kraus2;
  if (kind == ChannelKind::Custom)
    throw std::invalid_argument("make_channel: custom channels are loaded from files");
  if (kind != ChannelKind::Splaying) detail::require_eta(eta);

  QuantumChannel ch;
  ch.kind = kind;
  ch.name = to_string(kind);
  ch.eta = (kind == ChannelKind::Splaying) ? 0.0 : eta;

  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  switch (kind) {
    case ChannelKind::Depolarizing: {
      double s = std::sqrt(eta / 3.0);
      ch.kraus.push_back(id2.scaled(std::sqrt(1.0 - eta)));
      for (int i = 1; i <= 3; ++i) ch.kraus.push_back(pauli(i).scaled(s));
      break;
    }
    case ChannelKind::Erasure: {
      // Output space: input qubit plus an orthogonal flag level at index 2.
      ch.dim_out = 3;
      ComplexMatrix keep(3, 2), f0(3, 2), f1(3, 2);
      keep(0, 0) = std::sqrt(1.0 - eta);
      keep(1, 1) = std::sqrt(1.0 - eta);
      f0(2, 0) = std::sqrt(eta);
      f1(2, 1) = std::sqrt(eta);
      ch.kraus = {keep, f0, f1};
      break;
    }
    case ChannelKind::PhaseDamping: {
      ch.kraus.push_back(id2.scaled(std::sqrt(1.0 - eta)));
      ch.kraus.push_back(kraus2(std::sqrt(eta), 0.0, 0.0, 0.0));
      ch.kraus.push_back(kraus2(0.0, 0.0, 0.0, std::sqrt(eta)));
      break;
    }
    case ChannelKind::BitFlip:
    case ChannelKind::BitPhaseFlip:
    case ChannelKind::PhaseFlip: {
      int axis = kind == ChannelKind::BitFlip ? 1 : kind == ChannelKind::BitPhaseFlip ? 2 : 3;
      ch.kraus.push_back(id2.scaled(std::sqrt(1.0 - eta)));
      ch.kraus.push_back(pauli(axis).scaled(std::sqrt(eta)));
      break;
    }
    case ChannelKind::TwoPauli: {
      double s = std::sqrt(eta / 2.0);
      ch.kraus.push_back(id2.scaled(std::sqrt(1.0 - eta)));
      ch.kraus.push_back(pauli(1).scaled(s));
      ch.kraus.push_back(pauli(2).scaled(s));
      break;
    }
    case ChannelKind::AmplitudeDamping: {
      ch.kraus.push_back(kraus2(1.0, 0.0, 0.0, std::sqrt(1.0 - eta)));
      ch.kraus.push_back(kraus2(0.0, std::sqrt(eta), 0.0, 0.0));
      break;
    }
    case ChannelKind::Splaying: {
      // Kraus set recovered from the Choi matrix of the affine action
      // T = diag(1/sqrt(3), 0, 1/3), t = (0, 0, 1/3). The Choi matrix has
      // rank 3 with eigenvalues {1, 2/3, 1/3}, so three operators suffice.
      double r3 = std::sqrt(3.0);
      ch.kraus.push_back(kraus2(0.5 * r3, 0.0, 0.0, 0.5));
      ch.kraus.push_back(kraus2(-0.5 / r3, 0.0, 0.0, 0.5));
      ch.kraus.push_back(kraus2(0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), 0.0));
      break;
    }
    case ChannelKind::Custom:
      break;
  }
  return ch;
}

/// Applies the operator sum to an arbitrary dim_in x dim_in matrix. Used
/// internally where the input is not a density matrix (Pauli probes).
inline ComplexMatrix apply_to_matrix(const QuantumChannel& ch, const ComplexMatrix& m) {
  if (m.rows() != ch.dim_in || m.cols() != ch.dim_in)
    throw std::invalid_argument("apply: dimension mismatch");
  ComplexMatrix out(ch.dim_out, ch.dim_out);
  for (const auto& k : ch.kraus) out = out + k * m * k.adjoint();
  return out;
}

inline DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in) throw std::invalid_argument("apply: dimension mismatch");
  return DensityMatrix(apply_to_matrix(ch, rho.matrix()));
}

inline bool is_unital(const QuantumChannel& ch) {
  if (ch.dim_in != ch.dim_out)
    throw std::invalid_argument("unitality undefined across dimensions");
  ComplexMatrix image = apply_to_matrix(ch, ComplexMatrix::identity(ch.dim_in));
  return image.max_abs_diff(ComplexMatrix::identity(ch.dim_out)) <= kUnitalTol;
}

/// Action on the Bloch ball: w -> T w + t.
struct AffineMap {
  std::array<std::array<double, 3>, 3> T{};
  std::array<double, 3> t{};

  BlochVector apply(const BlochVector& w) const {
    std::array<double, 3> in{w.x, w.y, w.z};
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
      out[i] = t[i];
      for (int j = 0; j < 3; ++j) out[i] += T[i][j] * in[j];
    }
    return {out[0], out[1], out[2]};
  }

  std::array<double, 3> diagonal() const { return {T[0][0], T[1][1], T[2][2]}; }
};

/// Extracts (T, t) from the action on Pauli probes:
/// T_ij = tr(sigma_i E(sigma_j)) / 2, t_i = tr(sigma_i E(I)) / 2.
inline AffineMap affine_representation(const QuantumChannel& ch) {
  if (ch.dim_in != 2 || ch.dim_out != 2) throw std::invalid_argument("no qubit affine form");
  AffineMap map;
  ComplexMatrix unit_image = apply_to_matrix(ch, ComplexMatrix::identity(2));
  for (int i = 0; i < 3; ++i) {
    map.t[i] = 0.5 * (pauli(i + 1) * unit_image).trace().real();
    for (int j = 0; j < 3; ++j) {
      map.T[i][j] = 0.5 * (pauli(i + 1) * apply_to_matrix(ch, pauli(j + 1))).trace().real();
    }
  }
  return map;
}

}  // namespace qchan
