#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qchan/channels.hpp"
#include "qchan/linalg.hpp"

namespace qchan {

struct WeightedState {
  double p;
  DensityMatrix state;
};

/// Probabilistic mixture of input states. All states share one dimension,
/// probabilities are nonnegative and sum to 1 within 1e-12.
class Ensemble {
 public:
  explicit Ensemble(std::vector<WeightedState> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("ensemble is empty");
    double total = 0.0;
    int dim = entries_.front().state.dim();
    for (const auto& e : entries_) {
      if (!(e.p >= 0.0)) throw std::invalid_argument("ensemble probabilities must be nonnegative");
      if (e.state.dim() != dim)
        throw std::invalid_argument("ensemble states must share one dimension");
      total += e.p;
    }
    if (std::abs(total - 1.0) > kTraceTol)
      throw std::invalid_argument("ensemble probabilities must sum to 1");
  }

  static Ensemble equal_pair(DensityMatrix a, DensityMatrix b) {
    return Ensemble({{0.5, std::move(a)}, {0.5, std::move(b)}});
  }

  static Ensemble weighted_pair(double tau, DensityMatrix a, DensityMatrix b) {
    return Ensemble({{1.0 - tau, std::move(a)}, {tau, std::move(b)}});
  }

  const std::vector<WeightedState>& entries() const { return entries_; }
  int dim() const { return entries_.front().state.dim(); }

 private:
  std::vector<WeightedState> entries_;
};

enum class Method { ClosedForm, RestrictedScan, GeneralOptimizer };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed";
    case Method::RestrictedScan: return "scan";
    case Method::GeneralOptimizer: return "optimize";
  }
  return "optimize";
}

/// Parameters of the two-state restricted searches: the second input is the
/// first rotated by psi about the channel symmetry axis and carries prior
/// tau (the first carries 1 - tau).
struct RestrictedSearchParams {
  double psi = 0.0;
  double tau = 0.0;

  // tau * (1 - tau), the prior product appearing in the mixture spectra;
  // ranges over [0, 1/4].
  double prior_product() const { return tau * (1.0 - tau); }
};

struct CapacityResult {
  double value_bits;
  Ensemble ensemble;
  Method method;
  std::optional<RestrictedSearchParams> params;
  bool hit_iteration_limit = false;
};

/// chi = S(sum_j p_j E(rho_j)) - sum_j p_j S(E(rho_j)), in bits.
/// Zero-probability entries contribute nothing and are skipped outright.
inline double holevo_chi(const QuantumChannel& ch, const Ensemble& ens) {
  if (ens.dim() != ch.dim_in) throw std::invalid_argument("holevo_chi: dimension mismatch");
  ComplexMatrix mixture(ch.dim_out, ch.dim_out);
  double mean_entropy = 0.0;
  for (const auto& e : ens.entries()) {
    if (e.p == 0.0) continue;
    ComplexMatrix out = apply_to_matrix(ch, e.state.matrix());
    mixture = mixture + out.scaled(e.p);
    mean_entropy += e.p * entropy_from_eigenvalues(eigenvalues_hermitian(out));
  }
  return entropy_from_eigenvalues(eigenvalues_hermitian(mixture)) - mean_entropy;
}

/// Input pair of the amplitude damping restricted search: w1 on the +x axis,
/// w2 rotated by psi about z.
inline std::pair<BlochVector, BlochVector> amplitude_input_pair(double psi) {
  return {{1.0, 0.0, 0.0}, {std::cos(psi), -std::sin(psi), 0.0}};
}

/// Input pair of the splaying search: w1 on the +x axis, w2 rotated by psi
/// about y (toward -z).
inline std::pair<BlochVector, BlochVector> splaying_input_pair(double psi) {
  return {{1.0, 0.0, 0.0}, {std::cos(psi), 0.0, -std::sin(psi)}};
}

/// Output eigenvalue pairs (descending) for the parametrized pure-input
/// families of the channels that admit closed forms. alpha is the first
/// state's output spectrum, beta the second's. For phase damping and
/// two-Pauli the family is the symmetric pair at polar angle theta, so the
/// two spectra coincide; for amplitude damping they coincide for every psi.
struct OutputSpectra {
  std::array<double, 2> alpha;
  std::array<double, 2> beta;
};

inline OutputSpectra eigenvalue_formulas(ChannelKind kind, double eta, double theta_or_psi) {
  auto pair_from_radicand = [](double rad, double scale) {
    double r = scale * std::sqrt(std::max(rad, 0.0));
    return std::array<double, 2>{0.5 + r, 0.5 - r};
  };
  switch (kind) {
    case ChannelKind::PhaseDamping: {
      detail::require_eta(eta);
      double mu = 0.5 * eta;
      double s2 = std::sin(theta_or_psi) * std::sin(theta_or_psi);
      auto a = pair_from_radicand(1.0 - 4.0 * mu * (1.0 - mu) * s2, 0.5);
      return {a, a};
    }
    case ChannelKind::TwoPauli: {
      detail::require_eta(eta);
      double s2 = std::sin(theta_or_psi) * std::sin(theta_or_psi);
      auto a = pair_from_radicand(1.0 - 4.0 * eta * (1.0 - eta) + eta * (2.0 - 3.0 * eta) * s2, 0.5);
      return {a, a};
    }
    case ChannelKind::AmplitudeDamping: {
      detail::require_eta(eta);
      auto a = pair_from_radicand(1.0 - eta + eta * eta, 0.5);
      return {a, a};
    }
    case ChannelKind::Splaying: {
      double s = std::sin(theta_or_psi);
      auto b = pair_from_radicand(4.0 - 2.0 * s - 2.0 * s * s, 1.0 / 6.0);
      return {{5.0 / 6.0, 1.0 / 6.0}, b};
    }
    default:
      throw std::invalid_argument("eigenvalue_formulas: unsupported kind");
  }
}

/// Product-state capacity where a closed form exists. The result carries an
/// ensemble that achieves the value.
inline CapacityResult capacity_closed_form(ChannelKind kind, double eta) {
  detail::require_eta(eta);
  auto z_pair = Ensemble::equal_pair(pure_state(0.0, 0.0), pure_state(std::numbers::pi, 0.0));
  auto x_pair = Ensemble::equal_pair(bloch_to_density({1.0, 0.0, 0.0}),
                                     bloch_to_density({-1.0, 0.0, 0.0}));
  auto y_pair = Ensemble::equal_pair(bloch_to_density({0.0, 1.0, 0.0}),
                                     bloch_to_density({0.0, -1.0, 0.0}));
  switch (kind) {
    case ChannelKind::Depolarizing:
      return {1.0 - binary_entropy(2.0 * eta / 3.0), std::move(z_pair), Method::ClosedForm,
              std::nullopt, false};
    case ChannelKind::Erasure:
      return {1.0 - eta, std::move(z_pair), Method::ClosedForm, std::nullopt, false};
    case ChannelKind::PhaseDamping:
      return {1.0, std::move(z_pair), Method::ClosedForm, std::nullopt, false};
    case ChannelKind::BitFlip:
      return {1.0, std::move(x_pair), Method::ClosedForm, std::nullopt, false};
    case ChannelKind::BitPhaseFlip:
      return {1.0, std::move(y_pair), Method::ClosedForm, std::nullopt, false};
    case ChannelKind::PhaseFlip:
      return {1.0, std::move(z_pair), Method::ClosedForm, std::nullopt, false};
    case ChannelKind::TwoPauli: {
      // Below eta = 2/3 the equatorial plane contracts least; above it the
      // z axis does, and the branches meet at eta = 2/3.
      if (eta < 2.0 / 3.0) {
        return {1.0 - binary_entropy(0.5 * eta), std::move(x_pair), Method::ClosedForm,
                std::nullopt, false};
      }
      return {1.0 - binary_entropy(eta), std::move(z_pair), Method::ClosedForm, std::nullopt,
              false};
    }
    case ChannelKind::AmplitudeDamping: {
      double value = binary_entropy(0.5 * (1.0 - eta)) -
                     binary_entropy(0.5 * (1.0 - std::sqrt(1.0 - eta + eta * eta)));
      return {value, std::move(x_pair), Method::ClosedForm,
              RestrictedSearchParams{std::numbers::pi, 0.5}, false};
    }
    case ChannelKind::Splaying:
      throw std::invalid_argument("no closed form for the splaying channel; use the scan");
    default:
      throw std::invalid_argument("capacity_closed_form: unsupported kind");
  }
}

struct ScanGrid {
  int psi_points = 721;
  int tau_points = 101;
};

namespace detail {

// Golden-section maximization, tracking the best of every point sampled
// (both endpoints included). Assumes f is unimodal on [lo, hi]; callers
// bracket the maximum with a dense pass first.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double xtol) {
  constexpr double inv_phi = 0.6180339887498949;
  double best_x = lo, best_f = f(lo);
  auto consider = [&](double x, double fx) {
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  };
  consider(hi, f(hi));
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  for (int iter = 0; iter < 200 && (b - a) > xtol; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
      consider(x2, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
      consider(x1, f1);
    }
  }
  return {best_x, best_f};
}

// Dense sampling followed by golden refinement around the best sample.
// Robust when unimodality inside the window is not guaranteed.
template <typename F>
std::pair<double, double> refine_max(F&& f, double lo, double hi, double xtol) {
  constexpr int kDense = 32;
  double best_x = lo, best_f = f(lo);
  for (int i = 1; i <= kDense; ++i) {
    double x = lo + (hi - lo) * (static_cast<double>(i) / kDense);
    double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  double sub = (hi - lo) / kDense;
  auto [gx, gf] = golden_max(f, std::max(lo, best_x - sub), std::min(hi, best_x + sub), xtol);
  if (gf > best_f) return {gx, gf};
  return {best_x, best_f};
}

// Smallest-psi-then-smallest-tau tie-breaking: a candidate only displaces
// the incumbent when it wins by more than 1e-12, so earlier grid points
// survive ties.
struct ScanBest {
  double value = -1.0;
  double psi = 0.0;
  double tau = 0.0;

  void offer(double v, double p, double t) {
    if (v > value + 1e-12) {
      value = v;
      psi = p;
      tau = t;
    }
  }
};

}  // namespace detail

/// Restricted two-state search for amplitude damping: first input on +x,
/// second rotated by psi about z with prior tau. Scans the (psi, tau) grid
/// over [0, pi] x [0, 1], then refines each coordinate by golden section.
/// The mixture spectrum comes from the mixture matrix itself (here via its
/// Bloch radius), not from any printed closed form.
inline CapacityResult capacity_amplitude_scan(double eta, ScanGrid grid = {}) {
  detail::require_eta(eta);
  if (grid.psi_points < 2 || grid.tau_points < 2)
    throw std::invalid_argument("amplitude scan grid too coarse");

  const double pi = std::numbers::pi;
  const double contraction = std::sqrt(1.0 - eta);
  // Per-state output entropy; independent of psi and tau.
  const double state_entropy =
      detail::binary_entropy_clamped(0.5 * (1.0 - std::sqrt(1.0 - eta + eta * eta)));
  auto objective = [&](double psi, double tau) {
    double mx = contraction * ((1.0 - tau) + tau * std::cos(psi));
    double my = contraction * (-tau * std::sin(psi));
    double mz = eta;
    double radius = std::sqrt(mx * mx + my * my + mz * mz);
    return detail::binary_entropy_clamped(0.5 * (1.0 - radius)) - state_entropy;
  };

  detail::ScanBest best;
  for (int i = 0; i < grid.psi_points; ++i) {
    double psi = pi * (static_cast<double>(i) / (grid.psi_points - 1));
    for (int j = 0; j < grid.tau_points; ++j) {
      double tau = static_cast<double>(j) / (grid.tau_points - 1);
      best.offer(objective(psi, tau), psi, tau);
    }
  }

  double psi_step = pi / (grid.psi_points - 1);
  double tau_step = 1.0 / (grid.tau_points - 1);
  for (int round = 0; round < 3; ++round) {
    auto [px, pf] = detail::refine_max([&](double p) { return objective(p, best.tau); },
                                       std::max(0.0, best.psi - psi_step),
                                       std::min(pi, best.psi + psi_step), 1e-7);
    best.offer(pf, px, best.tau);
    auto [tx, tf] = detail::refine_max([&](double t) { return objective(best.psi, t); },
                                       std::max(0.0, best.tau - tau_step),
                                       std::min(1.0, best.tau + tau_step), 1e-7);
    best.offer(tf, best.psi, tx);
    psi_step *= 0.25;
    tau_step *= 0.25;
  }

  auto ch = make_channel(ChannelKind::AmplitudeDamping, eta);
  auto [w1, w2] = amplitude_input_pair(best.psi);
  Ensemble ens =
      Ensemble::weighted_pair(best.tau, bloch_to_density(w1), bloch_to_density(w2));
  return {holevo_chi(ch, ens), std::move(ens), Method::RestrictedScan,
          RestrictedSearchParams{best.psi, best.tau}, false};
}

/// Equal-prior two-state objective of the splaying channel as a function of
/// the rotation angle psi.
inline double splaying_objective(double psi) {
  auto [w1, w2] = splaying_input_pair(psi);
  // Affine action: T = diag(1/sqrt(3), 0, 1/3), t = (0, 0, 1/3).
  const double inv_r3 = 1.0 / std::sqrt(3.0);
  double ox1 = inv_r3 * w1.x, oz1 = (1.0 + w1.z) / 3.0;
  double ox2 = inv_r3 * w2.x, oz2 = (1.0 + w2.z) / 3.0;
  double r1 = std::sqrt(ox1 * ox1 + oz1 * oz1);
  double r2 = std::sqrt(ox2 * ox2 + oz2 * oz2);
  double mx = 0.5 * (ox1 + ox2), mz = 0.5 * (oz1 + oz2);
  double rm = std::sqrt(mx * mx + mz * mz);
  return detail::binary_entropy_clamped(0.5 * (1.0 - rm)) -
         0.5 * (detail::binary_entropy_clamped(0.5 * (1.0 - r1)) +
                detail::binary_entropy_clamped(0.5 * (1.0 - r2)));
}

/// Equal-prior two-state search for the splaying channel over the rotation
/// angle psi in [0, 2pi), refined to 1e-6. The maximum strictly exceeds the
/// orthogonal-pair value at psi = pi; the scan enforces that.
inline CapacityResult capacity_splaying_scan(ScanGrid grid = {}) {
  if (grid.psi_points < 8) throw std::invalid_argument("splaying scan grid too coarse");

  const double two_pi = 2.0 * std::numbers::pi;
  detail::ScanBest best;
  for (int i = 0; i < grid.psi_points; ++i) {
    double psi = two_pi * (static_cast<double>(i) / grid.psi_points);
    best.offer(splaying_objective(psi), psi, 0.5);
  }
  double step = two_pi / grid.psi_points;
  auto [px, pf] = detail::refine_max(splaying_objective, std::max(0.0, best.psi - step),
                                     std::min(two_pi, best.psi + step), 1e-7);
  best.offer(pf, px, 0.5);

  if (!(best.value > splaying_objective(std::numbers::pi)))
    throw std::logic_error("splaying scan failed to beat the orthogonal pair");

  auto ch = make_channel(ChannelKind::Splaying, 0.0);
  auto [w1, w2] = splaying_input_pair(best.psi);
  Ensemble ens = Ensemble::equal_pair(bloch_to_density(w1), bloch_to_density(w2));
  return {holevo_chi(ch, ens), std::move(ens), Method::RestrictedScan,
          RestrictedSearchParams{best.psi, 0.5}, false};
}

}  // namespace qchan
