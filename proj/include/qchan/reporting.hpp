#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qchan/channels.hpp"
#include "qchan/holevo.hpp"
#include "qchan/optimizer.hpp"

namespace qchan {

/// Fixed 6-decimal rendering used for every number the tool prints; locale
/// independent, and negative zero is normalized away.
inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

/// Bloch angles of a qubit state: theta in [0, pi], phi in [0, 2pi), with
/// phi pinned to 0 at the poles.
inline std::pair<double, double> bloch_angles(const DensityMatrix& rho) {
  BlochVector w = density_to_bloch(rho);
  double z = std::clamp(w.z, -1.0, 1.0);
  double theta = std::acos(z);
  double phi = std::atan2(w.y, w.x);
  if (std::abs(w.x) < 1e-12 && std::abs(w.y) < 1e-12) phi = 0.0;
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return {theta, phi};
}

inline std::string format_ensemble(const Ensemble& ens) {
  std::ostringstream out;
  out << "ensemble:\n";
  int index = 1;
  for (const auto& e : ens.entries()) {
    if (e.state.dim() == 2) {
      auto [theta, phi] = bloch_angles(e.state);
      out << "  state " << index << ": theta=" << fixed6(theta) << " phi=" << fixed6(phi)
          << " p=" << fixed6(e.p) << "\n";
    } else {
      out << "  state " << index << ": p=" << fixed6(e.p) << "\n";
    }
    ++index;
  }
  return out.str();
}

inline std::string describe_channel(const QuantumChannel& ch) {
  std::ostringstream out;
  out << "channel: " << ch.name << "\n";
  if (ch.kind == ChannelKind::Splaying) {
    out << "eta: -\n";
  } else {
    out << "eta: " << fixed6(ch.eta) << "\n";
  }
  out << "dim_in: " << ch.dim_in << "\n";
  out << "dim_out: " << ch.dim_out << "\n";
  for (std::size_t k = 0; k < ch.kraus.size(); ++k) {
    out << "kraus " << k + 1 << ":\n";
    const ComplexMatrix& m = ch.kraus[k];
    for (int r = 0; r < m.rows(); ++r) {
      out << " ";
      for (int c = 0; c < m.cols(); ++c)
        out << " (" << fixed6(m(r, c).real()) << ", " << fixed6(m(r, c).imag()) << ")";
      out << "\n";
    }
  }
  if (ch.dim_in == 2 && ch.dim_out == 2) {
    AffineMap map = affine_representation(ch);
    auto d = map.diagonal();
    out << "T diag: (" << fixed6(d[0]) << ", " << fixed6(d[1]) << ", " << fixed6(d[2]) << ")\n";
    out << "t: (" << fixed6(map.t[0]) << ", " << fixed6(map.t[1]) << ", " << fixed6(map.t[2])
        << ")\n";
    out << "unital: " << (is_unital(ch) ? "yes" : "no") << "\n";
  } else {
    out << "unital: n/a (dimensions differ)\n";
  }
  return out.str();
}

struct SweepSpec {
  ChannelKind kind = ChannelKind::Depolarizing;
  double eta_min = 0.0;
  double eta_max = 1.0;
  int steps = 2;
  std::vector<Method> methods = {Method::ClosedForm};
  int optimizer_states = 2;
  OptimizerConfig optimizer_cfg{};
};

struct SweepRow {
  double eta;
  Method method;
  double capacity_bits;
  std::optional<double> psi;
  std::optional<double> tau;
};

/// Evaluates the sweep grid. Rows come out with eta ascending and, within
/// one eta, methods in enum order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (!(spec.eta_min >= 0.0 && spec.eta_min <= spec.eta_max && spec.eta_max <= 1.0))
    throw std::invalid_argument("sweep: eta range must satisfy 0 <= min <= max <= 1");
  if (spec.steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
  if (spec.methods.empty()) throw std::invalid_argument("sweep: no methods selected");

  std::vector<Method> methods = spec.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  std::vector<SweepRow> rows;
  for (int k = 0; k < spec.steps; ++k) {
    double eta = (spec.eta_min * (spec.steps - 1 - k) + spec.eta_max * k) / (spec.steps - 1);
    for (Method method : methods) {
      SweepRow row{eta, method, 0.0, std::nullopt, std::nullopt};
      switch (method) {
        case Method::ClosedForm: {
          row.capacity_bits = capacity_closed_form(spec.kind, eta).value_bits;
          break;
        }
        case Method::RestrictedScan: {
          CapacityResult res = spec.kind == ChannelKind::Splaying
                                   ? capacity_splaying_scan()
                                   : spec.kind == ChannelKind::AmplitudeDamping
                                         ? capacity_amplitude_scan(eta)
                                         : throw std::invalid_argument(
                                               "sweep: scan not available for this channel");
          row.capacity_bits = res.value_bits;
          if (res.params) {
            row.psi = res.params->psi;
            row.tau = res.params->tau;
          }
          break;
        }
        case Method::GeneralOptimizer: {
          QuantumChannel ch = make_channel(spec.kind, eta);
          row.capacity_bits =
              optimize_ensemble(ch, spec.optimizer_states, spec.optimizer_cfg).value_bits;
          break;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "eta,method,capacity_bits,psi,tau\n";
  for (const auto& r : rows) {
    out << fixed6(r.eta) << "," << to_string(r.method) << "," << fixed6(r.capacity_bits) << ","
        << (r.psi ? fixed6(*r.psi) : "") << "," << (r.tau ? fixed6(*r.tau) : "") << "\n";
  }
  return out.str();
}

inline std::string sweep_json(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "  {\"eta\": " << fixed6(r.eta) << ", \"method\": \"" << to_string(r.method)
        << "\", \"capacity_bits\": " << fixed6(r.capacity_bits)
        << ", \"psi\": " << (r.psi ? fixed6(*r.psi) : "null")
        << ", \"tau\": " << (r.tau ? fixed6(*r.tau) : "null") << "}"
        << (i + 1 < rows.size() ? "," : "") << "\n";
  }
  out << "]\n";
  return out.str();
}

inline std::string format_audit(const AuditReport& report) {
  std::ostringstream out;
  out << "audit: " << to_string(report.kind) << "\n";
  for (const auto& row : report.rows) {
    out << "eta=" << (row.eta ? fixed6(*row.eta) : "-") << " reference="
        << fixed6(row.reference_bits) << " optimize2=" << fixed6(row.optimizer2_bits)
        << " optimize3=" << fixed6(row.optimizer3_bits)
        << " exceeds=" << (row.exceeds_reference ? "yes" : "no") << "\n";
  }
  return out.str();
}

}  // namespace qchan
