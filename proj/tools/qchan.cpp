#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qchan/channel_io.hpp"
#include "qchan/channels.hpp"
#include "qchan/holevo.hpp"
#include "qchan/optimizer.hpp"
#include "qchan/reporting.hpp"

namespace {

qchan::ChannelKind parse_kind(const std::string& token) {
  auto kind = qchan::parse_channel_kind(token);
  if (!kind) throw std::invalid_argument("unknown channel kind: " + token);
  return *kind;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("QCHAN_SEED");
  if (!env || !*env) return 42;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0')
    throw std::invalid_argument("invalid QCHAN_SEED value");
  return v;
}

// The splaying channel is parameter-free; everything else needs --eta.
double resolve_eta(qchan::ChannelKind kind, const std::optional<double>& eta) {
  if (kind == qchan::ChannelKind::Splaying) {
    if (eta) std::cerr << "warning: eta is ignored for the splaying channel\n";
    return 0.0;
  }
  if (!eta) throw std::invalid_argument("--eta is required for this channel");
  return *eta;
}

qchan::Method parse_method(const std::string& token) {
  if (token == "closed") return qchan::Method::ClosedForm;
  if (token == "scan") return qchan::Method::RestrictedScan;
  if (token == "optimize") return qchan::Method::GeneralOptimizer;
  throw std::invalid_argument("unknown method: " + token);
}

qchan::Method default_method(qchan::ChannelKind kind) {
  return kind == qchan::ChannelKind::Splaying ? qchan::Method::RestrictedScan
                                              : qchan::Method::ClosedForm;
}

struct CapacityArgs {
  std::string kind;
  std::optional<double> eta;
  std::string method;
};

int run_capacity(const CapacityArgs& args) {
  qchan::ChannelKind kind = parse_kind(args.kind);
  double eta = resolve_eta(kind, args.eta);
  qchan::Method method = args.method.empty() ? default_method(kind) : parse_method(args.method);

  std::optional<qchan::CapacityResult> result;
  switch (method) {
    case qchan::Method::ClosedForm:
      result = qchan::capacity_closed_form(kind, eta);
      break;
    case qchan::Method::RestrictedScan:
      if (kind == qchan::ChannelKind::Splaying) {
        result = qchan::capacity_splaying_scan();
      } else if (kind == qchan::ChannelKind::AmplitudeDamping) {
        result = qchan::capacity_amplitude_scan(eta);
      } else {
        throw std::invalid_argument("scan not available for this channel");
      }
      break;
    case qchan::Method::GeneralOptimizer: {
      qchan::OptimizerConfig cfg;
      cfg.seed = default_seed();
      result = qchan::optimize_ensemble(qchan::make_channel(kind, eta), 2, cfg);
      break;
    }
  }

  std::cout << "channel: " << qchan::to_string(kind) << "\n";
  if (kind != qchan::ChannelKind::Splaying) std::cout << "eta: " << qchan::fixed6(eta) << "\n";
  std::cout << "method: " << qchan::to_string(result->method) << "\n";
  std::cout << "capacity_bits: " << qchan::fixed6(result->value_bits) << "\n";
  if (result->params) {
    std::cout << "psi: " << qchan::fixed6(result->params->psi) << "\n";
    std::cout << "tau: " << qchan::fixed6(result->params->tau) << "\n";
  }
  if (kind == qchan::ChannelKind::Splaying && method == qchan::Method::RestrictedScan) {
    std::cout << "orthogonal_bits: "
              << qchan::fixed6(qchan::splaying_objective(std::numbers::pi)) << "\n";
  }
  std::cout << qchan::format_ensemble(result->ensemble);
  return 0;
}

struct OptimizeArgs {
  std::string kind;
  std::optional<double> eta;
  int states = 2;
  int restarts = 32;
  std::optional<std::uint64_t> seed;
};

int run_optimize(const OptimizeArgs& args) {
  qchan::ChannelKind kind = parse_kind(args.kind);
  double eta = resolve_eta(kind, args.eta);
  qchan::OptimizerConfig cfg;
  cfg.restarts = args.restarts;
  cfg.seed = args.seed ? *args.seed : default_seed();

  qchan::CapacityResult result =
      qchan::optimize_ensemble(qchan::make_channel(kind, eta), args.states, cfg);
  std::cout << "channel: " << qchan::to_string(kind) << "\n";
  if (kind != qchan::ChannelKind::Splaying) std::cout << "eta: " << qchan::fixed6(eta) << "\n";
  std::cout << "method: " << qchan::to_string(result.method) << "\n";
  std::cout << "states: " << args.states << "\n";
  std::cout << "capacity_bits: " << qchan::fixed6(result.value_bits) << "\n";
  std::cout << "iteration_limit: " << (result.hit_iteration_limit ? "yes" : "no") << "\n";
  std::cout << qchan::format_ensemble(result.ensemble);
  return 0;
}

struct SweepArgs {
  std::string kind;
  double eta_min = 0.0;
  double eta_max = 1.0;
  int steps = 2;
  std::string format = "csv";
  std::string out_path;
  std::vector<std::string> methods;
  int states = 2;
  int restarts = 32;
  std::optional<std::uint64_t> seed;
};

int run_sweep(const SweepArgs& args) {
  qchan::SweepSpec spec;
  spec.kind = parse_kind(args.kind);
  if (spec.kind == qchan::ChannelKind::Splaying)
    std::cerr << "warning: eta is ignored for the splaying channel\n";
  spec.eta_min = args.eta_min;
  spec.eta_max = args.eta_max;
  spec.steps = args.steps;
  spec.optimizer_states = args.states;
  spec.optimizer_cfg.restarts = args.restarts;
  spec.optimizer_cfg.seed = args.seed ? *args.seed : default_seed();
  spec.methods.clear();
  if (args.methods.empty()) {
    spec.methods = {default_method(spec.kind)};
  } else {
    for (const auto& m : args.methods) spec.methods.push_back(parse_method(m));
  }

  std::vector<qchan::SweepRow> rows = qchan::run_sweep(spec);
  std::string payload = args.format == "json" ? qchan::sweep_json(rows) : qchan::sweep_csv(rows);
  if (args.out_path.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream out(args.out_path);
  if (!out) {
    std::cerr << "error: cannot write " << args.out_path << "\n";
    return 1;
  }
  out << payload;
  if (!out.good()) {
    std::cerr << "error: cannot write " << args.out_path << "\n";
    return 1;
  }
  return 0;
}

struct DescribeArgs {
  std::string kind;
  std::optional<double> eta;
};

int run_describe(const DescribeArgs& args) {
  qchan::ChannelKind kind = parse_kind(args.kind);
  double eta = resolve_eta(kind, args.eta);
  std::cout << qchan::describe_channel(qchan::make_channel(kind, eta));
  return 0;
}

int run_validate(const std::string& path) {
  try {
    qchan::QuantumChannel ch = qchan::load_channel_file(path);
    qchan::CptpReport report = qchan::validate_cptp(ch.kraus);
    std::cout << "ok\n";
    std::cout << "channel: " << ch.name << "\n";
    std::cout << "max_deviation: " << qchan::fixed6(report.max_deviation) << "\n";
    return 0;
  } catch (const qchan::CptpViolationError& e) {
    std::cout << "rejected\n";
    std::cout << "max_deviation: " << qchan::fixed6(e.report.max_deviation) << "\n";
    return 1;
  }
}

struct AuditArgs {
  std::string kind;
  std::vector<double> grid;
  int restarts = 32;
  std::optional<std::uint64_t> seed;
};

int run_audit(const AuditArgs& args) {
  qchan::ChannelKind kind = parse_kind(args.kind);
  std::vector<double> grid = args.grid;
  if (kind == qchan::ChannelKind::Splaying) {
    if (!grid.empty()) std::cerr << "warning: grid is ignored for the splaying channel\n";
    grid.clear();
  } else if (grid.empty()) {
    grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  }
  qchan::OptimizerConfig cfg;
  cfg.restarts = args.restarts;
  cfg.seed = args.seed ? *args.seed : default_seed();
  std::cout << qchan::format_audit(qchan::audit_channel(kind, grid, cfg));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product-state classical capacities of single-qubit noisy channels"};
  app.require_subcommand(1);

  CapacityArgs cap_args;
  auto* cap = app.add_subcommand("capacity", "Capacity of a catalog channel");
  cap->add_option("kind", cap_args.kind, "Channel kind")->required();
  cap->add_option("--eta", cap_args.eta, "Noise strength in [0,1]");
  cap->add_option("--method", cap_args.method, "closed | scan | optimize")
      ->check(CLI::IsMember({"closed", "scan", "optimize"}));

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Capacity over an eta grid (CSV or JSON)");
  sweep->add_option("kind", sweep_args.kind, "Channel kind")->required();
  sweep->add_option("--eta-min", sweep_args.eta_min, "Grid start")->required();
  sweep->add_option("--eta-max", sweep_args.eta_max, "Grid end")->required();
  sweep->add_option("--steps", sweep_args.steps, "Grid points (>= 2)")->required();
  sweep->add_option("--format", sweep_args.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_args.out_path, "Output path (default: stdout)");
  sweep->add_option("--method", sweep_args.methods, "closed | scan | optimize (repeatable)")
      ->delimiter(',')
      ->check(CLI::IsMember({"closed", "scan", "optimize"}));
  sweep->add_option("--states", sweep_args.states, "Optimizer signal states (2-4)");
  sweep->add_option("--restarts", sweep_args.restarts, "Optimizer restarts");
  sweep->add_option("--seed", sweep_args.seed, "Optimizer seed");

  OptimizeArgs opt_args;
  auto* opt = app.add_subcommand("optimize", "General ensemble optimization");
  opt->add_option("kind", opt_args.kind, "Channel kind")->required();
  opt->add_option("--eta", opt_args.eta, "Noise strength in [0,1]");
  opt->add_option("--states", opt_args.states, "Signal states (2-4)");
  opt->add_option("--restarts", opt_args.restarts, "Restarts");
  opt->add_option("--seed", opt_args.seed, "Seed");

  DescribeArgs desc_args;
  auto* desc = app.add_subcommand("describe", "Kraus operators, affine map, unitality");
  desc->add_option("kind", desc_args.kind, "Channel kind")->required();
  desc->add_option("--eta", desc_args.eta, "Noise strength in [0,1]");

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a channel definition file");
  val->add_option("file", validate_path, "Channel JSON file")->required();

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Closed form vs general optimizer");
  audit->add_option("kind", audit_args.kind, "Channel kind")->required();
  audit->add_option("--grid", audit_args.grid, "Comma-separated eta values")->delimiter(',');
  audit->add_option("--restarts", audit_args.restarts, "Optimizer restarts");
  audit->add_option("--seed", audit_args.seed, "Optimizer seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cap) return run_capacity(cap_args);
    if (*sweep) return run_sweep(sweep_args);
    if (*opt) return run_optimize(opt_args);
    if (*desc) return run_describe(desc_args);
    if (*val) return run_validate(validate_path);
    if (*audit) return run_audit(audit_args);
  } catch (const qchan::ChannelParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
