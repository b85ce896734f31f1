#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qchan/channels.hpp"
#include "qchan/linalg.hpp"

namespace qchan {

/// Malformed file: unreadable, bad JSON, or a structural problem. The
/// message points at the offending location.
struct ChannelParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed file whose Kraus set fails the completeness relation.
struct CptpViolationError : std::runtime_error {
  CptpViolationError(std::string msg, CptpReport r)
      : std::runtime_error(std::move(msg)), report(r) {}
  CptpReport report;
};

namespace detail {

inline int read_dim(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer())
    throw ChannelParseError(std::string(field) + ": expected an integer");
  int d = j[field].get<int>();
  if (d != 2 && d != 3) throw ChannelParseError(std::string(field) + ": must be 2 or 3");
  return d;
}

inline cplx read_entry(const nlohmann::json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw ChannelParseError(where + ": expected [re, im]");
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace detail

/// Parses a channel description:
///   { "name": str, "dim_in": 2|3, "dim_out": 2|3,
///     "kraus": [ dim_out rows of dim_in [re, im] pairs, ... ] }
/// Throws ChannelParseError on malformed input and CptpViolationError when
/// the operators do not satisfy the completeness relation within 1e-10.
inline QuantumChannel parse_channel_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ChannelParseError(e.what());
  }
  if (!j.is_object()) throw ChannelParseError("top level: expected an object");
  if (!j.contains("name") || !j["name"].is_string())
    throw ChannelParseError("name: expected a string");
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
    throw ChannelParseError("kraus: expected a non-empty array");

  QuantumChannel ch;
  ch.kind = ChannelKind::Custom;
  ch.name = j["name"].get<std::string>();
  ch.dim_in = detail::read_dim(j, "dim_in");
  ch.dim_out = detail::read_dim(j, "dim_out");

  const auto& ops = j["kraus"];
  for (std::size_t k = 0; k < ops.size(); ++k) {
    std::string where = "kraus[" + std::to_string(k) + "]";
    const auto& op = ops[k];
    if (!op.is_array() || static_cast<int>(op.size()) != ch.dim_out)
      throw ChannelParseError(where + ": expected " + std::to_string(ch.dim_out) + " rows");
    ComplexMatrix m(ch.dim_out, ch.dim_in);
    for (int r = 0; r < ch.dim_out; ++r) {
      const auto& row = op[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != ch.dim_in)
        throw ChannelParseError(where + " row " + std::to_string(r) + ": expected " +
                                std::to_string(ch.dim_in) + " columns");
      for (int c = 0; c < ch.dim_in; ++c) {
        std::string entry = where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
        m(r, c) = detail::read_entry(row[static_cast<std::size_t>(c)], entry);
      }
    }
    ch.kraus.push_back(m);
  }

  CptpReport report = validate_cptp(ch.kraus);
  if (!report.ok) {
    std::ostringstream msg;
    msg << "Kraus set is not trace preserving: max deviation " << report.max_deviation;
    throw CptpViolationError(msg.str(), report);
  }
  return ch;
}

inline QuantumChannel load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChannelParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_json(buf.str());
}

}  // namespace qchan
