#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsb/core_model.hpp"
#include "gsb/errors.hpp"
#include "gsb/lemma_bounds.hpp"
#include "gsb/regions.hpp"
#include "gsb/separation_scheme.hpp"
#include "gsb/tau_constructions.hpp"

namespace gsb {

// JSON cannot carry IEEE specials as numbers; infinities become the
// strings "inf" / "-inf" and NaN becomes null.
inline nlohmann::json encode_extended(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  return v;
}

inline nlohmann::json encode_extended(std::span<const double> vs) {
  nlohmann::json arr = nlohmann::json::array();
  for (double v : vs) arr.push_back(encode_extended(v));
  return arr;
}

// Round-trippable decimal form; the specials mirror encode_extended.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline BroadcastChannel channel_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    fail(ErrorCode::ParseError, "channel JSON must be an object");
  for (const char* key : {"noise", "power", "bandwidth"}) {
    if (!j.contains(key))
      fail(ErrorCode::ParseError,
           std::string("channel JSON missing key \"") + key + "\"");
  }
  if (!j["noise"].is_array() || j["noise"].empty())
    fail(ErrorCode::ParseError, "\"noise\" must be a non-empty array");
  std::vector<double> noise;
  for (const auto& e : j["noise"]) {
    if (!e.is_number())
      fail(ErrorCode::ParseError, "\"noise\" entries must be numbers");
    noise.push_back(e.get<double>());
  }
  if (!j["power"].is_number() || !j["bandwidth"].is_number())
    fail(ErrorCode::ParseError, "\"power\" and \"bandwidth\" must be numbers");
  return BroadcastChannel(std::move(noise), j["power"].get<double>(),
                          j["bandwidth"].get<double>());
}

inline BroadcastChannel channel_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return channel_from_json(j);
}

inline BroadcastChannel load_channel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::IoError, "cannot open channel file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    fail(ErrorCode::IoError, "error reading channel file: " + path.string());
  return channel_from_text(ss.str());
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open for writing: " + path.string());
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::IoError, "error writing: " + path.string());
}

inline void to_json(nlohmann::json& j, const MembershipResult& r) {
  j = nlohmann::json{{"lhs", encode_extended(r.lhs)},
                     {"budget", r.budget},
                     {"member", r.member},
                     {"slack", encode_extended(r.slack)}};
}

inline void to_json(nlohmann::json& j, const BoundaryResult& r) {
  j = nlohmann::json{{"value", encode_extended(r.value)},
                     {"binding", to_string(r.binding)}};
}

inline void to_json(nlohmann::json& j, const TauVector& t) {
  j = encode_extended(t.values());
}

inline void to_json(nlohmann::json& j, const KfactorCertificate& c) {
  j = nlohmann::json{{"tau", encode_extended(c.tau.values())},
                     {"alpha", c.alpha},
                     {"residuals", encode_extended(std::span<const double>(c.residuals))},
                     {"split_index", c.split_index}};
}

inline void to_json(nlohmann::json& j, const RelaxedVector& rv) {
  j = nlohmann::json{{"d_star", rv.d_star}, {"labels", rv.labels}};
}

inline void to_json(nlohmann::json& j, const LabelBudget& lb) {
  j = nlohmann::json{{"sum", lb.sum}, {"bound", lb.bound}};
}

inline void to_json(nlohmann::json& j, const GenieFeasibility& g) {
  j = nlohmann::json{{"rates_bits", g.rates_bits},
                     {"rates_nats", std::vector<double>(
                                        g.rates_nats.values().begin(),
                                        g.rates_nats.values().end())},
                     {"capacity_lhs", g.capacity_lhs},
                     {"budget", g.budget},
                     {"feasible", g.feasible}};
}

inline void to_json(nlohmann::json& j, const GapCertificate& c) {
  j = nlohmann::json{{"mode", to_string(c.mode)},
                     {"input", c.input},
                     {"scaled", c.scaled},
                     {"factors", c.factors},
                     {"scaled_monotone", c.scaled_monotone},
                     {"requires_relaxed", c.requires_relaxed},
                     {"evaluated", c.evaluated},
                     {"inner_lhs", encode_extended(c.inner_lhs)},
                     {"inner_slack", encode_extended(c.inner_slack)},
                     {"inner_member", c.inner_member}};
}

inline void to_json(nlohmann::json& j, const OracleMi& o) {
  j = nlohmann::json{{"mi", o.mi}, {"mi_difference", o.mi_difference}};
}

inline void to_json(nlohmann::json& j, const MonteCarloMi& m) {
  j = nlohmann::json{{"estimate", m.estimate},
                     {"std_error", m.std_error},
                     {"samples", m.samples}};
}

inline std::string boundary_curve_csv(const BoundaryCurve& curve) {
  std::string out = "free_coord,solved_coord,binding\n";
  for (const BoundarySample& s : curve.samples) {
    out += format_double(s.free_value);
    out += ',';
    out += s.binding == Binding::Infeasible ? "nan"
                                            : format_double(s.solved_value);
    out += ',';
    out += to_string(s.binding);
    out += '\n';
  }
  return out;
}

}  // namespace gsb
