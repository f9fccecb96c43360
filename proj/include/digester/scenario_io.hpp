#pragma once

// Scenario documents (JSON with // comments), trajectory CSV and manifold CSV.
//
// Document layout, every key optional:
//
//   {
//     "parameters":    { "<Parameters member>": number, ... },
//     "initial_state": { "M_s": 2500, "M_fl": 25000,
//                        "q_p" | "H0" | "q_p_cmd": number or "operating_point",
//                        "xi_eq": 0, "E_h": 0, "E_useful": 0, "E_elec": 0 },
//     "schedule":      [ { "t": 0, "k_ch": 0.5, ... }, { "t": 2e4, "k_ch": 0.8 }, ... ],
//     "t_end": 1e5, "log_interval": 50,
//     "tolerances":    { "rel": 1e-6, "abs": 1e-9 },
//     "integrator":    "rosenbrock23" | "dopri54",
//     "hold":          { "masses": false, "head": null }
//   }
//
// A breakpoint inherits every input it does not name from its predecessor.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "digester/engine.hpp"
#include "digester/scenario.hpp"
#include "digester/smc.hpp"

namespace digester {

class ScenarioError : public Error {
 public:
  enum class Kind { kSyntax, kUnknownKey, kInvariant };

  ScenarioError(Kind kind, std::string path, const std::string& message)
      : Error(std::string(kind_name(kind)) + (path.empty() ? "" : " at " + path) + ": " + message),
        kind_(kind),
        path_(std::move(path)) {}

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::string& path() const { return path_; }

  static constexpr std::string_view kind_name(Kind k) {
    switch (k) {
      case Kind::kSyntax: return "syntax-error";
      case Kind::kUnknownKey: return "unknown-key";
      case Kind::kInvariant: return "invariant-violation";
    }
    return "error";
  }

 private:
  Kind kind_;
  std::string path_;
};

namespace io_detail {

using nlohmann::json;

inline constexpr std::string_view kOperatingPoint = "operating_point";

inline json parse_document_text(std::string_view text) {
  // Wrapping in an array lets an empty or comment-only document parse as [].
  std::string wrapped = "[";
  wrapped.append(text);
  wrapped.append("\n]");
  json doc;
  try {
    doc = json::parse(wrapped, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ScenarioError(ScenarioError::Kind::kSyntax, "", e.what());
  }
  if (doc.empty()) return json::object();
  if (doc.size() != 1 || !doc[0].is_object()) {
    throw ScenarioError(ScenarioError::Kind::kSyntax, "", "document must be a single object");
  }
  return doc[0];
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError(ScenarioError::Kind::kInvariant, path, "expected a number");
  return v.get<double>();
}

/// Assigns members of `obj` through the setter table, rejecting unknown keys.
inline void read_fields(const json& obj, const std::string& path,
                        const std::map<std::string, std::function<void(const json&, const std::string&)>>& fields) {
  if (!obj.is_object()) throw ScenarioError(ScenarioError::Kind::kInvariant, path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    auto it = fields.find(key);
    if (it == fields.end()) throw ScenarioError(ScenarioError::Kind::kUnknownKey, where, "unknown key");
    it->second(value, where);
  }
}

template <class T>
auto number_field(T& target) {
  return [&target](const json& v, const std::string& path) { target = number(v, path); };
}

inline std::map<std::string, std::function<void(const json&, const std::string&)>> parameter_fields(
    Parameters& p) {
  return {{"rho_s", number_field(p.rho_s)},       {"rho_fl", number_field(p.rho_fl)},
          {"w", number_field(p.w)},               {"n", number_field(p.n)},
          {"K_ref", number_field(p.K_ref)},       {"C_ref", number_field(p.C_ref)},
          {"alpha_C", number_field(p.alpha_C)},   {"tau_y", number_field(p.tau_y)},
          {"K_HB", number_field(p.K_HB)},         {"D_pipe", number_field(p.D_pipe)},
          {"L_eff", number_field(p.L_eff)},       {"K_static", number_field(p.K_static)},
          {"tau_p", number_field(p.tau_p)},       {"tau_H", number_field(p.tau_H)},
          {"tau_ref", number_field(p.tau_ref)},   {"H0_max", number_field(p.H0_max)},
          {"q_p_max", number_field(p.q_p_max)},   {"lambda_q", number_field(p.lambda_q)},
          {"k_smc", number_field(p.k_smc)},       {"phi_q", number_field(p.phi_q)},
          {"C_max", number_field(p.C_max)},       {"alpha_sig", number_field(p.alpha_sig)},
          {"eps", number_field(p.eps)},           {"eta_pm", number_field(p.eta_pm)}};
}

inline std::map<std::string, std::function<void(const json&, const std::string&)>> input_fields(
    ExogenousInputs& u) {
  return {{"k_ch", number_field(u.k_ch)},
          {"gamma_K", number_field(u.gamma_K)},
          {"f_in", number_field(u.f_in)},
          {"f_fl", number_field(u.f_fl)},
          {"q_p_ref", number_field(u.q_p_ref)}};
}

/// Numeric value, or the operating-point marker (returned as nullopt).
inline std::optional<double> number_or_operating_point(const json& v, const std::string& path) {
  if (v.is_string() && v.get<std::string>() == kOperatingPoint) return std::nullopt;
  if (!v.is_number()) {
    throw ScenarioError(ScenarioError::Kind::kInvariant, path,
                        "expected a number or \"operating_point\"");
  }
  return v.get<double>();
}

}  // namespace io_detail

/// Builds and validates a Scenario. Absent keys keep the reference defaults;
/// an empty document yields the full default scenario.
inline Scenario parse_scenario(std::string_view text) {
  using io_detail::json;
  using Kind = ScenarioError::Kind;
  const json doc = io_detail::parse_document_text(text);

  Scenario s = default_scenario();
  double M_s = s.initial_state.M_s;
  double M_fl = s.initial_state.M_fl;
  ProcessState given;
  std::optional<double> q_p, H0, q_p_cmd;

  std::map<std::string, std::function<void(const json&, const std::string&)>> top = {
      {"parameters",
       [&](const json& v, const std::string& path) {
         io_detail::read_fields(v, path, io_detail::parameter_fields(s.parameters));
       }},
      {"initial_state",
       [&](const json& v, const std::string& path) {
         io_detail::read_fields(
             v, path,
             {{"M_s", io_detail::number_field(M_s)},
              {"M_fl", io_detail::number_field(M_fl)},
              {"xi_eq", io_detail::number_field(given.xi_eq)},
              {"E_h", io_detail::number_field(given.E_h)},
              {"E_useful", io_detail::number_field(given.E_useful)},
              {"E_elec", io_detail::number_field(given.E_elec)},
              {"q_p", [&](const json& x, const std::string& p) { q_p = io_detail::number_or_operating_point(x, p); }},
              {"H0", [&](const json& x, const std::string& p) { H0 = io_detail::number_or_operating_point(x, p); }},
              {"q_p_cmd",
               [&](const json& x, const std::string& p) { q_p_cmd = io_detail::number_or_operating_point(x, p); }}});
       }},
      {"schedule",
       [&](const json& v, const std::string& path) {
         if (!v.is_array() || v.empty()) throw ScenarioError(Kind::kInvariant, path, "expected a non-empty array");
         s.schedule.clear();
         ExogenousInputs carry;
         for (std::size_t i = 0; i < v.size(); ++i) {
           const std::string where = path + "[" + std::to_string(i) + "]";
           Breakpoint b{std::numeric_limits<double>::quiet_NaN(), carry};
           auto fields = io_detail::input_fields(b.inputs);
           fields["t"] = io_detail::number_field(b.t);
           io_detail::read_fields(v[i], where, fields);
           if (std::isnan(b.t)) throw ScenarioError(Kind::kInvariant, where + ".t", "breakpoint time is required");
           carry = b.inputs;
           s.schedule.push_back(b);
         }
       }},
      {"t_end", io_detail::number_field(s.t_end)},
      {"log_interval", io_detail::number_field(s.log_interval)},
      {"tolerances",
       [&](const json& v, const std::string& path) {
         io_detail::read_fields(v, path,
                                {{"rel", io_detail::number_field(s.tolerances.rel)},
                                 {"abs", io_detail::number_field(s.tolerances.abs)}});
       }},
      {"integrator",
       [&](const json& v, const std::string& path) {
         const std::string name = v.is_string() ? v.get<std::string>() : "";
         if (name == "rosenbrock23") {
           s.method = Method::kRosenbrock23;
         } else if (name == "dopri54") {
           s.method = Method::kDormandPrince54;
         } else {
           throw ScenarioError(Kind::kInvariant, path, "expected \"rosenbrock23\" or \"dopri54\"");
         }
       }},
      {"hold",
       [&](const json& v, const std::string& path) {
         io_detail::read_fields(
             v, path,
             {{"masses",
               [&](const json& x, const std::string& p) {
                 if (!x.is_boolean()) throw ScenarioError(Kind::kInvariant, p, "expected a boolean");
                 s.hold.masses = x.get<bool>();
               }},
              {"head", [&](const json& x, const std::string& p) {
                 if (x.is_null()) {
                   s.hold.head.reset();
                 } else {
                   s.hold.head = io_detail::number(x, p);
                 }
               }}});
       }}};
  io_detail::read_fields(doc, "", top);

  // Range checks run before the operating point is solved so that bad
  // parameters are reported by name rather than as non-finite heads.
  {
    Scenario probe = s;
    probe.initial_state.M_s = M_s;
    probe.initial_state.M_fl = M_fl;
    if (auto v = check(probe); !v.empty()) {
      throw ScenarioError(Kind::kInvariant, v.front().field, v.front().message);
    }
  }

  ProcessState op = operating_point(s.parameters, M_s, M_fl, s.schedule.front().inputs);
  ProcessState x = given;
  x.M_s = M_s;
  x.M_fl = M_fl;
  x.q_p = q_p.value_or(op.q_p);
  x.H0 = H0.value_or(op.H0);
  x.q_p_cmd = q_p_cmd.value_or(op.q_p_cmd);
  s.initial_state = x;

  if (auto v = check(s); !v.empty()) throw ScenarioError(Kind::kInvariant, v.front().field, v.front().message);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(ScenarioError::Kind::kSyntax, "", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

/// Sets a dotted path ("parameters.k_smc", "schedule[0].q_p_ref") in a
/// document to a number and returns the edited text.
inline std::string override_document(std::string_view text, const std::string& path, double value) {
  using io_detail::json;
  json doc = io_detail::parse_document_text(text);
  json* node = &doc;
  std::string_view rest = path;
  while (!rest.empty()) {
    const auto dot = rest.find('.');
    std::string_view part = rest.substr(0, dot);
    rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
    std::optional<std::size_t> index;
    if (auto br = part.find('['); br != std::string_view::npos && part.back() == ']') {
      std::size_t idx = 0;
      const auto digits = part.substr(br + 1, part.size() - br - 2);
      if (std::from_chars(digits.data(), digits.data() + digits.size(), idx).ec != std::errc{}) {
        throw ScenarioError(ScenarioError::Kind::kSyntax, path, "bad index");
      }
      index = idx;
      part = part.substr(0, br);
    }
    node = &(*node)[std::string(part)];
    if (index) {
      if (!node->is_array() || *index >= node->size()) {
        throw ScenarioError(ScenarioError::Kind::kInvariant, path, "index out of range");
      }
      node = &(*node)[*index];
    }
  }
  *node = value;
  return doc.dump(2);
}

// -- trajectory CSV -----------------------------------------------------------

inline const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = {
      "t",       "M_s",      "M_fl",   "C",        "rho_mix", "V",       "C_n",     "H_static",
      "q_p",     "q_p_alg",  "q_p_ref", "q_p_cmd", "e_q",     "xi_eq",   "s_q",     "sigma_C",
      "H_eq",    "H0s",      "H0",     "f_s",      "f_liq",   "f_in",    "f_fl",    "k_ch",
      "gamma_K", "gamma_dot", "tau",   "Phi_v",    "P_h",     "P_useful", "P_elec", "eta_h",
      "E_h",     "E_useful", "E_elec", "V_lyap",   "dVdt",    "protection_mask"};
  return cols;
}

inline std::string format_number(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

inline void write_trajectory(const Trajectory& traj, std::ostream& out) {
  const auto& cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : traj.records) {
    const auto& x = r.state;
    const auto& m = r.snap;
    const auto& u = r.inputs;
    const double row[] = {r.t,       x.M_s,      x.M_fl,    m.C,       m.rho_mix,  m.V,        m.C_n,
                          m.H_static, x.q_p,     m.q_p_alg, u.q_p_ref, x.q_p_cmd,  m.e_q,      x.xi_eq,
                          m.s_q,     m.sigma_C,  m.H_eq,    m.H0s,     x.H0,       m.f_s,      m.f_liq,
                          u.f_in,    u.f_fl,     u.k_ch,    u.gamma_K, m.gamma_dot, m.tau,     m.Phi_v,
                          m.P_h,     m.P_useful, m.P_elec,  m.eta_h,   x.E_h,      x.E_useful, x.E_elec,
                          m.V_lyap,  r.dVdt};
    for (double v : row) out << format_number(v) << ',';
    out << r.protection_mask << '\n';
  }
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream ss;
  write_trajectory(traj, ss);
  return ss.str();
}

inline void write_trajectory(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_trajectory(traj, out);
  if (!out) throw Error("write failed for " + path);
}

/// Parsed numeric CSV table (header + rows).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::size_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error("no column " + std::string(name));
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(in, line)) throw Error("empty CSV");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) throw Error("CSV row width mismatch");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc{} || res.ptr != c.data() + c.size()) throw Error("bad CSV number: " + c);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Re-serializes a parsed table with the writer's number format.
inline std::string write_csv(const CsvTable& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  return out.str();
}

inline void write_manifold(const ManifoldGrid& g, std::ostream& out) {
  out << "e_q,xi_eq,s_q\n";
  for (std::size_t r = 0; r < g.xi.size(); ++r) {
    for (std::size_t c = 0; c < g.e.size(); ++c) {
      out << format_number(g.e[c]) << ',' << format_number(g.xi[r]) << ',' << format_number(g.at(r, c))
          << '\n';
    }
  }
}

}  // namespace digester
