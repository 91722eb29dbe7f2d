#pragma once

// JSON fixtures and scenarios, and text/CSV rendering of results.

#include "ptampc/analysis.hpp"
#include "ptampc/controller.hpp"
#include "ptampc/model.hpp"
#include "ptampc/optimizer.hpp"
#include "ptampc/simulation.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptampc::io {

using json = nlohmann::ordered_json;

enum class LoadErrorKind { Parse, Schema, Validation };

class LoadError : public std::runtime_error {
 public:
  LoadError(LoadErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  LoadErrorKind kind() const noexcept { return kind_; }

  int exit_code() const noexcept {
    switch (kind_) {
      case LoadErrorKind::Parse: return 3;
      case LoadErrorKind::Schema: return 4;
      case LoadErrorKind::Validation: return 5;
    }
    return 1;
  }

 private:
  LoadErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& msg) {
  throw LoadError(LoadErrorKind::Schema, "schema error at " + where + ": " + msg);
}

inline void only_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema_error(where + "/" + key, "unknown field '" + key + "'");
    }
  }
}

inline const json& required(const json& obj, const std::string& where, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, "missing field '" + key + "'");
  return *it;
}

inline std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) schema_error(where, "expected a string");
  return v.get<std::string>();
}

inline Rational as_rational(const json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    schema_error(where, e.what());
  }
  schema_error(where, "expected a number");
}

inline json rational_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return to_exact_string(r);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadErrorKind::Parse, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw LoadError(LoadErrorKind::Parse,
                    "parse error in " + source + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

inline std::vector<StateId> id_list(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array");
  std::vector<StateId> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(as_string(v[i], where + "/" + std::to_string(i)));
  return out;
}

}  // namespace detail

// Schema checks only; call validate() for model invariants.
inline Automaton automaton_from_json(const json& doc) {
  using namespace detail;
  only_keys(doc, "", {"states", "edges", "initial", "desired_sequence", "clocks"});

  const auto& jstates = required(doc, "", "states");
  if (!jstates.is_array()) schema_error("/states", "expected an array");
  std::vector<State> states;
  for (std::size_t i = 0; i < jstates.size(); ++i) {
    const std::string where = "/states/" + std::to_string(i);
    const auto& js = jstates[i];
    only_keys(js, where, {"id", "cost", "risk_factor", "location", "failed"});
    State s;
    s.id = StateId(as_string(required(js, where, "id"), where + "/id"));
    if (js.contains("cost")) s.cost = as_rational(js["cost"], where + "/cost");
    if (js.contains("risk_factor")) s.risk_factor = as_rational(js["risk_factor"], where + "/risk_factor");
    if (js.contains("location")) s.location = as_string(js["location"], where + "/location");
    if (js.contains("failed")) {
      if (!js["failed"].is_boolean()) schema_error(where + "/failed", "expected a boolean");
      s.failed = js["failed"].get<bool>();
    }
    states.push_back(std::move(s));
  }

  const auto& jedges = required(doc, "", "edges");
  if (!jedges.is_array()) schema_error("/edges", "expected an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const std::string where = "/edges/" + std::to_string(i);
    const auto& je = jedges[i];
    only_keys(je, where, {"src", "dst", "cost", "kind", "guard", "reset"});
    Edge e;
    e.src = StateId(as_string(required(je, where, "src"), where + "/src"));
    e.dst = StateId(as_string(required(je, where, "dst"), where + "/dst"));
    if (je.contains("cost")) e.cost = as_rational(je["cost"], where + "/cost");
    if (je.contains("kind")) {
      auto kind = as_string(je["kind"], where + "/kind");
      if (kind == "original") e.kind = EdgeKind::Original;
      else if (kind == "redundant") e.kind = EdgeKind::Redundant;
      else schema_error(where + "/kind", "expected 'original' or 'redundant'");
    }
    if (je.contains("guard")) e.guard = as_string(je["guard"], where + "/guard");
    if (je.contains("reset")) e.reset = as_string(je["reset"], where + "/reset");
    edges.push_back(std::move(e));
  }

  StateId initial(as_string(required(doc, "", "initial"), "/initial"));
  auto desired = id_list(required(doc, "", "desired_sequence"), "/desired_sequence");
  std::vector<std::string> clocks;
  if (doc.contains("clocks")) {
    if (!doc["clocks"].is_array()) schema_error("/clocks", "expected an array");
    for (std::size_t i = 0; i < doc["clocks"].size(); ++i) {
      clocks.push_back(as_string(doc["clocks"][i], "/clocks/" + std::to_string(i)));
    }
  }
  return Automaton(std::move(states), std::move(edges), std::move(initial), std::move(desired), std::move(clocks));
}

inline json to_json(const Automaton& a) {
  json doc;
  doc["states"] = json::array();
  for (const auto& s : a.states()) {
    json js{{"id", s.id.value}, {"cost", detail::rational_json(s.cost)},
            {"risk_factor", detail::rational_json(s.risk_factor)}, {"location", s.location}};
    if (s.failed) js["failed"] = true;
    doc["states"].push_back(std::move(js));
  }
  doc["edges"] = json::array();
  for (const auto& e : a.edges()) {
    json je{{"src", e.src.value}, {"dst", e.dst.value}, {"cost", detail::rational_json(e.cost)},
            {"kind", std::string(to_string(e.kind))}};
    if (!e.guard.empty()) je["guard"] = e.guard;
    if (!e.reset.empty()) je["reset"] = e.reset;
    doc["edges"].push_back(std::move(je));
  }
  doc["initial"] = a.initial().value;
  doc["desired_sequence"] = json::array();
  for (const auto& d : a.desired_sequence()) doc["desired_sequence"].push_back(d.value);
  doc["clocks"] = a.clocks();
  return doc;
}

inline std::string save_fixture_string(const Automaton& a) { return to_json(a).dump(2) + "\n"; }

inline Automaton parse_fixture(const std::string& text, const std::string& source = "<memory>") {
  auto a = automaton_from_json(detail::parse_text(text, source));
  if (auto report = validate(a); !report.empty()) {
    std::string msg = "invalid fixture " + source + ":";
    for (const auto& v : report) msg += "\n  " + v.element + ": " + v.message;
    throw LoadError(LoadErrorKind::Validation, msg);
  }
  try {
    (void)partition(a);
  } catch (const PtaError& e) {
    throw LoadError(LoadErrorKind::Validation, "invalid fixture " + source + ": " + e.what());
  }
  return a;
}

// Lookup order: the path itself, base_dir/path, then every directory of
// PTAMPC_FIXTURE_PATH (colon separated), then the bundled data directory.
// Bare names also try a ".json" suffix.
inline std::filesystem::path resolve(const std::string& name, const std::filesystem::path& base_dir = {}) {
  namespace fs = std::filesystem;
  std::vector<fs::path> dirs;
  if (!base_dir.empty()) dirs.push_back(base_dir);
  if (const char* env = std::getenv("PTAMPC_FIXTURE_PATH")) {
    std::string_view rest(env);
    while (!rest.empty()) {
      auto colon = rest.find(':');
      auto dir = rest.substr(0, colon);
      if (!dir.empty()) dirs.emplace_back(std::string(dir));
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
  }
#ifdef PTAMPC_DATA_DIR
  dirs.emplace_back(PTAMPC_DATA_DIR);
#endif
  std::vector<fs::path> candidates{fs::path(name)};
  for (const auto& d : dirs) {
    candidates.push_back(d / name);
    candidates.push_back(d / (name + ".json"));
  }
  for (const auto& c : candidates) {
    std::error_code ec;
    if (fs::is_regular_file(c, ec)) return c;
  }
  throw LoadError(LoadErrorKind::Parse, "cannot find fixture or scenario '" + name + "'");
}

inline Automaton load_fixture(const std::string& name_or_path) {
  auto path = resolve(name_or_path);
  return parse_fixture(detail::read_file(path), path.string());
}

inline std::string condition_type(const TriggerCondition& c) {
  switch (c.index()) {
    case 0: return "at_start";
    case 1: return "after_exit";
    case 2: return "after_entry";
    default: return "window";
  }
}

inline Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  only_keys(doc, "", {"name", "fixture", "beta", "controllers", "failures"});
  Scenario s;
  s.name = as_string(required(doc, "", "name"), "/name");

  const auto& jf = required(doc, "", "fixture");
  if (jf.is_string()) {
    auto path = resolve(jf.get<std::string>(), base_dir);
    s.fixture = parse_fixture(read_file(path), path.string());
  } else if (jf.is_object()) {
    s.fixture = parse_fixture(jf.dump(), "/fixture");
  } else {
    schema_error("/fixture", "expected a fixture name, path or object");
  }

  s.beta = as_rational(required(doc, "", "beta"), "/beta");

  const auto& jc = required(doc, "", "controllers");
  if (!jc.is_array()) schema_error("/controllers", "expected an array");
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const std::string where = "/controllers/" + std::to_string(i);
    auto kind = parse_controller(as_string(jc[i], where));
    if (!kind) schema_error(where, "expected 'plain', 'cb' or 'pcm'");
    s.controllers.push_back(*kind);
  }

  if (doc.contains("failures")) {
    const auto& jfail = doc["failures"];
    if (!jfail.is_array()) schema_error("/failures", "expected an array");
    for (std::size_t i = 0; i < jfail.size(); ++i) {
      const std::string where = "/failures/" + std::to_string(i);
      only_keys(jfail[i], where, {"target", "when"});
      FailureTrigger t;
      t.target = StateId(as_string(required(jfail[i], where, "target"), where + "/target"));
      const auto& jw = required(jfail[i], where, "when");
      const std::string wwhere = where + "/when";
      auto type = as_string(required(jw, wwhere, "type"), wwhere + "/type");
      if (type == "at_start") {
        only_keys(jw, wwhere, {"type"});
        t.condition = when::AtStart{};
      } else if (type == "after_exit" || type == "after_entry") {
        only_keys(jw, wwhere, {"type", "state"});
        StateId ref(as_string(required(jw, wwhere, "state"), wwhere + "/state"));
        if (type == "after_exit") t.condition = when::AfterExit{ref};
        else t.condition = when::AfterEntry{ref};
      } else if (type == "window") {
        only_keys(jw, wwhere, {"type", "after_exit", "before_entry"});
        t.condition = when::Window{StateId(as_string(required(jw, wwhere, "after_exit"), wwhere + "/after_exit")),
                                   StateId(as_string(required(jw, wwhere, "before_entry"), wwhere + "/before_entry"))};
      } else {
        schema_error(wwhere + "/type", "unknown trigger type '" + type + "'");
      }
      s.schedule.push_back(std::move(t));
    }
  }

  if (auto report = validate_scenario(s); !report.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& v : report) msg += "\n  " + v.element + ": " + v.message;
    throw LoadError(LoadErrorKind::Validation, msg);
  }
  return s;
}

inline Scenario load_scenario(const std::string& name_or_path) {
  auto path = resolve(name_or_path);
  auto doc = detail::parse_text(detail::read_file(path), path.string());
  return scenario_from_json(doc, path.parent_path());
}

// ---- rendering -------------------------------------------------------------

inline std::string ids_of(const std::set<StateId>& ids, std::string_view sep) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id.value;
  }
  return out;
}

inline std::string format_profile(const PathRiskProfile& p) {
  std::ostringstream os;
  auto row = [&](std::string_view key, const std::string& value) {
    os << std::left << std::setw(24) << key << value << "\n";
  };
  row("path", join(p.path));
  row("length", std::to_string(p.length));
  row("branch_states", "{" + ids_of(p.branch_states, ",") + "}");
  row("gamma_centrality", std::to_string(p.gamma_centrality));
  std::string csps;
  for (const auto& seg : p.csp_list) {
    if (!csps.empty()) csps += " ";
    csps += "<" + join(seg.states) + ">:" + std::to_string(seg.length());
  }
  row("csp_list", csps.empty() ? "-" : csps);
  row("csp_count", std::to_string(p.csp_count));
  row("csp_total_length", std::to_string(p.csp_total_length));
  row("active_redundant_count", std::to_string(p.active_redundant_count));
  row("kappa", to_exact_string(p.kappa) + " (" + to_display_string(p.kappa) + ")");
  return os.str();
}

inline json profile_to_json(const PathRiskProfile& p) {
  json j;
  j["path"] = json::array();
  for (const auto& s : p.path) j["path"].push_back(s.value);
  j["length"] = p.length;
  j["branch_states"] = json::array();
  for (const auto& s : p.branch_states) j["branch_states"].push_back(s.value);
  j["gamma_centrality"] = p.gamma_centrality;
  j["csp_list"] = json::array();
  for (const auto& seg : p.csp_list) {
    json js;
    js["states"] = json::array();
    for (const auto& s : seg.states) js["states"].push_back(s.value);
    js["length"] = seg.length();
    j["csp_list"].push_back(std::move(js));
  }
  j["csp_count"] = p.csp_count;
  j["csp_total_length"] = p.csp_total_length;
  j["active_redundant_count"] = p.active_redundant_count;
  j["kappa"] = to_exact_string(p.kappa);
  return j;
}

inline std::string format_plan(const Plan& plan) {
  std::ostringstream os;
  os << "controller  " << to_string(plan.controller) << "\n"
     << "path        " << join(plan.path) << "\n"
     << "V           " << to_display_string(plan.objective_value) << " (" << to_exact_string(plan.objective_value)
     << ")\n"
     << "kappa       " << to_display_string(plan.kappa) << " (" << to_exact_string(plan.kappa) << ")\n"
     << "cost        " << to_display_string(plan.cost_sum) << "\n";
  return os.str();
}

enum class ReportFormat { Text, Csv };

inline std::string action_text(const TraceAction& a) {
  switch (a.kind) {
    case TraceAction::Kind::Move: return "move:" + a.next->value;
    case TraceAction::Kind::Unsat: return "unsat";
    case TraceAction::Kind::Finished: return "finished";
  }
  return "";
}

inline std::string emit_comparison(const ComparisonReport& report, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "tick,controller,current,action,planned_V,fired_failures\n";
    for (const auto& r : report.runs) {
      for (const auto& rec : r.trace) {
        os << rec.tick << ',' << to_string(rec.controller) << ',' << rec.current.value << ',' << action_text(rec.action)
           << ',' << (rec.planned_V ? to_display_string(*rec.planned_V) : "") << ','
           << ids_of(rec.fired_failures, ";") << '\n';
      }
    }
    return os.str();
  }

  os << "scenario: " << report.scenario << "\n";
  os << std::left << std::setw(12) << "controller" << std::setw(22) << "status" << std::setw(10) << "V"
     << "path\n";
  for (const auto& r : report.runs) {
    std::string status = "finished";
    std::string v = "-";
    if (r.status == RunStatus::Unsat) {
      status = "UNSAT@" + r.unsat_at->state.value + " (t=" + std::to_string(r.unsat_at->tick) + ")";
    } else {
      v = to_display_string(*r.reported_V);
    }
    os << std::left << std::setw(12) << to_string(r.controller) << std::setw(22) << status << std::setw(10) << v
       << join(r.executed) << "\n";
  }
  os << "winner: " << (report.winner ? std::string(to_string(*report.winner)) : std::string("none")) << "\n";
  return os.str();
}

}  // namespace ptampc::io
