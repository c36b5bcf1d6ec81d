#include "armsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace armsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ScenarioError("scenario: " + message);
}

void reject_unknown_fields(const json& object, const std::string& section,
                           std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (item.key() == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail("unknown field '" + item.key() + "' in " + section);
    }
  }
}

double get_number(const json& object, const std::string& path) {
  if (!object.is_number()) {
    fail(path + ": expected a number");
  }
  return object.get<double>();
}

Eigen::VectorXd get_vector(const json& object, const std::string& path,
                           int expected = -1) {
  if (!object.is_array()) {
    fail(path + ": expected an array of numbers");
  }
  Eigen::VectorXd v(object.size());
  for (std::size_t i = 0; i < object.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        get_number(object[i], path + "[" + std::to_string(i) + "]");
  }
  if (expected >= 0 && v.size() != expected) {
    fail(path + ": expected " + std::to_string(expected) + " entries");
  }
  return v;
}

Eigen::Vector3d get_vector3(const json& object, const std::string& path) {
  return get_vector(object, path, 3);
}

Eigen::Matrix3d get_matrix3(const json& object, const std::string& path) {
  if (!object.is_array() || object.size() != 3) {
    fail(path + ": expected a 3x3 array");
  }
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    m.row(r) = get_vector3(object[static_cast<std::size_t>(r)],
                           path + "[" + std::to_string(r) + "]")
                   .transpose();
  }
  return m;
}

RobotModel parse_inline_model(const json& node, double length_scale) {
  reject_unknown_fields(node, "model", {"name", "gravity", "links"});
  RobotModel model;
  if (node.contains("name")) {
    if (!node["name"].is_string()) {
      fail("model.name: expected a string");
    }
    model.name = node["name"].get<std::string>();
  }
  if (node.contains("gravity")) {
    model.gravity = get_vector3(node["gravity"], "model.gravity");
  }
  if (!node.contains("links")) {
    fail("model.links: required for an inline model");
  }
  if (!node["links"].is_array() || node["links"].empty()) {
    fail("model.links: expected a non-empty array");
  }

  const double inertia_scale = length_scale * length_scale;
  for (std::size_t i = 0; i < node["links"].size(); ++i) {
    const json& link_node = node["links"][i];
    const std::string path = "model.links[" + std::to_string(i) + "]";
    if (!link_node.is_object()) {
      fail(path + ": expected an object");
    }
    reject_unknown_fields(link_node, path,
                          {"a", "alpha", "d", "theta_offset", "mass", "com",
                           "inertia"});
    LinkParams link;
    if (link_node.contains("a")) {
      link.a = get_number(link_node["a"], path + ".a") * length_scale;
    }
    if (link_node.contains("alpha")) {
      link.alpha = get_number(link_node["alpha"], path + ".alpha");
    }
    if (link_node.contains("d")) {
      link.d = get_number(link_node["d"], path + ".d") * length_scale;
    }
    if (link_node.contains("theta_offset")) {
      link.theta_offset =
          get_number(link_node["theta_offset"], path + ".theta_offset");
    }
    if (!link_node.contains("mass")) {
      fail(path + ".mass: required");
    }
    link.mass = get_number(link_node["mass"], path + ".mass");
    if (link_node.contains("com")) {
      link.com = get_vector3(link_node["com"], path + ".com") * length_scale;
    }
    if (link_node.contains("inertia")) {
      link.inertia =
          get_matrix3(link_node["inertia"], path + ".inertia") * inertia_scale;
    }
    model.links.push_back(link);
  }
  return model;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json array = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    array.push_back(v(i));
  }
  return array;
}

json matrix_to_json(const Eigen::Matrix3d& m) {
  json array = json::array();
  for (int r = 0; r < 3; ++r) {
    array.push_back(vector_to_json(m.row(r).transpose()));
  }
  return array;
}

}  // namespace

ScenarioConfig default_scenario() {
  constexpr double pi = std::numbers::pi;
  ScenarioConfig cfg;
  cfg.start_q = Eigen::Vector3d::Zero();
  cfg.end_q = Eigen::Vector3d(pi / 2.0, pi / 4.0, -pi / 3.0);
  cfg.trajectory_duration = 2.0;
  cfg.sim.dt = 1e-3;
  cfg.sim.duration = 3.0;
  cfg.sim.control_period = 1e-3;
  cfg.sim.initial_state = {cfg.start_q, Eigen::Vector3d::Zero()};
  return cfg;
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object()) {
    fail("top level must be an object");
  }
  reject_unknown_fields(root, "scenario",
                        {"schema_version", "model", "units", "trajectory",
                         "gains", "sim", "payload_mass"});

  ScenarioConfig cfg = default_scenario();

  if (root.contains("schema_version")) {
    if (!root["schema_version"].is_number_integer()) {
      fail("schema_version: expected an integer");
    }
    cfg.schema_version = root["schema_version"].get<int>();
    if (cfg.schema_version != 1) {
      fail("schema_version: unsupported version " +
           std::to_string(cfg.schema_version));
    }
  }

  double length_scale = 1.0;
  if (root.contains("units")) {
    if (!root["units"].is_string()) {
      fail("units: expected \"m\" or \"mm\"");
    }
    const std::string units = root["units"].get<std::string>();
    if (units == "mm") {
      length_scale = 1e-3;
    } else if (units != "m") {
      fail("units: expected \"m\" or \"mm\", got \"" + units + "\"");
    }
  }

  if (root.contains("model")) {
    const json& node = root["model"];
    if (node.is_string()) {
      if (node.get<std::string>() != "default_rrr") {
        fail("model: unknown preset \"" + node.get<std::string>() + "\"");
      }
      cfg.uses_default_model = true;
      cfg.model = default_rrr_model();
    } else if (node.is_object()) {
      cfg.uses_default_model = false;
      cfg.model = parse_inline_model(node, length_scale);
    } else {
      fail("model: expected \"default_rrr\" or an inline model object");
    }
  }
  const auto violations = validate_model(cfg.model);
  if (!violations.empty()) {
    std::string joined;
    for (const auto& v : violations) {
      joined += (joined.empty() ? "" : "; ") + v;
    }
    fail("model: " + joined);
  }
  const int n = cfg.model.dof();

  if (root.contains("trajectory")) {
    const json& node = root["trajectory"];
    if (!node.is_object()) {
      fail("trajectory: expected an object");
    }
    reject_unknown_fields(node, "trajectory", {"type", "start_q", "end_q", "T"});
    if (node.contains("type")) {
      if (!node["type"].is_string() ||
          node["type"].get<std::string>() != "quintic") {
        fail("trajectory.type: only \"quintic\" is supported");
      }
    }
    if (!node.contains("start_q") || !node.contains("end_q") ||
        !node.contains("T")) {
      fail("trajectory: start_q, end_q and T are required");
    }
    cfg.start_q = get_vector(node["start_q"], "trajectory.start_q", n);
    cfg.end_q = get_vector(node["end_q"], "trajectory.end_q", n);
    cfg.trajectory_duration = get_number(node["T"], "trajectory.T");
    if (!(cfg.trajectory_duration > 0.0)) {
      fail("trajectory.T: must be > 0");
    }
  } else if (n != 3) {
    fail("trajectory: required when the model is not the default 3R arm");
  }

  if (root.contains("gains")) {
    const json& node = root["gains"];
    if (!node.is_object()) {
      fail("gains: expected an object");
    }
    reject_unknown_fields(node, "gains", {"kp", "kv"});
    if (!node.contains("kp") || !node.contains("kv")) {
      fail("gains: both kp and kv are required");
    }
    const Eigen::VectorXd kp = get_vector(node["kp"], "gains.kp", n);
    const Eigen::VectorXd kv = get_vector(node["kv"], "gains.kv", n);
    if ((kp.array() <= 0.0).any()) {
      fail("gains.kp: entries must be > 0");
    }
    if ((kv.array() <= 0.0).any()) {
      fail("gains.kv: entries must be > 0");
    }
    cfg.gains = ControllerGains(kp, kv);
  } else {
    cfg.gains = ControllerGains::critically_damped(n);
  }

  // Defaults that depend on the trajectory.
  cfg.sim.initial_state = {cfg.start_q, Eigen::VectorXd::Zero(n)};
  if (root.contains("sim")) {
    const json& node = root["sim"];
    if (!node.is_object()) {
      fail("sim: expected an object");
    }
    reject_unknown_fields(
        node, "sim", {"dt", "duration", "control_period", "initial_q",
                      "initial_qd"});
    if (node.contains("dt")) {
      cfg.sim.dt = get_number(node["dt"], "sim.dt");
      cfg.sim.control_period = cfg.sim.dt;
    }
    if (node.contains("duration")) {
      cfg.sim.duration = get_number(node["duration"], "sim.duration");
    }
    if (node.contains("control_period")) {
      cfg.sim.control_period =
          get_number(node["control_period"], "sim.control_period");
    }
    if (node.contains("initial_q")) {
      cfg.sim.initial_state.q = get_vector(node["initial_q"], "sim.initial_q", n);
    }
    if (node.contains("initial_qd")) {
      cfg.sim.initial_state.qd =
          get_vector(node["initial_qd"], "sim.initial_qd", n);
    }
    try {
      validate_config(cfg.sim, n);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  if (root.contains("payload_mass")) {
    cfg.payload_mass = get_number(root["payload_mass"], "payload_mass");
    if (cfg.payload_mass < 0.0) {
      fail("payload_mass: must be >= 0");
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioError("scenario: cannot open '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json root;
  root["schema_version"] = cfg.schema_version;
  root["units"] = "m";
  if (cfg.uses_default_model) {
    root["model"] = "default_rrr";
  } else {
    json model;
    model["name"] = cfg.model.name;
    model["gravity"] = vector_to_json(cfg.model.gravity);
    json links = json::array();
    for (const LinkParams& link : cfg.model.links) {
      json entry;
      entry["a"] = link.a;
      entry["alpha"] = link.alpha;
      entry["d"] = link.d;
      entry["theta_offset"] = link.theta_offset;
      entry["mass"] = link.mass;
      entry["com"] = vector_to_json(link.com);
      entry["inertia"] = matrix_to_json(link.inertia);
      links.push_back(entry);
    }
    model["links"] = links;
    root["model"] = model;
  }
  root["trajectory"] = {{"type", cfg.trajectory_type},
                        {"start_q", vector_to_json(cfg.start_q)},
                        {"end_q", vector_to_json(cfg.end_q)},
                        {"T", cfg.trajectory_duration}};
  root["gains"] = {{"kp", vector_to_json(cfg.gains.kp())},
                   {"kv", vector_to_json(cfg.gains.kv())}};
  root["sim"] = {{"dt", cfg.sim.dt},
                 {"duration", cfg.sim.duration},
                 {"control_period", cfg.sim.control_period},
                 {"initial_q", vector_to_json(cfg.sim.initial_state.q)},
                 {"initial_qd", vector_to_json(cfg.sim.initial_state.qd)}};
  root["payload_mass"] = cfg.payload_mass;
  return root.dump(2) + "\n";
}

void write_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ScenarioError("scenario: cannot write '" + path + "'");
  }
  out << scenario_to_json(cfg);
}

QuinticTrajectory make_trajectory(const ScenarioConfig& cfg) {
  return QuinticTrajectory::plan(cfg.start_q, cfg.end_q,
                                 cfg.trajectory_duration);
}

RobotModel plant_model(const ScenarioConfig& cfg) {
  return apply_model_mismatch(cfg.model, cfg.payload_mass);
}

SimLog simulate_scenario(const ScenarioConfig& cfg) {
  return run_simulation(plant_model(cfg), cfg.model, make_trajectory(cfg),
                        cfg.gains, cfg.sim);
}

namespace {

void append_value(std::string& out, double value) {
  char buffer[40];
  // 17 significant digits: doubles survive the text round trip exactly.
  std::snprintf(buffer, sizeof(buffer), "%.16e", value);
  out += buffer;
}

void append_group(std::string& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += ',';
    append_value(out, v(i));
  }
}

}  // namespace

std::string log_to_csv(const SimLog& log) {
  const int n = log.dof;
  std::string out;
  out += "t";
  const char* groups[] = {"q",      "qd",     "qdd", "tau", "q_ref",
                          "qd_ref", "qdd_ref", "e"};
  for (const char* group : groups) {
    for (int j = 1; j <= n; ++j) {
      out += ',';
      out += group;
      out += std::to_string(j);
    }
  }
  out += ",energy\n";

  for (std::size_t row = 0; row < log.rows(); ++row) {
    append_value(out, log.t[row]);
    append_group(out, log.q[row]);
    append_group(out, log.qd[row]);
    append_group(out, log.qdd[row]);
    append_group(out, log.tau[row]);
    append_group(out, log.q_ref[row]);
    append_group(out, log.qd_ref[row]);
    append_group(out, log.qdd_ref[row]);
    append_group(out, log.error[row]);
    out += ',';
    append_value(out, log.energy[row]);
    out += '\n';
  }
  return out;
}

void write_log_csv(const SimLog& log, std::ostream& out) {
  out << log_to_csv(log);
}

void write_log_csv(const SimLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ScenarioError("log: cannot write '" + path + "'");
  }
  write_log_csv(log, out);
}

SimLog read_log_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw ScenarioError("log: empty CSV");
  }
  std::size_t columns = 1;
  for (char c : header) {
    if (c == ',') {
      ++columns;
    }
  }
  if (columns < 10 || (columns - 2) % 8 != 0) {
    throw ScenarioError("log: unexpected column count " +
                        std::to_string(columns));
  }
  const int n = static_cast<int>((columns - 2) / 8);

  SimLog log;
  log.dof = n;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> values;
    values.reserve(columns);
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      values.push_back(std::stod(field));
    }
    if (values.size() != columns) {
      throw ScenarioError("log: ragged CSV row");
    }
    auto take = [&values, n](std::size_t offset) {
      return Eigen::Map<const Eigen::VectorXd>(values.data() + offset, n);
    };
    log.t.push_back(values[0]);
    std::size_t offset = 1;
    for (auto* dest : {&log.q, &log.qd, &log.qdd, &log.tau, &log.q_ref,
                       &log.qd_ref, &log.qdd_ref, &log.error}) {
      dest->push_back(take(offset));
      offset += static_cast<std::size_t>(n);
    }
    log.energy.push_back(values[offset]);
  }
  return log;
}

}  // namespace armsim
