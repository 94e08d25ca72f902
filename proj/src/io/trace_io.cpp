#include <fstream>

#include <nlohmann/json.hpp>

#include "nav2d/io/io.hpp"

namespace nav2d::io {

using nlohmann::json;

void apply_override(ctl::ControlParams* params, const std::string& key,
                    const std::string& value) {
  auto as_double = [&] {
    try {
      return std::stod(value);
    } catch (...) {
      throw InvalidProblem("override value for " + key + " is not a number");
    }
  };
  if (key == "rho_bar") {
    params->env.rho_bar = as_double();
  } else if (key == "alpha") {
    params->env.alpha = as_double();
    if (!(params->env.alpha > 0.0 && params->env.alpha < 1.0)) {
      throw InvalidProblem("alpha must be in (0, 1)");
    }
  } else if (key == "N") {
    params->mpc.horizon = static_cast<int>(as_double());
  } else if (key == "lambda") {
    params->mpc.lambda = as_double();
  } else if (key == "c_w") {
    params->mpc.c_w = as_double();
  } else if (key == "c_e") {
    params->mpc.c_e = as_double();
  } else if (key == "R_v") {
    params->mpc.input_weight[0] = as_double();
  } else if (key == "R_omega") {
    params->mpc.input_weight[1] = as_double();
  } else if (key == "Rd_v") {
    params->mpc.input_rate_weight[0] = as_double();
  } else if (key == "Rd_omega") {
    params->mpc.input_rate_weight[1] = as_double();
  } else if (key == "L_nom") {
    params->l_nom = as_double();
  } else if (key == "k1") {
    params->sbc.k1 = as_double();
  } else if (key == "k2") {
    params->sbc.k2 = as_double();
  } else if (key == "dt") {
    params->mpc.dt = as_double();
  } else {
    throw InvalidProblem("unknown parameter override: " + key);
  }
  params->validate();
}

void write_trace_jsonl(const std::vector<sim::TraceRecord>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trace file for writing: " + path);
  out << json{{"schema_version", kTraceSchemaVersion}, {"kind", "trace_header"}}.dump()
      << "\n";
  for (const auto& rec : trace) {
    json j{
        {"t", rec.time},
        {"x", {rec.state.x, rec.state.y, rec.state.psi}},
        {"u", {rec.input.v, rec.input.omega}},
        {"mode", rec.mode == ctl::Mode::Mpc ? "mpc" : "sbc"},
        {"rho", rec.rho},
        {"r0", {rec.r0.x, rec.r0.y}},
        {"rg", {rec.rg.x, rec.rg.y}},
        {"r_plus", {rec.r_plus.x, rec.r_plus.y}},
        {"theta", rec.theta},
        {"theta_hat", rec.theta_hat},
        {"clearance", rec.clearance},
        {"mpc_feasible", rec.mpc_feasible},
    };
    if (rec.control_sample) {
      j["control_sample"] = true;
      j["mpc_violation"] = rec.mpc_violation;
      j["mpc_iterations"] = rec.mpc_iterations;
      json pts = json::array();
      for (const auto& p : rec.rhrp_points) pts.push_back(json::array({p.x, p.y}));
      j["rhrp"] = std::move(pts);
    }
    out << j.dump() << "\n";
  }
}

json metrics_to_json(const sim::Metrics& m) {
  return json{
      {"schema_version", kReportSchemaVersion},
      {"converged", m.converged},
      {"time_to_goal", m.time_to_goal},
      {"min_clearance", m.min_clearance},
      {"collision", m.collision},
      {"first_violation_time", m.first_violation_time},
      {"stalled", m.stalled},
      {"stall_time", m.stall_time},
      {"final_theta", m.final_theta},
      {"theta_g", m.theta_g},
      {"final_theta_hat", m.final_theta_hat},
      {"mpc_samples", m.mpc_samples},
      {"sbc_samples", m.sbc_samples},
      {"assumption2_violations", m.assumption2_violations},
      {"supervisor_lost", m.supervisor_lost},
      {"final_distance_to_target", m.final_distance_to_target},
      {"duration", m.duration},
  };
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace nav2d::io
