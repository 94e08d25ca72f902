#include <fstream>

#include <nlohmann/json.hpp>

#include "nav2d/io/io.hpp"

namespace nav2d::io {

using geom::Point2;
using geom::Polygon2;
using nlohmann::json;

namespace {

Point2 point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json point_to(const Point2& p) { return json::array({p.x, p.y}); }

Polygon2 polygon_from(const json& j) {
  std::vector<Point2> verts;
  for (const auto& v : j) verts.push_back(point_from(v));
  return Polygon2(std::move(verts));
}

json polygon_to(const Polygon2& poly) {
  json out = json::array();
  for (const Point2& v : poly.vertices()) out.push_back(point_to(v));
  return out;
}

sim::ShapeSpec shape_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "disk") {
    return sim::ShapeSpec::disk(point_from(j.at("center")), j.at("radius").get<double>());
  }
  if (type == "polygon") {
    return sim::ShapeSpec::from_polygon(polygon_from(j.at("vertices")));
  }
  throw IoError("unknown shape type: " + type);
}

json shape_to(const sim::ShapeSpec& s) {
  if (s.kind == sim::ShapeSpec::Kind::Disk) {
    return {{"type", "disk"}, {"center", point_to(s.center)}, {"radius", s.radius}};
  }
  return {{"type", "polygon"}, {"vertices", polygon_to(s.polygon)}};
}

sim::MotionSpec motion_from(const json& j) {
  sim::MotionSpec m;
  if (j.is_null()) return m;
  const std::string type = j.value("type", "static");
  if (type == "static") {
    m.kind = sim::MotionSpec::Kind::Static;
  } else if (type == "linear") {
    m.kind = sim::MotionSpec::Kind::Linear;
    m.velocity = point_from(j.at("velocity"));
  } else if (type == "waypoints") {
    m.kind = sim::MotionSpec::Kind::Waypoints;
    for (const auto& w : j.at("points")) {
      m.waypoints.emplace_back(w.at(0).get<double>(),
                               Point2{w.at(1).get<double>(), w.at(2).get<double>()});
    }
  } else {
    throw IoError("unknown motion type: " + type);
  }
  return m;
}

json motion_to(const sim::MotionSpec& m) {
  switch (m.kind) {
    case sim::MotionSpec::Kind::Static:
      return {{"type", "static"}};
    case sim::MotionSpec::Kind::Linear:
      return {{"type", "linear"}, {"velocity", point_to(m.velocity)}};
    case sim::MotionSpec::Kind::Waypoints: {
      json pts = json::array();
      for (const auto& [t, p] : m.waypoints) pts.push_back(json::array({t, p.x, p.y}));
      return {{"type", "waypoints"}, {"points", pts}};
    }
  }
  return {{"type", "static"}};
}

}  // namespace

sim::Scenario scenario_from_json(const json& j) {
  const int version = j.value("schema_version", 0);
  if (version != kScenarioSchemaVersion) {
    throw IoError("unsupported scenario schema_version");
  }
  sim::Scenario sc;
  sc.name = j.value("name", "scenario");
  sc.duration = j.value("duration", 60.0);

  const json& ws = j.at("workspace");
  const std::string ws_type = ws.at("type").get<std::string>();
  if (ws_type == "full_plane") {
    sc.workspace.kind = sim::WorkspaceSpec::Kind::FullPlane;
  } else if (ws_type == "disk") {
    sc.workspace.kind = sim::WorkspaceSpec::Kind::Fixed;
    sc.workspace.fixed = geom::Region::disk(point_from(ws.at("center")),
                                            ws.at("radius").get<double>(), geom::ArcFit::Inner);
  } else if (ws_type == "polygon") {
    sc.workspace.kind = sim::WorkspaceSpec::Kind::Fixed;
    sc.workspace.fixed = geom::Region::polygon(polygon_from(ws.at("vertices")));
  } else if (ws_type == "robot_centered") {
    sc.workspace.kind = sim::WorkspaceSpec::Kind::RobotCentered;
    sc.workspace.robot_radius = ws.at("radius").get<double>();
  } else {
    throw IoError("unknown workspace type: " + ws_type);
  }

  for (const auto& jo : j.value("obstacles", json::array())) {
    sim::ObstacleScript script;
    script.shape = shape_from(jo.at("shape"));
    script.motion = motion_from(jo.value("motion", json()));
    script.active_from = jo.value("active_from", 0.0);
    script.active_to = jo.value("active_to", std::numeric_limits<double>::infinity());
    sc.obstacles.push_back(std::move(script));
  }

  const json& task = j.at("task");
  const std::string task_type = task.at("type").get<std::string>();
  if (task_type == "setpoint") {
    sc.task = sim::TaskKind::Setpoint;
    sc.goal = point_from(task.at("goal"));
  } else if (task_type == "path_follow") {
    sc.task = sim::TaskKind::PathFollow;
    const json& pj = task.at("path");
    const std::string path_type = pj.at("type").get<std::string>();
    if (path_type == "waypoints") {
      sc.path_spec.kind = sim::PathSpec::Kind::Waypoints;
      for (const auto& w : pj.at("points")) sc.path_spec.waypoints.push_back(point_from(w));
    } else if (path_type == "infinity") {
      sc.path_spec.kind = sim::PathSpec::Kind::Infinity;
      sc.path_spec.a = pj.value("a", 6.0);
      sc.path_spec.b = pj.value("b", 3.0);
      sc.path_spec.raw_parameter_range = pj.value("parameter_range", 36.5);
    } else {
      throw IoError("unknown path type: " + path_type);
    }
    sc.path = sc.path_spec.build();
  } else if (task_type == "subregion_chain") {
    sc.task = sim::TaskKind::SubregionChain;
    for (const auto& r : task.at("regions")) {
      sc.regions.push_back(
          {polygon_from(r.at("workspace")), point_from(r.at("goal"))});
    }
  } else {
    throw IoError("unknown task type: " + task_type);
  }

  sc.initial_states.clear();
  for (const auto& s : j.at("initial_states")) {
    sc.initial_states.push_back(
        {s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()});
  }
  const std::string controller = j.value("controller", "proposed");
  if (controller == "proposed") {
    sc.controller = sim::ControllerKind::Proposed;
  } else if (controller == "standard-mppfc") {
    sc.controller = sim::ControllerKind::StandardMppfc;
  } else {
    throw IoError("unknown controller: " + controller);
  }
  sc.validate();
  return sc;
}

json scenario_to_json(const sim::Scenario& sc) {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = sc.name;
  j["duration"] = sc.duration;

  switch (sc.workspace.kind) {
    case sim::WorkspaceSpec::Kind::FullPlane:
      j["workspace"] = {{"type", "full_plane"}};
      break;
    case sim::WorkspaceSpec::Kind::Fixed:
      j["workspace"] = {{"type", "polygon"}, {"vertices", polygon_to(sc.workspace.fixed.poly())}};
      break;
    case sim::WorkspaceSpec::Kind::RobotCentered:
      j["workspace"] = {{"type", "robot_centered"}, {"radius", sc.workspace.robot_radius}};
      break;
  }

  json obstacles = json::array();
  for (const auto& script : sc.obstacles) {
    json jo;
    jo["shape"] = shape_to(script.shape);
    jo["motion"] = motion_to(script.motion);
    if (script.active_from > 0.0) jo["active_from"] = script.active_from;
    if (std::isfinite(script.active_to)) jo["active_to"] = script.active_to;
    obstacles.push_back(std::move(jo));
  }
  j["obstacles"] = std::move(obstacles);

  switch (sc.task) {
    case sim::TaskKind::Setpoint:
      j["task"] = {{"type", "setpoint"}, {"goal", point_to(sc.goal)}};
      break;
    case sim::TaskKind::PathFollow: {
      json pj;
      if (sc.path_spec.kind == sim::PathSpec::Kind::Waypoints) {
        json pts = json::array();
        for (const auto& w : sc.path_spec.waypoints) pts.push_back(point_to(w));
        pj = {{"type", "waypoints"}, {"points", pts}};
      } else {
        pj = {{"type", "infinity"},
              {"a", sc.path_spec.a},
              {"b", sc.path_spec.b},
              {"parameter_range", sc.path_spec.raw_parameter_range}};
      }
      j["task"] = {{"type", "path_follow"}, {"path", pj}};
      break;
    }
    case sim::TaskKind::SubregionChain: {
      json regions = json::array();
      for (const auto& r : sc.regions) {
        regions.push_back({{"workspace", polygon_to(r.workspace)}, {"goal", point_to(r.goal)}});
      }
      j["task"] = {{"type", "subregion_chain"}, {"regions", regions}};
      break;
    }
  }

  json states = json::array();
  for (const auto& s : sc.initial_states) states.push_back(json::array({s.x, s.y, s.psi}));
  j["initial_states"] = std::move(states);
  j["controller"] =
      sc.controller == sim::ControllerKind::Proposed ? "proposed" : "standard-mppfc";
  return j;
}

sim::Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("scenario parse error in " + path + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const json::exception& e) {
    throw IoError("scenario field error in " + path + ": " + e.what());
  }
}

}  // namespace nav2d::io
