#include <fstream>
#include <sstream>

#include "nav2d/io/io.hpp"

namespace nav2d::io {

using geom::Point2;

namespace {

// Minimal SVG writer; y axis flipped so plots read like the figures.
class SvgCanvas {
 public:
  SvgCanvas(const geom::BoundingBox& box, double margin) {
    min_ = box.min - Point2{margin, margin};
    max_ = box.max + Point2{margin, margin};
    scale_ = 800.0 / std::max(max_.x - min_.x, 1e-6);
    width_ = (max_.x - min_.x) * scale_;
    height_ = (max_.y - min_.y) * scale_;
  }

  double tx(double x) const { return (x - min_.x) * scale_; }
  double ty(double y) const { return height_ - (y - min_.y) * scale_; }
  double ts(double d) const { return d * scale_; }

  void polygon(const geom::Polygon2& poly, const std::string& style) {
    body_ << "<polygon points=\"";
    for (const Point2& v : poly.vertices()) body_ << tx(v.x) << "," << ty(v.y) << " ";
    body_ << "\" style=\"" << style << "\"/>\n";
  }

  void polyline(const std::vector<Point2>& pts, const std::string& style) {
    if (pts.size() < 2) return;
    body_ << "<polyline points=\"";
    for (const Point2& p : pts) body_ << tx(p.x) << "," << ty(p.y) << " ";
    body_ << "\" style=\"fill:none;" << style << "\"/>\n";
  }

  void circle(const Point2& c, double r, const std::string& style) {
    body_ << "<circle cx=\"" << tx(c.x) << "\" cy=\"" << ty(c.y) << "\" r=\"" << ts(r)
          << "\" style=\"" << style << "\"/>\n";
  }

  void star(const Point2& c, double r, const std::string& fill) {
    body_ << "<path d=\"";
    for (int i = 0; i < 10; ++i) {
      const double ang = M_PI / 2 + i * M_PI / 5;
      const double rad = (i % 2 == 0) ? r : 0.4 * r;
      const Point2 p{c.x + rad * std::cos(ang), c.y + rad * std::sin(ang)};
      body_ << (i == 0 ? "M" : "L") << tx(p.x) << " " << ty(p.y) << " ";
    }
    body_ << "Z\" style=\"fill:" << fill << ";stroke:black;stroke-width:0.5\"/>\n";
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open svg file for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
        << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
  }

 private:
  Point2 min_, max_;
  double scale_ = 1.0;
  double width_ = 0.0, height_ = 0.0;
  std::ostringstream body_;
};

std::vector<Point2> offset_polyline(const std::vector<Point2>& pts, double offset) {
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 prev = pts[i == 0 ? 0 : i - 1];
    const Point2 next = pts[std::min(i + 1, pts.size() - 1)];
    const Point2 dir = (next - prev).normalized();
    if (dir.norm() < 0.5) {
      out.push_back(pts[i]);
    } else {
      out.push_back(pts[i] + dir.perp() * offset);
    }
  }
  return out;
}

}  // namespace

void write_run_svg(const sim::Scenario& scenario, const std::vector<sim::RunResult>& runs,
                   const std::string& path) {
  geom::BoundingBox box;
  if (scenario.workspace.kind == sim::WorkspaceSpec::Kind::Fixed &&
      scenario.workspace.fixed.is_polygon()) {
    for (const Point2& v : scenario.workspace.fixed.poly().vertices()) box.expand(v);
  }
  for (const auto& r : scenario.regions) {
    for (const Point2& v : r.workspace.vertices()) box.expand(v);
  }
  for (const auto& run : runs) {
    for (const auto& rec : run.trace) box.expand(rec.state.position());
  }
  for (const auto& script : scenario.obstacles) {
    for (const Point2& v : script.shape.polygon.vertices()) box.expand(v);
  }
  if (!scenario.path.empty()) {
    for (const Point2& p : scenario.path.points()) box.expand(p);
  }
  if (box.min.x > box.max.x) box = {{-1, -1}, {1, 1}};

  SvgCanvas canvas(box, 0.8);

  // Workspace boundary (dashed blue).
  if (scenario.workspace.kind == sim::WorkspaceSpec::Kind::Fixed &&
      scenario.workspace.fixed.is_polygon()) {
    canvas.polygon(scenario.workspace.fixed.poly(),
                   "fill:none;stroke:#4466cc;stroke-width:1.2;stroke-dasharray:6 4");
  }
  for (const auto& r : scenario.regions) {
    canvas.polygon(r.workspace,
                   "fill:none;stroke:#4466cc;stroke-width:1.0;stroke-dasharray:6 4");
    canvas.star(r.goal, 0.12, "#ddcc33");
  }

  // Obstacles at their final drawn pose (grey).
  const double t_final = runs.empty() || runs.front().trace.empty()
                             ? 0.0
                             : runs.front().trace.back().time;
  for (const auto& script : scenario.obstacles) {
    if (!script.active_at(t_final)) continue;
    canvas.polygon(script.shape.polygon_at(script.motion.offset_at(t_final)),
                   "fill:#999999;fill-opacity:0.75;stroke:#555555;stroke-width:0.6");
  }

  // Reference path (cyan).
  if (!scenario.path.empty()) {
    canvas.polyline(scenario.path.points(), "stroke:#22aaaa;stroke-width:1.2");
  }

  for (const auto& run : runs) {
    // Final RHRP snapshot (green) with its rho-tunnel (dashed red).
    const sim::TraceRecord* last_sample = nullptr;
    for (auto it = run.trace.rbegin(); it != run.trace.rend(); ++it) {
      if (it->control_sample && it->rhrp_points.size() >= 2) {
        last_sample = &*it;
        break;
      }
    }
    if (last_sample != nullptr) {
      canvas.polyline(last_sample->rhrp_points, "stroke:#22aa22;stroke-width:1.4");
      canvas.polyline(offset_polyline(last_sample->rhrp_points, last_sample->rho),
                      "stroke:#cc3333;stroke-width:0.8;stroke-dasharray:4 3");
      canvas.polyline(offset_polyline(last_sample->rhrp_points, -last_sample->rho),
                      "stroke:#cc3333;stroke-width:0.8;stroke-dasharray:4 3");
    }
    // Travelled path (dashed black) and endpoints.
    std::vector<Point2> travelled;
    travelled.reserve(run.trace.size());
    for (const auto& rec : run.trace) travelled.push_back(rec.state.position());
    canvas.polyline(travelled, "stroke:black;stroke-width:1.2;stroke-dasharray:5 4");
    if (!travelled.empty()) {
      canvas.circle(travelled.front(), 0.06, "fill:black");
    }
  }

  if (scenario.task == sim::TaskKind::Setpoint) {
    canvas.star(scenario.goal, 0.15, "#33cc33");
  } else if (scenario.task == sim::TaskKind::PathFollow && !scenario.path.empty()) {
    canvas.star(scenario.path.eval(scenario.path.theta_g()), 0.15, "#33cc33");
  }

  canvas.write(path);
}

}  // namespace nav2d::io
