#include "diskpart/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace diskpart {

using nlohmann::json;

bool GraphDocument::exact() const {
  for (const auto& e : edges)
    if (!e.curvature) return false;
  return true;
}

GraphDocument to_document(const PartitionGraph& g) {
  GraphDocument d;
  for (const auto& v : g.vertices) d.vertices.push_back({v.pos, v.kind});
  for (const auto& e : g.edges) d.edges.push_back({e.v0, e.v1, e.left, e.right, e.arc.h, {}});
  for (const auto& r : g.regions) d.regions.push_back({r.target_area, r.pressure});
  return d;
}

GraphDocument to_document(const DiscreteGraph& g) {
  GraphDocument d;
  for (int v = 0; v < g.vertex_count(); ++v) d.vertices.push_back({g.nodes[v], g.vertex_kinds[v]});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& E = g.edges[e];
    d.edges.push_back({E.chain.front(), E.chain.back(), E.left, E.right, std::nullopt, g.polyline(static_cast<int>(e))});
  }
  for (int r = 0; r < g.region_count(); ++r)
    d.regions.push_back({g.target_area[r], r < static_cast<int>(g.multiplier.size()) ? g.multiplier[r] : 0.0});
  if (!g.template_name.empty()) d.metadata["template"] = g.template_name;
  return d;
}

PartitionGraph to_partition_graph(const GraphDocument& d) {
  if (!d.exact()) throw DocumentError("document has polyline edges");
  PartitionGraph g;
  for (const auto& v : d.vertices) g.add_vertex(v.pos, v.kind);
  for (const auto& e : d.edges)
    g.add_edge({d.vertices[e.v0].pos, d.vertices[e.v1].pos, *e.curvature}, e.v0, e.v1, e.left, e.right);
  for (const auto& r : d.regions) g.regions.push_back({r.area, r.pressure});
  return g;
}

DiscreteGraph to_discrete_graph(const GraphDocument& d, int n_segments) {
  if (d.exact()) {
    DiscreteGraph g = discretize(to_partition_graph(d), n_segments);
    for (std::size_t r = 0; r < d.regions.size(); ++r) g.target_area[r] = d.regions[r].area;
    return g;
  }
  DiscreteGraph g;
  for (const auto& v : d.vertices) {
    g.nodes.push_back(v.pos);
    g.vertex_kinds.push_back(v.kind);
  }
  for (const auto& e : d.edges) {
    if (e.polyline.size() < 2) throw DocumentError("polyline needs at least two points");
    DiscreteGraph::Edge de{{e.v0}, e.left, e.right};
    for (std::size_t k = 1; k + 1 < e.polyline.size(); ++k) {
      de.chain.push_back(static_cast<int>(g.nodes.size()));
      g.nodes.push_back(e.polyline[k]);
    }
    de.chain.push_back(e.v1);
    g.edges.push_back(std::move(de));
  }
  for (const auto& r : d.regions) {
    g.target_area.push_back(r.area);
    g.multiplier.push_back(r.pressure);
  }
  if (d.metadata.contains("template") && d.metadata["template"].is_string()) g.template_name = d.metadata["template"];
  g.trace();
  return g;
}

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

Point json_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw DocumentError("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

int index_field(const json& j, const char* key, std::size_t bound) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw DocumentError(std::string("missing integer field ") + key);
  const int v = j[key].get<int>();
  if (v < 0 || static_cast<std::size_t>(v) >= bound) throw DocumentError(std::string("field out of range: ") + key);
  return v;
}

}  // namespace

json to_json(const GraphDocument& d) {
  json j;
  j["schema_version"] = d.schema_version;
  j["vertices"] = json::array();
  for (const auto& v : d.vertices)
    j["vertices"].push_back({{"pos", point_json(v.pos)}, {"kind", v.kind == VertexKind::Boundary ? "boundary" : "interior"}});
  j["edges"] = json::array();
  for (const auto& e : d.edges) {
    json je{{"v0", e.v0}, {"v1", e.v1}, {"left", e.left}, {"right", e.right}};
    if (e.curvature) {
      je["curvature"] = *e.curvature + 0.0;
    } else {
      je["polyline"] = json::array();
      for (Point p : e.polyline) je["polyline"].push_back(point_json(p));
    }
    j["edges"].push_back(je);
  }
  j["regions"] = json::array();
  for (const auto& r : d.regions) j["regions"].push_back({{"area", r.area}, {"pressure", r.pressure + 0.0}});
  j["metadata"] = d.metadata;
  return j;
}

GraphDocument from_json(const json& j) {
  if (!j.is_object()) throw DocumentError("document must be an object");
  if (!j.contains("schema_version") || j["schema_version"] != kSchemaVersion)
    throw DocumentError(std::string("unsupported schema_version, expected ") + kSchemaVersion);
  for (const char* key : {"vertices", "edges", "regions"})
    if (!j.contains(key) || !j[key].is_array()) throw DocumentError(std::string("missing array ") + key);
  GraphDocument d;
  for (const auto& v : j["vertices"]) {
    if (!v.contains("pos") || !v.contains("kind")) throw DocumentError("vertex needs pos and kind");
    const std::string kind = v["kind"].is_string() ? v["kind"].get<std::string>() : "";
    if (kind != "boundary" && kind != "interior") throw DocumentError("vertex kind must be boundary or interior");
    d.vertices.push_back({json_point(v["pos"]), kind == "boundary" ? VertexKind::Boundary : VertexKind::Interior});
  }
  for (const auto& r : j["regions"]) {
    if (!r.contains("area") || !r["area"].is_number()) throw DocumentError("region needs an area");
    d.regions.push_back({r["area"].get<double>(), r.value("pressure", 0.0)});
  }
  for (const auto& e : j["edges"]) {
    GraphDocument::Edge de;
    de.v0 = index_field(e, "v0", d.vertices.size());
    de.v1 = index_field(e, "v1", d.vertices.size());
    de.left = index_field(e, "left", d.regions.size());
    de.right = index_field(e, "right", d.regions.size());
    const bool has_c = e.contains("curvature"), has_p = e.contains("polyline");
    if (has_c == has_p) throw DocumentError("edge needs exactly one of curvature or polyline");
    if (has_c) {
      if (!e["curvature"].is_number()) throw DocumentError("curvature must be a number");
      de.curvature = e["curvature"].get<double>();
    } else {
      if (!e["polyline"].is_array()) throw DocumentError("polyline must be an array");
      for (const auto& p : e["polyline"]) de.polyline.push_back(json_point(p));
    }
    d.edges.push_back(std::move(de));
  }
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) throw DocumentError("metadata must be an object");
    d.metadata = j["metadata"];
  }
  return d;
}

GraphDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

std::string serialize(const GraphDocument& d) { return to_json(d).dump(2); }

json to_json(const StationarityReport& r) {
  return {{"max_residual", r.max_residual()},
          {"angle", r.angle_residuals},
          {"balance", r.balance_residuals},
          {"orthogonality", r.orthogonality_residuals},
          {"curvature", r.curvature_residuals}};
}

json to_json(const RelaxResult& r) {
  return {{"perimeter", r.perimeter},
          {"multipliers", r.multipliers},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"gradient_norm", r.gradient_norm}};
}

// ---- SVG ----

namespace {

constexpr double kCenter = 256.0, kScale = 240.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

std::string xy(Point p) { return num(kCenter + kScale * p.x) + " " + num(kCenter - kScale * p.y); }

// Centroid of a closed sampled outline.
Point outline_centroid(const std::vector<Point>& pts) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point p = pts[i], q = pts[(i + 1) % pts.size()];
    const double c = cross(p, q);
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  if (std::abs(a) < 1e-14) return pts.empty() ? Point{} : pts.front();
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

std::vector<Point> boundary_piece(Point from, double sweep) {
  std::vector<Point> pts;
  const int n = std::max(2, static_cast<int>(std::ceil(sweep / 0.05)));
  const double t0 = std::atan2(from.y, from.x);
  for (int k = 0; k < n; ++k) pts.push_back(unit_vector(t0 + sweep * k / n));
  return pts;
}

struct SvgWriter {
  std::ostringstream out;
  SvgWriter() {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
    out << "<path d=\"M " << xy({1.0, 0.0}) << " A " << num(kScale) << " " << num(kScale) << " 0 1 0 " << xy({-1.0, 0.0})
        << " A " << num(kScale) << " " << num(kScale) << " 0 1 0 " << xy({1.0, 0.0})
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  void path(const std::string& d) { out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"#1f4e9a\" stroke-width=\"2\"/>\n"; }
  void label(Point p, int region) {
    const std::string s = xy(p);
    const auto sp = s.find(' ');
    out << "<text x=\"" << s.substr(0, sp) << "\" y=\"" << s.substr(sp + 1)
        << "\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">R" << region + 1 << "</text>\n";
  }
  std::string finish() {
    out << "</svg>\n";
    return out.str();
  }
};

}  // namespace

std::string render_svg(const PartitionGraph& g) {
  SvgWriter w;
  for (const auto& e : g.edges) {
    std::string d = "M " + xy(e.arc.p0) + " ";
    if (is_straight(e.arc)) {
      d += "L " + xy(e.arc.p1);
    } else {
      // With y pointing down, a counterclockwise arc is SVG's negative-angle sweep.
      const double r = kScale * radius(e.arc);
      d += "A " + num(r) + " " + num(r) + " 0 0 " + (e.arc.h > 0 ? "0 " : "1 ") + xy(e.arc.p1);
    }
    w.path(d);
  }
  for (const Face& f : g.faces()) {
    std::vector<Point> pts;
    for (const auto& s : f.steps) {
      if (s.kind == FaceStep::Kind::Edge) {
        const ArcEdge a = g.step_arc(s);
        for (int k = 0; k < 32; ++k) pts.push_back(point_at(a, k / 32.0));
      } else {
        const Point from = s.from_vertex >= 0 ? g.vertices[s.from_vertex].pos : Point{1.0, 0.0};
        for (Point p : boundary_piece(from, s.sweep)) pts.push_back(p);
      }
    }
    w.label(outline_centroid(pts), f.region);
  }
  return w.finish();
}

std::string render_svg(const DiscreteGraph& g) {
  SvgWriter w;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto pts = g.polyline(static_cast<int>(e));
    std::string d = "M " + xy(pts.front());
    for (std::size_t k = 1; k < pts.size(); ++k) d += " L " + xy(pts[k]);
    w.path(d);
  }
  for (const Face& f : g.faces) {
    std::vector<Point> pts;
    for (const auto& s : f.steps) {
      if (s.kind == FaceStep::Kind::Edge) {
        auto p = g.polyline(s.edge);
        if (!s.forward) std::reverse(p.begin(), p.end());
        pts.insert(pts.end(), p.begin(), p.end() - 1);
      } else {
        const Point from = s.from_vertex >= 0 ? g.nodes[s.from_vertex] : Point{1.0, 0.0};
        for (Point p : boundary_piece(from, g.boundary_sweep(s))) pts.push_back(p);
      }
    }
    w.label(outline_centroid(pts), f.region);
  }
  return w.finish();
}

}  // namespace diskpart
