#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "diskpart/discrete_graph.hpp"
#include "diskpart/evolver.hpp"
#include "diskpart/partition_graph.hpp"
#include "diskpart/standard.hpp"

namespace diskpart {

inline constexpr const char* kSchemaVersion = "diskpart.graph/1";

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interchange form shared by exact and polyline graphs. An edge carries either
/// a curvature (exact arc between its vertices) or a polyline including both ends.
struct GraphDocument {
  struct Vertex {
    Point pos;
    VertexKind kind = VertexKind::Interior;
  };
  struct Edge {
    int v0 = -1, v1 = -1, left = -1, right = -1;
    std::optional<double> curvature;
    std::vector<Point> polyline;
  };
  struct Region {
    double area = 0.0;
    double pressure = 0.0;
  };

  std::string schema_version = kSchemaVersion;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Region> regions;
  nlohmann::json metadata = nlohmann::json::object();

  bool exact() const;
};

GraphDocument to_document(const PartitionGraph& g);
GraphDocument to_document(const DiscreteGraph& g);
/// Throws DocumentError for polyline documents.
PartitionGraph to_partition_graph(const GraphDocument& d);
/// Exact edges are sampled with n_segments pieces.
DiscreteGraph to_discrete_graph(const GraphDocument& d, int n_segments = 64);

nlohmann::json to_json(const GraphDocument& d);
/// Checks schema_version and structure; throws DocumentError.
GraphDocument from_json(const nlohmann::json& j);
GraphDocument parse_document(const std::string& text);
std::string serialize(const GraphDocument& d);

nlohmann::json to_json(const StationarityReport& r);
nlohmann::json to_json(const RelaxResult& r);

/// 512x512 rendering: disk outline, one path per edge, region labels at face centroids.
std::string render_svg(const PartitionGraph& g);
std::string render_svg(const DiscreteGraph& g);

}  // namespace diskpart
