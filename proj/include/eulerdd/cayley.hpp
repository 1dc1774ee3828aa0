#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "eulerdd/group.hpp"

namespace eulerdd {

struct CayleyEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t color = 0;  // 0-based generator index

  bool operator==(const CayleyEdge&) const = default;
};

/// Generator-coloured Cayley graph: edge (g, gamma_c g, c) for every vertex g
/// and colour c. Edges are ordered by (vertex, colour), so the edge leaving
/// vertex v with colour c sits at index v * colors + c.
struct CayleyGraph {
  std::size_t vertex_count = 0;
  std::size_t colors = 0;
  std::vector<CayleyEdge> edges;

  const CayleyEdge& departing(std::size_t vertex, std::size_t color) const { return edges[vertex * colors + color]; }
};

CayleyGraph build_cayley(const Group& group);

/// Eulerian cycle stored as its colour sequence; vertices are recomputed.
struct EulerPath {
  std::vector<std::size_t> colors;  // 0-based
  std::size_t start = 0;

  std::size_t length() const { return colors.size(); }
  std::vector<std::size_t> vertices(const CayleyGraph& graph) const;
};

// Hierholzer's algorithm, always extending along the unused edge of smallest colour.
EulerPath eulerian_cycle(const CayleyGraph& graph, std::size_t start = 0);

struct PathCheck {
  bool valid = false;
  std::string diagnostic;
};

// Checks that the walk from the identity uses every edge exactly once and closes.
PathCheck validate_path(const CayleyGraph& graph, const std::vector<std::size_t>& colors);

// Comma-separated 1-based colour indices, e.g. "1,2,1,2,2,1,2,1".
std::string format_path(const std::vector<std::size_t>& colors);
std::vector<std::size_t> parse_path(std::string_view text);

}  // namespace eulerdd
