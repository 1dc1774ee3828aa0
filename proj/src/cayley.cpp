#include "eulerdd/cayley.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>

#include "eulerdd/error.hpp"

namespace eulerdd {

CayleyGraph build_cayley(const Group& group) {
  validate_group(group);
  CayleyGraph graph;
  graph.vertex_count = group.order();
  graph.colors = group.generators.size();
  graph.edges.reserve(graph.vertex_count * graph.colors);
  for (std::size_t v = 0; v < graph.vertex_count; ++v) {
    for (std::size_t c = 0; c < graph.colors; ++c) {
      graph.edges.push_back({v, group.multiply(group.generators[c], v), c});
    }
  }
  return graph;
}

std::vector<std::size_t> EulerPath::vertices(const CayleyGraph& graph) const {
  std::vector<std::size_t> out{start};
  for (auto c : colors) out.push_back(graph.departing(out.back(), c).to);
  return out;
}

EulerPath eulerian_cycle(const CayleyGraph& graph, std::size_t start) {
  const auto no_cycle = [](const std::string& why) { return Error(ErrorCode::NoEulerianCycle, "no Eulerian cycle: " + why); };
  if (graph.vertex_count == 0 || graph.colors == 0) throw no_cycle("empty graph");
  if (start >= graph.vertex_count) throw no_cycle("start vertex out of range");
  if (graph.edges.size() != graph.vertex_count * graph.colors) throw no_cycle("graph is not colour-regular");

  std::vector<std::size_t> in_degree(graph.vertex_count, 0);
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const auto& e = graph.edges[k];
    if (e.from != k / graph.colors || e.color != k % graph.colors || e.to >= graph.vertex_count) {
      throw no_cycle("edge list is not ordered by (vertex, colour)");
    }
    ++in_degree[e.to];
  }
  for (auto deg : in_degree)
    if (deg != graph.colors) throw no_cycle("in-degree differs from out-degree");

  // With balanced degrees, reachability from the start is the connectivity condition.
  std::vector<bool> seen(graph.vertex_count, false);
  std::deque<std::size_t> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (std::size_t c = 0; c < graph.colors; ++c) {
      const auto w = graph.departing(v, c).to;
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw no_cycle("graph is disconnected");

  // Iterative Hierholzer. next_color[v] is the smallest unused colour at v.
  std::vector<std::size_t> next_color(graph.vertex_count, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{start, graph.colors}};  // (vertex, colour used to arrive)
  std::vector<std::size_t> reversed_colors;
  while (!stack.empty()) {
    const auto v = stack.back().first;
    if (next_color[v] < graph.colors) {
      const auto c = next_color[v]++;
      stack.emplace_back(graph.departing(v, c).to, c);
    } else {
      if (stack.back().second < graph.colors) reversed_colors.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  EulerPath path;
  path.start = start;
  path.colors.assign(reversed_colors.rbegin(), reversed_colors.rend());
  return path;
}

PathCheck validate_path(const CayleyGraph& graph, const std::vector<std::size_t>& colors) {
  std::vector<bool> used(graph.edges.size(), false);
  std::size_t v = 0;
  for (std::size_t step = 0; step < colors.size(); ++step) {
    const auto c = colors[step];
    if (c >= graph.colors) return {false, "colour out of range at step " + std::to_string(step + 1)};
    const auto index = v * graph.colors + c;
    if (used[index]) return {false, "edge reused at step " + std::to_string(step + 1)};
    used[index] = true;
    v = graph.edges[index].to;
  }
  if (colors.size() < graph.edges.size()) return {false, "edges unused"};
  if (v != 0) return {false, "walk does not return to the identity"};
  return {true, "ok"};
}

std::string format_path(const std::vector<std::size_t>& colors) {
  std::ostringstream os;
  for (std::size_t k = 0; k < colors.size(); ++k) os << (k ? "," : "") << colors[k] + 1;
  return os.str();
}

std::vector<std::size_t> parse_path(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r')) ++pos;
    if (pos >= text.size()) break;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{} || value == 0) throw Error(ErrorCode::ConfigError, "bad path token near position " + std::to_string(pos));
    out.push_back(value - 1);
    pos = static_cast<std::size_t>(ptr - text.data());
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r')) ++pos;
    if (pos < text.size()) {
      if (text[pos] != ',') throw Error(ErrorCode::ConfigError, "expected ',' in path at position " + std::to_string(pos));
      ++pos;
    }
  }
  return out;
}

}  // namespace eulerdd
