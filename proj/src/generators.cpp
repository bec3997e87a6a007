#include "efdp/generators.hpp"

#include <random>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace efdp {

using nlohmann::json;

Market gen_harmonic(int n) {
  if (n < 1) throw std::invalid_argument("harmonic family needs n >= 1");
  std::vector<AgentId> agents;
  std::vector<ItemId> items;
  for (int k = 1; k <= n; ++k) {
    agents.push_back("a" + std::to_string(k));
    items.push_back("i" + std::to_string(k));
  }
  Market m(std::move(agents), std::move(items));
  for (int j = 1; j <= n; ++j) {
    for (int k = j; k <= n; ++k) m.set_value(j - 1, k - 1, Rational(1, j));
  }
  return m;
}

Market gen_cyclic_triple() {
  Market m({"a1", "a2", "a3"}, {"i1", "i2", "i3"});
  for (int j = 0; j < 3; ++j) {
    m.set_value(j, j, Rational(1));
    m.set_value(j, (j + 1) % 3, Rational(1));
  }
  return m;
}

Market gen_random(int n_agents, int n_items, long max_value, std::uint64_t seed) {
  if (n_agents < 0 || n_items < 0 || max_value < 0) {
    throw std::invalid_argument("random family needs non-negative sizes and values");
  }
  std::vector<AgentId> agents;
  std::vector<ItemId> items;
  for (int a = 1; a <= n_agents; ++a) agents.push_back("a" + std::to_string(a));
  for (int i = 1; i <= n_items; ++i) items.push_back("i" + std::to_string(i));
  Market m(std::move(agents), std::move(items));
  std::mt19937_64 rng(seed);
  for (int a = 0; a < n_agents; ++a) {
    for (int i = 0; i < n_items; ++i) {
      m.set_value(a, i, Rational(static_cast<long>(rng() % (max_value + 1))));
    }
  }
  return m;
}

Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) {
    throw ParseError("graph requires 'vertices' and 'edges'");
  }
  Graph g;
  if (!j.at("vertices").is_number_integer()) throw ParseError("'vertices' must be an integer");
  g.n = j.at("vertices").get<int>();
  if (g.n < 0) throw ParseError("'vertices' must be non-negative");
  if (!j.at("edges").is_array()) throw ParseError("'edges' must be an array");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ParseError("each edge must be a [u, v] pair");
    }
    int u = e[0].get<int>(), v = e[1].get<int>();
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) throw ParseError("edge endpoint out of range");
    g.edges.emplace_back(u, v);
  }
  return g;
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
  return json{{"vertices", g.n}, {"edges", std::move(edges)}};
}

int min_vertex_cover_size(const Graph& g, int max_vertices) {
  if (g.n > max_vertices) {
    throw InstanceTooLarge("vertex cover brute force limited to " +
                           std::to_string(max_vertices) + " vertices");
  }
  for (int k = 0; k <= g.n; ++k) {
    // all subsets of size k
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      std::vector<char> in(g.n, 0);
      for (int v : pick) in[v] = 1;
      bool covers = true;
      for (const auto& [u, v] : g.edges) {
        if (!in[u] && !in[v]) {
          covers = false;
          break;
        }
      }
      if (covers) return k;
      int i = k - 1;
      while (i >= 0 && pick[i] == g.n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return g.n;
}

VertexCoverInstance gen_vertex_cover_market(const Graph& g) {
  std::vector<int> degree(g.n, 0);
  std::set<std::pair<int, int>> seen;
  for (const auto& [u, v] : g.edges) {
    if (u == v) throw std::invalid_argument("graph must be simple (loop found)");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw std::invalid_argument("graph must be simple (parallel edge)");
    ++degree[u];
    ++degree[v];
  }
  for (int v = 0; v < g.n; ++v) {
    if (degree[v] != 3) {
      throw std::invalid_argument("graph must be 3-regular (vertex " + std::to_string(v) +
                                  " has degree " + std::to_string(degree[v]) + ")");
    }
  }

  VertexCoverInstance inst;
  std::vector<AgentId> agents;
  std::vector<ItemId> items;
  std::vector<AgentId> vertex_agents, edge_agents;
  for (int v = 0; v < g.n; ++v) {
    AgentId za = "z" + std::to_string(v);
    vertex_agents.push_back(za);
    for (int c = 1; c <= 4; ++c) items.push_back(za + "_" + std::to_string(c));
  }
  for (const auto& [u, v] : g.edges) {
    auto [lo, hi] = std::minmax(u, v);
    edge_agents.push_back("e" + std::to_string(lo) + "_" + std::to_string(hi));
  }
  agents = vertex_agents;
  agents.insert(agents.end(), edge_agents.begin(), edge_agents.end());
  Market m(std::move(agents), std::move(items));

  auto copy_index = [&](int vertex, int c) { return 4 * vertex + c; };
  for (int v = 0; v < g.n; ++v) {
    int za = m.agent_index("z" + std::to_string(v));
    for (int c = 0; c < 4; ++c) m.set_value(za, copy_index(v, c), Rational(2));
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    int ea = m.agent_index(edge_agents[k]);
    for (int endpoint : {g.edges[k].first, g.edges[k].second}) {
      for (int c = 0; c < 4; ++c) m.set_value(ea, copy_index(endpoint, c), Rational(1));
    }
  }

  inst.edge_first_order = edge_agents;
  inst.edge_first_order.insert(inst.edge_first_order.end(), vertex_agents.begin(),
                               vertex_agents.end());
  inst.vertex_first_order = vertex_agents;
  inst.vertex_first_order.insert(inst.vertex_first_order.end(), edge_agents.begin(),
                                 edge_agents.end());
  for (int v = 0; v < g.n; ++v) {
    std::vector<ItemId> group;
    for (int c = 0; c < 4; ++c) group.push_back(m.item(copy_index(v, c)));
    inst.item_groups.push_back(std::move(group));
  }
  inst.market = std::move(m);
  return inst;
}

}  // namespace efdp
