#pragma once

#include <cstdint>

#include "efdp/market.hpp"

#include <nlohmann/json_fwd.hpp>

namespace efdp {

/// n agents and n items with the triangular pattern v(a_j, i_k) = 1/j for
/// k >= j and 0 otherwise. Its unique maximum matching has weight
/// sum_{j<=n} 1/j while every static envy-free pricing earns at most 1.
Market gen_harmonic(int n);

/// Three agents and three items with v(a_j, i_j) = v(a_j, i_{j+1}) = 1
/// cyclically and 0 elsewhere: the classic instance whose outcome under
/// any uniform static price depends on how agents break ties.
Market gen_cyclic_triple();

/// Uniform integer valuations in [0, max_value], reproducible per seed.
Market gen_random(int n_agents, int n_items, long max_value, std::uint64_t seed);

/// Undirected simple graph as an edge list over vertices 0..n-1.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Edge-list JSON: {"vertices": n, "edges": [[u,v], ...]}.
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);

/// Brute-force minimum vertex cover size. Guarded to small graphs.
int min_vertex_cover_size(const Graph& g, int max_vertices = 20);

/// The pricing market derived from a 3-regular graph: four copies of a
/// vertex-item per vertex (valued 2 by that vertex's agent) and one agent
/// per edge valuing both endpoints' copies at 1. Ships the two canonical
/// arrival orders and the per-vertex item groups.
struct VertexCoverInstance {
  Market market;
  std::vector<AgentId> edge_first_order;
  std::vector<AgentId> vertex_first_order;
  std::vector<std::vector<ItemId>> item_groups;  // one group per vertex
};

VertexCoverInstance gen_vertex_cover_market(const Graph& g);

}  // namespace efdp
