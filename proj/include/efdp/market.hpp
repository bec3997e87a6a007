#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "efdp/rational.hpp"

#include <nlohmann/json_fwd.hpp>

namespace efdp {

using AgentId = std::string;
using ItemId = std::string;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A unit-demand market: ordered agent/item id lists and a dense
/// non-negative valuation table (absent entries in the input default to 0,
/// i.e. the underlying bipartite graph is complete).
///
/// Immutable by convention after construction; every operation in the
/// library takes markets by const reference and never mutates them, so
/// sharing across threads is safe.
class Market {
 public:
  Market() = default;
  Market(std::vector<AgentId> agents, std::vector<ItemId> items);

  int n_agents() const { return static_cast<int>(agents_.size()); }
  int n_items() const { return static_cast<int>(items_.size()); }

  const std::vector<AgentId>& agents() const { return agents_; }
  const std::vector<ItemId>& items() const { return items_; }

  const AgentId& agent(int a) const { return agents_.at(a); }
  const ItemId& item(int i) const { return items_.at(i); }

  /// -1 when the id is unknown.
  int agent_index(const AgentId& id) const;
  int item_index(const ItemId& id) const;

  const Rational& value(int a, int i) const { return values_.at(a).at(i); }
  void set_value(int a, int i, Rational v);

  const std::optional<std::vector<AgentId>>& order() const { return order_; }
  void set_order(std::vector<AgentId> order);

  /// Copy of the market without one item (or agent); used by the
  /// delete-and-resolve analyses.
  Market without_item(int i) const;
  Market without_agent(int a) const;

 private:
  std::vector<AgentId> agents_;
  std::vector<ItemId> items_;
  std::vector<std::vector<Rational>> values_;  // [agent][item]
  std::unordered_map<AgentId, int> agent_index_;
  std::unordered_map<ItemId, int> item_index_;
  std::optional<std::vector<AgentId>> order_;
};

/// Parses the instance JSON schema:
///   {"agents":[...], "items":[...],
///    "valuations":{"<agent>":{"<item>":"p/q",...}}, "order":[...]}
/// Valuations are exact "p/q" or integer strings; missing pairs are 0.
/// Throws ParseError naming the offending field on malformed input,
/// negative valuations, duplicate ids, or bad rationals.
Market load_market(const std::string& text);
Market market_from_json(const nlohmann::json& j);
nlohmann::json market_to_json(const Market& m);

/// u_a(i) = v_a(i) - p. Throws ParseError on unknown ids.
Rational utility(const Market& m, const AgentId& a, const ItemId& i, const Rational& price);

struct Diagnostic {
  enum class Severity { Info, Warning, Error };
  Severity severity;
  std::string message;
};

/// Read-only sanity report: empty sides, all-zero valuation rows, size stats.
std::vector<Diagnostic> validate_market(const Market& m);

}  // namespace efdp
