#include "efdp/market.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace efdp {

using nlohmann::json;

Market::Market(std::vector<AgentId> agents, std::vector<ItemId> items)
    : agents_(std::move(agents)), items_(std::move(items)) {
  for (int a = 0; a < n_agents(); ++a) {
    if (!agent_index_.emplace(agents_[a], a).second) {
      throw ParseError("duplicate agent id '" + agents_[a] + "'");
    }
  }
  for (int i = 0; i < n_items(); ++i) {
    if (!item_index_.emplace(items_[i], i).second) {
      throw ParseError("duplicate item id '" + items_[i] + "'");
    }
  }
  values_.assign(agents_.size(), std::vector<Rational>(items_.size(), Rational(0)));
}

int Market::agent_index(const AgentId& id) const {
  auto it = agent_index_.find(id);
  return it == agent_index_.end() ? -1 : it->second;
}

int Market::item_index(const ItemId& id) const {
  auto it = item_index_.find(id);
  return it == item_index_.end() ? -1 : it->second;
}

void Market::set_value(int a, int i, Rational v) {
  if (v.sign() < 0) {
    throw ParseError("negative valuation for agent '" + agents_.at(a) + "', item '" +
                     items_.at(i) + "'");
  }
  values_.at(a).at(i) = std::move(v);
}

void Market::set_order(std::vector<AgentId> order) {
  if (order.size() != agents_.size()) {
    throw ParseError("order must list every agent exactly once");
  }
  std::vector<char> seen(agents_.size(), 0);
  for (const auto& id : order) {
    int a = agent_index(id);
    if (a < 0) throw ParseError("order names unknown agent '" + id + "'");
    if (seen[a]) throw ParseError("order repeats agent '" + id + "'");
    seen[a] = 1;
  }
  order_ = std::move(order);
}

Market Market::without_item(int drop) const {
  std::vector<ItemId> items;
  items.reserve(items_.size() - 1);
  for (int i = 0; i < n_items(); ++i) {
    if (i != drop) items.push_back(items_[i]);
  }
  Market m(agents_, std::move(items));
  for (int a = 0; a < n_agents(); ++a) {
    int k = 0;
    for (int i = 0; i < n_items(); ++i) {
      if (i != drop) m.values_[a][k++] = values_[a][i];
    }
  }
  return m;
}

Market Market::without_agent(int drop) const {
  std::vector<AgentId> agents;
  agents.reserve(agents_.size() - 1);
  for (int a = 0; a < n_agents(); ++a) {
    if (a != drop) agents.push_back(agents_[a]);
  }
  Market m(std::move(agents), items_);
  int k = 0;
  for (int a = 0; a < n_agents(); ++a) {
    if (a != drop) m.values_[k++] = values_[a];
  }
  return m;
}

namespace {

Rational parse_value(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected integer or \"p/q\" string");
}

std::vector<std::string> parse_id_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("'" + field + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError("'" + field + "' must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

Market market_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  if (!j.contains("agents") || !j.contains("items")) {
    throw ParseError("instance requires 'agents' and 'items'");
  }
  Market m(parse_id_list(j.at("agents"), "agents"), parse_id_list(j.at("items"), "items"));
  if (j.contains("valuations")) {
    const json& vals = j.at("valuations");
    if (!vals.is_object()) throw ParseError("'valuations' must be an object");
    for (const auto& [agent, row] : vals.items()) {
      int a = m.agent_index(agent);
      if (a < 0) throw ParseError("valuations name unknown agent '" + agent + "'");
      if (!row.is_object()) throw ParseError("valuations for '" + agent + "' must be an object");
      for (const auto& [item, v] : row.items()) {
        int i = m.item_index(item);
        if (i < 0) throw ParseError("valuations name unknown item '" + item + "'");
        m.set_value(a, i, parse_value(v, "valuation of ('" + agent + "','" + item + "')"));
      }
    }
  }
  if (j.contains("order")) m.set_order(parse_id_list(j.at("order"), "order"));
  return m;
}

Market load_market(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return market_from_json(j);
}

json market_to_json(const Market& m) {
  json vals = json::object();
  for (int a = 0; a < m.n_agents(); ++a) {
    json row = json::object();
    for (int i = 0; i < m.n_items(); ++i) {
      if (!m.value(a, i).is_zero()) row[m.item(i)] = m.value(a, i).str();
    }
    if (!row.empty()) vals[m.agent(a)] = std::move(row);
  }
  json j{{"agents", m.agents()}, {"items", m.items()}, {"valuations", std::move(vals)}};
  if (m.order()) j["order"] = *m.order();
  return j;
}

Rational utility(const Market& m, const AgentId& a, const ItemId& i, const Rational& price) {
  int ai = m.agent_index(a);
  int ii = m.item_index(i);
  if (ai < 0) throw ParseError("unknown agent '" + a + "'");
  if (ii < 0) throw ParseError("unknown item '" + i + "'");
  return m.value(ai, ii) - price;
}

std::vector<Diagnostic> validate_market(const Market& m) {
  std::vector<Diagnostic> out;
  if (m.n_agents() == 0) out.push_back({Diagnostic::Severity::Error, "market has no agents"});
  if (m.n_items() == 0) out.push_back({Diagnostic::Severity::Error, "market has no items"});
  int nonzero = 0;
  for (int a = 0; a < m.n_agents(); ++a) {
    bool all_zero = true;
    for (int i = 0; i < m.n_items(); ++i) {
      if (!m.value(a, i).is_zero()) {
        all_zero = false;
        ++nonzero;
      }
    }
    if (all_zero && m.n_items() > 0) {
      out.push_back({Diagnostic::Severity::Warning,
                     "agent '" + m.agent(a) + "' values every item at 0"});
    }
  }
  std::ostringstream stats;
  stats << m.n_agents() << " agents, " << m.n_items() << " items, " << nonzero
        << " nonzero valuations";
  out.push_back({Diagnostic::Severity::Info, stats.str()});
  return out;
}

}  // namespace efdp
