#include "efdp/trace.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace efdp {

using nlohmann::json;

json trace_to_json(const Trace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json offers = json::object();
    for (const auto& [item, price] : s.offers) {
      if (price) {
        offers[item] = price->str();
      } else {
        offers[item] = "NOT_OFFERED";
      }
    }
    json step{{"agent", s.agent}, {"available", s.available}, {"offers", std::move(offers)}};
    if (s.purchase) {
      step["purchase"] = *s.purchase;
    } else {
      step["purchase"] = nullptr;
    }
    steps.push_back(std::move(step));
  }
  return json{{"market", market_to_json(t.market)}, {"steps", std::move(steps)}};
}

Trace trace_from_json(const json& j) {
  if (!j.is_object() || !j.contains("market") || !j.contains("steps")) {
    throw ParseError("trace requires 'market' and 'steps'");
  }
  Trace t;
  t.market = market_from_json(j.at("market"));
  if (!j.at("steps").is_array()) throw ParseError("'steps' must be an array");
  for (const auto& js : j.at("steps")) {
    TraceStep s;
    if (!js.contains("agent") || !js.at("agent").is_string()) {
      throw ParseError("step requires an 'agent' string");
    }
    s.agent = js.at("agent").get<std::string>();
    if (!js.contains("available") || !js.at("available").is_array()) {
      throw ParseError("step requires an 'available' array");
    }
    for (const auto& e : js.at("available")) {
      if (!e.is_string()) throw ParseError("'available' must contain item ids");
      s.available.push_back(e.get<std::string>());
    }
    if (!js.contains("offers") || !js.at("offers").is_object()) {
      throw ParseError("step requires an 'offers' object");
    }
    for (const auto& [item, v] : js.at("offers").items()) {
      if (v.is_string() && v.get<std::string>() == "NOT_OFFERED") {
        s.offers[item] = std::nullopt;
      } else if (v.is_string()) {
        try {
          s.offers[item] = Rational::parse(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ParseError(std::string("bad offer: ") + e.what());
        }
      } else if (v.is_number_integer()) {
        s.offers[item] = Rational(v.get<long>());
      } else {
        throw ParseError("offer for '" + item + "' must be \"p/q\" or \"NOT_OFFERED\"");
      }
    }
    if (js.contains("purchase") && !js.at("purchase").is_null()) {
      if (!js.at("purchase").is_string()) throw ParseError("'purchase' must be an item id or null");
      s.purchase = js.at("purchase").get<std::string>();
    }
    t.steps.push_back(std::move(s));
  }
  return t;
}

Trace load_trace(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return trace_from_json(j);
}

void check_trace_shape(const Trace& t) {
  const Market& m = t.market;
  std::set<AgentId> seen;
  std::set<ItemId> gone;
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const TraceStep& s = t.steps[k];
    if (m.agent_index(s.agent) < 0) throw ParseError("step names unknown agent '" + s.agent + "'");
    if (!seen.insert(s.agent).second) throw ParseError("agent '" + s.agent + "' arrives twice");
    std::set<ItemId> avail;
    for (const auto& i : s.available) {
      if (m.item_index(i) < 0) throw ParseError("unknown item '" + i + "' in step");
      if (!avail.insert(i).second) throw ParseError("item '" + i + "' listed twice in a step");
      if (gone.count(i)) throw ParseError("item '" + i + "' reappears after being sold");
    }
    if (s.offers.size() != avail.size()) {
      throw ParseError("offers must cover exactly the available items");
    }
    for (const auto& [i, p] : s.offers) {
      if (!avail.count(i)) throw ParseError("offer for unavailable item '" + i + "'");
      if (p && p->sign() < 0) throw ParseError("negative price for item '" + i + "'");
    }
    if (k > 0) {
      // availability shrinks exactly by the previous purchase
      const TraceStep& prev = t.steps[k - 1];
      std::set<ItemId> expect;
      for (const auto& i : prev.available) {
        if (!prev.purchase || *prev.purchase != i) expect.insert(i);
      }
      if (expect != avail) throw ParseError("available set does not follow from previous step");
    }
    if (s.purchase) {
      auto it = s.offers.find(*s.purchase);
      if (it == s.offers.end()) throw ParseError("purchase of unavailable item '" + *s.purchase + "'");
      if (!it->second) throw ParseError("purchase of NOT_OFFERED item '" + *s.purchase + "'");
      gone.insert(*s.purchase);
    }
  }
  if (static_cast<int>(t.steps.size()) != m.n_agents()) {
    throw ParseError("trace must contain one step per agent");
  }
}

const Rational& sale_price(const TraceStep& step) {
  return *step.offers.at(*step.purchase);
}

}  // namespace efdp
