#pragma once

#include <map>
#include <optional>
#include <vector>

#include "efdp/market.hpp"

#include <nlohmann/json_fwd.hpp>

namespace efdp {

/// A posted price, or NOT_OFFERED. NOT_OFFERED items cannot be bought and
/// are excluded from every envy comparison; the sentinel stands in for an
/// unbounded price without introducing magic constants.
using OfferPrice = std::optional<Rational>;

struct TraceStep {
  AgentId agent;
  std::vector<ItemId> available;          // I_t, in market item order
  std::map<ItemId, OfferPrice> offers;    // one entry per available item
  std::optional<ItemId> purchase;
};

/// The full record of one dynamic-pricing run: the market and, per step,
/// the arriving agent, the surviving items, the posted offers and the
/// purchase. Every verifier and objective consumes this object.
struct Trace {
  Market market;
  std::vector<TraceStep> steps;
};

nlohmann::json trace_to_json(const Trace& t);
Trace trace_from_json(const nlohmann::json& j);
Trace load_trace(const std::string& text);

/// Structural invariants: agents appear exactly once; offers cover exactly
/// the available set; purchases are available, carry a rational offer, and
/// the available sets shrink by exactly the purchased items.
/// Throws ParseError with the first violation.
void check_trace_shape(const Trace& t);

/// Sale price of the step's purchase.
const Rational& sale_price(const TraceStep& step);

}  // namespace efdp
