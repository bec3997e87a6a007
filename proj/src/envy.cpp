#include "efdp/envy.hpp"

namespace efdp {

const char* to_string(EnvyNotion n) {
  switch (n) {
    case EnvyNotion::Strong: return "strong";
    case EnvyNotion::ExPost: return "expost";
    case EnvyNotion::ExAnte: return "exante";
    case EnvyNotion::Weak: return "weak";
  }
  return "?";
}

std::pair<int, int> time_window(EnvyNotion notion, int position, int n) {
  switch (notion) {
    case EnvyNotion::Strong: return {1, n};
    case EnvyNotion::ExPost: return {1, position};
    case EnvyNotion::ExAnte: return {position, n};
    case EnvyNotion::Weak: return {position, position};
  }
  return {position, position};
}

std::optional<EnvyWitness> verify_envy_free(const Trace& t, EnvyNotion notion) {
  check_trace_shape(t);
  const Market& m = t.market;
  const int n = static_cast<int>(t.steps.size());
  for (int pos = 1; pos <= n; ++pos) {
    const TraceStep& own = t.steps[pos - 1];
    const int a = m.agent_index(own.agent);
    // Utility the agent locked in: sale price at her own step, or the
    // ever-available outside option worth 0.
    Rational secured(0);
    if (own.purchase) {
      secured = m.value(a, m.item_index(*own.purchase)) - sale_price(own);
      if (secured.sign() < 0) {
        return EnvyWitness{own.agent, pos, *own.purchase, -secured};
      }
    }
    auto [first, last] = time_window(notion, pos, n);
    for (int s = first; s <= last; ++s) {
      const TraceStep& other = t.steps[s - 1];
      for (const auto& [item, price] : other.offers) {
        if (!price) continue;
        Rational u = m.value(a, m.item_index(item)) - *price;
        if (u > secured) return EnvyWitness{own.agent, s, item, u - secured};
      }
    }
  }
  return std::nullopt;
}

Rational social_welfare(const Trace& t) {
  Rational w(0);
  for (const auto& s : t.steps) {
    if (s.purchase) {
      w += t.market.value(t.market.agent_index(s.agent), t.market.item_index(*s.purchase));
    }
  }
  return w;
}

Rational revenue(const Trace& t) {
  Rational r(0);
  for (const auto& s : t.steps) {
    if (s.purchase) r += sale_price(s);
  }
  return r;
}

}  // namespace efdp
