#pragma once

#include <map>
#include <memory>
#include <random>

#include "efdp/covering.hpp"
#include "efdp/envy.hpp"
#include "efdp/matching.hpp"
#include "efdp/trace.hpp"

namespace efdp {

enum class WelfareNotion { ExPost, ExAnte };

/// Thrown when a run breaks one of the scheme's maintained invariants
/// (a purchase off the tight graph, a dual that should be zero, a price
/// moving the wrong way). Carries the trace built so far for debugging.
struct SchemeFailure : std::runtime_error {
  SchemeFailure(const std::string& what, Trace partial_trace)
      : std::runtime_error(what), partial(std::move(partial_trace)) {}
  Trace partial;
};

/// Residual market at step t: which agents and items remain and the
/// maintained matching on the tight subgraph. Unmatched remaining agents
/// (the set R_t) are derived, never stored.
struct DynamicState {
  int t = 1;  // 1-based step
  std::vector<char> agent_in;
  std::vector<char> item_in;
  std::vector<int> match_item;   // agent -> item, -1 when unmatched
  std::vector<int> match_agent;  // item -> agent, -1 when unmatched

  bool in_r(int agent) const { return agent_in[agent] && match_item[agent] < 0; }
};

DynamicState initial_state(const Market& pruned, const Covering& cov, const Matching& m1);

/// Vertex codes for the exchange digraph: agents first, then items.
inline int agent_code(int a) { return a; }
inline int item_code(const Market& m, int i) { return m.n_agents() + i; }

/// The exchange digraph on the remaining tight subgraph: matching edges
/// point item -> agent, every other tight edge points agent -> item, and a
/// dummy parallel copy of each matching edge points agent -> item so that
/// matched pairs always share a strongly connected component.
struct ExchangeDigraph {
  std::vector<std::vector<int>> out;  // by vertex code, sorted
  std::vector<std::vector<int>> in;
  std::vector<char> present;
};

/// Strongly connected components in canonical topological order: every arc
/// between distinct components goes from a lower to a higher index, and
/// incomparable components are ordered by their smallest vertex code.
struct SccView {
  std::vector<std::vector<int>> components;  // vertex codes, sorted
  std::vector<int> comp_of;                  // vertex code -> component position (0-based)

  /// 1-based component index used by the price formulas.
  int j_of(int code) const { return comp_of[code] + 1; }
};

ExchangeDigraph build_exchange_digraph(const Market& pruned, const Covering& cov,
                                       const DynamicState& st);
SccView scc_topological(const ExchangeDigraph& d);

/// Vertices reachable from the unmatched remaining agents. Always a union
/// of whole components and forward-closed.
std::vector<char> reach_set_ex_post(const Market& pruned, const ExchangeDigraph& d,
                                    const DynamicState& st);

/// Vertices with a path to a matched remaining agent of dual zero
/// (including those agents themselves). A union of whole components,
/// backward-closed.
std::vector<char> reach_set_ex_ante(const Market& pruned, const ExchangeDigraph& d,
                                    const DynamicState& st, const Covering& cov);

/// Per-item prices for the current step, keyed by item index.
///   ex-post:  pi(i) + delta/2^t + j eps   inside S_t
///             pi(i) - delta(1 - 1/2^t) + j eps   outside
///   ex-ante:  the mirror image (signs of the delta terms flipped).
std::map<int, Rational> post_prices_ex_post(const Market& pruned, const DynamicState& st,
                                            const SccView& scc, const std::vector<char>& in_s,
                                            const Covering& cov, const PricingParameters& params);
std::map<int, Rational> post_prices_ex_ante(const Market& pruned, const DynamicState& st,
                                            const SccView& scc, const std::vector<char>& in_s,
                                            const Covering& cov, const PricingParameters& params);

/// How an agent resolves ties between utility-maximising items, and
/// whether she buys when her best utility is exactly zero.
class TiePolicy {
 public:
  virtual ~TiePolicy() = default;
  virtual int pick(const std::vector<int>& tied_items) = 0;
  virtual bool take_at_zero() = 0;
};

class LexTiePolicy final : public TiePolicy {
 public:
  int pick(const std::vector<int>& tied) override { return tied.front(); }
  bool take_at_zero() override { return true; }
};

class SeededTiePolicy final : public TiePolicy {
 public:
  explicit SeededTiePolicy(std::uint64_t seed) : rng_(seed) {}
  int pick(const std::vector<int>& tied) override {
    return tied[static_cast<std::size_t>(rng_() % tied.size())];
  }
  bool take_at_zero() override { return (rng_() & 1) != 0; }
 private:
  std::mt19937_64 rng_;
};

/// The choices open to an agent facing the given offers: the argmax items
/// (ascending item index) and whether the best utility is positive, zero
/// or negative. Items without a rational offer never qualify.
struct ChoiceSet {
  std::vector<int> argmax;
  int best_sign = -1;  // sign of the best utility; -1 when nothing is offered
};

ChoiceSet compute_choices(const Market& m, const std::map<int, Rational>& prices, int agent);

/// argmax selection under the policy: an item for positive best utility,
/// policy-resolved take-or-leave at zero, nothing when negative.
std::optional<int> agent_choice(const Market& m, const std::map<int, Rational>& prices, int agent,
                                TiePolicy& policy);

/// Everything derived for one step: digraph, components, reach set, prices.
struct StepView {
  ExchangeDigraph digraph;
  SccView scc;
  std::vector<char> in_s;
  std::map<int, Rational> prices;
};

StepView prepare_step(const Market& pruned, const Covering& cov, const PricingParameters& params,
                      const DynamicState& st, WelfareNotion notion);

/// Applies one arrival: removes the agent (and her purchase), restores the
/// matching by the cycle- or path-exchange the scheme prescribes, and
/// checks the maintained invariants. Throws std::logic_error on violation
/// (wrapped into SchemeFailure by the runner).
DynamicState update_after_purchase(const Market& pruned, const Covering& cov, const StepView& view,
                                   const DynamicState& st, WelfareNotion notion, int agent,
                                   std::optional<int> purchase);

/// One full dynamic run over the given arrival order. The market is pruned
/// and the refined covering computed internally; the returned trace is on
/// the pruned market. Prices per item fall over time in the ex-post scheme
/// and rise in the ex-ante scheme; the final allocation always attains the
/// maximum matching weight.
Trace run_welfare_scheme(const Market& market, WelfareNotion notion,
                         const std::vector<AgentId>& order, TiePolicy& tie);

}  // namespace efdp
