#pragma once

#include "efdp/trace.hpp"

namespace efdp {

/// The four envy notions, ordered by the span of steps an agent compares
/// herself against: the whole horizon, everything up to her arrival,
/// everything from her arrival on, or her own step only.
enum class EnvyNotion { Strong, ExPost, ExAnte, Weak };

const char* to_string(EnvyNotion n);

/// Comparison window for an agent at the given 1-based position, as an
/// inclusive [first, last] step range.
///   Strong -> [1, n]      ExPost -> [1, position]
///   ExAnte -> [position, n]   Weak -> [position, position]
/// Ex-post compares against the past because prices in the ex-post schemes
/// only fall afterwards; ex-ante is the mirror image.
std::pair<int, int> time_window(EnvyNotion notion, int position, int n);

struct EnvyWitness {
  AgentId agent;
  int step;      // 1-based step whose offer is envied
  ItemId item;
  Rational gap;  // how far the envied utility exceeds the bound
};

/// Checks the trace against one envy notion. A buyer must weakly prefer
/// her purchase, valued at her own step's sale price, to every rational
/// offer inside her window, and her purchase utility must be non-negative.
/// An agent who bought nothing must see no positive-utility offer in her
/// window. NOT_OFFERED entries never participate. Returns the first
/// violation, or nothing when the trace is envy-free.
std::optional<EnvyWitness> verify_envy_free(const Trace& t, EnvyNotion notion);

/// Sum of buyers' valuations of their purchases.
Rational social_welfare(const Trace& t);

/// Sum of sale prices.
Rational revenue(const Trace& t);

}  // namespace efdp
