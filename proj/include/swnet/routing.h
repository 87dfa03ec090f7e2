#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "swnet/network.h"
#include "swnet/rng.h"

namespace swnet {

enum class HopKind { local, long_range, direct_to_target };
const char* to_string(HopKind kind);

// How a holder picks among local contacts that qualify under the delta-greedy
// rule.
enum class TieBreak { uniform, max_progress };
const char* to_string(TieBreak t);
TieBreak parse_tie_break(const std::string& s);

struct Hop {
  NodeRef from;
  NodeRef to;
  HopKind kind;
  double progress;  // dist(from, target) - dist(to, target)
};

enum class RouteStatus { delivered, no_candidate };

struct RoutingOutcome {
  std::vector<Hop> hops;
  RouteStatus status = RouteStatus::delivered;

  bool delivered() const { return status == RouteStatus::delivered; }
  // Hop count; nullopt stands for an infinite delivery time.
  std::optional<std::size_t> tau() const {
    if (!delivered()) return std::nullopt;
    return hops.size();
  }
};

// One step of delta-greedy geographic forwarding from `current` (not the target).
//
// Within r of the target the message goes straight there. Otherwise, with
// k = floor(dist/r), a local relay qualifies if it lies in B(target, k r) and
// advances at least r - delta; one is picked per `tie_break`. The holder's
// long-range contact wins if it advances strictly more than the picked local,
// or, when no local qualifies, if it advances at least r - delta.
// Returns nullopt when nothing qualifies.
std::optional<Hop> next_hop(const NetworkInstance& instance, NodeRef current, Rng& rng,
                            TieBreak tie_break = TieBreak::uniform);

// Forwards from the source until delivery or a dead end. Throws
// InvariantViolation if the hop count passes n + 1.
RoutingOutcome route(const NetworkInstance& instance, Rng& rng,
                     TieBreak tie_break = TieBreak::uniform);

// Checks a trajectory: contiguous hops, strictly decreasing distance to the
// target, no repeated node, local hops advancing >= r - delta and landing one
// annulus in, delivered tau <= floor(d/(r - delta)) + 1. Empty when clean.
std::optional<std::string> check_trajectory(const NetworkInstance& instance,
                                            const RoutingOutcome& outcome);

}  // namespace swnet
