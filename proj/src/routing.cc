#include "swnet/routing.h"

#include <cmath>
#include <unordered_set>

#include "swnet/errors.h"
#include "swnet/geometry.h"

namespace swnet {
namespace {

std::size_t node_key(NodeRef node) {
  switch (node.kind()) {
    case NodeRef::Kind::source:
      return 0;
    case NodeRef::Kind::target:
      return SIZE_MAX;
    case NodeRef::Kind::relay:
      return node.relay_index();
  }
  return 0;
}

}  // namespace

const char* to_string(HopKind kind) {
  switch (kind) {
    case HopKind::local:
      return "local";
    case HopKind::long_range:
      return "long_range";
    case HopKind::direct_to_target:
      return "direct_to_target";
  }
  return "?";
}

const char* to_string(TieBreak t) {
  return t == TieBreak::uniform ? "uniform" : "max-progress";
}

TieBreak parse_tie_break(const std::string& s) {
  if (s == "uniform") return TieBreak::uniform;
  if (s == "max-progress") return TieBreak::max_progress;
  throw ValidationError("tie-break must be 'uniform' or 'max-progress', got '" + s + "'");
}

std::optional<Hop> next_hop(const NetworkInstance& instance, NodeRef current, Rng& rng,
                            TieBreak tie_break) {
  if (current == NodeRef::target()) throw ValidationError("message already at the target");
  const auto& cfg = instance.config();
  const Point target = instance.target();
  const double here = dist(instance.position(current), target);
  if (here < cfg.r) {
    return Hop{current, NodeRef::target(), HopKind::direct_to_target, here};
  }

  const double ring = annulus_index(here, cfg.r) * cfg.r;
  const double min_progress = cfg.r - cfg.delta;
  std::vector<std::size_t> qualifying;
  double best_progress = -1.0;
  std::size_t best = 0;
  instance.for_each_local_relay(current, [&](std::size_t idx) {
    const double there = dist(instance.relays()[idx - 1], target);
    const double progress = here - there;
    if (there < ring && progress >= min_progress) {
      qualifying.push_back(idx);
      if (progress > best_progress) {
        best_progress = progress;
        best = idx;
      }
    }
  });

  std::optional<Hop> local;
  if (!qualifying.empty()) {
    std::size_t chosen = best;
    if (tie_break == TieBreak::uniform) {
      std::uniform_int_distribution<std::size_t> pick(0, qualifying.size() - 1);
      chosen = qualifying[pick(rng)];
    }
    const double progress = here - dist(instance.relays()[chosen - 1], target);
    local = Hop{current, NodeRef::relay(chosen), HopKind::local, progress};
  }

  if (const auto contact = instance.long_range_contact(current)) {
    const double progress = here - dist(instance.position(*contact), target);
    const bool better = local ? progress > local->progress : progress >= min_progress;
    if (better) return Hop{current, *contact, HopKind::long_range, progress};
  }
  return local;
}

RoutingOutcome route(const NetworkInstance& instance, Rng& rng, TieBreak tie_break) {
  RoutingOutcome out;
  if (instance.source() == instance.target()) return out;
  const std::size_t cap = instance.relay_count() + 1;
  NodeRef current = NodeRef::source();
  while (current != NodeRef::target()) {
    if (out.hops.size() >= cap) {
      throw InvariantViolation("route exceeded the n + 1 hop cap; forwarding looped");
    }
    const auto hop = next_hop(instance, current, rng, tie_break);
    if (!hop) {
      out.status = RouteStatus::no_candidate;
      return out;
    }
    out.hops.push_back(*hop);
    current = hop->to;
  }
  return out;
}

std::optional<std::string> check_trajectory(const NetworkInstance& instance,
                                            const RoutingOutcome& outcome) {
  const auto& cfg = instance.config();
  const Point target = instance.target();
  const double min_progress = cfg.r - cfg.delta;
  std::unordered_set<std::size_t> seen{node_key(NodeRef::source())};
  NodeRef at = NodeRef::source();
  for (std::size_t i = 0; i < outcome.hops.size(); ++i) {
    const Hop& hop = outcome.hops[i];
    const std::string where = "hop " + std::to_string(i) + ": ";
    if (hop.from != at) return where + "does not start where the previous hop ended";
    const double before = dist(instance.position(hop.from), target);
    const double after = dist(instance.position(hop.to), target);
    if (!(after < before)) return where + "distance to target did not decrease";
    if (!seen.insert(node_key(hop.to)).second) return where + "revisits node " + hop.to.to_string();
    if (hop.kind == HopKind::local) {
      if (!(before - after >= min_progress)) return where + "local hop advanced less than r - delta";
      if (!(after < annulus_index(before, cfg.r) * cfg.r)) {
        return where + "local hop did not enter the next annulus";
      }
      if (!(dist(instance.position(hop.from), instance.position(hop.to)) < cfg.r)) {
        return where + "local hop to a node out of range";
      }
    }
    if (hop.kind == HopKind::long_range && instance.long_range_contact(hop.from) != hop.to) {
      return where + "long-range hop to a node that is not the holder's contact";
    }
    if ((hop.kind == HopKind::direct_to_target) != (hop.to == NodeRef::target())) {
      return where + "only direct hops may reach the target";
    }
    at = hop.to;
  }
  if (outcome.delivered()) {
    if (!(at == NodeRef::target()) && !(instance.source() == instance.target())) {
      return std::string("delivered trajectory does not end at the target");
    }
    const double d = dist(instance.source(), target);
    const auto bound = static_cast<std::size_t>(std::floor(d / min_progress)) + 1;
    if (outcome.hops.size() > bound) return std::string("delivered tau exceeds floor(d/(r - delta)) + 1");
  }
  return std::nullopt;
}

}  // namespace swnet
