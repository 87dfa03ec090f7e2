#include "swnet/network.h"

#include <cmath>
#include <numbers>

#include "swnet/errors.h"

namespace swnet {
namespace {

// Rejection attempts before falling back to enumerating the candidate set.
constexpr int kMaxRejections = 64;

constexpr std::uint64_t kPlacementStream = 0x706c616365ULL;
constexpr std::uint64_t kContactStream = 0x6c7263ULL;

}  // namespace

void NetworkConfig::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("r must be positive and finite");
  if (!(delta > 0.0 && delta < r)) {
    throw ValidationError("delta must satisfy 0 < delta < r");
  }
  if (!(r < R / 2) || !std::isfinite(R)) {
    throw ValidationError("domain side must satisfy R > 2r");
  }
  if (n < 1) throw ValidationError("need at least one relay node (n >= 1)");
  if (n > UINT32_MAX - 1) throw ValidationError("too many relay nodes");
}

NodeRef NodeRef::relay(std::size_t index) {
  if (index < 1 || index > UINT32_MAX) throw std::out_of_range("relay index starts at 1");
  return NodeRef(Kind::relay, static_cast<std::uint32_t>(index));
}

std::string NodeRef::to_string() const {
  switch (kind_) {
    case Kind::source:
      return "s";
    case Kind::target:
      return "t";
    case Kind::relay:
      return std::to_string(index_);
  }
  return "?";
}

NetworkInstance::NetworkInstance(NetworkConfig config, std::vector<Point> relays, Point source,
                                 Point target)
    : config_(config),
      domain_(config.R),
      relays_(std::move(relays)),
      source_(source),
      target_(target) {
  config_.validate();
  if (relays_.size() != config_.n) throw ValidationError("relay count does not match config.n");
  for (const Point& p : relays_) {
    if (!domain_.contains(p)) throw ValidationError("relay outside the domain");
  }
  if (!domain_.contains(source_) || !domain_.contains(target_)) {
    throw ValidationError("source and target must lie inside the domain");
  }
  grid_ = SpatialGrid(relays_, config_.R, config_.r);
}

Point NetworkInstance::position(NodeRef node) const {
  switch (node.kind()) {
    case NodeRef::Kind::source:
      return source_;
    case NodeRef::Kind::target:
      return target_;
    case NodeRef::Kind::relay:
      return relays_.at(node.relay_index() - 1);
  }
  return {};
}

std::optional<NodeRef> NetworkInstance::long_range_contact(NodeRef node) const {
  if (lrc_.empty() || node.kind() == NodeRef::Kind::target) return std::nullopt;
  const std::size_t slot = node.is_relay() ? node.relay_index() : 0;
  const auto& c = lrc_.at(slot);
  if (!c) return std::nullopt;
  return NodeRef::relay(*c);
}

void NetworkInstance::set_long_range_contacts(std::vector<std::optional<std::uint32_t>> contacts) {
  if (!lrc_.empty()) throw InvariantViolation("long-range contacts are fixed once chosen");
  if (contacts.size() != relays_.size() + 1) {
    throw ValidationError("need one contact slot for the source and each relay");
  }
  for (const auto& c : contacts) {
    if (c && (*c < 1 || *c > relays_.size())) throw ValidationError("contact is not a relay");
  }
  lrc_ = std::move(contacts);
}

std::vector<NodeRef> NetworkInstance::local_contacts(NodeRef node) const {
  std::vector<NodeRef> out;
  const Point p = position(node);
  if (node.kind() != NodeRef::Kind::source && dist(p, source_) < config_.r) {
    out.push_back(NodeRef::source());
  }
  if (node.kind() != NodeRef::Kind::target && dist(p, target_) < config_.r) {
    out.push_back(NodeRef::target());
  }
  for_each_local_relay(node, [&](std::size_t idx) { out.push_back(NodeRef::relay(idx)); });
  return out;
}

NetworkInstance place_nodes(const NetworkConfig& config, double d, Rng& rng) {
  config.validate();
  const double limit = config.R / 2 - config.r;
  if (!(d >= 0.0) || d > limit) {
    throw ValidationError(
        "edge-effect guard violated: separation must satisfy 0 <= d <= R/2 - r so that "
        "B(target, d + r) stays inside the domain (d/r = " +
        std::to_string(d / config.r) + ", limit " + std::to_string(limit / config.r) + ")");
  }
  const Domain dom(config.R);
  std::vector<Point> relays(config.n);
  for (auto& p : relays) p = sample_uniform_domain(rng, dom);
  const Point target = dom.center();
  const double theta = 2 * std::numbers::pi * unit_uniform(rng);
  const Point source = d == 0.0 ? target
                                : Point{target.x + d * std::cos(theta), target.y + d * std::sin(theta)};
  return NetworkInstance(config, std::move(relays), source, target);
}

std::optional<NodeRef> draw_long_range_contact(const NetworkInstance& instance, NodeRef node,
                                               Rng& rng) {
  if (node.kind() == NodeRef::Kind::target) return std::nullopt;
  const Point p = instance.position(node);
  const double r = instance.config().r;
  const auto relays = instance.relays();
  const std::size_t self = node.is_relay() ? node.relay_index() : 0;
  auto eligible = [&](std::size_t idx) { return idx != self && dist(relays[idx - 1], p) >= r; };

  std::uniform_int_distribution<std::size_t> pick(1, relays.size());
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const std::size_t idx = pick(rng);
    if (eligible(idx)) return NodeRef::relay(idx);
  }
  // Rare: most relays sit inside the local ball. Conditioned on the rejections
  // so far, a uniform pick from the full candidate set is still exact.
  std::vector<std::size_t> candidates;
  for (std::size_t idx = 1; idx <= relays.size(); ++idx) {
    if (eligible(idx)) candidates.push_back(idx);
  }
  if (candidates.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> choose(0, candidates.size() - 1);
  return NodeRef::relay(candidates[choose(rng)]);
}

NetworkInstance assign_lrcs(NetworkInstance instance, Rng& rng) {
  const std::size_t n = instance.relay_count();
  std::vector<std::optional<std::uint32_t>> contacts(n + 1);
  for (std::size_t slot = 0; slot <= n; ++slot) {
    const NodeRef node = slot == 0 ? NodeRef::source() : NodeRef::relay(slot);
    if (auto c = draw_long_range_contact(instance, node, rng)) {
      contacts[slot] = static_cast<std::uint32_t>(c->relay_index());
    }
  }
  instance.set_long_range_contacts(std::move(contacts));
  return instance;
}

NetworkInstance build_instance(const NetworkConfig& config, double d, std::uint64_t seed) {
  Rng placement(derive_seed(seed, kPlacementStream, 0));
  NetworkInstance instance = place_nodes(config, d, placement);
  if (!config.lrc_enabled) return instance;
  Rng contacts(derive_seed(seed, kContactStream, 0));
  return assign_lrcs(std::move(instance), contacts);
}

std::optional<std::string> check_instance(const NetworkInstance& instance) {
  const auto& cfg = instance.config();
  const Domain& dom = instance.domain();
  for (const Point& p : instance.relays()) {
    if (!dom.contains(p)) return "relay outside the domain";
  }
  if (!dom.contains(instance.source()) || !dom.contains(instance.target())) {
    return "source or target outside the domain";
  }
  // B(target, d + r) inside the square.
  const double reach = dist(instance.source(), instance.target()) + cfg.r;
  const Point t = instance.target();
  const double slack = 1e-9 * cfg.R;
  if (t.x - reach < -slack || t.y - reach < -slack || t.x + reach > cfg.R + slack ||
      t.y + reach > cfg.R + slack) {
    return "edge-effect guard violated";
  }
  if (instance.long_range_contact(NodeRef::target())) return "target has a long-range contact";
  if (!instance.has_long_range_contacts()) return std::nullopt;
  for (std::size_t slot = 0; slot <= instance.relay_count(); ++slot) {
    const NodeRef node = slot == 0 ? NodeRef::source() : NodeRef::relay(slot);
    const auto c = instance.long_range_contact(node);
    if (!c) continue;
    if (!c->is_relay()) return "long-range contact of " + node.to_string() + " is not a relay";
    if (*c == node) return "node " + node.to_string() + " is its own long-range contact";
    if (dist(instance.position(*c), instance.position(node)) < cfg.r) {
      return "long-range contact of " + node.to_string() + " lies in its local ball";
    }
  }
  return std::nullopt;
}

}  // namespace swnet
