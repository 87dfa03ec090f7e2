#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swnet/geometry.h"
#include "swnet/rng.h"
#include "swnet/spatial_grid.h"

namespace swnet {

struct NetworkConfig {
  double R = 20.0;
  double r = 1.0;
  double delta = 0.1;
  std::size_t n = 2000;
  bool lrc_enabled = true;
  std::uint64_t seed = 1;

  // Throws ValidationError unless 0 < delta < r < R/2 and n >= 1.
  void validate() const;
};

// A node of the network: the source, the target, or relay i (1-based).
class NodeRef {
 public:
  enum class Kind : std::uint8_t { source, relay, target };

  static constexpr NodeRef source() { return NodeRef(Kind::source, 0); }
  static constexpr NodeRef target() { return NodeRef(Kind::target, 0); }
  static NodeRef relay(std::size_t index);

  Kind kind() const { return kind_; }
  bool is_relay() const { return kind_ == Kind::relay; }
  std::size_t relay_index() const { return index_; }
  std::string to_string() const;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;

 private:
  constexpr NodeRef(Kind kind, std::uint32_t index) : kind_(kind), index_(index) {}

  Kind kind_;
  std::uint32_t index_;
};

class NetworkInstance {
 public:
  // Builds an instance without long-range contacts. Throws ValidationError if a
  // point lies outside the domain.
  NetworkInstance(NetworkConfig config, std::vector<Point> relays, Point source, Point target);

  const NetworkConfig& config() const { return config_; }
  const Domain& domain() const { return domain_; }
  std::size_t relay_count() const { return relays_.size(); }
  std::span<const Point> relays() const { return relays_; }
  Point source() const { return source_; }
  Point target() const { return target_; }
  Point position(NodeRef node) const;

  // Outgoing long-range contact, always a relay. The target never has one.
  std::optional<NodeRef> long_range_contact(NodeRef node) const;
  // Sets every node's contact at once; slot 0 is the source, slot i relay i.
  // Entries hold relay indices.
  void set_long_range_contacts(std::vector<std::optional<std::uint32_t>> contacts);
  bool has_long_range_contacts() const { return !lrc_.empty(); }

  // Every other node strictly within r of `node`, via the spatial index.
  // Includes the source and target when they are in range.
  std::vector<NodeRef> local_contacts(NodeRef node) const;

  // Relays strictly within r of `node`, excluding the node itself.
  template <typename Fn>
  void for_each_local_relay(NodeRef node, Fn&& fn) const {
    const Point p = position(node);
    grid_.for_each_within(relays_, p, config_.r, [&](std::uint32_t idx) {
      if (node.is_relay() && node.relay_index() == idx + 1u) return;
      fn(idx + 1u);
    });
  }

 private:
  NetworkConfig config_;
  Domain domain_;
  std::vector<Point> relays_;
  Point source_;
  Point target_;
  std::vector<std::optional<std::uint32_t>> lrc_;
  SpatialGrid grid_;
};

// Target at the domain center, source at distance d in a uniformly random
// direction, n relays i.i.d. uniform on the domain. Throws ValidationError
// unless 0 <= d <= R/2 - r.
NetworkInstance place_nodes(const NetworkConfig& config, double d, Rng& rng);

// One draw of `node`'s outgoing long-range contact: uniform among relays other
// than the node lying outside its open local ball. nullopt if there are none.
std::optional<NodeRef> draw_long_range_contact(const NetworkInstance& instance, NodeRef node,
                                               Rng& rng);

// Gives the source and every relay one long-range contact (when a candidate
// exists).
NetworkInstance assign_lrcs(NetworkInstance instance, Rng& rng);

// place_nodes followed by assign_lrcs when config.lrc_enabled. The instance is
// a function of (config, d, seed) only.
NetworkInstance build_instance(const NetworkConfig& config, double d, std::uint64_t seed);

// Empty when all documented instance invariants hold, else the first violation.
std::optional<std::string> check_instance(const NetworkInstance& instance);

}  // namespace swnet
