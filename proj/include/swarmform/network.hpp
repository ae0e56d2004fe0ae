#pragma once

#include "swarmform/rng.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace swarmform {

enum class Channel { Global, Local };

/// Timestamped protocol message on a channel. Delivery never precedes
/// sent_tick + 1.
struct Envelope {
  int sender{-1};
  Channel channel{Channel::Global};
  std::string payload;  // wire-format protocol message
  long sent_tick{0};
  long seq{0};  // per-sender sequence number, fixes delivery order
};

/// Distance-threshold communication graph at one tick: symmetric, irreflexive.
class CommGraph {
 public:
  CommGraph() = default;
  explicit CommGraph(std::size_t n) : n_(n), adj_(n * n, false) {}

  std::size_t size() const { return n_; }
  bool edge(std::size_t i, std::size_t j) const { return i != j && adj_[i * n_ + j]; }
  void set_edge(std::size_t i, std::size_t j) {
    if (i == j) return;
    adj_[i * n_ + j] = adj_[j * n_ + i] = true;
  }
  std::vector<int> neighbors(std::size_t i) const {
    std::vector<int> out;
    for (std::size_t j = 0; j < n_; ++j)
      if (edge(i, j)) out.push_back(static_cast<int>(j));
    return out;
  }
  std::size_t edge_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (edge(i, j)) ++c;
    return c;
  }

 private:
  std::size_t n_{0};
  std::vector<bool> adj_;
};

/// Edge (i,j) iff ||p_i - p_j|| <= r_comm; r_comm = inf yields the complete graph.
CommGraph build_graph(const std::vector<Eigen::Vector2d>& positions, double r_comm);

/// Candidate recipients for one broadcast: GLOBAL -> everyone but the sender,
/// LOCAL -> neighbors within r_comm_local. Each candidate is dropped
/// independently with loss_probability; candidates are visited in ascending
/// robot id so the drop pattern is reproducible for a given stream state.
std::vector<int> broadcast(const Envelope& env, const std::vector<Eigen::Vector2d>& positions,
                           double r_comm_local, double loss_probability, RngStream& rng);

/// Delivered copy of an envelope.
struct Delivery {
  int recipient{-1};
  Envelope env;
};

/// Engine-owned message queue: send at tick t, deliver at t + 1, ordered by
/// (sender id, sequence number).
class MessageHub {
 public:
  explicit MessageHub(std::size_t n_robots) : inboxes_(n_robots) {}

  /// Queue a broadcast; returns the number of surviving recipients.
  std::size_t send(Envelope env, const std::vector<Eigen::Vector2d>& positions,
                   double r_comm_local, double loss_probability, RngStream& rng);

  /// Move everything sent at tick - 1 into per-robot inboxes.
  void deliver(long tick);

  const std::vector<Envelope>& inbox(std::size_t robot) const { return inboxes_[robot]; }
  void clear_inboxes();

  long messages_sent() const { return messages_sent_; }
  long deliveries_lost() const { return deliveries_lost_; }

 private:
  std::vector<Delivery> pending_;
  std::vector<std::vector<Envelope>> inboxes_;
  long messages_sent_{0};
  long deliveries_lost_{0};
  long next_seq_{0};
};

}  // namespace swarmform
