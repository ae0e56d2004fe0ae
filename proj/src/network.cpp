#include "swarmform/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmform {

CommGraph build_graph(const std::vector<Eigen::Vector2d>& positions, double r_comm) {
  CommGraph g(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if ((positions[i] - positions[j]).norm() <= r_comm) g.set_edge(i, j);
    }
  }
  return g;
}

std::vector<int> broadcast(const Envelope& env, const std::vector<Eigen::Vector2d>& positions,
                           double r_comm_local, double loss_probability, RngStream& rng) {
  if (!(loss_probability >= 0.0 && loss_probability < 1.0))
    throw std::domain_error("broadcast: loss_probability must be in [0,1)");

  std::vector<int> candidates;
  if (env.channel == Channel::Global) {
    for (std::size_t j = 0; j < positions.size(); ++j)
      if (static_cast<int>(j) != env.sender) candidates.push_back(static_cast<int>(j));
  } else {
    CommGraph g = build_graph(positions, r_comm_local);
    candidates = g.neighbors(static_cast<std::size_t>(env.sender));
  }

  std::vector<int> recipients;
  for (int j : candidates) {
    if (!rng.bernoulli(loss_probability)) recipients.push_back(j);
  }
  return recipients;
}

std::size_t MessageHub::send(Envelope env, const std::vector<Eigen::Vector2d>& positions,
                             double r_comm_local, double loss_probability, RngStream& rng) {
  env.seq = next_seq_++;
  ++messages_sent_;
  std::size_t n_candidates =
      env.channel == Channel::Global
          ? positions.size() - 1
          : build_graph(positions, r_comm_local).neighbors(env.sender).size();
  std::vector<int> recipients = broadcast(env, positions, r_comm_local, loss_probability, rng);
  deliveries_lost_ += static_cast<long>(n_candidates - recipients.size());
  for (int r : recipients) pending_.push_back(Delivery{r, env});
  return recipients.size();
}

void MessageHub::deliver(long tick) {
  std::vector<Delivery> due;
  std::vector<Delivery> later;
  for (auto& d : pending_) {
    if (d.env.sent_tick + 1 <= tick)
      due.push_back(std::move(d));
    else
      later.push_back(std::move(d));
  }
  pending_ = std::move(later);
  std::stable_sort(due.begin(), due.end(), [](const Delivery& a, const Delivery& b) {
    if (a.env.sender != b.env.sender) return a.env.sender < b.env.sender;
    return a.env.seq < b.env.seq;
  });
  for (auto& d : due) inboxes_[d.recipient].push_back(std::move(d.env));
}

void MessageHub::clear_inboxes() {
  for (auto& box : inboxes_) box.clear();
}

}  // namespace swarmform
