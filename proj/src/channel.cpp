#include "wurpoll/channel.hpp"

#include <stdexcept>

namespace wurpoll {

LinkModel LinkModel::uniform(int nodes, double rho, int retry_limit,
                             double wakeup_reliability) {
  LinkModel link;
  link.pdr.assign(nodes, rho);
  link.retry_limit = retry_limit;
  link.wakeup_reliability = wakeup_reliability;
  link.validate();
  return link;
}

void LinkModel::validate() const {
  if (pdr.empty()) throw std::invalid_argument("link model covers no nodes");
  for (double rho : pdr)
    if (!(rho >= 0.0 && rho <= 1.0))
      throw std::invalid_argument("per-node delivery probability must lie in [0,1]");
  if (retry_limit < 0) throw std::invalid_argument("retry limit must be >= 0");
  if (!(wakeup_reliability >= 0.0 && wakeup_reliability <= 1.0))
    throw std::invalid_argument("wake-up reliability must lie in [0,1]");
}

PollOutcome poll(const LinkModel& link, int node, Rng& rng) {
  if (node < 0 || node >= static_cast<int>(link.pdr.size()))
    throw std::out_of_range("poll: unknown node id");
  PollOutcome out;
  out.woke = rng.next_bernoulli(link.wakeup_reliability);
  if (!out.woke) return out;
  const double rho = link.pdr[node];
  for (int attempt = 0; attempt <= link.retry_limit; ++attempt) {
    ++out.attempts;
    if (rng.next_bernoulli(rho)) {
      out.success = true;
      break;
    }
  }
  return out;
}

}  // namespace wurpoll
