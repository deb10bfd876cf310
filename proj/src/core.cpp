#include "seqsub/core.hpp"

#include <algorithm>
#include <unordered_set>

namespace seqsub {

Sequence::Sequence(std::vector<ItemId> items) : items_(std::move(items)) {
  std::unordered_set<ItemId> seen;
  for (ItemId id : items_) {
    if (id < 0) throw std::invalid_argument("Sequence: negative item id");
    if (!seen.insert(id).second) {
      throw std::invalid_argument("Sequence: duplicate item id " + std::to_string(id));
    }
  }
}

std::span<const ItemId> Sequence::prefix(int t) const {
  if (t < 0) throw std::invalid_argument("Sequence::prefix: t must be >= 0");
  const auto len = std::min<std::size_t>(static_cast<std::size_t>(t), items_.size());
  return std::span<const ItemId>(items_.data(), len);
}

bool Sequence::contains(ItemId id) const {
  return std::find(items_.begin(), items_.end(), id) != items_.end();
}

const SetFunction& Instance::function(int t) const {
  if (t < 1 || t > k) throw std::invalid_argument("Instance::function: index out of 1..k");
  return *functions[static_cast<std::size_t>(t - 1)];
}

void Instance::validate() const {
  if (ground.n < 1) throw std::invalid_argument("Instance: n must be >= 1");
  if (k < 1 || k > ground.n) throw std::invalid_argument("Instance: require 1 <= k <= n");
  if (static_cast<int>(functions.size()) != k) {
    throw std::invalid_argument("Instance: need exactly k functions");
  }
  for (const auto& f : functions) {
    if (!f) throw std::invalid_argument("Instance: null function");
  }
  if (curvature_hint && (*curvature_hint < 0.0 || *curvature_hint > 1.0)) {
    throw std::invalid_argument("Instance: curvature_hint outside [0,1]");
  }
}

Utility marginal(const SetFunction& f, ItemId i, std::span<const ItemId> s) {
  for (ItemId id : s) {
    if (id == i) throw std::invalid_argument("marginal: item already in the set");
  }
  std::vector<ItemId> with(s.begin(), s.end());
  with.push_back(i);
  return f.eval(with) - f.eval(s);
}

Utility sequence_value(const Instance& inst, const Sequence& pi) {
  if (pi.size() > inst.k) throw std::invalid_argument("sequence_value: sequence longer than k");
  for (ItemId id : pi.items()) {
    if (id >= inst.ground.n) throw std::invalid_argument("sequence_value: item id out of ground set");
  }
  if (pi.empty()) return 0.0;
  Utility total = 0.0;
  for (int j = 1; j <= inst.k; ++j) {
    total += inst.function(j).eval(pi.prefix(j));
  }
  return total;
}

}  // namespace seqsub
