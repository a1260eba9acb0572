#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace rig::detail {

/// Breadth-first exploration of a deterministic product, expanding letters in increasing
/// order. Each node is recorded with its shortlex-least access word, so the first node found
/// satisfying a predicate has the shortlex-least witness word among all such nodes.
template <class Key, class Letter>
class ShortlexExplorer {
 public:
  struct Node {
    Key key;
    std::size_t parent;
    Letter letter;
  };

  static constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

  /// `expand(key, emit)` must call `emit(letter, successor)` in letter order.
  /// Stops at the first discovered node with `stop(key)` true and returns its index.
  template <class Expand, class Stop>
  std::optional<std::size_t> run(const Key& initial, Expand&& expand, Stop&& stop) {
    nodes_.clear();
    index_.clear();
    nodes_.push_back(Node{initial, kRoot, Letter{}});
    index_.emplace(initial, 0);
    if (stop(initial)) return 0;
    std::size_t head = 0;
    std::optional<std::size_t> found;
    while (head < nodes_.size() && !found) {
      const std::size_t current = head++;
      const Key key = nodes_[current].key;
      expand(key, [&](const Letter& letter, const Key& next) {
        if (found) return;
        auto [it, inserted] = index_.emplace(next, nodes_.size());
        if (!inserted) return;
        nodes_.push_back(Node{next, current, letter});
        if (stop(next)) found = it->second;
      });
    }
    return found;
  }

  template <class Expand>
  void explore(const Key& initial, Expand&& expand) {
    run(initial, std::forward<Expand>(expand), [](const Key&) { return false; });
  }

  std::vector<Letter> word_to(std::size_t node) const {
    std::vector<Letter> word;
    for (std::size_t n = node; nodes_[n].parent != kRoot; n = nodes_[n].parent) {
      word.push_back(nodes_[n].letter);
    }
    return {word.rbegin(), word.rend()};
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::optional<std::size_t> find(const Key& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<Node> nodes_;
  std::map<Key, std::size_t> index_;
};

}  // namespace rig::detail
