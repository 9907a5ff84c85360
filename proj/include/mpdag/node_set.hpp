#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <utility>
#include <vector>

namespace mpdag {

// Index of a node in its host graph. Indices follow the graph's node order.
using Node = std::size_t;

// Sorted, duplicate-free set of nodes.
class NodeSet {
 public:
  using const_iterator = std::vector<Node>::const_iterator;

  NodeSet() = default;
  NodeSet(std::initializer_list<Node> nodes) : items_(nodes) { normalize(); }
  explicit NodeSet(std::vector<Node> nodes) : items_(std::move(nodes)) { normalize(); }

  static NodeSet range(std::size_t n) {
    NodeSet s;
    s.items_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.items_[i] = i;
    return s;
  }

  bool contains(Node v) const { return std::binary_search(items_.begin(), items_.end(), v); }

  void insert(Node v) {
    auto it = std::lower_bound(items_.begin(), items_.end(), v);
    if (it == items_.end() || *it != v) items_.insert(it, v);
  }

  void erase(Node v) {
    auto it = std::lower_bound(items_.begin(), items_.end(), v);
    if (it != items_.end() && *it == v) items_.erase(it);
  }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }
  Node front() const { return items_.front(); }
  Node operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Node>& items() const noexcept { return items_; }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;
  friend auto operator<=>(const NodeSet&, const NodeSet&) = default;

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<Node> items_;
};

inline NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  std::vector<Node> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet(std::move(out));
}

inline NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  std::vector<Node> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet(std::move(out));
}

inline NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  std::vector<Node> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet(std::move(out));
}

inline bool disjoint(const NodeSet& a, const NodeSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

inline bool is_subset(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace mpdag
