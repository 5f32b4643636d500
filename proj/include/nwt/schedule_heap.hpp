#ifndef NWT_SCHEDULE_HEAP_HPP
#define NWT_SCHEDULE_HEAP_HPP

#include <utility>
#include <vector>

namespace nwt {

/// Indexed binary min-heap over the reaction set, keyed by absolute scheduled
/// firing time. Reactions are never inserted or removed after construction;
/// all schedule changes go through update_key, which repositions the node in
/// place instead of popping and reinserting it.
class ScheduleHeap {
 public:
  /// Builds bottom-up in O(n). Keys may be +infinity. Throws
  /// std::invalid_argument on an empty key set (nothing to simulate).
  explicit ScheduleHeap(std::vector<double> keys);

  int size() const { return static_cast<int>(heap_.size()); }

  /// Root of the heap: (reaction index, key). O(1).
  std::pair<int, double> peek_min() const;

  double key_of(int reaction) const { return key_[reaction]; }

  /// Back-pointer: current position of a reaction in the heap array.
  int position_of(int reaction) const { return pos_[reaction]; }

  /// Replaces the key in place and sifts the node up or down as needed.
  /// Re-assigning the current key leaves the array layout untouched.
  void update_key(int reaction, double key);

  /// All reactions whose key equals the root key, discovered by recursive
  /// descent from the root (preorder: node, left subtree, right subtree).
  /// The heap property guarantees every tied node is reachable through a
  /// chain of equal-key parents. Returns an empty list when the root key is
  /// infinite (the system is exhausted).
  void collect_min_ties(std::vector<int>& out) const;
  std::vector<int> collect_min_ties() const;

  /// Verifies the heap property on every edge and back-pointer consistency
  /// at every node. Test support.
  bool audit() const;

  const std::vector<int>& heap_array() const { return heap_; }

 private:
  void sift_up(int pos);
  void sift_down(int pos);
  void place(int pos, int reaction);

  std::vector<double> key_;  // by reaction index
  std::vector<int> heap_;    // heap position -> reaction index
  std::vector<int> pos_;     // reaction index -> heap position
};

}  // namespace nwt

#endif  // NWT_SCHEDULE_HEAP_HPP
