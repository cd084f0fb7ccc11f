#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

namespace sedcurves::detail {

// Maximal runs of active frames over a fixed frame range. A run is identified
// by its leftmost frame index; activating a frame spawns a run or grows and
// merges its neighbours in O(log n).
class RunTracker {
 public:
  struct Activation {
    int start = 0;           // leftmost frame of the resulting run
    int end = 0;             // rightmost frame of the resulting run
    int removed_start = -1;  // start of a run whose identity disappeared
    int old_start = -1;      // previous identity of the resulting run, if kept
  };

  explicit RunTracker(int frame_count)
      : active_(static_cast<std::size_t>(frame_count), 0),
        left_(static_cast<std::size_t>(frame_count), -1),
        right_(static_cast<std::size_t>(frame_count), -1) {}

  // Frame i must be inactive.
  Activation activate(int i) {
    const int n = static_cast<int>(active_.size());
    const bool left_active = i > 0 && active_[static_cast<std::size_t>(i - 1)];
    const bool right_active =
        i + 1 < n && active_[static_cast<std::size_t>(i + 1)];
    active_[static_cast<std::size_t>(i)] = 1;

    Activation result;
    if (!left_active && !right_active) {
      left_[static_cast<std::size_t>(i)] = i;
      right_[static_cast<std::size_t>(i)] = i;
      starts_.insert(i);
      ++count_;
      result.start = i;
      result.end = i;
    } else if (left_active && !right_active) {
      const int a = left_[static_cast<std::size_t>(i - 1)];
      right_[static_cast<std::size_t>(a)] = i;
      left_[static_cast<std::size_t>(i)] = a;
      result.start = a;
      result.end = i;
      result.old_start = a;
    } else if (!left_active && right_active) {
      const int b = right_[static_cast<std::size_t>(i + 1)];
      starts_.erase(i + 1);
      starts_.insert(i);
      left_[static_cast<std::size_t>(b)] = i;
      right_[static_cast<std::size_t>(i)] = b;
      result.start = i;
      result.end = b;
      result.old_start = i + 1;
    } else {
      const int a = left_[static_cast<std::size_t>(i - 1)];
      const int b = right_[static_cast<std::size_t>(i + 1)];
      starts_.erase(i + 1);
      right_[static_cast<std::size_t>(a)] = b;
      left_[static_cast<std::size_t>(b)] = a;
      --count_;
      result.start = a;
      result.end = b;
      result.removed_start = i + 1;
      result.old_start = a;
    }
    return result;
  }

  int run_count() const { return count_; }
  int run_end(int start) const { return right_[static_cast<std::size_t>(start)]; }
  const std::set<int>& starts() const { return starts_; }

 private:
  std::vector<char> active_;
  std::vector<int> left_;   // at a run's right edge: its leftmost frame
  std::vector<int> right_;  // at a run's left edge: its rightmost frame
  std::set<int> starts_;
  int count_ = 0;
};

// Frame indices grouped by equal score, groups ordered by descending score.
struct ScoreGroups {
  std::vector<double> values;            // distinct scores, descending
  std::vector<std::vector<int>> frames;  // per group, ascending frame index
};

inline ScoreGroups group_by_score(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[static_cast<std::size_t>(a)] != scores[static_cast<std::size_t>(b)])
      return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    return a < b;
  });
  ScoreGroups groups;
  for (int index : order) {
    const double value = scores[static_cast<std::size_t>(index)];
    if (groups.values.empty() || groups.values.back() != value) {
      groups.values.push_back(value);
      groups.frames.emplace_back();
    }
    groups.frames.back().push_back(index);
  }
  return groups;
}

}  // namespace sedcurves::detail
