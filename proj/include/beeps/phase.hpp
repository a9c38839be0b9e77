#pragma once

// Phase arithmetic shared by the slotted and continuous-time engines.
//
// A phase is a position inside one period: an integer slot in [0, Q) for the
// slotted model, a real time point in [0, T) for the continuous model. All
// range queries are wrap-aware: a range whose endpoints reduce to x > y is the
// arc running from x forward through the period boundary to y.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

namespace beeps {

using Slot = std::int64_t;

/// Reduces x into [0, period).
constexpr Slot wrap(Slot x, Slot period) noexcept {
  const Slot r = x % period;
  return r < 0 ? r + period : r;
}

inline double wrap(double x, double period) noexcept {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative number can round up to exactly `period`.
  if (r >= period) r = 0.0;
  return r;
}

/// Global-frame phase of a local phase p on a node with clock offset theta.
template <typename T>
T to_global(T phase, T theta, T period) noexcept {
  return wrap(phase + theta, period);
}

/// Forward distance from `from` to `to` along the period.
template <typename T>
T forward_distance(T from, T to, T period) noexcept {
  return wrap(to - from, period);
}

/// Shortest distance between two phases on the circle.
template <typename T>
T circular_distance(T a, T b, T period) noexcept {
  const T d = forward_distance(a, b, period);
  return std::min(d, period - d);
}

/// Closed arc [start, start + length] on the circle; true if x lies on it.
template <typename T>
bool arc_contains(T start, T length, T x, T period) noexcept {
  return forward_distance(start, x, period) <= length;
}

/// Ordered set of distinct phases within one period.
template <typename T>
class PhaseSet {
 public:
  using value_type = T;
  using const_iterator = typename std::vector<T>::const_iterator;

  explicit PhaseSet(T period) : period_(period) {
    if (!(period > T{0})) throw std::invalid_argument("PhaseSet: period must be positive");
  }

  PhaseSet(T period, std::initializer_list<T> phases) : PhaseSet(period) {
    for (T p : phases) insert(p);
  }

  /// Inserts a phase; values outside [0, period) are rejected.
  void insert(T phase) {
    if (phase < T{0} || phase >= period_) throw std::out_of_range("PhaseSet: phase outside period");
    auto it = std::lower_bound(phases_.begin(), phases_.end(), phase);
    if (it == phases_.end() || *it != phase) phases_.insert(it, phase);
  }

  /// Appends a phase known to be larger than every stored one.
  void push_back_sorted(T phase) {
    if (phase < T{0} || phase >= period_) throw std::out_of_range("PhaseSet: phase outside period");
    if (!phases_.empty() && !(phases_.back() < phase)) {
      insert(phase);
      return;
    }
    phases_.push_back(phase);
  }

  void merge(const PhaseSet& other) {
    for (T p : other) insert(p);
  }

  void clear() noexcept { phases_.clear(); }

  [[nodiscard]] T period() const noexcept { return period_; }
  [[nodiscard]] std::size_t size() const noexcept { return phases_.size(); }
  [[nodiscard]] bool empty() const noexcept { return phases_.empty(); }
  [[nodiscard]] const_iterator begin() const noexcept { return phases_.begin(); }
  [[nodiscard]] const_iterator end() const noexcept { return phases_.end(); }
  [[nodiscard]] const std::vector<T>& values() const noexcept { return phases_; }
  [[nodiscard]] bool contains(T phase) const {
    return std::binary_search(phases_.begin(), phases_.end(), phase);
  }

  /// S[a, b]: phases on the closed arc from a mod period to b mod period.
  [[nodiscard]] PhaseSet range(T a, T b) const {
    PhaseSet out(period_);
    const T x = wrap(a, period_);
    const T y = wrap(b, period_);
    if (x <= y) {
      auto lo = std::lower_bound(phases_.begin(), phases_.end(), x);
      auto hi = std::upper_bound(lo, phases_.end(), y);
      out.phases_.assign(lo, hi);
    } else {
      // The arc wraps; keep ascending order in the result.
      auto head_end = std::upper_bound(phases_.begin(), phases_.end(), y);
      auto tail_begin = std::lower_bound(head_end, phases_.end(), x);
      out.phases_.assign(phases_.begin(), head_end);
      out.phases_.insert(out.phases_.end(), tail_begin, phases_.end());
    }
    return out;
  }

  /// Same predicate as !range(a, b).empty() without materialising the set.
  [[nodiscard]] bool any_in(T a, T b) const {
    if (phases_.empty()) return false;
    const T x = wrap(a, period_);
    const T y = wrap(b, period_);
    if (x <= y) {
      auto lo = std::lower_bound(phases_.begin(), phases_.end(), x);
      return lo != phases_.end() && *lo <= y;
    }
    return phases_.front() <= y || phases_.back() >= x;
  }

  /// Nearest phase at or before `p` scanning backwards (wrap-aware).
  [[nodiscard]] std::optional<T> at_or_before(T p) const {
    if (phases_.empty()) return std::nullopt;
    const T x = wrap(p, period_);
    auto it = std::upper_bound(phases_.begin(), phases_.end(), x);
    if (it == phases_.begin()) return phases_.back();
    return *std::prev(it);
  }

  bool operator==(const PhaseSet&) const = default;

 private:
  T period_;
  std::vector<T> phases_;
};

using SlotSet = PhaseSet<Slot>;
using TimeSet = PhaseSet<double>;

/// S[a, b] as a free function.
template <typename T>
PhaseSet<T> range_query(const PhaseSet<T>& set, T a, T b) {
  return set.range(a, b);
}

}  // namespace beeps
