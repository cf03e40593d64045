#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace steady {

// Incremental matcher for one token pattern. State is the length of the
// longest suffix of the input that is a proper-or-full prefix of the pattern;
// mismatches fall back along the prefix function.
template <typename T>
class PrefixMatcher {
 public:
  PrefixMatcher() = default;
  explicit PrefixMatcher(std::vector<T> pattern) : pattern_(std::move(pattern)) {
    fail_.assign(pattern_.size() + 1, 0);
    for (std::size_t i = 1; i < pattern_.size(); ++i) {
      std::size_t k = fail_[i];
      while (k > 0 && pattern_[i] != pattern_[k]) k = fail_[k];
      if (pattern_[i] == pattern_[k]) ++k;
      fail_[i + 1] = k;
    }
  }

  // Returns the new state after consuming `token`. A return value equal to
  // size() means the full pattern just completed.
  std::size_t advance(std::size_t state, const T& token) const {
    if (pattern_.empty()) return 0;
    if (state == pattern_.size()) state = fail_[state];
    while (state > 0 && pattern_[state] != token) state = fail_[state];
    if (pattern_[state] == token) ++state;
    return state;
  }

  std::size_t size() const noexcept { return pattern_.size(); }
  bool empty() const noexcept { return pattern_.empty(); }
  const T& at(std::size_t i) const { return pattern_.at(i); }
  std::span<const T> pattern() const noexcept { return pattern_; }

 private:
  std::vector<T> pattern_;
  std::vector<std::size_t> fail_;
};

}  // namespace steady
