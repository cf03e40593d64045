#pragma once

// Length-volatility, format, lexical-diversity and drift metrics.
//
// Percent-valued metrics (lvc, mla, sca) return values on a 0..100 scale.
// ngram_repetition and ttr return fractions in [0, 1].

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "steady/common.hpp"

namespace steady::metrics {

// A ratio or similarity whose denominator is zero.
class UndefinedMetric : public std::domain_error {
 public:
  explicit UndefinedMetric(const std::string& what) : std::domain_error(what) {}
};

double mean(std::span<const double> values);

// Population standard deviation of per-run word counts.
double lsd(std::span<const double> lengths);

// Population standard deviation of per-run section counts.
double fsd(std::span<const double> section_counts);

double lvc(double lsd, double mean);
double mla(double mean, double target);
double sca(std::int64_t correct, std::int64_t required);

struct LengthSummary {
  double mean = 0;
  double lsd = 0;
  double lvc = 0;
  double mla = 0;
};

LengthSummary summarize_lengths(std::span<const double> lengths, double target);

namespace detail {

// Number of distinct length-n windows of `seq`.
template <class T>
std::size_t distinct_ngrams(std::span<const T> seq, std::size_t n) {
  const std::size_t total = seq.size() - n + 1;
  std::vector<std::size_t> starts(total);
  std::iota(starts.begin(), starts.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(seq.begin() + a, seq.begin() + a + n, seq.begin() + b,
                                        seq.begin() + b + n);
  };
  std::sort(starts.begin(), starts.end(), less);
  std::size_t distinct = total ? 1 : 0;
  for (std::size_t i = 1; i < total; ++i)
    if (less(starts[i - 1], starts[i])) ++distinct;
  return distinct;
}

}  // namespace detail

// 1 - distinct/total over all length-n windows.
template <class T>
double ngram_repetition(std::span<const T> tokens, std::size_t n) {
  if (n < 1) throw ArgumentError("ngram_repetition: n must be >= 1");
  if (tokens.size() < n) throw ArgumentError("ngram_repetition: fewer tokens than n");
  const std::size_t total = tokens.size() - n + 1;
  return 1.0 - static_cast<double>(detail::distinct_ngrams(tokens, n)) / static_cast<double>(total);
}

template <class T>
double ttr(std::span<const T> tokens) {
  if (tokens.empty()) throw ArgumentError("ttr: empty sequence");
  return static_cast<double>(detail::distinct_ngrams(tokens, 1)) / static_cast<double>(tokens.size());
}

template <class T>
double ngram_repetition(const std::vector<T>& tokens, std::size_t n) {
  return ngram_repetition(std::span<const T>(tokens), n);
}

template <class T>
double ttr(const std::vector<T>& tokens) {
  return ttr(std::span<const T>(tokens));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// hidden[t - 1][layer] is the hidden-state vector at step t (1-based).
using HiddenStates = std::vector<std::vector<std::vector<double>>>;

struct DriftSeries {
  std::vector<std::int64_t> steps;
  std::vector<double> similarities;
  std::int64_t anchor_step = 100;
  int window = 64;
};

// Layer-averaged mean of the `window` steps ending at `step` (clipped at 1).
std::vector<double> window_mean(const HiddenStates& hidden, std::int64_t step, int window);

// Cosine similarity of each probe window against the anchor window. Probe
// steps default to the anchor followed by every `window` steps after it.
DriftSeries drift_curve(const HiddenStates& hidden, std::int64_t anchor_step = 100,
                        int window = 64, std::vector<std::int64_t> probe_steps = {});

}  // namespace steady::metrics
