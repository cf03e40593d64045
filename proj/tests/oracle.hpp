#pragma once

// Reference models used as test oracles. They recompute everything from the
// full token history on every call, sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "steady/guidance.hpp"

namespace oracle {

using steady::token_id;

struct ControllerSpec {
  int total = 1;
  int budget = 1;
  int grace = 0;
  double boost = 15.0;
  std::vector<token_id> intr;
  std::vector<std::vector<token_id>> titles;  // titles[p] heads section p (index 0, 1 unused)
  std::vector<std::vector<token_id>> banned;
  std::vector<token_id> marker;
  token_id eos = 0;
};

inline bool ends_with(const std::vector<token_id>& h, std::size_t end, const std::vector<token_id>& pat) {
  if (pat.empty() || pat.size() > end) return false;
  return std::equal(pat.begin(), pat.end(), h.begin() + static_cast<std::ptrdiff_t>(end - pat.size()));
}

struct Replay {
  int section = 1;
  std::size_t section_start = 0;  // history index where the current section's tokens begin
  bool marker_done = false;
};

inline Replay replay(const ControllerSpec& s, const std::vector<token_id>& h) {
  Replay r;
  if (s.marker.empty()) r.marker_done = true;
  for (std::size_t i = 1; i <= h.size(); ++i) {
    if (r.section < s.total) {
      const auto& t = s.titles[static_cast<std::size_t>(r.section) + 1];
      if (i - r.section_start >= t.size() && ends_with(h, i, t)) {
        ++r.section;
        r.section_start = i;
      }
    }
    if (!r.marker_done && r.section == s.total && ends_with(h, i, s.marker)) r.marker_done = true;
  }
  return r;
}

// Expected bias per token id for the step that follows history h.
inline std::map<token_id, double> expected(const ControllerSpec& s, const std::vector<token_id>& h) {
  std::map<token_id, double> out;
  const auto r = replay(s, h);
  const auto tau = static_cast<int>(h.size() - r.section_start);

  if (r.section < s.total && tau >= s.budget) {
    const auto& t = s.titles[static_cast<std::size_t>(r.section) + 1];
    // Longest proper prefix of the title that ends the current section's tokens.
    std::size_t cursor = 0;
    for (std::size_t k = std::min<std::size_t>(t.size() - 1, static_cast<std::size_t>(tau)); k > 0; --k) {
      const std::vector<token_id> pre(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k));
      if (ends_with(h, h.size(), pre)) {
        cursor = k;
        break;
      }
    }
    const bool last_intr = !h.empty() && std::count(s.intr.begin(), s.intr.end(), h.back()) > 0;
    if (cursor > 0) out[t[cursor]] = s.boost;
    else if ((last_intr) || tau >= s.budget + s.grace) out[t[0]] = s.boost;
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (r.section < s.total || !r.marker_done) out[s.eos] = -inf;
  for (const auto& b : s.banned) {
    const std::vector<token_id> pre(b.begin(), b.end() - 1);
    if (pre.empty() || ends_with(h, h.size(), pre)) out[b.back()] = -inf;
  }
  return out;
}

inline steady::GuidanceConfig to_config(const ControllerSpec& s) {
  steady::GuidanceConfig c;
  c.total_sections = s.total;
  c.section_token_budget = s.budget;
  c.grace = s.grace;
  c.boost = s.boost;
  c.interruption_tokens = s.intr;
  c.banned_phrases = s.banned;
  c.eos_token = s.eos;
  c.end_marker = s.marker;
  auto titles = s.titles;
  c.title_template = [titles](int p) { return titles.at(static_cast<std::size_t>(p)); };
  return c;
}

inline std::map<token_id, double> as_map(const steady::LogitAdjustment& adj) {
  std::map<token_id, double> m;
  for (const auto& e : adj.entries) m[e.token] = e.bias;
  return m;
}

// ---------------------------------------------------------------------------
// Length statistics straight from their definitions.

inline double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline double population_sd(const std::vector<double>& v) {
  const double m = mean(v);
  long double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(static_cast<double>(s / static_cast<long double>(v.size())));
}

// Fraction of repeated n-gram windows, via a set of string keys.
inline double repetition(const std::vector<std::string>& w, std::size_t n) {
  std::set<std::string> seen;
  const std::size_t total = w.size() - n + 1;
  for (std::size_t i = 0; i < total; ++i) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) key += w[i + k] + '\x1f';
    seen.insert(key);
  }
  return 1.0 - static_cast<double>(seen.size()) / static_cast<double>(total);
}

}  // namespace oracle
