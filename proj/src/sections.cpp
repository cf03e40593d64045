#include "steady/sections.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <json.hpp>

#include "steady/metrics.hpp"

namespace steady::sections {

namespace {

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

bool at_boundary(std::string_view text, std::size_t pos) {
  return pos == 0 || is_ws(text[pos - 1]);
}

bool at_line_start(std::string_view text, std::size_t pos) {
  return pos == 0 || text[pos - 1] == '\n';
}

void skip_spaces(std::string_view text, std::size_t& p) {
  while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
}

bool eat(std::string_view text, std::size_t& p, std::string_view lit) {
  if (text.substr(p, lit.size()) != lit) return false;
  p += lit.size();
  return true;
}

std::optional<int> eat_number(std::string_view text, std::size_t& p) {
  const std::size_t start = p;
  while (p < text.size() && p - start < 9 && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
  if (p == start) return std::nullopt;
  return std::stoi(std::string(text.substr(start, p - start)));
}

struct HeaderMatch {
  std::size_t begin = 0;
  std::size_t end = 0;  // first byte of the body
  int number = 0;
  std::string title;
};

std::size_t line_end(std::string_view text, std::size_t p) {
  const auto nl = text.find('\n', p);
  return nl == std::string_view::npos ? text.size() : nl + 1;
}

std::string title_after(std::string_view text, std::size_t p, std::size_t end) {
  auto rest = trim(text.substr(p, end - p));
  while (!rest.empty() && (rest.front() == ':' || rest.front() == '.')) rest.remove_prefix(1);
  return std::string(trim(rest));
}

// Keyword sequence between the glyph and the number.
bool eat_glyph_keyword(std::string_view text, std::size_t& p, HeaderFamily family) {
  skip_spaces(text, p);
  switch (family) {
    case HeaderFamily::chapter: return eat(text, p, "Chapter");
    case HeaderFamily::round: return eat(text, p, "Round");
    case HeaderFamily::floor: return eat(text, p, "Floor");
    case HeaderFamily::day:
      if (!eat(text, p, "Date")) return false;
      skip_spaces(text, p);
      eat(text, p, ":");
      skip_spaces(text, p);
      return eat(text, p, "Day");
    default: return false;
  }
}

std::vector<HeaderMatch> find_glyph_headers(std::string_view text, HeaderFamily family) {
  std::vector<HeaderMatch> out;
  for (std::size_t at = text.find("#*#"); at != std::string_view::npos; at = text.find("#*#", at + 1)) {
    if (!at_boundary(text, at)) continue;
    std::size_t p = at + 3;
    if (!eat_glyph_keyword(text, p, family)) continue;
    skip_spaces(text, p);
    const auto n = eat_number(text, p);
    if (!n) continue;
    const std::size_t end = line_end(text, p);
    out.push_back({at, end, *n, title_after(text, p, end)});
  }
  return out;
}

std::vector<HeaderMatch> find_comment_headers(std::string_view text, std::string_view prefix,
                                              std::string_view keyword) {
  std::vector<HeaderMatch> out;
  for (std::size_t at = text.find(prefix); at != std::string_view::npos;
       at = text.find(prefix, at + 1)) {
    if (!at_line_start(text, at)) continue;
    std::size_t p = at + prefix.size();
    skip_spaces(text, p);
    if (!eat(text, p, keyword)) continue;
    skip_spaces(text, p);
    const auto n = eat_number(text, p);
    if (!n) continue;
    const std::size_t end = line_end(text, p);
    out.push_back({at, end, *n, title_after(text, p, end)});
  }
  return out;
}

// A record section starts at the '{' that opens an object whose first key is "index".
std::vector<HeaderMatch> find_record_headers(std::string_view text) {
  std::vector<HeaderMatch> out;
  constexpr std::string_view key = "\"index\"";
  for (std::size_t at = text.find(key); at != std::string_view::npos; at = text.find(key, at + 1)) {
    std::size_t b = at;
    while (b > 0 && is_ws(text[b - 1])) --b;
    if (b == 0 || text[b - 1] != '{') continue;
    std::size_t p = at + key.size();
    skip_spaces(text, p);
    if (!eat(text, p, ":")) continue;
    skip_spaces(text, p);
    const auto n = eat_number(text, p);
    if (!n) continue;
    out.push_back({b - 1, b - 1, *n, ""});
  }
  return out;
}

std::vector<HeaderMatch> find_headers(std::string_view text, HeaderFamily family) {
  switch (family) {
    case HeaderFamily::function_comment: return find_comment_headers(text, "#", "Function");
    case HeaderFamily::formula_comment: return find_comment_headers(text, "%", "Formula");
    case HeaderFamily::record_index: return find_record_headers(text);
    default: return find_glyph_headers(text, family);
  }
}

std::size_t find_marker(std::string_view text, std::size_t from) {
  for (auto at = text.find(kEndMarker, from); at != std::string_view::npos;
       at = text.find(kEndMarker, at + 1))
    if (at_boundary(text, at)) return at;
  return std::string_view::npos;
}

// Decodes one UTF-8 codepoint at p; malformed bytes decode as themselves.
char32_t next_codepoint(std::string_view s, std::size_t& p) {
  const auto b0 = static_cast<unsigned char>(s[p]);
  int len = 1;
  char32_t cp = b0;
  if (b0 >= 0xF0 && b0 < 0xF8) { len = 4; cp = b0 & 0x07; }
  else if (b0 >= 0xE0) { len = 3; cp = b0 & 0x0F; }
  else if (b0 >= 0xC0) { len = 2; cp = b0 & 0x1F; }
  if (len == 1 || p + static_cast<std::size_t>(len) > s.size()) {
    ++p;
    return b0;
  }
  for (int i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[p + static_cast<std::size_t>(i)]);
    if ((b & 0xC0) != 0x80) {
      ++p;
      return b0;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  p += static_cast<std::size_t>(len);
  return cp;
}

bool is_cjk_ideograph(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
         (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x20000 && c <= 0x2CEAF);
}

bool is_cjk_separator(char32_t c) {
  return (c >= 0x3000 && c <= 0x303F) || (c >= 0xFF00 && c <= 0xFF0F) ||
         (c >= 0xFF1A && c <= 0xFF20) || (c >= 0xFF3B && c <= 0xFF40) ||
         (c >= 0xFF5B && c <= 0xFF65) || (c >= 0x2010 && c <= 0x2027);
}

bool contains_whole_word(std::string_view haystack, std::string_view needle) {
  const std::string h = lower(haystack);
  const std::string n = lower(trim(needle));
  if (n.empty()) return false;
  const bool ascii = std::all_of(n.begin(), n.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  for (auto at = h.find(n); at != std::string::npos; at = h.find(n, at + 1)) {
    if (!ascii) return true;
    const bool left = at == 0 || !is_word_char(h[at - 1]);
    const bool right = at + n.size() == h.size() || !is_word_char(h[at + n.size()]);
    if (left && right) return true;
  }
  return false;
}

std::vector<std::string_view> lines_of(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t p = 0;
  while (p <= s.size()) {
    const auto nl = s.find('\n', p);
    if (nl == std::string_view::npos) {
      out.push_back(s.substr(p));
      break;
    }
    out.push_back(s.substr(p, nl - p));
    p = nl + 1;
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), is_word_char);
}

// "def name(params):" or "def name(params) -> type:"
bool is_def_line(std::string_view line) {
  line = trim(line);
  if (line.substr(0, 4) != "def ") return false;
  line.remove_prefix(4);
  const auto open = line.find('(');
  const auto close = line.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return false;
  if (!is_identifier(trim(line.substr(0, open)))) return false;
  return !line.empty() && line.back() == ':';
}

bool valid_code_function(std::string_view body) {
  const auto lines = lines_of(body);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_def_line(lines[i])) continue;
    std::size_t j = i + 1;
    while (j < lines.size() && trim(lines[j]).empty()) ++j;
    if (j == lines.size()) return false;
    const auto open_line = trim(lines[j]);
    std::string_view quote;
    if (open_line.substr(0, 3) == "\"\"\"") quote = "\"\"\"";
    else if (open_line.substr(0, 3) == "'''") quote = "'''";
    else return false;
    std::size_t close = std::string_view::npos;
    if (open_line.find(quote, 3) != std::string_view::npos) {
      close = j;
    } else {
      for (std::size_t k = j + 1; k < lines.size(); ++k)
        if (lines[k].find(quote) != std::string_view::npos) {
          close = k;
          break;
        }
    }
    if (close == std::string_view::npos) return false;
    for (std::size_t k = close + 1; k < lines.size(); ++k) {
      const auto l = trim(lines[k]);
      if (!l.empty() && l.substr(0, 3) != "```" && l.substr(0, 1) != "#") return true;
    }
    return false;
  }
  return false;
}

// First balanced {...} in s, honouring JSON string escapes.
std::optional<std::string_view> first_object(std::string_view s) {
  const auto start = s.find('{');
  if (start == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_str = false, esc = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_str) {
      if (esc) esc = false;
      else if (c == '\\') esc = true;
      else if (c == '"') in_str = false;
      continue;
    }
    if (c == '"') in_str = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return s.substr(start, i - start + 1);
  }
  return std::nullopt;
}

bool valid_record(std::string_view text, std::initializer_list<std::string_view> fields) {
  const auto obj = first_object(text);
  if (!obj) return false;
  const auto j = nlohmann::json::parse(*obj, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  for (auto f : fields)
    if (!j.contains(std::string(f))) return false;
  return true;
}

bool valid_latex_equation(const SectionReport& s) {
  constexpr std::string_view begin = "\\begin{equation}";
  constexpr std::string_view end = "\\end{equation}";
  const std::string_view body = s.body_text;
  std::size_t p = 0;
  int pairs = 0;
  std::size_t first_begin = std::string_view::npos;
  while (true) {
    const auto b = body.find(begin, p);
    const auto e = body.find(end, p);
    if (b == std::string_view::npos) {
      if (e != std::string_view::npos) return false;  // stray close
      break;
    }
    if (e == std::string_view::npos || e < b) return false;
    const auto next_b = body.find(begin, b + begin.size());
    if (next_b != std::string_view::npos && next_b < e) return false;  // nested / unclosed
    if (trim(body.substr(b + begin.size(), e - b - begin.size())).empty()) return false;
    if (first_begin == std::string_view::npos) first_begin = b;
    ++pairs;
    p = e + end.size();
  }
  if (pairs == 0) return false;
  if (trim(s.header_text).substr(0, 1) == "%") return true;
  for (auto line : lines_of(body.substr(0, first_begin)))
    if (trim(line).substr(0, 1) == "%") return true;
  return false;
}

}  // namespace

std::string_view to_string(HeaderFamily family) noexcept {
  switch (family) {
    case HeaderFamily::chapter: return "chapter";
    case HeaderFamily::round: return "round";
    case HeaderFamily::day: return "day";
    case HeaderFamily::floor: return "floor";
    case HeaderFamily::function_comment: return "function_comment";
    case HeaderFamily::record_index: return "record_index";
    case HeaderFamily::formula_comment: return "formula_comment";
  }
  return "chapter";
}

std::string_view to_string(Validator validator) noexcept {
  switch (validator) {
    case Validator::none: return "none";
    case Validator::code_function: return "code_function";
    case Validator::user_record: return "user_record";
    case Validator::company_record: return "company_record";
    case Validator::latex_equation: return "latex_equation";
  }
  return "none";
}

std::string_view to_string(Language language) noexcept {
  return language == Language::en ? "EN" : "CH";
}

HeaderFamily parse_header_family(std::string_view name) {
  for (auto f : {HeaderFamily::chapter, HeaderFamily::round, HeaderFamily::day, HeaderFamily::floor,
                 HeaderFamily::function_comment, HeaderFamily::record_index,
                 HeaderFamily::formula_comment})
    if (to_string(f) == name) return f;
  throw ArgumentError("unknown header family: " + std::string(name));
}

Language parse_language(std::string_view name) {
  const auto l = lower(name);
  if (l == "en") return Language::en;
  if (l == "ch" || l == "zh") return Language::ch;
  throw ArgumentError("unknown language: " + std::string(name));
}

std::vector<int> ParsedDocument::labels() const {
  std::vector<int> out;
  out.reserve(sections.size());
  for (const auto& s : sections) out.push_back(s.index_as_labeled);
  return out;
}

std::string ParsedDocument::reserialize() const {
  std::string out = preamble;
  for (const auto& s : sections) {
    out += s.header_text;
    out += s.body_text;
  }
  if (end_marker_present) out += kEndMarker;
  out += trailer;
  return out;
}

ParsedDocument parse_sections(std::string_view text, const TaskProfile& profile) {
  ParsedDocument doc;
  const auto headers = find_headers(text, profile.family);
  const std::size_t search_from = headers.empty() ? 0 : headers.back().end;
  const std::size_t marker = find_marker(text, search_from);
  const std::size_t content_end = marker == std::string_view::npos ? text.size() : marker;

  doc.preamble = std::string(text.substr(0, headers.empty() ? content_end : headers.front().begin));
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const auto& h = headers[i];
    const std::size_t body_end = i + 1 < headers.size() ? headers[i + 1].begin : content_end;
    SectionReport s;
    s.index_as_labeled = h.number;
    s.position = static_cast<int>(i) + 1;
    s.header_text = std::string(text.substr(h.begin, h.end - h.begin));
    s.title_text = h.title;
    s.body_text = std::string(text.substr(h.end, body_end - h.end));
    s.word_count = word_count(s.body_text, profile.language);
    doc.sections.push_back(std::move(s));
  }
  if (marker != std::string_view::npos) {
    doc.end_marker_present = true;
    doc.trailer = std::string(text.substr(marker + kEndMarker.size()));
  }
  return doc;
}

std::vector<std::string> words(std::string_view text, Language language) {
  std::vector<std::string> out;
  std::string run;
  auto flush = [&] {
    if (!run.empty()) out.push_back(std::move(run));
    run.clear();
  };
  if (language == Language::en) {
    for (char c : text) {
      if (is_ws(c)) flush();
      else run += c;
    }
    flush();
    return out;
  }
  std::size_t p = 0;
  while (p < text.size()) {
    const std::size_t start = p;
    const char32_t cp = next_codepoint(text, p);
    if (cp < 0x80 && is_ws(static_cast<char>(cp))) {
      flush();
    } else if (is_cjk_separator(cp)) {
      flush();
    } else if (is_cjk_ideograph(cp)) {
      flush();
      out.emplace_back(text.substr(start, p - start));
    } else {
      run.append(text.substr(start, p - start));
    }
  }
  flush();
  return out;
}

std::int64_t word_count(std::string_view text, Language language) {
  return static_cast<std::int64_t>(words(text, language).size());
}

std::string_view to_string(ConstraintKind kind) noexcept {
  switch (kind) {
    case ConstraintKind::first_char: return "first_char";
    case ConstraintKind::keyword: return "keyword";
    case ConstraintKind::theme: return "theme";
  }
  return "keyword";
}

ConstraintKind parse_constraint_kind(std::string_view name) {
  for (auto k : {ConstraintKind::first_char, ConstraintKind::keyword, ConstraintKind::theme})
    if (to_string(k) == name) return k;
  throw ArgumentError("unknown constraint kind: " + std::string(name));
}

void ConstraintSpec::validate() const {
  if (section_index < 1) throw ConfigError("section_index", "must be >= 1");
  switch (kind) {
    case ConstraintKind::first_char:
      if (value.size() != 1 || !std::isalpha(static_cast<unsigned char>(value[0])))
        throw ConfigError("value", "first_char needs a single alphabetical character");
      break;
    case ConstraintKind::keyword:
      if (trim(value).empty()) throw ConfigError("value", "keyword must not be empty");
      break;
    case ConstraintKind::theme:
      if (theme.empty()) throw ConfigError("theme", "theme keyword list must not be empty");
      if (theme_threshold < 1) throw ConfigError("theme_threshold", "must be >= 1");
      break;
  }
}

ConstraintResult verify_constraint(const std::vector<SectionReport>& sections,
                                   const ConstraintSpec& spec) {
  spec.validate();
  const auto it = std::find_if(sections.begin(), sections.end(), [&](const SectionReport& s) {
    return s.index_as_labeled == spec.section_index;
  });
  if (it == sections.end()) return {false, true};
  const std::string_view body = it->body_text;

  switch (spec.kind) {
    case ConstraintKind::first_char: {
      // First word carrying a letter; leading markup such as "**" is skipped.
      for (const auto& w : words(body, Language::en)) {
        const auto a = std::find_if(w.begin(), w.end(),
                                    [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
        if (a == w.end()) continue;
        return {std::tolower(static_cast<unsigned char>(*a)) ==
                    std::tolower(static_cast<unsigned char>(spec.value[0])),
                false};
      }
      return {false, false};
    }
    case ConstraintKind::keyword:
      return {contains_whole_word(body, spec.value), false};
    case ConstraintKind::theme: {
      std::vector<std::string> seen;
      for (const auto& k : spec.theme) {
        const auto key = lower(trim(k));
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        if (contains_whole_word(body, key)) seen.push_back(key);
      }
      return {static_cast<int>(seen.size()) >= spec.theme_threshold, false};
    }
  }
  return {};
}

bool verify_structured(const SectionReport& section, Validator validator) {
  switch (validator) {
    case Validator::none: return true;
    case Validator::code_function: return valid_code_function(section.body_text);
    case Validator::user_record:
      return valid_record(section.header_text + section.body_text,
                          {"name", "age", "gender", "address", "email", "phone"});
    case Validator::company_record:
      return valid_record(section.header_text + section.body_text,
                          {"company_name", "industry", "year_established", "company_address",
                           "contact_number"});
    case Validator::latex_equation: return valid_latex_equation(section);
  }
  return false;
}

std::string_view to_string(FailureTag tag) noexcept {
  switch (tag) {
    case FailureTag::clean: return "clean";
    case FailureTag::incomplete: return "incomplete";
    case FailureTag::skipping: return "skipping";
    case FailureTag::repetition_loop: return "repetition_loop";
  }
  return "clean";
}

std::vector<FailureTag> classify_failure(const ParsedDocument& doc, int target_sections,
                                         Language language, const FailureParams& params) {
  std::vector<FailureTag> tags;
  const auto labels = doc.labels();

  bool skipping = false;
  if (!labels.empty() && labels.back() == target_sections) {
    for (std::size_t i = 1; i < labels.size(); ++i)
      if (labels[i] - labels[i - 1] >= 2) skipping = true;
  }
  const bool short_count = static_cast<int>(doc.sections.size()) < target_sections;
  if ((short_count || !doc.end_marker_present) && !skipping) tags.push_back(FailureTag::incomplete);
  if (skipping) tags.push_back(FailureTag::skipping);

  const auto all = words(doc.reserialize(), language);
  const auto tail_n = static_cast<std::size_t>(
      std::ceil(params.tail_fraction * static_cast<double>(all.size())));
  const auto n = static_cast<std::size_t>(params.ngram);
  if (tail_n >= n && n >= 1) {
    const std::span<const std::string> tail(all.data() + (all.size() - tail_n), tail_n);
    if (metrics::ngram_repetition(tail, n) > params.repetition_threshold)
      tags.push_back(FailureTag::repetition_loop);
  }
  if (tags.empty()) tags.push_back(FailureTag::clean);
  return tags;
}

}  // namespace steady::sections
