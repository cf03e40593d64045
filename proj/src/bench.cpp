#include "steady/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "steady/http.hpp"
#include "steady/metrics.hpp"

namespace steady::sections {

void to_json(nlohmann::json& j, const ConstraintSpec& c) {
  j = nlohmann::json{{"kind", sections::to_string(c.kind)}, {"section", c.section_index}, {"value", c.value}};
  if (c.kind == ConstraintKind::theme) {
    j["theme"] = c.theme;
    j["threshold"] = c.theme_threshold;
  }
}

void from_json(const nlohmann::json& j, ConstraintSpec& c) {
  c.kind = sections::parse_constraint_kind(j.at("kind").get<std::string>());
  c.section_index = j.at("section").get<int>();
  c.value = j.value("value", std::string());
  c.theme = j.value("theme", std::vector<std::string>{});
  c.theme_threshold = j.value("threshold", 2);
}

}  // namespace steady::sections

namespace steady::bench {

namespace {

using nlohmann::json;

constexpr std::array<char, 20> kLetters = {'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J',
                                           'K', 'L', 'M', 'N', 'O', 'P', 'R', 'S', 'T', 'W'};

constexpr std::array<std::string_view, 12> kKeywords = {
    "lantern", "harvest", "river",  "window", "journey", "silver",
    "garden",  "storm",   "bridge", "letter", "compass", "mirror"};

struct Theme {
  std::string_view name;
  std::array<std::string_view, 4> words;
};

constexpr std::array<Theme, 6> kThemes = {{
    {"harvest", {"harvest", "orchard", "cider", "autumn"}},
    {"sea", {"ocean", "wave", "tide", "harbor"}},
    {"winter", {"snow", "frost", "winter", "cold"}},
    {"city", {"street", "market", "tower", "traffic"}},
    {"music", {"song", "melody", "rhythm", "concert"}},
    {"travel", {"journey", "map", "train", "road"}},
}};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a ^ rotated b
  std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::optional<toy::HeaderFamily> toy_family(Task task) {
  switch (task) {
    case Task::story: return toy::HeaderFamily::chapter;
    case Task::dialogue: return toy::HeaderFamily::round;
    case Task::diary: return toy::HeaderFamily::day;
    case Task::architecture: return toy::HeaderFamily::floor;
    default: return std::nullopt;
  }
}

std::string fmt(double v, int precision = 2) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

std::string fmt(const std::optional<double>& v, std::string_view none) {
  return v ? fmt(*v) : std::string(none);
}

}  // namespace

// ---------------------------------------------------------------------------
// Specs

std::string PromptSpec::id() const {
  std::string out = std::string(prompts::to_string(task)) + "-" +
                    std::string(sections::to_string(language)) + "-" +
                    std::string(prompts::to_string(complexity)) + "-" + std::to_string(num_sections) +
                    "x" + std::to_string(words_per_section);
  if (!constraints.empty()) {
    std::uint64_t h = 0;
    for (const auto& c : constraints) {
      h = mix(h, static_cast<std::uint64_t>(c.section_index));
      h = mix(h, std::hash<std::string>{}(c.value));
    }
    std::ostringstream ss;
    ss << std::hex << (h & 0xFFFFFF);
    out += "-c" + ss.str();
  }
  return out;
}

void to_json(json& j, const PromptSpec& s) {
  j = json{{"task", prompts::to_string(s.task)},
           {"language", sections::to_string(s.language)},
           {"complexity", prompts::to_string(s.complexity)},
           {"sections", s.num_sections},
           {"words_per_section", s.words_per_section},
           {"constraints", s.constraints}};
}

void from_json(const json& j, PromptSpec& s) {
  s.task = prompts::parse_task(j.at("task").get<std::string>());
  s.language = sections::parse_language(j.at("language").get<std::string>());
  s.complexity = prompts::parse_complexity(j.at("complexity").get<std::string>());
  s.num_sections = j.at("sections").get<int>();
  s.words_per_section = j.at("words_per_section").get<int>();
  s.constraints = j.value("constraints", std::vector<ConstraintSpec>{});
}

int constrained_section_count(int num_sections) {
  if (num_sections < 1) throw ArgumentError("constrained_section_count: num_sections must be >= 1");
  switch (num_sections) {
    case 5: return 1;
    case 10: return 2;
    case 20: return 5;
    case 50: return 10;
    case 100: return 20;
    case 200: return 40;
    case 500: return 100;
    default: return std::clamp(num_sections / 5, 1, num_sections);
  }
}

std::vector<PromptSpec> expand_matrix(const MatrixConfig& config) {
  std::vector<PromptSpec> out;
  std::uint64_t ordinal = 0;
  for (Task task : config.tasks)
    for (Language lang : config.languages)
      for (Complexity cx : config.complexities)
        for (int scale : config.scales) {
          PromptSpec spec;
          spec.task = task;
          spec.language = lang;
          spec.complexity = cx;
          spec.num_sections = scale;
          spec.words_per_section = config.words_per_section;
          ++ordinal;
          if (cx == Complexity::fine_grained && !config.constraint_kinds.empty()) {
            std::mt19937_64 rng(mix(config.seed, ordinal));
            std::vector<int> idx(static_cast<std::size_t>(scale));
            for (int i = 0; i < scale; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
            const int k = constrained_section_count(scale);
            for (int i = 0; i < k; ++i)  // partial Fisher-Yates
              std::swap(idx[static_cast<std::size_t>(i)],
                        idx[static_cast<std::size_t>(i) + pick(rng, static_cast<std::uint64_t>(scale - i))]);
            std::sort(idx.begin(), idx.begin() + k);
            for (int i = 0; i < k; ++i) {
              ConstraintSpec c;
              c.section_index = idx[static_cast<std::size_t>(i)];
              c.kind = config.constraint_kinds[pick(rng, config.constraint_kinds.size())];
              switch (c.kind) {
                case ConstraintKind::first_char:
                  c.value = std::string(1, kLetters[pick(rng, kLetters.size())]);
                  break;
                case ConstraintKind::keyword:
                  c.value = std::string(kKeywords[pick(rng, kKeywords.size())]);
                  break;
                case ConstraintKind::theme: {
                  const auto& th = kThemes[pick(rng, kThemes.size())];
                  c.value = std::string(th.name);
                  for (auto w : th.words) c.theme.emplace_back(w);
                  break;
                }
              }
              spec.constraints.push_back(std::move(c));
            }
          }
          out.push_back(std::move(spec));
        }
  return out;
}

std::string render_prompt(const PromptSpec& spec) {
  return prompts::render(spec.task, spec.language, spec.complexity, spec.num_sections,
                         spec.words_per_section, spec.constraints);
}

// ---------------------------------------------------------------------------
// Records

void to_json(json& j, const RunRecord& r) {
  json sections = json::array();
  for (const auto& s : r.sections)
    sections.push_back({{"index", s.index_as_labeled}, {"position", s.position}, {"title", s.title},
                        {"words", s.word_count}});
  j = json{{"spec_id", r.spec_id},
           {"spec", r.spec},
           {"run_index", r.run_index},
           {"seed", r.seed},
           {"engine", r.engine},
           {"text", r.text},
           {"token_count", r.token_count},
           {"word_count", r.word_count},
           {"sections", sections},
           {"end_marker", r.end_marker},
           {"failure_tags", r.failure_tags},
           {"stop_reason", r.stop_reason},
           {"duration_s", r.duration_s},
           {"structured_correct", r.structured_correct},
           {"constraints_satisfied", r.constraints_satisfied},
           {"constraints_total", r.constraints_total},
           {"failed", r.failed},
           {"error", r.error}};
}

void from_json(const json& j, RunRecord& r) {
  r.spec_id = j.at("spec_id").get<std::string>();
  r.spec = j.at("spec").get<PromptSpec>();
  r.run_index = j.at("run_index").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.engine = j.value("engine", std::string());
  r.text = j.at("text").get<std::string>();
  r.token_count = j.at("token_count").get<std::int64_t>();
  r.word_count = j.at("word_count").get<std::int64_t>();
  r.sections.clear();
  for (const auto& s : j.at("sections"))
    r.sections.push_back({s.at("index").get<int>(), s.at("position").get<int>(),
                          s.value("title", std::string()), s.at("words").get<std::int64_t>()});
  r.end_marker = j.value("end_marker", false);
  r.failure_tags = j.value("failure_tags", std::vector<std::string>{});
  r.stop_reason = j.value("stop_reason", std::string());
  r.duration_s = j.value("duration_s", 0.0);
  r.structured_correct = j.value("structured_correct", std::int64_t{0});
  r.constraints_satisfied = j.value("constraints_satisfied", std::int64_t{0});
  r.constraints_total = j.value("constraints_total", std::int64_t{0});
  r.failed = j.value("failed", false);
  r.error = j.value("error", std::string());
}

void to_json(json& j, const JudgementRecord& r) {
  j = json{{"spec_id", r.spec_id}, {"run_index", r.run_index}, {"scores", r.scores},
           {"uca", r.uca},         {"failed", r.failed},       {"error", r.error}};
}

void from_json(const json& j, JudgementRecord& r) {
  r.spec_id = j.at("spec_id").get<std::string>();
  r.run_index = j.at("run_index").get<int>();
  r.scores = j.at("scores").get<std::array<int, 6>>();
  r.uca = j.at("uca").get<double>();
  r.failed = j.value("failed", false);
  r.error = j.value("error", std::string());
}

RunStore::RunStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void RunStore::append_line(const std::string& line) {
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw FormatError("cannot append to " + path_.string());
  out << line << '\n';
  out.flush();
}

void RunStore::append(const RunRecord& record) {
  json j = record;
  j["kind"] = "run";
  append_line(j.dump());
}

void RunStore::append(const JudgementRecord& record) {
  json j = record;
  j["kind"] = "judgement";
  append_line(j.dump());
}

RunStore::Contents RunStore::load(const std::filesystem::path& path) {
  Contents c;
  std::ifstream in(path, std::ios::binary);
  if (!in) return c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      ++c.skipped_lines;
      continue;
    }
    try {
      const auto kind = j.value("kind", std::string("run"));
      if (kind == "judgement") c.judgements.push_back(j.get<JudgementRecord>());
      else c.runs.push_back(j.get<RunRecord>());
    } catch (const std::exception&) {
      ++c.skipped_lines;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Engines

ToyEngine::ToyEngine(ToyEngineConfig config) : config_(std::move(config)) {
  if (!(config_.words_to_tokens > 0)) throw ConfigError("words_to_tokens", "must be > 0");
}

std::string ToyEngine::name() const {
  return std::string("toy/") + std::string(toy::to_string(config_.model.failure_mode)) +
         (config_.guided ? "/guided" : "/unguided");
}

EngineOutput ToyEngine::generate(const PromptSpec& spec, const std::string&, std::uint64_t seed) const {
  const auto family = toy_family(spec.task);
  if (!family)
    throw ArgumentError("toy engine has no vocabulary for task " + std::string(prompts::to_string(spec.task)));
  const int budget = std::max(1, static_cast<int>(std::lround(spec.words_per_section * config_.words_to_tokens)));

  toy::ToyConfig model = config_.model;
  model.header_family = *family;
  model.target_sections = spec.num_sections;
  model.section_tokens = budget;
  model.seed = seed;

  std::optional<GuidanceConfig> guidance;
  if (config_.guided) guidance = toy::toy_guidance(vocab_, spec.num_sections, budget, *family, config_.grace);
  const auto max_steps = static_cast<std::int64_t>(
      std::ceil(static_cast<double>(spec.num_sections) * budget * config_.max_steps_factor)) + 1000;

  const auto result = toy::run_generation(vocab_, model, guidance, max_steps);
  return {vocab_.detokenize(result.tokens), result.generated_tokens,
          std::string(toy::to_string(result.stop_reason))};
}

ExternalEngine::ExternalEngine(ExternalEngineConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw ConfigError("endpoint", "external engine needs an endpoint URL");
}

EngineOutput ExternalEngine::generate(const PromptSpec& spec, const std::string& prompt,
                                      std::uint64_t seed) const {
  const int budget = std::max(1, static_cast<int>(std::lround(spec.words_per_section * config_.words_to_tokens)));
  const auto max_tokens = static_cast<std::int64_t>(
      std::ceil(static_cast<double>(spec.num_sections) * budget * config_.max_tokens_factor));
  const json body = {{"prompt", prompt},
                     {"seed", seed},
                     {"max_tokens", max_tokens},
                     {"guidance",
                      {{"total_sections", spec.num_sections},
                       {"section_token_budget", budget},
                       {"grace", config_.grace},
                       {"boost", 15.0},
                       {"end_marker", sections::kEndMarker}}}};
  const auto res = http_post_json(config_.endpoint, body.dump(), {}, config_.timeout_seconds);
  if (res.status < 200 || res.status >= 300)
    throw HttpError("engine endpoint returned HTTP " + std::to_string(res.status), res.status);
  const auto j = json::parse(res.body, nullptr, false);
  if (j.is_discarded() || !j.contains("text")) throw FormatError("engine response lacks \"text\"");
  return {j.at("text").get<std::string>(), j.value("token_count", std::int64_t{0}),
          j.value("stop_reason", std::string())};
}

// ---------------------------------------------------------------------------
// Execution

RunRecord analyze_run(const PromptSpec& spec, int run_index, std::uint64_t seed, const std::string& engine,
                      const EngineOutput& output, double duration_s) {
  RunRecord r;
  r.spec_id = spec.id();
  r.spec = spec;
  r.run_index = run_index;
  r.seed = seed;
  r.engine = engine;
  r.text = output.text;
  r.token_count = output.token_count;
  r.stop_reason = output.stop_reason;
  r.duration_s = duration_s;

  const auto profile = prompts::profile_for(spec.task, spec.complexity, spec.language);
  const auto doc = sections::parse_sections(r.text, profile);
  r.word_count = sections::word_count(r.text, spec.language);
  r.end_marker = doc.end_marker_present;
  for (const auto& s : doc.sections)
    r.sections.push_back({s.index_as_labeled, s.position, s.title_text, s.word_count});
  for (auto tag : sections::classify_failure(doc, spec.num_sections, spec.language))
    r.failure_tags.emplace_back(sections::to_string(tag));
  if (profile.validator != sections::Validator::none)
    for (const auto& s : doc.sections)
      if (sections::verify_structured(s, profile.validator)) ++r.structured_correct;
  for (const auto& c : spec.constraints) {
    ++r.constraints_total;
    if (sections::verify_constraint(doc.sections, c).satisfied) ++r.constraints_satisfied;
  }
  return r;
}

std::vector<RunRecord> execute(const PromptSpec& spec, const Engine& engine, int n, std::uint64_t base_seed,
                               RunStore* store, int jobs) {
  if (n < 1) throw ArgumentError("execute: n must be >= 1");
  const std::string prompt = render_prompt(spec);
  std::vector<RunRecord> out(static_cast<std::size_t>(n));
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
      const auto t0 = std::chrono::steady_clock::now();
      RunRecord rec;
      try {
        const auto output = engine.generate(spec, prompt, seed);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec = analyze_run(spec, i + 1, seed, engine.name(), output, dt);
      } catch (const std::exception& e) {
        rec.spec_id = spec.id();
        rec.spec = spec;
        rec.run_index = i + 1;
        rec.seed = seed;
        rec.engine = engine.name();
        rec.failed = true;
        rec.error = e.what();
        rec.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
      if (store) store->append(rec);
      out[static_cast<std::size_t>(i)] = std::move(rec);
    }
  };

  const int threads = std::clamp(jobs, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summaries

void to_json(json& j, const MetricSummary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j = json{{"spec_id", s.spec_id},
           {"spec", s.spec},
           {"runs", s.runs},
           {"failed_runs", s.failed_runs},
           {"target_words", s.target_words},
           {"mean_length", s.mean_length},
           {"LSD", s.lsd},
           {"LVC", std::isfinite(s.lvc) ? json(s.lvc) : json(nullptr)},
           {"MLA", s.mla},
           {"FSD", s.fsd},
           {"mean_sections", s.mean_sections},
           {"SCA", opt(s.sca)},
           {"constraint_accuracy", opt(s.constraint_accuracy)},
           {"UCA", opt(s.uca)},
           {"ngram_repetition_3", s.ngram_repetition},
           {"TTR", s.ttr}};
}

MetricSummary summarize_spec(const std::vector<RunRecord>& runs, const std::vector<JudgementRecord>& judgements) {
  MetricSummary s;
  std::vector<double> lengths, counts;
  double rep_sum = 0, ttr_sum = 0;
  int lex_runs = 0;
  double sca_sum = 0;
  std::int64_t sat = 0, total = 0;
  std::vector<int> done_indices;

  for (const auto& r : runs) {
    if (s.spec_id.empty()) {
      s.spec_id = r.spec_id;
      s.spec = r.spec;
    } else if (r.spec_id != s.spec_id) {
      throw ArgumentError("summarize_spec: records from more than one spec");
    }
    if (r.failed) {
      ++s.failed_runs;
      continue;
    }
    ++s.runs;
    done_indices.push_back(r.run_index);
    lengths.push_back(static_cast<double>(r.word_count));
    counts.push_back(static_cast<double>(r.sections.size()));
    const auto w = sections::words(r.text, r.spec.language);
    if (!w.empty()) {
      ttr_sum += metrics::ttr(w);
      rep_sum += w.size() >= 3 ? metrics::ngram_repetition(w, 3) : 0.0;
      ++lex_runs;
    }
    sca_sum += metrics::sca(r.structured_correct, r.spec.num_sections);
    sat += r.constraints_satisfied;
    total += r.constraints_total;
  }
  if (s.runs == 0) throw ArgumentError("summarize_spec: no completed runs for " + s.spec_id);

  s.target_words = static_cast<double>(s.spec.target_words());
  s.mean_length = metrics::mean(lengths);
  s.lsd = metrics::lsd(lengths);
  s.lvc = s.mean_length > 0 ? metrics::lvc(s.lsd, s.mean_length) : std::nan("");
  s.mla = metrics::mla(s.mean_length, s.target_words);
  s.fsd = metrics::fsd(counts);
  s.mean_sections = metrics::mean(counts);
  if (prompts::profile_for(s.spec.task, s.spec.complexity, s.spec.language).validator !=
      sections::Validator::none)
    s.sca = sca_sum / s.runs;
  if (total > 0) s.constraint_accuracy = metrics::sca(sat, total);
  if (lex_runs > 0) {
    s.ngram_repetition = rep_sum / lex_runs;
    s.ttr = ttr_sum / lex_runs;
  }

  double uca_sum = 0;
  int uca_n = 0;
  for (const auto& j : judgements) {
    if (j.failed || j.spec_id != s.spec_id) continue;
    if (std::find(done_indices.begin(), done_indices.end(), j.run_index) == done_indices.end()) continue;
    uca_sum += j.uca;
    ++uca_n;
  }
  if (uca_n > 0) s.uca = uca_sum / uca_n;
  return s;
}

std::vector<MetricSummary> summarize(const std::vector<RunRecord>& runs,
                                     const std::vector<JudgementRecord>& judgements) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<RunRecord>> groups;
  for (const auto& r : runs) {
    auto [it, inserted] = groups.try_emplace(r.spec_id);
    if (inserted) order.push_back(r.spec_id);
    it->second.push_back(r);
  }
  std::vector<MetricSummary> out;
  for (const auto& id : order) {
    const auto& g = groups[id];
    if (std::none_of(g.begin(), g.end(), [](const RunRecord& r) { return !r.failed; })) continue;
    out.push_back(summarize_spec(g, judgements));
  }
  return out;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "lines") return ReportFormat::lines;
  throw ArgumentError("unknown report format: " + std::string(name));
}

std::string emit_report(const std::vector<MetricSummary>& summaries, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    out << "spec,task,language,complexity,sections,words_per_section,runs,failed_runs,"
           "LSD,mean_length,LVC,MLA,FSD,mean_sections,SCA,UCA,constraint_accuracy,rep3,TTR\n";
    for (const auto& s : summaries) {
      out << s.spec_id << ',' << prompts::to_string(s.spec.task) << ','
          << sections::to_string(s.spec.language) << ',' << prompts::to_string(s.spec.complexity) << ','
          << s.spec.num_sections << ',' << s.spec.words_per_section << ',' << s.runs << ','
          << s.failed_runs << ',' << fmt(s.lsd) << ',' << fmt(s.mean_length) << ',' << fmt(s.lvc) << ','
          << fmt(s.mla) << ',' << fmt(s.fsd) << ',' << fmt(s.mean_sections) << ',' << fmt(s.sca, "")
          << ',' << fmt(s.uca, "") << ',' << fmt(s.constraint_accuracy, "") << ','
          << fmt(s.ngram_repetition, 4) << ',' << fmt(s.ttr, 4) << '\n';
    }
    return out.str();
  }
  for (const auto& s : summaries) {
    out << s.spec_id << ": runs=" << s.runs << " failed=" << s.failed_runs << " LSD=" << fmt(s.lsd)
        << " mean=" << fmt(s.mean_length) << " LVC=" << fmt(s.lvc) << "% MLA=" << fmt(s.mla)
        << "% FSD=" << fmt(s.fsd) << " sections=" << fmt(s.mean_sections) << " SCA=" << fmt(s.sca, "-")
        << " UCA=" << fmt(s.uca, "-") << " constraints=" << fmt(s.constraint_accuracy, "-")
        << " rep3=" << fmt(s.ngram_repetition * 100.0) << "% TTR=" << fmt(s.ttr, 4) << '\n';
  }
  return out.str();
}

std::string plot_data(const std::vector<MetricSummary>& summaries) {
  std::ostringstream out;
  out << "spec,target,mean,sd\n";
  for (const auto& s : summaries)
    out << s.spec_id << ',' << fmt(s.target_words) << ',' << fmt(s.mean_length) << ',' << fmt(s.lsd) << '\n';
  return out.str();
}

std::vector<std::string> check_invariants(const std::vector<RunRecord>& runs,
                                          const std::vector<MetricSummary>& summaries) {
  std::vector<std::string> bad;
  for (const auto& r : runs) {
    if (r.failed) continue;
    const auto where = r.spec_id + "#" + std::to_string(r.run_index);
    if (sections::word_count(r.text, r.spec.language) != r.word_count)
      bad.push_back(where + ": stored word_count disagrees with the text");
    const auto doc = sections::parse_sections(
        r.text, prompts::profile_for(r.spec.task, r.spec.complexity, r.spec.language));
    if (doc.sections.size() != r.sections.size())
      bad.push_back(where + ": stored section count disagrees with the text");
    for (std::size_t i = 1; i < r.sections.size(); ++i)
      if (r.sections[i].position <= r.sections[i - 1].position)
        bad.push_back(where + ": section positions not increasing");
  }
  for (const auto& s : summaries) {
    if (!(s.lsd >= 0) || !(s.fsd >= 0)) bad.push_back(s.spec_id + ": negative spread");
    if (!(s.mla >= 0 && s.mla <= 100)) bad.push_back(s.spec_id + ": MLA outside [0, 100]");
    if (!(s.ngram_repetition >= 0 && s.ngram_repetition < 1))
      bad.push_back(s.spec_id + ": n-gram repetition outside [0, 1)");
    if (!(s.ttr > 0 && s.ttr <= 1) && s.mean_length > 0) bad.push_back(s.spec_id + ": TTR outside (0, 1]");
  }
  return bad;
}

}  // namespace steady::bench
