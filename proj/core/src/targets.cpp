#include "vnfsdn/scenario/targets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace vnfsdn::scenario {

using json = nlohmann::json;

namespace {

Target::Kind parse_kind(const std::string& s) {
  if (s == "value") return Target::Kind::Value;
  if (s == "ratio") return Target::Kind::Ratio;
  if (s == "reduction_pct") return Target::Kind::ReductionPct;
  if (s == "gain_pp") return Target::Kind::GainPp;
  if (s == "scaled") return Target::Kind::Scaled;
  throw TargetsError("unknown target kind: " + s);
}

Target::Mode parse_mode(const std::string& s) {
  if (s == "within") return Target::Mode::Within;
  if (s == "at_least") return Target::Mode::AtLeast;
  if (s == "at_most") return Target::Mode::AtMost;
  throw TargetsError("unknown target mode: " + s);
}

const TableRow& find_row(const std::vector<TableRow>& rows, const Target& t, const std::string& config) {
  const TableRow* hit = nullptr;
  for (const auto& r : rows) {
    if (r.config != config) continue;
    if (t.ues) {
      auto it = r.values.find("ues");
      if (it == r.values.end() || !it->second || *it->second != *t.ues) continue;
    }
    if (hit) throw MissingMetric(fmt::format("{}: several rows match config {}", t.name, config));
    hit = &r;
  }
  if (!hit) throw MissingMetric(fmt::format("{}: no run of config {} in scenario {}", t.name, config, t.scenario));
  return *hit;
}

std::optional<double> metric_of(const std::vector<TableRow>& rows, const Target& t, const std::string& config) {
  const auto& row = find_row(rows, t, config);
  auto it = row.values.find(t.metric);
  if (it == row.values.end()) throw MissingMetric(fmt::format("{}: unknown metric {}", t.name, t.metric));
  return it->second;
}

std::optional<double> measure(const std::vector<TableRow>& rows, const Target& t, const CalibrationTargets& all) {
  auto v = metric_of(rows, t, t.config);
  if (!v) return std::nullopt;
  switch (t.kind) {
    case Target::Kind::Value:
      return v;
    case Target::Kind::Ratio:
    case Target::Kind::ReductionPct:
    case Target::Kind::GainPp: {
      auto b = metric_of(rows, t, t.baseline);
      if (!b) return std::nullopt;
      if (t.kind == Target::Kind::GainPp) return *v - *b;
      if (*b == 0.0) return std::nullopt;
      return t.kind == Target::Kind::Ratio ? *v / *b : (*b - *v) / *b * 100.0;
    }
    case Target::Kind::Scaled: {
      double measured = 0.0;
      double target = 0.0;
      for (const auto& o : all.targets) {
        if (o.kind != Target::Kind::Scaled || o.group != t.group || o.scenario != t.scenario) continue;
        auto m = metric_of(rows, o, o.config);
        if (!m) return std::nullopt;
        measured += *m;
        target += o.target;
      }
      if (measured == 0.0) return std::nullopt;
      return *v * target / measured;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(Target::Kind k) {
  switch (k) {
    case Target::Kind::Value: return "value";
    case Target::Kind::Ratio: return "ratio";
    case Target::Kind::ReductionPct: return "reduction_pct";
    case Target::Kind::GainPp: return "gain_pp";
    case Target::Kind::Scaled: return "scaled";
  }
  return "?";
}

std::string to_string(Target::Mode m) {
  switch (m) {
    case Target::Mode::Within: return "within";
    case Target::Mode::AtLeast: return "at_least";
    case Target::Mode::AtMost: return "at_most";
  }
  return "?";
}

double Target::band() const { return relative ? tolerance * std::abs(target) : tolerance; }

bool Target::accepts(double measured) const {
  const double eps = 1e-9 * std::max(1.0, std::abs(target));
  switch (mode) {
    case Mode::Within: return std::abs(measured - target) <= band() + eps;
    case Mode::AtLeast: return measured >= target - band() - eps;
    case Mode::AtMost: return measured <= target + band() + eps;
  }
  return false;
}

CalibrationTargets CalibrationTargets::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TargetsError(std::string("targets file is not valid: ") + e.what());
  }
  if (!j.is_object() || !j.contains("targets") || !j.at("targets").is_array()) {
    throw TargetsError("targets file needs a \"targets\" array");
  }
  static const std::set<std::string> keys{"name",  "scenario",  "metric",        "config",        "baseline",
                                          "group", "ues",       "kind",          "mode",          "target",
                                          "tolerance", "tolerance_pct", "non_normative", "note"};
  CalibrationTargets out;
  for (const auto& e : j.at("targets")) {
    for (const auto& [k, v] : e.items()) {
      if (!keys.contains(k)) throw TargetsError("unknown target key: " + k);
    }
    Target t;
    try {
      t.name = e.at("name").get<std::string>();
      t.scenario = e.at("scenario").get<int>();
      t.metric = e.at("metric").get<std::string>();
      t.config = e.at("config").get<std::string>();
      t.baseline = e.value("baseline", std::string());
      t.group = e.value("group", std::string());
      if (e.contains("ues")) t.ues = e.at("ues").get<double>();
      t.kind = parse_kind(e.value("kind", std::string("value")));
      t.mode = parse_mode(e.value("mode", std::string("within")));
      t.target = e.at("target").get<double>();
      t.non_normative = e.value("non_normative", false);
      if (e.contains("tolerance") == e.contains("tolerance_pct")) {
        throw TargetsError(t.name + ": give exactly one of tolerance and tolerance_pct");
      }
      if (e.contains("tolerance")) {
        t.tolerance = e.at("tolerance").get<double>();
      } else {
        t.tolerance = e.at("tolerance_pct").get<double>() / 100.0;
        t.relative = true;
      }
    } catch (const json::exception& ex) {
      throw TargetsError(std::string("bad target entry: ") + ex.what());
    }
    if (!(t.tolerance > 0.0)) throw TargetsError(t.name + ": tolerance must be positive");
    bool needs_baseline = t.kind == Target::Kind::Ratio || t.kind == Target::Kind::ReductionPct ||
                          t.kind == Target::Kind::GainPp;
    if (needs_baseline && t.baseline.empty()) throw TargetsError(t.name + ": this kind needs a baseline");
    if (t.kind == Target::Kind::Scaled && t.group.empty()) throw TargetsError(t.name + ": scaled targets need a group");
    out.targets.push_back(std::move(t));
  }
  return out;
}

CalibrationTargets CalibrationTargets::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TargetsError("cannot open targets file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool TargetReport::pass() const {
  for (const auto& v : verdicts) {
    if (!v.pass && !v.target->non_normative) return false;
  }
  return true;
}

TargetReport compare_tables(const std::map<int, std::vector<TableRow>>& summaries, const CalibrationTargets& targets) {
  TargetReport rep;
  for (const auto& t : targets.targets) {
    auto it = summaries.find(t.scenario);
    if (it == summaries.end()) {
      rep.skipped.push_back(t.name);
      continue;
    }
    TargetVerdict v;
    v.target = &t;
    v.measured = measure(it->second, t, targets);
    v.pass = v.measured && t.accepts(*v.measured);
    rep.verdicts.push_back(v);
  }
  return rep;
}

TargetReport compare_to_targets(const ScenarioResult& r, const CalibrationTargets& targets) {
  std::map<int, std::vector<TableRow>> s;
  auto& rows = s[r.scenario];
  for (const auto& run : r.runs) rows.push_back(summary_row(run));
  return compare_tables(s, targets);
}

std::map<int, std::vector<TableRow>> load_summaries(const std::filesystem::path& dir,
                                                    std::optional<std::uint64_t> seed) {
  if (!std::filesystem::is_directory(dir)) throw MissingMetric("result folder does not exist: " + dir.string());
  static const std::regex name(R"(s([1-6])_summary_([0-9]+)\.(csv|ndrec))");
  std::map<int, std::filesystem::path> chosen;
  std::map<int, std::uint64_t> chosen_seed;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::smatch m;
    auto fname = p.filename().string();
    if (!std::regex_match(fname, m, name)) continue;
    int scenario = std::stoi(m[1].str());
    auto s = std::stoull(m[2].str());
    if (seed && s != *seed) continue;
    auto prev = chosen_seed.find(scenario);
    if (prev != chosen_seed.end() && prev->second != s) {
      throw MissingMetric(fmt::format("scenario {} has results for several seeds; pick one with --seed", scenario));
    }
    chosen[scenario] = p;
    chosen_seed[scenario] = s;
  }
  std::map<int, std::vector<TableRow>> out;
  for (const auto& [scenario, p] : chosen) out[scenario] = read_table(p);
  return out;
}

}  // namespace vnfsdn::scenario
