#include "vnfsdn/scenario/results.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "json.hpp"

namespace vnfsdn::scenario {

using json = nlohmann::json;

namespace {

struct PlotSpec {
  const char* id;
  int scenario;
  bool per_window;
  std::vector<std::string> columns;
};

const std::vector<PlotSpec>& plot_specs() {
  static const std::vector<PlotSpec> specs{
      {"5a", 1, true, {"window", "start_s", "availability_pct"}},
      {"5b", 1, true, {"window", "start_s", "benign_lost"}},
      {"6", 2, false,
       {"ues", "detection_ms", "latency_ms", "benign_loss", "throughput_mbps", "cpu_pct", "memory_mb", "response_ms"}},
      {"7", 3, true, {"window", "start_s", "response_ms", "availability_pct", "cpu_pct", "memory_mb"}},
      {"8", 4, false, {"latency_ms", "jitter_ms", "throughput_mbps"}},
      {"9", 5, true, {"window", "start_s", "availability_pct", "tdr"}},
      {"10", 5, true, {"window", "start_s", "availability_pct", "cpu_pct", "memory_mb"}},
  };
  return specs;
}

std::optional<double> opt(std::optional<double> v) { return v; }
std::optional<double> num(std::uint64_t v) { return static_cast<double>(v); }

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + p.string());
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<TableRow>& rows) {
  auto out = open_out(path);
  out << "config";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (const auto& r : rows) {
    out << r.config;
    for (const auto& c : columns) {
      auto it = r.values.find(c);
      out << ',' << (it == r.values.end() ? std::string() : cell(it->second));
    }
    out << '\n';
  }
  if (!out) throw OutputError("write failed for " + path.string());
}

std::string wall_clock() {
  auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

void write_records(const std::filesystem::path& path, const ScenarioResult& r, const std::string& table,
                   const std::string& config, const std::vector<std::string>& columns,
                   const std::vector<TableRow>& rows) {
  auto out = open_out(path);
  out << fmt::format(R"({{"generated_at":{},"scenario":{},"seed":{},"digest":{},"table":{},"config":{}}})",
                     json(wall_clock()).dump(), r.scenario, r.seed, json(r.digest).dump(), json(table).dump(),
                     json(config).dump())
      << '\n';
  for (const auto& row : rows) {
    out << "{\"config\":" << json(row.config).dump();
    for (const auto& c : columns) {
      auto it = row.values.find(c);
      bool has = it != row.values.end() && it->second;
      out << ",\"" << c << "\":" << (has ? format_number(*it->second) : std::string("null"));
    }
    out << "}\n";
  }
  if (!out) throw OutputError("write failed for " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "records") return OutputFormat::Records;
  throw std::invalid_argument("format must be csv or records: " + s);
}

std::string format_number(double v) { return fmt::format("{}", v); }

const std::vector<std::string>& window_columns() {
  static const std::vector<std::string> cols{
      "ues",          "window",         "start_s",   "benign_sent", "benign_delivered", "benign_lost",
      "queue_drops",  "threats",        "threats_blocked", "exchanges", "exchanges_completed",
      "delivered_bits", "availability_pct", "latency_ms", "jitter_ms", "throughput_mbps", "cpu_pct",
      "memory_mb",    "tdr",            "response_ms"};
  return cols;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{
      "ues",
      "total_packets",
      "blocked_packets",
      "threat_packets",
      "blocked_threat_packets",
      "unauthorized_attempts",
      "blocked_unauthorized",
      "access_attempts",
      "failed_access",
      "devices_total",
      "devices_affected",
      "uptime_s",
      "downtime_s",
      "secure_traffic_pct",
      "tdr",
      "ubr",
      "er",
      "fer",
      "rr",
      "benign_sent",
      "benign_delivered",
      "benign_loss",
      "queue_drops",
      "delivered_packets",
      "latency_ms",
      "jitter_ms",
      "throughput_mbps",
      "availability_pct",
      "availability_min_pct",
      "availability_max_pct",
      "cpu_pct",
      "memory_mb",
      "memory_peak_mb",
      "detection_ms",
      "rtt_ms",
      "exchange_ms",
      "response_ms",
      "mitigated_flows",
      "events"};
  return cols;
}

std::vector<TableRow> window_rows(const RunResult& r) {
  std::vector<TableRow> rows;
  rows.reserve(r.report.windows.size());
  for (const auto& w : r.report.windows) {
    TableRow t;
    t.config = r.config;
    auto& v = t.values;
    v["ues"] = num(r.ues);
    v["window"] = num(w.index);
    v["start_s"] = static_cast<double>(w.start_us) * 1e-6;
    v["benign_sent"] = num(w.benign_sent);
    v["benign_delivered"] = num(w.benign_delivered);
    v["benign_lost"] = num(w.benign_lost);
    v["queue_drops"] = num(w.queue_drops);
    v["threats"] = num(w.threats);
    v["threats_blocked"] = num(w.threats_blocked);
    v["exchanges"] = num(w.exchanges);
    v["exchanges_completed"] = num(w.exchanges_completed);
    v["delivered_bits"] = num(w.delivered_bits);
    v["availability_pct"] = opt(w.availability_pct);
    v["latency_ms"] = opt(w.latency_ms);
    v["jitter_ms"] = opt(w.jitter_ms);
    v["throughput_mbps"] = w.throughput_mbps;
    v["cpu_pct"] = w.cpu_pct;
    v["memory_mb"] = w.memory_mb;
    v["tdr"] = opt(w.tdr);
    v["response_ms"] = opt(w.response_ms);
    rows.push_back(std::move(t));
  }
  return rows;
}

TableRow summary_row(const RunResult& r) {
  TableRow t;
  t.config = r.config;
  auto& v = t.values;
  const auto& k = r.report.run;
  const auto& c = k.counters;
  v["ues"] = num(r.ues);
  v["total_packets"] = num(c.total_packets);
  v["blocked_packets"] = num(c.blocked_packets);
  v["threat_packets"] = num(c.threat_packets);
  v["blocked_threat_packets"] = num(c.blocked_threat_packets);
  v["unauthorized_attempts"] = num(c.unauthorized_attempts);
  v["blocked_unauthorized"] = num(c.blocked_unauthorized);
  v["access_attempts"] = num(c.access_attempts);
  v["failed_access"] = num(c.failed_access);
  v["devices_total"] = num(c.devices_total);
  v["devices_affected"] = num(c.devices_affected);
  v["uptime_s"] = static_cast<double>(c.uptime_us) * 1e-6;
  v["downtime_s"] = static_cast<double>(c.downtime_us) * 1e-6;
  v["secure_traffic_pct"] = metrics::secure_traffic_pct(c).optional();
  v["tdr"] = metrics::tdr(c).optional();
  v["ubr"] = metrics::ubr(c).optional();
  v["er"] = metrics::er(c).optional();
  v["fer"] = metrics::fer(c).optional();
  v["rr"] = metrics::rr(c).optional();
  v["benign_sent"] = num(k.benign_sent);
  v["benign_delivered"] = num(k.benign_delivered);
  v["benign_loss"] = num(k.benign_loss);
  v["queue_drops"] = num(k.queue_drops);
  v["delivered_packets"] = num(k.delivered_packets);
  v["latency_ms"] = opt(k.latency_ms);
  v["jitter_ms"] = opt(k.jitter_ms);
  v["throughput_mbps"] = k.throughput_mbps;
  v["availability_pct"] = opt(k.availability_pct);
  v["availability_min_pct"] = opt(k.availability_min_pct);
  v["availability_max_pct"] = opt(k.availability_max_pct);
  v["cpu_pct"] = k.cpu_pct;
  v["memory_mb"] = k.memory_mb;
  v["memory_peak_mb"] = k.memory_peak_mb;
  v["detection_ms"] = opt(k.detection_ms);
  v["rtt_ms"] = opt(k.rtt_ms);
  v["exchange_ms"] = opt(k.exchange_ms);
  v["response_ms"] = opt(k.response_ms);
  v["mitigated_flows"] = num(k.mitigated_flows);
  v["events"] = num(r.events);
  return t;
}

std::vector<std::string> figures_of(int scenario) {
  std::vector<std::string> out;
  for (const auto& s : plot_specs()) {
    if (s.scenario == scenario) out.emplace_back(s.id);
  }
  return out;
}

std::vector<std::filesystem::path> emit_results(const ScenarioResult& r, OutputFormat format,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output folder " + dir.string() + ": " + ec.message());

  const char* ext = format == OutputFormat::Csv ? ".csv" : ".ndrec";
  std::vector<std::filesystem::path> written;

  std::vector<std::string> configs;
  for (const auto& run : r.runs) {
    if (std::find(configs.begin(), configs.end(), run.config) == configs.end()) configs.push_back(run.config);
  }
  for (const auto& config : configs) {
    std::vector<TableRow> rows;
    for (const auto& run : r.runs) {
      if (run.config != config) continue;
      auto w = window_rows(run);
      rows.insert(rows.end(), w.begin(), w.end());
    }
    auto path = dir / fmt::format("s{}_{}_{}{}", r.scenario, config, r.seed, ext);
    if (format == OutputFormat::Csv) {
      write_csv(path, window_columns(), rows);
    } else {
      write_records(path, r, "windows", config, window_columns(), rows);
    }
    written.push_back(path);
  }

  std::vector<TableRow> summary;
  for (const auto& run : r.runs) summary.push_back(summary_row(run));
  auto spath = dir / fmt::format("s{}_summary_{}{}", r.scenario, r.seed, ext);
  if (format == OutputFormat::Csv) {
    write_csv(spath, summary_columns(), summary);
  } else {
    write_records(spath, r, "summary", "", summary_columns(), summary);
  }
  written.push_back(spath);

  for (const auto& spec : plot_specs()) {
    if (spec.scenario != r.scenario) continue;
    std::vector<TableRow> rows;
    for (const auto& run : r.runs) {
      if (spec.per_window) {
        auto w = window_rows(run);
        rows.insert(rows.end(), w.begin(), w.end());
      } else {
        rows.push_back(summary_row(run));
      }
    }
    auto path = dir / fmt::format("plotdata_fig{}.csv", spec.id);
    write_csv(path, spec.columns, rows);
    written.push_back(path);
  }
  return written;
}

std::vector<TableRow> read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot open " + path.string());
  std::vector<TableRow> rows;
  std::string line;

  if (path.extension() == ".ndrec") {
    if (!std::getline(in, line)) throw OutputError(path.string() + ": missing header line");
    std::size_t n = 1;
    while (std::getline(in, line)) {
      ++n;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw OutputError(fmt::format("{}:{}: {}", path.string(), n, e.what()));
      }
      TableRow t;
      t.config = j.at("config").get<std::string>();
      for (const auto& [k, v] : j.items()) {
        if (k == "config") continue;
        t.values[k] = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      }
      rows.push_back(std::move(t));
    }
    return rows;
  }

  if (!std::getline(in, line)) return rows;
  auto header = split_csv(line);
  if (header.empty() || header.front() != "config") throw OutputError(path.string() + ": first column must be config");
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw OutputError(fmt::format("{}:{}: expected {} cells, found {}", path.string(), n, header.size(), cells.size()));
    }
    TableRow t;
    t.config = cells[0];
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i].empty()) {
        t.values[header[i]] = std::nullopt;
        continue;
      }
      try {
        std::size_t used = 0;
        double d = std::stod(cells[i], &used);
        if (used != cells[i].size()) throw std::invalid_argument(cells[i]);
        t.values[header[i]] = d;
      } catch (const std::exception&) {
        throw OutputError(fmt::format("{}:{}: bad number '{}'", path.string(), n, cells[i]));
      }
    }
    rows.push_back(std::move(t));
  }
  return rows;
}

}  // namespace vnfsdn::scenario
