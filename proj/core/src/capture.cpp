#include "vnfsdn/dataplane/capture.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vnfsdn::dataplane {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kHeaderKeys = {"ap_mac", "channel", "format_version", "iface", "run_seed"};
constexpr std::array<std::string_view, 9> kRecordKeys = {"class", "dst",  "id",  "protocol", "sim_time_us",
                                                          "size",  "src", "tag", "verdict"};

template <std::size_t N>
void check_keys(const ojson& j, const std::array<std::string_view, N>& keys, std::size_t line) {
  if (!j.is_object()) throw BadFormat(line, "expected an object");
  if (j.size() != N) throw BadFormat(line, "expected " + std::to_string(N) + " keys");
  std::size_t i = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++i) {
    if (it.key() != keys[i]) {
      throw BadFormat(line, "key '" + it.key() + "' out of order, expected '" + std::string(keys[i]) + "'");
    }
  }
}

std::uint64_t get_u64(const ojson& j, const char* key, std::size_t line) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) throw BadFormat(line, std::string(key) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_str(const ojson& j, const char* key, std::size_t line) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw BadFormat(line, std::string(key) + " must be a string");
  return v.get<std::string>();
}

}  // namespace

bool is_colon_hex_mac(std::string_view mac) {
  if (mac.size() != 17) return false;
  for (std::size_t i = 0; i < mac.size(); ++i) {
    if (i % 3 == 2) {
      if (mac[i] != ':') return false;
    } else if (!std::isxdigit(static_cast<unsigned char>(mac[i]))) {
      return false;
    }
  }
  return true;
}

void capture_packet(CaptureVnf& c, const Packet& p, const Verdict& verdict, SimTime t) {
  if (!c.monitoring) throw MonitoringStopped();
  c.buffer.push_back(CaptureRecord{p.cls, p.dst, p.id, p.protocol, t.us, p.size, p.src, p.tag, verdict});
  ++c.capture_count;
}

std::string serialize_header(const CaptureHeader& h) {
  ojson j;
  j["ap_mac"] = h.ap_mac;
  j["channel"] = h.channel;
  j["format_version"] = h.format_version;
  j["iface"] = h.iface;
  j["run_seed"] = h.run_seed;
  return j.dump();
}

std::string serialize_record(const CaptureRecord& r) {
  ojson j;
  j["class"] = r.cls.to_string();
  j["dst"] = r.dst.index;
  j["id"] = r.id;
  j["protocol"] = std::string(to_string(r.protocol));
  j["sim_time_us"] = r.sim_time_us;
  j["size"] = r.size;
  j["src"] = r.src.index;
  j["tag"] = std::string(r.tag.name());
  j["verdict"] = r.verdict.to_string();
  return j.dump();
}

std::filesystem::path stop_and_save(CaptureVnf& c) {
  c.monitoring = false;
  std::error_code ec;
  std::filesystem::create_directories(c.folder, ec);
  if (ec) throw IoFailure("cannot create capture folder " + c.folder.string() + ": " + ec.message());

  auto path = c.folder / ("capture_" + std::to_string(c.run_seed) + "_" + std::to_string(c.start_us) + ".ndrec");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string());
  out << serialize_header(CaptureHeader{c.ap_mac, c.channel, kCaptureFormatVersion, c.iface, c.run_seed}) << '\n';
  for (const auto& r : c.buffer) out << serialize_record(r) << '\n';
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());

  c.buffer.clear();
  c.capture_count = 0;
  return path;
}

CaptureFile parse_capture(std::string_view text) {
  CaptureFile file;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool seen_header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    bool terminated = end != std::string_view::npos;
    auto line = text.substr(pos, terminated ? end - pos : std::string_view::npos);
    pos = terminated ? end + 1 : text.size();
    ++line_no;

    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const ojson::parse_error& e) {
      throw BadFormat(line_no, std::string("malformed record: ") + e.what());
    }
    if (!terminated) throw BadFormat(line_no, "record is not newline-terminated");

    try {
      if (!seen_header) {
        if (j.is_object() && j.contains("format_version") && j["format_version"].is_number_integer() &&
            j["format_version"].get<std::int64_t>() != kCaptureFormatVersion) {
          throw UnsupportedVersion(j["format_version"].get<std::int64_t>());
        }
        check_keys(j, kHeaderKeys, line_no);
        file.header.ap_mac = get_str(j, "ap_mac", line_no);
        file.header.channel = static_cast<std::uint32_t>(get_u64(j, "channel", line_no));
        file.header.format_version = static_cast<std::int64_t>(get_u64(j, "format_version", line_no));
        file.header.iface = get_str(j, "iface", line_no);
        file.header.run_seed = get_u64(j, "run_seed", line_no);
        seen_header = true;
        continue;
      }
      check_keys(j, kRecordKeys, line_no);
      CaptureRecord r;
      r.cls = PacketClass::parse(get_str(j, "class", line_no));
      r.dst = NodeId{static_cast<std::uint32_t>(get_u64(j, "dst", line_no))};
      r.id = get_u64(j, "id", line_no);
      r.protocol = parse_protocol(get_str(j, "protocol", line_no));
      r.sim_time_us = get_u64(j, "sim_time_us", line_no);
      r.size = static_cast<std::uint32_t>(get_u64(j, "size", line_no));
      r.src = NodeId{static_cast<std::uint32_t>(get_u64(j, "src", line_no))};
      r.tag = SecurityTag(get_str(j, "tag", line_no));
      r.verdict = Verdict::parse(get_str(j, "verdict", line_no));
      file.records.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw BadFormat(line_no, e.what());
    }
  }
  if (!seen_header) throw BadFormat(1, "missing header line");
  return file;
}

CaptureFile read_capture_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_capture(ss.str());
}

}  // namespace vnfsdn::dataplane
