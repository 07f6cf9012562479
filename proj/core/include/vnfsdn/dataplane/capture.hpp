#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfsdn/dataplane/vnf.hpp"
#include "vnfsdn/model/types.hpp"

namespace vnfsdn::dataplane {

inline constexpr int kCaptureFormatVersion = 1;

class MonitoringStopped : public std::logic_error {
 public:
  MonitoringStopped() : std::logic_error("capture monitoring is stopped") {}
};

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadFormat : public std::runtime_error {
 public:
  BadFormat(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedVersion : public std::runtime_error {
 public:
  explicit UnsupportedVersion(std::int64_t v)
      : std::runtime_error("unsupported capture format version " + std::to_string(v)), version_(v) {}
  std::int64_t version() const { return version_; }

 private:
  std::int64_t version_;
};

struct CaptureRecord {
  PacketClass cls = PacketClass::benign();
  NodeId dst;
  std::uint64_t id = 0;
  Protocol protocol = Protocol::Tcp;
  std::uint64_t sim_time_us = 0;
  std::uint32_t size = 0;
  NodeId src;
  SecurityTag tag;
  Verdict verdict = Verdict::forward();

  bool operator==(const CaptureRecord&) const = default;
};

struct CaptureHeader {
  std::string ap_mac;
  std::uint32_t channel = 0;
  std::int64_t format_version = kCaptureFormatVersion;
  std::string iface;
  std::uint64_t run_seed = 0;

  bool operator==(const CaptureHeader&) const = default;
};

/// Capture-and-save function. The backend string names the simulated capture
/// source; there is no live interface access.
struct CaptureVnf {
  std::uint32_t channel = 6;
  std::string ap_mac = "02:00:00:00:00:01";
  std::string iface = "sim0";
  bool monitoring = true;
  std::vector<CaptureRecord> buffer;
  std::uint64_t capture_count = 0;
  std::filesystem::path folder = ".";
  std::string backend = "sim";
  std::uint64_t run_seed = 0;
  std::uint64_t start_us = 0;
  std::uint64_t cost_us_per_packet = kDefaultCaptureCostUs;
};

/// True for six colon-separated two-digit hex groups.
bool is_colon_hex_mac(std::string_view mac);

/// Appends one record; throws MonitoringStopped when monitoring is off.
void capture_packet(CaptureVnf& c, const Packet& p, const Verdict& verdict, SimTime t);

/// Stops monitoring, writes the buffer to capture_<seed>_<start_us>.ndrec in
/// the folder, clears the buffer and returns the file path.
std::filesystem::path stop_and_save(CaptureVnf& c);

struct CaptureFile {
  CaptureHeader header;
  std::vector<CaptureRecord> records;
};

std::string serialize_header(const CaptureHeader& h);
std::string serialize_record(const CaptureRecord& r);

/// Parses and validates schema and key order of every line.
CaptureFile read_capture_file(const std::filesystem::path& path);
CaptureFile parse_capture(std::string_view text);

}  // namespace vnfsdn::dataplane
