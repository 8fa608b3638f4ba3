#pragma once

// Run reports: a human-readable section and a machine-readable key-value
// summary side by side. The machine section is deterministic for a fixed
// command and seed (no timing, insertion-ordered keys); assumption flags
// the toolkit cannot verify are always listed.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fracbil {

struct RunReport {
  std::string problem;
  std::string command;
  std::string mode = "float";
  std::uint64_t seed = 0;

  std::vector<std::pair<std::string, std::string>> machine;
  std::vector<std::string> human_lines;
  std::vector<std::string> assumptions;
  double elapsed_seconds = 0;

  void kv(const std::string& key, const std::string& value) { machine.emplace_back(key, value); }
  void kv(const std::string& key, bool value) { kv(key, value ? std::string("true") : std::string("false")); }
  void kv(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    kv(key, std::string(buf));
  }
  void kv(const std::string& key, std::uint64_t value) { kv(key, std::to_string(value)); }
  void kv(const std::string& key, int value) { kv(key, std::to_string(value)); }

  void note(const std::string& line) { human_lines.push_back(line); }

  void assume(const std::string& flag) {
    assumptions.push_back(flag);
    kv("assumed." + flag, std::string("unverified"));
  }

  void write_machine(std::ostream& out) const {
    out << "report.problem = " << problem << "\n";
    out << "report.command = " << command << "\n";
    out << "report.mode = " << mode << "\n";
    out << "report.seed = " << seed << "\n";
    for (const auto& [k, v] : machine) out << k << " = " << v << "\n";
  }

  void write_human(std::ostream& out) const {
    out << "== " << command << " : " << problem << " ==\n";
    out << "mode " << mode << ", seed " << seed << "\n";
    for (const auto& line : human_lines) out << line << "\n";
    if (!assumptions.empty()) {
      out << "assumptions carried unverified:\n";
      for (const auto& a : assumptions) out << "  - " << a << "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "elapsed %.3f s", elapsed_seconds);
    out << buf << "\n";
  }

  bool write_machine_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) return false;
    write_machine(out);
    return true;
  }
};

}  // namespace fracbil
