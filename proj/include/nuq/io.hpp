#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nuq {

/// 17 significant digits, locale-independent; round-trips IEEE doubles.
std::string format_double(double v);
double parse_double(const std::string& text);

std::vector<std::string> split_csv_line(const std::string& line);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

/// FNV-1a 64-bit over the raw bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest(const std::filesystem::path& path);

/// Flat key-value record of one CLI run: merged config, seed, code
/// version, timestamps and output digests. Written next to each output.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::string code_version;
  std::string started_at;
  std::string finished_at;
  std::map<std::string, std::string> output_digests;

  std::string to_text() const;
};

std::string current_timestamp();

inline constexpr const char* kCodeVersion = "0.1.0";

}  // namespace nuq
