#include "satsp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace satsp {

std::string format_real(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_samples_csv(const std::filesystem::path& path, std::span<const double> samples) {
  std::ostringstream out;
  out << "sample_index,J\n";
  for (std::size_t i = 0; i < samples.size(); ++i) out << i << ',' << format_real(samples[i]) << '\n';
  write_text_file(path, out.str());
}

std::filesystem::path sidecar_path(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".meta.json");
}

}  // namespace satsp
