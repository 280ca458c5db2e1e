#ifndef SATSP_IO_HPP_
#define SATSP_IO_HPP_

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

namespace satsp {

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

/// CSV "sample_index,J".
void write_samples_csv(const std::filesystem::path& path, std::span<const double> samples);

/// Writes `text` to `path`, creating parent directories; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Sidecar path for an output file: "<output>.meta.json".
std::filesystem::path sidecar_path(const std::filesystem::path& output);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace satsp

#endif  // SATSP_IO_HPP_
