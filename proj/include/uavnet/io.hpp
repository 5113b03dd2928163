#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uavnet {

/// Shortest round-trip decimal form (%.17g); used for every serialized
/// double so reruns are byte-identical.
std::string fmt_double(double v);

/// FNV-1a 64-bit over raw bytes; the run-manifest content hash.
std::uint64_t fnv1a64(const std::string& bytes);
std::string to_hex(std::uint64_t v);

/// One CSV line, fields joined with commas, terminated with \n. Fields are
/// written verbatim; callers keep commas and newlines out of them.
std::string csv_row(const std::vector<std::string>& cells);

/// Whole-file helpers; failures throw std::runtime_error naming the path.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace uavnet
