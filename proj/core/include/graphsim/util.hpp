// Small shared helpers: hashing, encoding, filesystem, parallel fan-out.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace graphsim {

// FNV-1a over raw bytes; the stable 64-bit hash used for artifact audit
// hashes and derived seeds.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

std::string to_hex(std::uint64_t v);

std::string base64_encode(const std::uint8_t* data, std::size_t len);

// CSV field quoting per RFC 4180 (quote only when needed).
std::string csv_escape(const std::string& field);

// Fixed-width float formatting used by every persisted artifact, so reruns
// byte-compare equal.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& contents);

// Run fn(i) for i in [0,n) on up to `jobs` threads (0 = hardware concurrency).
// Exceptions from workers are rethrown on the caller thread.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace graphsim
