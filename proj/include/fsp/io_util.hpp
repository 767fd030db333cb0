#ifndef FSP_IO_UTIL_HPP
#define FSP_IO_UTIL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fsp {

// Reads a UTF-8 text file and invokes fn(line_number, fields) per non-empty,
// non-comment ('#') line, with fields split on tabs. Raises io/format errors
// that carry the file name and 1-based line number.
void for_each_tsv_row(const std::string& path, int min_fields,
                      const std::function<void(int, const std::vector<std::string>&)>& fn);

std::vector<std::string> split(const std::string& s, char sep);

std::string read_file(const std::string& path);  // io error if unreadable

// Writes via a temp file in the same directory followed by rename, so
// partially written outputs are never observable.
void atomic_write_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit content digest, hex-encoded. Used for dataset digests in
// run manifests, not for security.
uint64_t fnv1a64(const void* data, size_t len);
std::string file_digest_hex(const std::string& path);

}  // namespace fsp

#endif
