#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmotif {

using Tokens = std::vector<std::string>;

struct Document {
  Tokens tokens;
  std::string label;
  std::string group;   // empty when the manifest has no group column value
  std::string source;  // file path, with "#N" appended for the N-th chunk
};

struct ManifestEntry {
  std::filesystem::path path;
  std::string label;
  std::string group;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::optional<std::size_t> chunk_size;
  bool truncate_to_shortest = false;
  // label -> number of documents kept for that class
  std::map<std::string, std::size_t> class_quota;
  // group -> number of documents kept for that group
  std::map<std::string, std::size_t> group_quota;

  // Throws kInvalidArgument on duplicate paths, empty labels or chunk_size < 2.
  void validate() const;
};

// Parses a `path,label[,group]` CSV with a header row. Relative paths are
// resolved against `base_dir`.
Manifest parse_manifest(std::string_view csv_text,
                        const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& manifest_path);

// Lower-cased maximal letter runs. An apostrophe (ASCII or U+2019) survives
// only between two letters and is emitted as ASCII '\''. Invalid UTF-8 bytes
// act as separators.
Tokens normalize_text(std::string_view utf8);

// Consecutive non-overlapping windows of exactly `size` tokens; the trailing
// remainder is dropped. Throws kInvalidArgument when size < 2.
std::vector<Tokens> chunk_tokens(const Tokens& tokens, std::size_t size);

// Normalize -> optional truncation to the shortest source -> optional
// chunking -> optional quota selection. Output order follows the manifest
// except where quota selection reorders sources (seeded).
std::vector<Document> prepare_dataset(const Manifest& manifest,
                                      std::uint64_t seed,
                                      unsigned jobs = 1);

std::string read_file(const std::filesystem::path& path);

}  // namespace lmotif
