#include "lmotif/corpus.hpp"

#include <locale.h>
#include <wctype.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "lmotif/csv.hpp"
#include "lmotif/error.hpp"
#include "lmotif/parallel.hpp"
#include "lmotif/rng.hpp"

namespace lmotif {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at text[pos] and advances pos. Malformed
// sequences consume a single byte and yield kInvalid.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra;
  char32_t cp;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + extra >= text.size()) {
    ++pos;
    return kInvalid;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kInvalid;
  }
  pos += extra + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Character classes come from the C.UTF-8 locale so results do not depend on
// the process-wide locale.
class UnicodeClasses {
 public:
  UnicodeClasses() : locale_(newlocale(LC_CTYPE_MASK, "C.UTF-8", nullptr)) {
    if (locale_ == nullptr) {
      locale_ = newlocale(LC_CTYPE_MASK, "en_US.UTF-8", nullptr);
    }
  }
  ~UnicodeClasses() {
    if (locale_ != nullptr) freelocale(locale_);
  }
  UnicodeClasses(const UnicodeClasses&) = delete;
  UnicodeClasses& operator=(const UnicodeClasses&) = delete;

  bool is_letter(char32_t cp) const {
    if (cp < 0x80) {
      return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp == kInvalid) return false;
    if (locale_ != nullptr) return iswalpha_l(static_cast<wint_t>(cp), locale_);
    // Latin-1 and beyond without locale data: everything but the two
    // arithmetic signs in the Latin-1 letter block.
    return cp >= 0xC0 && cp != 0xD7 && cp != 0xF7;
  }

  char32_t to_lower(char32_t cp) const {
    if (cp < 0x80) {
      return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
    }
    if (locale_ != nullptr) {
      return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), locale_));
    }
    return cp;
  }

 private:
  locale_t locale_;
};

const UnicodeClasses& unicode() {
  static const UnicodeClasses classes;
  return classes;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

// Combining diacritics continue a word they follow (decomposed accents).
bool is_combining_mark(char32_t cp) { return cp >= 0x300 && cp <= 0x36F; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Tokens normalize_text(std::string_view utf8) {
  const auto& uc = unicode();
  Tokens tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    const char32_t cp = decode_utf8(utf8, pos);
    if (uc.is_letter(cp)) {
      encode_utf8(uc.to_lower(cp), current);
      continue;
    }
    if (!current.empty() && is_combining_mark(cp)) {
      encode_utf8(cp, current);
      continue;
    }
    if (!current.empty() && is_apostrophe(cp) && pos < utf8.size()) {
      std::size_t peek = pos;
      if (uc.is_letter(decode_utf8(utf8, peek))) {
        current.push_back('\'');
        continue;
      }
    }
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<Tokens> chunk_tokens(const Tokens& tokens, std::size_t size) {
  if (size < 2) {
    fail(ErrorCode::kInvalidArgument,
         "chunk size must be at least 2, got " + std::to_string(size));
  }
  std::vector<Tokens> chunks;
  chunks.reserve(tokens.size() / size);
  for (std::size_t start = 0; start + size <= tokens.size(); start += size) {
    chunks.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                        tokens.begin() + static_cast<std::ptrdiff_t>(start + size));
  }
  return chunks;
}

void Manifest::validate() const {
  std::set<std::filesystem::path> seen;
  for (const auto& entry : entries) {
    if (entry.label.empty()) {
      fail(ErrorCode::kInvalidArgument,
           "manifest entry '" + entry.path.string() + "' has an empty label");
    }
    if (!seen.insert(entry.path.lexically_normal()).second) {
      fail(ErrorCode::kInvalidArgument,
           "manifest lists '" + entry.path.string() + "' more than once");
    }
  }
  if (chunk_size && *chunk_size < 2) {
    fail(ErrorCode::kInvalidArgument,
         "chunk size must be at least 2, got " + std::to_string(*chunk_size));
  }
}

Manifest parse_manifest(std::string_view csv_text,
                        const std::filesystem::path& base_dir) {
  Manifest manifest;
  std::istringstream in{std::string(csv_text)};
  std::string line;
  int path_col = -1, label_col = -1, group_col = -1;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = csv::split_record(line);
    for (auto& f : fields) f = trim(f);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "path") path_col = static_cast<int>(i);
        else if (fields[i] == "label") label_col = static_cast<int>(i);
        else if (fields[i] == "group") group_col = static_cast<int>(i);
      }
      if (path_col < 0 || label_col < 0) {
        fail(ErrorCode::kSchema,
             "manifest header must name 'path' and 'label' columns");
      }
      have_header = true;
      continue;
    }
    const auto need = static_cast<std::size_t>(std::max(path_col, label_col));
    if (fields.size() <= need) {
      fail(ErrorCode::kSchema,
           "manifest line " + std::to_string(line_no) + " has too few fields");
    }
    ManifestEntry entry;
    std::filesystem::path p = fields[static_cast<std::size_t>(path_col)];
    entry.path = p.is_absolute() ? p : base_dir / p;
    entry.label = fields[static_cast<std::size_t>(label_col)];
    if (group_col >= 0 && static_cast<std::size_t>(group_col) < fields.size()) {
      entry.group = fields[static_cast<std::size_t>(group_col)];
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (!have_header) fail(ErrorCode::kSchema, "manifest is empty");
  manifest.validate();
  return manifest;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIo, "error while reading '" + path.string() + "'");
  return buf.str();
}

Manifest load_manifest(const std::filesystem::path& manifest_path) {
  return parse_manifest(read_file(manifest_path), manifest_path.parent_path());
}

std::vector<Document> prepare_dataset(const Manifest& manifest,
                                      std::uint64_t seed, unsigned jobs) {
  manifest.validate();
  const auto& entries = manifest.entries;
  const std::size_t n = entries.size();

  std::vector<Tokens> sources(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    sources[i] = normalize_text(read_file(entries[i].path));
  });

  if (manifest.truncate_to_shortest && n > 0) {
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const auto& t : sources) shortest = std::min(shortest, t.size());
    for (auto& t : sources) t.resize(shortest);
  }

  std::vector<std::vector<Tokens>> parts(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (manifest.chunk_size) {
      parts[i] = chunk_tokens(sources[i], *manifest.chunk_size);
    } else {
      parts[i].push_back(std::move(sources[i]));
    }
  }

  std::vector<std::vector<bool>> keep(n);
  for (std::size_t i = 0; i < n; ++i) keep[i].assign(parts[i].size(), true);

  Rng rng(seed);
  // Keeps the first `quota` still-selected partitions of `members`, visiting
  // sources in a seeded random order, and drops the rest.
  auto select = [&](std::vector<std::size_t> members, std::size_t quota,
                    const std::string& what) {
    rng.shuffle(std::span<std::size_t>(members));
    std::size_t available = 0;
    for (auto i : members) {
      available += static_cast<std::size_t>(
          std::count(keep[i].begin(), keep[i].end(), true));
    }
    if (available < quota) {
      fail(ErrorCode::kInsufficientData,
           what + " has " + std::to_string(available) +
               " partitions but the quota asks for " + std::to_string(quota));
    }
    std::size_t taken = 0;
    for (auto i : members) {
      for (std::size_t c = 0; c < keep[i].size(); ++c) {
        if (!keep[i][c]) continue;
        if (taken < quota) {
          ++taken;
        } else {
          keep[i][c] = false;
        }
      }
    }
  };

  for (const auto& [group, quota] : manifest.group_quota) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (entries[i].group == group) members.push_back(i);
    }
    select(std::move(members), quota, "group '" + group + "'");
  }
  for (const auto& [label, quota] : manifest.class_quota) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (entries[i].label == label) members.push_back(i);
    }
    select(std::move(members), quota, "class '" + label + "'");
  }

  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < parts[i].size(); ++c) {
      if (!keep[i][c]) continue;
      Document doc;
      doc.tokens = std::move(parts[i][c]);
      doc.label = entries[i].label;
      doc.group = entries[i].group;
      doc.source = entries[i].path.string();
      if (manifest.chunk_size) doc.source += "#" + std::to_string(c);
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

}  // namespace lmotif
