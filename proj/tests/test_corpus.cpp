#include <doctest.h>

#include <map>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "lmotif/corpus.hpp"
#include "lmotif/error.hpp"
#include "lmotif/rng.hpp"

using lmotif::Tokens;

namespace {

std::string join(const Tokens& t) {
  std::string out;
  for (const auto& s : t) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

std::string words(std::size_t n, const std::string& prefix = "w") {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    out += prefix + static_cast<char>('a' + i % 7) + ' ';
  }
  return out;
}

lmotif::ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const lmotif::Error& e) {
    return e.code();
  }
  return lmotif::ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("normalize_text reproduces the Hard Times extract") {
  CHECK(lmotif::normalize_text(fixtures::kHardTimes) == fixtures::hard_times_tokens());
  CHECK(join(lmotif::normalize_text(fixtures::kHardTimes)) ==
        "now what i want is facts teach these boys and girls nothing but facts");
}

TEST_CASE("normalize_text edge cases") {
  CHECK(lmotif::normalize_text("").empty());
  CHECK(lmotif::normalize_text("Facts 42 facts!") == Tokens{"facts", "facts"});
  CHECK(lmotif::normalize_text("1999 2000") .empty());
  CHECK(lmotif::normalize_text("don't 'quoted' rock'n'roll") ==
        Tokens{"don't", "quoted", "rock'n'roll"});
  CHECK(lmotif::normalize_text("it\xE2\x80\x99s") == Tokens{"it's"});
  CHECK(lmotif::normalize_text("well-known x--y") == Tokens{"well", "known", "x", "y"});
  CHECK(lmotif::normalize_text("abc123def") == Tokens{"abc", "def"});
  CHECK(lmotif::normalize_text("end.\n\nNext paragraph") ==
        Tokens{"end", "next", "paragraph"});
  CHECK(lmotif::normalize_text("\xC3\x89T\xC3\x89 d\xC3\xA9j\xC3\xA0") ==
        Tokens{"\xC3\xA9t\xC3\xA9", "d\xC3\xA9j\xC3\xA0"});
  // stray continuation byte splits like punctuation
  CHECK(lmotif::normalize_text("ab\x80" "cd") == Tokens{"ab", "cd"});
}

TEST_CASE("normalize_text is idempotent on its joined output") {
  lmotif::Rng rng(7);
  const std::string alphabet = "aZ'- .,3\xE2\x80\x99\xC3\x89";
  for (int trial = 0; trial < 300; ++trial) {
    std::string raw;
    const auto len = rng.below(60);
    for (std::uint64_t i = 0; i < len; ++i) raw += alphabet[rng.below(alphabet.size())];
    const auto once = lmotif::normalize_text(raw);
    CHECK(lmotif::normalize_text(join(once)) == once);
    for (const auto& t : once) {
      CHECK(!t.empty());
      CHECK(t.front() != '\'');
      CHECK(t.back() != '\'');
    }
  }
}

TEST_CASE("chunk_tokens windows") {
  Tokens t(20000);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = "w" + std::to_string(i);
  auto two = lmotif::chunk_tokens(Tokens(t.begin(), t.begin() + 16000), 8000);
  CHECK(two.size() == 2);
  CHECK(lmotif::chunk_tokens(Tokens(t.begin(), t.begin() + 7999), 8000).empty());
  auto rem = lmotif::chunk_tokens(t, 8000);
  REQUIRE(rem.size() == 2);
  CHECK(rem[0].front() == "w0");
  CHECK(rem[1].front() == "w8000");
  CHECK(rem[1].back() == "w15999");
  CHECK(code_of([&] { lmotif::chunk_tokens(t, 1); }) ==
        lmotif::ErrorCode::kInvalidArgument);
}

TEST_CASE("chunk_tokens covers a prefix with disjoint spans") {
  lmotif::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Tokens t(rng.below(200));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::to_string(i);
    const auto size = 2 + rng.below(30);
    const auto chunks = lmotif::chunk_tokens(t, size);
    CHECK(chunks.size() == t.size() / size);
    Tokens flat;
    for (const auto& c : chunks) {
      CHECK(c.size() == size);
      flat.insert(flat.end(), c.begin(), c.end());
    }
    CHECK(flat == Tokens(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(flat.size())));
  }
}

TEST_CASE("manifest parsing and validation") {
  const auto m = lmotif::parse_manifest("path,label,group\na.txt,x,g1\nb.txt,y\n", "/base");
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].path == "/base/a.txt");
  CHECK(m.entries[0].group == "g1");
  CHECK(m.entries[1].group.empty());
  CHECK(code_of([] { lmotif::parse_manifest("path,label\na,x\na,y\n", "."); }) ==
        lmotif::ErrorCode::kInvalidArgument);
  CHECK(code_of([] { lmotif::parse_manifest("path,label\na,\n", "."); }) ==
        lmotif::ErrorCode::kInvalidArgument);
  CHECK(code_of([] { lmotif::parse_manifest("file,class\na,x\n", "."); }) ==
        lmotif::ErrorCode::kSchema);
  lmotif::Manifest bad;
  bad.chunk_size = 1;
  CHECK(code_of([&] { bad.validate(); }) == lmotif::ErrorCode::kInvalidArgument);
}

TEST_CASE("prepare_dataset truncates to the shortest source") {
  fixtures::TempDir dir;
  dir.write("a.txt", words(10000));
  dir.write("b.txt", words(8000));
  dir.write("m.csv", "path,label\na.txt,A\nb.txt,B\n");
  auto m = lmotif::load_manifest(dir.path() / "m.csv");
  m.truncate_to_shortest = true;
  const auto docs = lmotif::prepare_dataset(m, 1);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].tokens.size() == 8000);
  CHECK(docs[1].tokens.size() == 8000);
  CHECK(docs[0].label == "A");
}

TEST_CASE("prepare_dataset balances Europarl-style classes with quotas") {
  fixtures::TempDir dir;
  std::string manifest = "path,label,group\n";
  dir.write("en.txt", words(2 * 1000, "e"));
  manifest += "en.txt,original,en\n";
  for (const std::string lang : {"fr", "de", "it", "es", "fi"}) {
    dir.write(lang + ".txt", words(2 * 200 + 1, lang));
    manifest += lang + ".txt,translated," + lang + "\n";
  }
  dir.write("m.csv", manifest);
  auto m = lmotif::load_manifest(dir.path() / "m.csv");
  m.chunk_size = 2;
  for (const std::string lang : {"fr", "de", "it", "es", "fi"}) m.group_quota[lang] = 180;
  m.class_quota["original"] = 5 * 180;
  const auto docs = lmotif::prepare_dataset(m, 42);
  std::size_t original = 0, translated = 0;
  std::map<std::string, std::size_t> per_group;
  for (const auto& d : docs) {
    (d.label == "original" ? original : translated)++;
    ++per_group[d.group];
    CHECK(d.tokens.size() == 2);
  }
  CHECK(original == 900);
  CHECK(translated == 900);
  CHECK(per_group["fr"] == 180);

  // same seed -> identical output, jobs do not matter
  const auto again = lmotif::prepare_dataset(m, 42, 4);
  REQUIRE(again.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(again[i].source == docs[i].source);
    CHECK(again[i].tokens == docs[i].tokens);
  }
}

TEST_CASE("class quota picks whole sources in seeded order") {
  fixtures::TempDir dir;
  dir.write("a.txt", words(6, "a"));
  dir.write("b.txt", words(6, "b"));
  dir.write("m.csv", "path,label\na.txt,X\nb.txt,X\n");
  auto m = lmotif::load_manifest(dir.path() / "m.csv");
  m.chunk_size = 2;
  m.class_quota["X"] = 3;
  std::set<std::string> first_sources;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const auto docs = lmotif::prepare_dataset(m, seed);
    REQUIRE(docs.size() == 3);
    // three partitions of one source
    CHECK(docs[0].source.substr(0, docs[0].source.find('#')) ==
          docs[2].source.substr(0, docs[2].source.find('#')));
    first_sources.insert(docs[0].source);
  }
  CHECK(first_sources.size() == 2);  // both sources get picked for some seed
}

TEST_CASE("prepare_dataset error paths") {
  fixtures::TempDir dir;
  dir.write("a.txt", words(6));
  dir.write("m.csv", "path,label\na.txt,X\nmissing.txt,Y\n");
  auto m = lmotif::load_manifest(dir.path() / "m.csv");
  try {
    lmotif::prepare_dataset(m, 1);
    FAIL("expected an I/O error");
  } catch (const lmotif::Error& e) {
    CHECK(e.code() == lmotif::ErrorCode::kIo);
    CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
  }
  dir.write("m2.csv", "path,label\na.txt,X\n");
  auto m2 = lmotif::load_manifest(dir.path() / "m2.csv");
  m2.chunk_size = 2;
  m2.class_quota["X"] = 5;
  try {
    lmotif::prepare_dataset(m2, 1);
    FAIL("expected insufficient data");
  } catch (const lmotif::Error& e) {
    CHECK(e.code() == lmotif::ErrorCode::kInsufficientData);
    CHECK(std::string(e.what()).find("'X'") != std::string::npos);
  }
}
