#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const fixtures::TempDir& dir, const std::string& args) {
  const auto out = dir.path() / "stdout.txt";
  const auto err = dir.path() / "stderr.txt";
  const std::string cmd = std::string("'") + LMOTIF_CLI + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, fixtures::read(out),
          fixtures::read(err)};
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// Six short documents in two styles.
std::filesystem::path write_corpus(const fixtures::TempDir& dir) {
  std::string manifest = "path,label\n";
  const char* styles[2][4] = {{"the", "cat", "sat", "on"}, {"a", "dog", "ran", "by"}};
  for (int i = 0; i < 12; ++i) {
    std::string text;
    for (int t = 0; t < 80; ++t) {
      text += styles[i % 2][(t * (i + 3) + t / 3) % 4];
      text += t % 7 == 0 ? " the " : " ";
    }
    const auto name = "doc" + std::to_string(i) + ".txt";
    dir.write(name, text);
    manifest += name + (i % 2 ? ",second\n" : ",first\n");
  }
  return dir.write("manifest.csv", manifest);
}

}  // namespace

TEST_CASE("network build and census") {
  fixtures::TempDir dir;
  const auto text = dir.write("ht.txt", fixtures::kHardTimes);
  auto r = run(dir, "network build --in " + q(text) + " --out " + q(dir.path() / "ht.tsv"));
  CHECK(r.code == 0);
  const auto tsv = fixtures::read(dir.path() / "ht.tsv");
  CHECK(tsv.rfind("now\twhat\n", 0) == 0);

  r = run(dir, "census --in " + q(dir.path() / "ht.tsv") + " --words facts --orbits");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("motif_id,count\n1,0\n2,13\n3,1\n", 0) == 0);
  CHECK(r.out.find("facts,2,2,2\n") != std::string::npos);
}

TEST_CASE("errors are JSON on stderr with the status as exit code") {
  fixtures::TempDir dir;
  const auto bad = dir.write("bad.tsv", "only-one-column\n");
  auto r = run(dir, "census --in " + q(bad));
  CHECK(r.code == 6);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "schema_error");
  CHECK(!j["message"].get<std::string>().empty());

  r = run(dir, "census --in " + q(dir.path() / "missing.tsv"));
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.err)["error"] == "io_error");

  r = run(dir, "census --bogus");
  CHECK(r.code == 64);
  CHECK(nlohmann::json::parse(r.err)["error"] == "usage");

  const auto manifest = write_corpus(dir);
  r = run(dir, "evaluate --in " + q(manifest) + " --folds 1 --words 2");
  CHECK(r.code == 1);
  r = run(dir, "scatter --in " + q(manifest) + " --version v2 --words 2 --x zz\\|m99 --y the\\|m1\\|o1");
  CHECK(r.code == 6);
  CHECK(nlohmann::json::parse(r.err)["message"].get<std::string>().find("the|m1|o1") !=
        std::string::npos);
}

TEST_CASE("evaluate writes byte-identical reports for any job count") {
  fixtures::TempDir dir;
  const auto manifest = write_corpus(dir);
  const std::string common = "evaluate --in " + q(manifest) +
                             " --version v1,v2,mfw --classifiers tree,knn,svm,bayes"
                             " --words 2,3 --folds 4 --seed 9";
  auto a = run(dir, "--jobs 1 --out-dir " + q(dir.path() / "a") + " " + common);
  auto b = run(dir, "--jobs 4 --out-dir " + q(dir.path() / "b") + " " + common);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "a")) {
    ++files;
    const auto name = entry.path().filename();
    CHECK(fixtures::read(entry.path()) == fixtures::read(dir.path() / "b" / name));
  }
  CHECK(files == 3 * 2 * 4 + 1);
  const auto report = nlohmann::json::parse(fixtures::read(dir.path() / "a" / "report_v2_w3_svm.json"));
  CHECK(report["fold_accuracies"].size() == 4);

  auto s = run(dir, "sweep --in " + q(manifest) + " --range 1-3 --version mfw --classifiers knn --folds 3");
  CHECK(s.code == 0);
  CHECK(s.out.rfind("W,classifier,version,accuracy\n1,knn,mfw,", 0) == 0);

  auto x = run(dir, "extract --in " + q(manifest) + " --version mfw --words 2");
  CHECK(x.code == 0);
  CHECK(x.out.rfind("label,the,", 0) == 0);
}
