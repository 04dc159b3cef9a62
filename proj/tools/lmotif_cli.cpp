// Command-line front end. Talks to the library only through lmotif.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmotif/lmotif.h"

namespace {

struct CliError : std::runtime_error {
  CliError(lm_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  lm_status status;
};

void check(lm_status status) {
  if (status != LM_OK) throw CliError(status, lm_last_error_message());
}

struct StringDeleter {
  void operator()(char* p) const { lm_string_free(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct NetworkDeleter {
  void operator()(lm_network* p) const { lm_network_free(p); }
};
struct CensusDeleter {
  void operator()(lm_census* p) const { lm_census_free(p); }
};
struct DatasetDeleter {
  void operator()(lm_dataset* p) const { lm_dataset_free(p); }
};

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(LM_ERR_IO, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError(LM_ERR_IO, "cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

struct CorpusFlags {
  std::string manifest;
  size_t chunk_size = 0;
  bool truncate_shortest = false;
  std::vector<std::string> class_quotas;
  std::vector<std::string> group_quotas;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--in", manifest, "manifest CSV (path,label[,group])")
        ->required();
    cmd->add_option("--chunk-size", chunk_size, "split sources into N-token partitions");
    cmd->add_flag("--truncate-shortest", truncate_shortest,
                  "truncate every source to the shortest one");
    cmd->add_option("--quota", class_quotas, "CLASS=N documents kept for a class");
    cmd->add_option("--group-quota", group_quotas, "GROUP=N documents kept for a group");
  }
};

std::vector<std::pair<std::string, size_t>> parse_quotas(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, size_t>> out;
  for (const auto& s : specs) {
    const auto eq = s.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      throw CliError(LM_ERR_INVALID_ARGUMENT, "quota '" + s + "' is not KEY=N");
    }
    try {
      size_t used = 0;
      const auto n = std::stoull(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument(s);
      out.emplace_back(s.substr(0, eq), static_cast<size_t>(n));
    } catch (const std::logic_error&) {
      throw CliError(LM_ERR_INVALID_ARGUMENT, "quota '" + s + "' is not KEY=N");
    }
  }
  return out;
}

std::unique_ptr<lm_dataset, DatasetDeleter> load_dataset(const CorpusFlags& flags,
                                                         uint64_t seed,
                                                         unsigned jobs) {
  const auto classes = parse_quotas(flags.class_quotas);
  const auto groups = parse_quotas(flags.group_quotas);
  std::vector<lm_quota> cq, gq;
  for (const auto& [k, n] : classes) cq.push_back({k.c_str(), n});
  for (const auto& [k, n] : groups) gq.push_back({k.c_str(), n});
  lm_dataset_options opts;
  lm_dataset_options_init(&opts);
  opts.chunk_size = flags.chunk_size;
  opts.truncate_shortest = flags.truncate_shortest ? 1 : 0;
  opts.class_quotas = cq.data();
  opts.class_quota_count = cq.size();
  opts.group_quotas = gq.data();
  opts.group_quota_count = gq.size();
  opts.seed = seed;
  opts.jobs = jobs;
  lm_dataset* ds = nullptr;
  check(lm_dataset_load(flags.manifest.c_str(), &opts, &ds));
  return std::unique_ptr<lm_dataset, DatasetDeleter>(ds);
}

int report_error(const std::string& name, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = name;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Labelled-motif stylometry: co-occurrence networks, triad census, "
               "feature extraction and cross-validated classification"};
  app.require_subcommand(1);
  app.fallthrough();

  uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out_dir;
  app.add_option("--seed", seed, "seed for fold assignment and quota selection");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", out_dir, "directory for experiment outputs");

  // network build
  auto* network = app.add_subcommand("network", "co-occurrence networks");
  network->require_subcommand(1);
  network->fallthrough();
  auto* build = network->add_subcommand("build", "text file -> TSV edge list");
  std::string build_in, build_out;
  build->add_option("--in", build_in, "raw text file")->required();
  build->add_option("--out", build_out, "edge list (default stdout)");

  // census
  auto* census = app.add_subcommand("census", "directed triad census of an edge list");
  std::string census_in, census_words, census_out;
  bool census_orbits = false;
  census->add_option("--in", census_in, "edge list TSV")->required();
  census->add_option("--words", census_words, "comma-separated words to label");
  census->add_flag("--orbits", census_orbits, "split labelled counts by orbit");
  census->add_option("--out", census_out, "output CSV (default stdout)");

  // extract
  auto* extract = app.add_subcommand("extract", "feature matrix for a corpus");
  CorpusFlags extract_corpus;
  extract_corpus.add_to(extract);
  std::string extract_version = "v2", extract_out;
  size_t extract_words = 20;
  extract->add_option("--version", extract_version, "v1, v2 or mfw");
  extract->add_option("--words", extract_words, "|W|, most frequent words tracked");
  extract->add_option("--out", extract_out, "output CSV (default stdout)");

  // evaluate and sweep share experiment flags
  struct ExperimentFlags {
    CorpusFlags corpus;
    std::string versions = "v2";
    std::string classifiers = "tree,knn,svm,bayes";
    size_t folds = 10;
    bool global_words = false;
    bool group_folds = false;
  };
  auto add_experiment_flags = [](CLI::App* cmd, ExperimentFlags& f) {
    f.corpus.add_to(cmd);
    cmd->add_option("--version", f.versions, "comma-separated: v1,v2,mfw");
    cmd->add_option("--classifiers", f.classifiers,
                    "comma-separated: tree,knn,svm,bayes");
    cmd->add_option("--folds", f.folds, "cross-validation folds");
    cmd->add_flag("--global-words", f.global_words,
                  "select W once from all documents instead of per fold");
    cmd->add_flag("--group-folds", f.group_folds,
                  "keep documents of one manifest group in one fold");
  };
  auto* evaluate = app.add_subcommand("evaluate", "cross-validated accuracy reports");
  ExperimentFlags eval_flags;
  std::string eval_words = "20";
  add_experiment_flags(evaluate, eval_flags);
  evaluate->add_option("--words", eval_words, "comma-separated |W| values");

  auto* sweep = app.add_subcommand("sweep", "accuracy as a function of |W|");
  ExperimentFlags sweep_flags;
  std::string sweep_range = "1-40", sweep_out;
  add_experiment_flags(sweep, sweep_flags);
  sweep->add_option("--range", sweep_range, "|W| range lo-hi");
  sweep->add_option("--out", sweep_out, "CSV path (default: out-dir/sweep.csv or stdout)");

  auto* scatter = app.add_subcommand("scatter", "two features per document");
  CorpusFlags scatter_corpus;
  scatter_corpus.add_to(scatter);
  std::string scatter_version = "mfw", scatter_x, scatter_y, scatter_out;
  size_t scatter_words = 20;
  scatter->add_option("--version", scatter_version, "v1, v2 or mfw");
  scatter->add_option("--words", scatter_words, "|W| the features are drawn from");
  scatter->add_option("--x", scatter_x, "feature on the x axis")->required();
  scatter->add_option("--y", scatter_y, "feature on the y axis")->required();
  scatter->add_option("--out", scatter_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 64);
  }

  auto run_experiment_flags = [&](const ExperimentFlags& f,
                                  const std::vector<size_t>& word_counts,
                                  auto&& call) {
    auto ds = load_dataset(f.corpus, seed, jobs);
    const auto versions = split_commas(f.versions);
    const auto classifiers = split_commas(f.classifiers);
    const auto v = c_strings(versions);
    const auto c = c_strings(classifiers);
    lm_experiment_options opts;
    lm_experiment_options_init(&opts);
    opts.versions = v.data();
    opts.version_count = v.size();
    opts.word_counts = word_counts.data();
    opts.word_count_count = word_counts.size();
    opts.classifiers = c.data();
    opts.classifier_count = c.size();
    opts.folds = f.folds;
    opts.seed = seed;
    opts.jobs = jobs;
    opts.global_words = f.global_words ? 1 : 0;
    opts.group_folds = f.group_folds ? 1 : 0;
    call(ds.get(), &opts);
  };

  try {
    if (*build) {
      const auto text = read_all(build_in);
      lm_network* net = nullptr;
      check(lm_network_from_text(text.data(), text.size(), &net));
      std::unique_ptr<lm_network, NetworkDeleter> guard(net);
      char* tsv = nullptr;
      check(lm_network_edge_list(net, &tsv));
      emit(CString(tsv).get(), build_out);
    } else if (*census) {
      const auto text = read_all(census_in);
      lm_network* net = nullptr;
      check(lm_network_from_edge_list(text.data(), text.size(), &net));
      std::unique_ptr<lm_network, NetworkDeleter> net_guard(net);
      const auto words = split_commas(census_words);
      const auto w = c_strings(words);
      lm_census* cs = nullptr;
      check(lm_census_compute(net, w.empty() ? nullptr : w.data(), w.size(), jobs, &cs));
      std::unique_ptr<lm_census, CensusDeleter> census_guard(cs);
      char* table = nullptr;
      check(lm_census_table(cs, w.data(), w.size(), census_orbits ? 1 : 0, &table));
      emit(CString(table).get(), census_out);
    } else if (*extract) {
      auto ds = load_dataset(extract_corpus, seed, jobs);
      char* csv = nullptr;
      check(lm_extract_features(ds.get(), extract_version.c_str(), extract_words, jobs,
                                &csv));
      emit(CString(csv).get(), extract_out);
    } else if (*evaluate) {
      std::vector<size_t> counts;
      for (const auto& s : split_commas(eval_words)) {
        try {
          counts.push_back(static_cast<size_t>(std::stoull(s)));
        } catch (const std::logic_error&) {
          throw CliError(LM_ERR_INVALID_ARGUMENT, "'" + s + "' is not a |W| value");
        }
      }
      run_experiment_flags(eval_flags, counts, [&](lm_dataset* ds,
                                                   lm_experiment_options* opts) {
        char* summary = nullptr;
        check(lm_evaluate(ds, opts, out_dir.empty() ? "." : out_dir.c_str(), &summary));
        std::cout << CString(summary).get();
      });
    } else if (*sweep) {
      const auto dash = sweep_range.find('-');
      size_t lo = 0, hi = 0;
      try {
        lo = static_cast<size_t>(std::stoull(sweep_range.substr(0, dash)));
        hi = dash == std::string::npos
                 ? lo
                 : static_cast<size_t>(std::stoull(sweep_range.substr(dash + 1)));
      } catch (const std::logic_error&) {
        throw CliError(LM_ERR_INVALID_ARGUMENT, "range '" + sweep_range + "' is not lo-hi");
      }
      if (lo < 1 || lo > hi) {
        throw CliError(LM_ERR_INVALID_ARGUMENT,
                       "range '" + sweep_range + "' must satisfy 1 <= lo <= hi");
      }
      std::vector<size_t> counts;
      for (size_t w = lo; w <= hi; ++w) counts.push_back(w);
      run_experiment_flags(sweep_flags, counts, [&](lm_dataset* ds,
                                                    lm_experiment_options* opts) {
        char* csv = nullptr;
        check(lm_sweep(ds, opts, out_dir.empty() ? nullptr : out_dir.c_str(), &csv));
        CString owned(csv);
        if (!sweep_out.empty() || out_dir.empty()) emit(owned.get(), sweep_out);
      });
    } else if (*scatter) {
      auto ds = load_dataset(scatter_corpus, seed, jobs);
      char* csv = nullptr;
      check(lm_scatter(ds.get(), scatter_version.c_str(), scatter_words,
                       scatter_x.c_str(), scatter_y.c_str(), jobs, &csv));
      emit(CString(csv).get(), scatter_out);
    }
  } catch (const CliError& e) {
    return report_error(lm_status_name(e.status), e.what(), static_cast<int>(e.status));
  }
  return 0;
}
