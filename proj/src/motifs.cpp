#include "lmotif/motifs.hpp"

#include <algorithm>

#include "lmotif/error.hpp"
#include "lmotif/parallel.hpp"

namespace lmotif {
namespace {

constexpr std::array<std::array<int, 3>, 6> kPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

constexpr int bit_index(int from, int to) {
  return 2 * from + (to > from ? to - 1 : to);
}

constexpr bool code_has(TriadCode code, int from, int to) {
  return (code >> bit_index(from, to)) & 1u;
}

TriadCode permute_code(TriadCode code, const std::array<int, 3>& perm) {
  TriadCode out = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b && code_has(code, a, b)) {
        out |= static_cast<TriadCode>(1u << bit_index(perm[a], perm[b]));
      }
    }
  }
  return out;
}

TriadCode minimal_code(TriadCode code) {
  TriadCode best = code;
  for (const auto& perm : kPermutations) {
    best = std::min(best, permute_code(code, perm));
  }
  return best;
}

bool weakly_connected(TriadCode code) {
  int linked_pairs = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (code_has(code, a, b) || code_has(code, b, a)) ++linked_pairs;
    }
  }
  return linked_pairs >= 2;
}

std::vector<MotifInfo> make_catalog() {
  std::vector<MotifInfo> catalog{
      {1, "out-star", {{0, 1}, {0, 2}}, {0, 1, 1}, {"hub", "leaf"}, 0},
      {2, "path", {{0, 1}, {1, 2}}, {0, 1, 2}, {"source", "central", "sink"}, 0},
      {3, "in-star", {{1, 0}, {2, 0}}, {0, 1, 1}, {"hub", "leaf"}, 0},
      {4, "mutual pair + incoming arc", {{0, 1}, {1, 0}, {2, 0}}, {0, 1, 2},
       {"mutual-hub", "mutual-end", "source"}, 0},
      {5, "mutual pair + outgoing arc", {{0, 1}, {1, 0}, {0, 2}}, {0, 1, 2},
       {"mutual-hub", "mutual-end", "sink"}, 0},
      {6, "feed-forward triangle", {{0, 1}, {0, 2}, {1, 2}}, {0, 1, 2},
       {"source", "middle", "sink"}, 0},
      {7, "mutual chain", {{0, 1}, {1, 0}, {0, 2}, {2, 0}}, {0, 1, 1},
       {"center", "end"}, 0},
      {8, "out-star + mutual leaves", {{0, 1}, {0, 2}, {1, 2}, {2, 1}},
       {0, 1, 1}, {"hub", "leaf"}, 0},
      {9, "cycle", {{0, 1}, {1, 2}, {2, 0}}, {0, 0, 0}, {"member"}, 0},
      {10, "in-star + mutual leaves", {{1, 0}, {2, 0}, {1, 2}, {2, 1}},
       {0, 1, 1}, {"hub", "leaf"}, 0},
      {11, "cycle with mutual pair", {{0, 1}, {1, 0}, {1, 2}, {2, 0}},
       {0, 1, 2}, {"mutual-receiver", "mutual-sender", "relay"}, 0},
      {12, "mutual chain + shortcut", {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}},
       {0, 1, 2}, {"shortcut-source", "center", "shortcut-sink"}, 0},
      {13, "fully mutual",
       {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}, {0, 0, 0},
       {"member"}, 0},
  };
  int offset = 0;
  for (auto& info : catalog) {
    info.orbit_offset = offset;
    offset += info.orbit_count();
  }
  return catalog;
}

const std::vector<MotifInfo>& catalog_storage() {
  static const std::vector<MotifInfo> catalog = make_catalog();
  return catalog;
}

const std::array<TriadCode, kMotifCount>& canonical_codes() {
  static const auto codes = [] {
    std::array<TriadCode, kMotifCount> out{};
    for (const auto& info : catalog_storage()) {
      out[info.id - 1] = minimal_code(adjacency_code(info.edges));
    }
    return out;
  }();
  return codes;
}

TriadClass classify_connected(TriadCode code) {
  const TriadCode canon = minimal_code(code);
  const auto& codes = canonical_codes();
  const auto it = std::find(codes.begin(), codes.end(), canon);
  if (it == codes.end()) {
    fail(ErrorCode::kInternal, "triad code has no catalog entry");
  }
  const auto& info = catalog_storage()[static_cast<std::size_t>(it - codes.begin())];
  const TriadCode reference = adjacency_code(info.edges);
  // Find the isomorphism reference -> input; catalog node v lands on perm[v].
  for (const auto& perm : kPermutations) {
    if (permute_code(reference, perm) == code) {
      TriadClass out{info.id, {}};
      for (int v = 0; v < 3; ++v) out.orbit[perm[v]] = info.orbit_of[v];
      return out;
    }
  }
  fail(ErrorCode::kInternal, "no isomorphism onto the catalog form");
}

struct CodeTable {
  std::array<TriadClass, 64> entries{};
  std::array<bool, 64> valid{};
};

const CodeTable& code_table() {
  static const CodeTable table = [] {
    CodeTable t;
    for (unsigned code = 0; code < 64; ++code) {
      const auto c = static_cast<TriadCode>(code);
      if (weakly_connected(c)) {
        t.entries[code] = classify_connected(c);
        t.valid[code] = true;
      }
    }
    return t;
  }();
  return table;
}

// Bits for the pair (a, b) given the support edge stored in a's list.
TriadCode pair_bits(const SupportEdge& e, int a, int b) {
  TriadCode bits = 0;
  if (e.out) bits |= static_cast<TriadCode>(1u << bit_index(a, b));
  if (e.in) bits |= static_cast<TriadCode>(1u << bit_index(b, a));
  return bits;
}

const SupportEdge* find_support(const WordNetwork& net, NodeId from,
                                NodeId to) {
  const auto sup = net.support(from);
  auto it = std::lower_bound(
      sup.begin(), sup.end(), to,
      [](const SupportEdge& e, NodeId id) { return e.node < id; });
  return (it != sup.end() && it->node == to) ? &*it : nullptr;
}

TriadInstance make_instance(NodeId u, NodeId v, NodeId w, TriadCode code) {
  const auto& table = code_table();
  const TriadClass& cls = table.entries[code];
  std::array<std::pair<NodeId, int>, 3> members{
      {{u, cls.orbit[0]}, {v, cls.orbit[1]}, {w, cls.orbit[2]}}};
  std::sort(members.begin(), members.end());
  return TriadInstance{{members[0].first, members[1].first, members[2].first},
                       cls.motif,
                       {members[0].second, members[1].second, members[2].second}};
}

// Anchors each connected triple at its minimum node u. Triples where u
// touches both others come from pairs in u's upper neighbourhood; triples
// where u touches only v are reached through v's neighbourhood, skipping
// nodes adjacent to u so nothing is counted twice.
template <typename Visit>
void visit_triads(const WordNetwork& net, NodeId first, NodeId last,
                  Visit&& visit) {
  const auto n = static_cast<NodeId>(net.node_count());
  last = std::min(last, n);
  if (first >= last || n < 3) return;
  std::vector<NodeId> mark(n, UINT32_MAX);
  for (NodeId u = first; u < last; ++u) {
    const auto su = net.support(u);
    for (const auto& e : su) mark[e.node] = u;
    const auto upper = std::upper_bound(
        su.begin(), su.end(), u,
        [](NodeId id, const SupportEdge& e) { return id < e.node; });
    for (auto iv = upper; iv != su.end(); ++iv) {
      const NodeId v = iv->node;
      const TriadCode uv = pair_bits(*iv, 0, 1);
      for (auto iw = iv + 1; iw != su.end(); ++iw) {
        const NodeId w = iw->node;
        TriadCode code = uv | pair_bits(*iw, 0, 2);
        if (const SupportEdge* vw = find_support(net, v, w)) {
          code |= pair_bits(*vw, 1, 2);
        }
        visit(make_instance(u, v, w, code));
      }
      for (const auto& ew : net.support(v)) {
        const NodeId w = ew.node;
        if (w <= u || mark[w] == u) continue;
        visit(make_instance(u, v, w, uv | pair_bits(ew, 1, 2)));
      }
    }
  }
}

}  // namespace

std::span<const MotifInfo> motif_catalog() { return catalog_storage(); }

const MotifInfo& motif(MotifId id) {
  if (id < 1 || id > kMotifCount) {
    fail(ErrorCode::kInvalidArgument,
         "motif id must be in 1..13, got " + std::to_string(id));
  }
  return catalog_storage()[static_cast<std::size_t>(id - 1)];
}

std::vector<std::vector<int>> orbits_of(MotifId id) {
  const auto& info = motif(id);
  std::vector<std::vector<int>> orbits(static_cast<std::size_t>(info.orbit_count()));
  for (int v = 0; v < 3; ++v) {
    orbits[static_cast<std::size_t>(info.orbit_of[v])].push_back(v);
  }
  return orbits;
}

TriadCode adjacency_code(std::span<const LocalEdge> edges) {
  TriadCode code = 0;
  for (const auto& e : edges) {
    if (e.from < 0 || e.from > 2 || e.to < 0 || e.to > 2) {
      fail(ErrorCode::kInvalidTriad, "triad edge endpoint outside {0,1,2}");
    }
    if (e.from == e.to) {
      fail(ErrorCode::kInvalidTriad, "triad edge is a self-loop");
    }
    code |= static_cast<TriadCode>(1u << bit_index(e.from, e.to));
  }
  return code;
}

TriadClass canonical_motif_id(std::span<const LocalEdge> edges) {
  const TriadCode code = adjacency_code(edges);
  if (!weakly_connected(code)) {
    fail(ErrorCode::kInvalidTriad, "triad is not weakly connected");
  }
  return classify_connected(code);
}

std::optional<TriadClass> classify_code(TriadCode code) {
  const auto& table = code_table();
  if (code >= 64 || !table.valid[code]) return std::nullopt;
  return table.entries[code];
}

void for_each_triad(const WordNetwork& network,
                    const std::function<void(const TriadInstance&)>& visit,
                    NodeId first, NodeId last) {
  visit_triads(network, first, last, visit);
}

std::vector<TriadInstance> enumerate_triads(const WordNetwork& network) {
  std::vector<TriadInstance> out;
  visit_triads(network, 0, UINT32_MAX,
               [&](const TriadInstance& t) { out.push_back(t); });
  return out;
}

std::uint64_t LabelledCensus::motif_count(MotifId id) const {
  motif(id);
  return motif_counts_[static_cast<std::size_t>(id - 1)];
}

std::uint64_t LabelledCensus::total_instances() const {
  std::uint64_t total = 0;
  for (auto c : motif_counts_) total += c;
  return total;
}

const WordCounts* LabelledCensus::counts(std::string_view word) const {
  auto it = words_.find(std::string(word));
  return it == words_.end() ? nullptr : &it->second;
}

std::uint64_t LabelledCensus::word_motif(std::string_view word,
                                         MotifId id) const {
  motif(id);
  const auto* c = counts(word);
  return c == nullptr ? 0 : c->motif[static_cast<std::size_t>(id - 1)];
}

std::uint64_t LabelledCensus::word_motif_orbit(std::string_view word,
                                               MotifId id, int orbit) const {
  const auto& info = motif(id);
  if (orbit < 0 || orbit >= info.orbit_count()) {
    fail(ErrorCode::kInvalidArgument,
         "motif " + std::to_string(id) + " has no orbit " + std::to_string(orbit));
  }
  const auto* c = counts(word);
  return c == nullptr
             ? 0
             : c->orbit[static_cast<std::size_t>(info.orbit_offset + orbit)];
}

std::vector<std::string> LabelledCensus::tracked_words() const {
  std::vector<std::string> out;
  out.reserve(words_.size());
  for (const auto& [w, c] : words_) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

LabelledCensus labelled_census(const WordNetwork& network,
                               const std::vector<std::string>* vocabulary,
                               unsigned jobs) {
  const auto n = network.node_count();
  std::vector<int> slot(n, -1);
  std::vector<std::string> tracked;
  if (vocabulary == nullptr) {
    tracked = network.words();
  } else {
    tracked = *vocabulary;
    std::sort(tracked.begin(), tracked.end());
    tracked.erase(std::unique(tracked.begin(), tracked.end()), tracked.end());
  }
  for (std::size_t i = 0; i < tracked.size(); ++i) {
    if (auto id = network.find(tracked[i])) slot[*id] = static_cast<int>(i);
  }

  struct Partial {
    std::array<std::uint64_t, kMotifCount> motifs{};
    std::vector<WordCounts> words;
  };
  const std::size_t parts = jobs <= 1 ? 1 : std::min<std::size_t>(4 * jobs, std::max<std::size_t>(n, 1));
  std::vector<Partial> partials(parts);
  const auto& catalog = catalog_storage();
  parallel_for(parts, jobs, [&](std::size_t p) {
    Partial& acc = partials[p];
    acc.words.assign(tracked.size(), WordCounts{});
    const auto first = static_cast<NodeId>(n * p / parts);
    const auto last = static_cast<NodeId>(n * (p + 1) / parts);
    visit_triads(network, first, last, [&](const TriadInstance& t) {
      const auto m = static_cast<std::size_t>(t.motif - 1);
      ++acc.motifs[m];
      const int offset = catalog[m].orbit_offset;
      for (int i = 0; i < 3; ++i) {
        const int s = slot[t.nodes[static_cast<std::size_t>(i)]];
        if (s < 0) continue;
        auto& wc = acc.words[static_cast<std::size_t>(s)];
        ++wc.motif[m];
        ++wc.orbit[static_cast<std::size_t>(offset + t.orbit[static_cast<std::size_t>(i)])];
      }
    });
  });

  LabelledCensus census;
  std::vector<WordCounts> totals(tracked.size());
  for (const auto& part : partials) {
    for (std::size_t m = 0; m < kMotifCount; ++m) {
      census.motif_counts_[m] += part.motifs[m];
    }
    for (std::size_t i = 0; i < tracked.size(); ++i) {
      for (std::size_t m = 0; m < kMotifCount; ++m) {
        totals[i].motif[m] += part.words[i].motif[m];
      }
      for (std::size_t s = 0; s < kOrbitSlots; ++s) {
        totals[i].orbit[s] += part.words[i].orbit[s];
      }
    }
  }
  census.words_.reserve(tracked.size());
  for (std::size_t i = 0; i < tracked.size(); ++i) {
    census.words_.emplace(std::move(tracked[i]), totals[i]);
  }
  return census;
}

}  // namespace lmotif
