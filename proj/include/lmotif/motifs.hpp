#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmotif/graph.hpp"

namespace lmotif {

inline constexpr int kMotifCount = 13;
inline constexpr int kOrbitSlots = 30;

using MotifId = int;  // 1..13

// A directed edge between local triad positions 0..2.
struct LocalEdge {
  int from;
  int to;
};

struct MotifInfo {
  MotifId id;
  std::string_view name;
  std::vector<LocalEdge> edges;              // canonical form over {0,1,2}
  std::array<int, 3> orbit_of;               // local node -> orbit index
  std::vector<std::string_view> orbit_names; // indexed by orbit index
  int orbit_offset;                          // first slot in the 30-slot layout

  int orbit_count() const { return static_cast<int>(orbit_names.size()); }
};

// Numbering: 1 out-star, 2 path, 3 in-star, 4 mutual pair + incoming arc,
// 5 mutual pair + outgoing arc, 6 feed-forward triangle, 7 mutual chain,
// 8 out-star + mutual leaves, 9 cycle, 10 in-star + mutual leaves,
// 11 cycle with one mutual pair, 12 mutual chain + shortcut, 13 fully mutual.
std::span<const MotifInfo> motif_catalog();
const MotifInfo& motif(MotifId id);  // kInvalidArgument when out of range

// Members of each orbit of `id`, as local node lists.
std::vector<std::vector<int>> orbits_of(MotifId id);

// Six-bit adjacency code: the arc from -> to sets bit
// 2*from + (to > from ? to - 1 : to).
using TriadCode = std::uint8_t;
TriadCode adjacency_code(std::span<const LocalEdge> edges);

struct TriadClass {
  MotifId motif;
  std::array<int, 3> orbit;  // orbit index per local node
  friend bool operator==(const TriadClass&, const TriadClass&) = default;
};

// Canonicalizes by minimizing the adjacency code over all six node
// permutations. Throws kInvalidTriad for self-loops, out-of-range nodes or a
// digraph that is not weakly connected on all three nodes.
TriadClass canonical_motif_id(std::span<const LocalEdge> edges);

// Table lookup version of canonical_motif_id for a precomputed code; returns
// nullopt for disconnected codes.
std::optional<TriadClass> classify_code(TriadCode code);

struct TriadInstance {
  std::array<NodeId, 3> nodes;  // ascending
  MotifId motif;
  std::array<int, 3> orbit;     // orbit index of nodes[i]
  friend bool operator==(const TriadInstance&, const TriadInstance&) = default;
};

// Visits every weakly connected induced 3-node subgraph exactly once. Nodes
// with id in [first, last) act as the minimum-id anchor of the triples
// visited, so disjoint ranges partition the work.
void for_each_triad(const WordNetwork& network,
                    const std::function<void(const TriadInstance&)>& visit,
                    NodeId first = 0,
                    NodeId last = UINT32_MAX);

std::vector<TriadInstance> enumerate_triads(const WordNetwork& network);

// Per-word counts. motif[m-1] = instances of motif m containing the word;
// orbit[s] = instances where the word sits in orbit slot s (see
// MotifInfo::orbit_offset).
struct WordCounts {
  std::array<std::uint64_t, kMotifCount> motif{};
  std::array<std::uint64_t, kOrbitSlots> orbit{};
};

class LabelledCensus {
 public:
  std::uint64_t motif_count(MotifId id) const;
  std::uint64_t word_motif(std::string_view word, MotifId id) const;
  // orbit is the 0-based orbit index within the motif
  std::uint64_t word_motif_orbit(std::string_view word, MotifId id,
                                 int orbit) const;
  std::uint64_t total_instances() const;

  // Tracked words in ascending order.
  std::vector<std::string> tracked_words() const;
  const WordCounts* counts(std::string_view word) const;

 private:
  friend LabelledCensus labelled_census(const WordNetwork&,
                                        const std::vector<std::string>*,
                                        unsigned);

  std::array<std::uint64_t, kMotifCount> motif_counts_{};
  std::unordered_map<std::string, WordCounts> words_;
};

// vocabulary == nullptr tracks every word of the network. Tracked words that
// are not in the network get all-zero counts.
LabelledCensus labelled_census(const WordNetwork& network,
                               const std::vector<std::string>* vocabulary,
                               unsigned jobs = 1);

}  // namespace lmotif
