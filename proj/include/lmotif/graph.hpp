#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lmotif/corpus.hpp"

namespace lmotif {

using NodeId = std::uint32_t;

struct Arc {
  NodeId source;
  NodeId target;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Neighbour in the undirected support graph. `out` means an arc from the
// owning node to `node`, `in` an arc from `node` back to the owner.
struct SupportEdge {
  NodeId node;
  bool out;
  bool in;
};

// Directed simple word co-occurrence network. Immutable once built.
class WordNetwork {
 public:
  WordNetwork() = default;

  // Nodes are created in first-occurrence order; arcs are (source, target)
  // word pairs. Self-arcs are dropped, duplicates collapse.
  static WordNetwork from_word_arcs(
      std::span<const std::pair<std::string, std::string>> arcs);

  std::size_t node_count() const { return words_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }

  const std::string& word(NodeId id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<NodeId> find(std::string_view word) const;

  // Sorted by (source, target).
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::span<const NodeId> out_neighbors(NodeId id) const { return out_[id]; }
  std::span<const NodeId> in_neighbors(NodeId id) const { return in_[id]; }
  // Sorted by neighbour id.
  std::span<const SupportEdge> support(NodeId id) const { return support_[id]; }

  bool has_arc(NodeId source, NodeId target) const;

 private:
  friend class NetworkBuilder;

  std::vector<std::string> words_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::vector<std::vector<SupportEdge>> support_;
};

class NetworkBuilder {
 public:
  NodeId add_word(std::string_view word);
  void add_arc(NodeId source, NodeId target);
  WordNetwork finish() &&;

 private:
  WordNetwork net_;
  std::vector<Arc> pending_;
};

// One node per distinct token; an arc t[i] -> t[i+1] whenever they differ.
WordNetwork build_network(const Tokens& tokens);

// `source<TAB>target` per arc, newline-terminated, in (source id, target id)
// order. Empty network -> empty string.
std::string export_edge_list(const WordNetwork& network);

// Inverse of export_edge_list. Blank lines are ignored; any other line that
// is not exactly two non-empty tab-separated fields is a kSchema error.
WordNetwork import_edge_list(std::string_view tsv);

}  // namespace lmotif
