#include "lmotif/graph.hpp"

#include <algorithm>

#include "lmotif/error.hpp"

namespace lmotif {

NodeId NetworkBuilder::add_word(std::string_view word) {
  auto [it, inserted] = net_.index_.try_emplace(
      std::string(word), static_cast<NodeId>(net_.words_.size()));
  if (inserted) net_.words_.emplace_back(word);
  return it->second;
}

void NetworkBuilder::add_arc(NodeId source, NodeId target) {
  if (source != target) pending_.push_back({source, target});
}

WordNetwork NetworkBuilder::finish() && {
  std::sort(pending_.begin(), pending_.end());
  pending_.erase(std::unique(pending_.begin(), pending_.end()), pending_.end());

  const std::size_t n = net_.words_.size();
  net_.arcs_ = std::move(pending_);
  net_.out_.assign(n, {});
  net_.in_.assign(n, {});
  net_.support_.assign(n, {});
  for (const auto& arc : net_.arcs_) {
    net_.out_[arc.source].push_back(arc.target);
    net_.in_[arc.target].push_back(arc.source);
  }
  for (NodeId v = 0; v < n; ++v) {
    auto& in = net_.in_[v];
    std::sort(in.begin(), in.end());
    // out_[v] is already sorted because arcs are sorted by (source, target).
    const auto& out = net_.out_[v];
    auto& sup = net_.support_[v];
    std::size_t i = 0, j = 0;
    while (i < out.size() || j < in.size()) {
      if (j == in.size() || (i < out.size() && out[i] < in[j])) {
        sup.push_back({out[i++], true, false});
      } else if (i == out.size() || in[j] < out[i]) {
        sup.push_back({in[j++], false, true});
      } else {
        sup.push_back({out[i], true, true});
        ++i;
        ++j;
      }
    }
  }
  return std::move(net_);
}

WordNetwork WordNetwork::from_word_arcs(
    std::span<const std::pair<std::string, std::string>> arcs) {
  NetworkBuilder builder;
  for (const auto& [from, to] : arcs) {
    const NodeId s = builder.add_word(from);
    const NodeId t = builder.add_word(to);
    builder.add_arc(s, t);
  }
  return std::move(builder).finish();
}

std::optional<NodeId> WordNetwork::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool WordNetwork::has_arc(NodeId source, NodeId target) const {
  const auto& out = out_[source];
  return std::binary_search(out.begin(), out.end(), target);
}

WordNetwork build_network(const Tokens& tokens) {
  NetworkBuilder builder;
  NodeId prev = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const NodeId id = builder.add_word(tokens[i]);
    if (i > 0) builder.add_arc(prev, id);
    prev = id;
  }
  return std::move(builder).finish();
}

std::string export_edge_list(const WordNetwork& network) {
  std::string out;
  for (const auto& arc : network.arcs()) {
    out += network.word(arc.source);
    out += '\t';
    out += network.word(arc.target);
    out += '\n';
  }
  return out;
}

WordNetwork import_edge_list(std::string_view tsv) {
  std::vector<std::pair<std::string, std::string>> arcs;
  std::size_t line_no = 0;
  while (!tsv.empty()) {
    const auto eol = tsv.find('\n');
    std::string_view line = tsv.substr(0, eol);
    tsv.remove_prefix(eol == std::string_view::npos ? tsv.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      fail(ErrorCode::kSchema, "edge list line " + std::to_string(line_no) +
                                   " is not 'source<TAB>target'");
    }
    arcs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return WordNetwork::from_word_arcs(arcs);
}

}  // namespace lmotif
