#include "graphcr/graph.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string_view>
#include <tuple>

namespace graphcr {

const char* LinkCategoryName(LinkCategory category) {
  switch (category) {
    case LinkCategory::kWeak: return "weak";
    case LinkCategory::kNormal: return "normal";
    case LinkCategory::kStrong: return "strong";
  }
  return "unknown";
}

SimilarityGraph::SimilarityGraph(std::vector<std::string> ids,
                                 std::vector<std::string> sources,
                                 std::vector<Edge> edges)
    : ids_(std::move(ids)),
      sources_(std::move(sources)),
      edges_(std::move(edges)),
      adjacency_(ids_.size()) {
  index_.reserve(ids_.size());
  for (NodeIndex n = 0; n < ids_.size(); ++n) index_.emplace(ids_[n], n);
  for (size_t e = 0; e < edges_.size(); ++e) {
    adjacency_[edges_[e].u].push_back({edges_[e].v, e});
    adjacency_[edges_[e].v].push_back({edges_[e].u, e});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Incidence& x, const Incidence& y) {
                return x.neighbor < y.neighbor;
              });
  }
}

std::optional<NodeIndex> SimilarityGraph::Find(
    const std::string& record_id) const {
  auto it = index_.find(record_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<size_t> SimilarityGraph::FindEdge(NodeIndex a,
                                                NodeIndex b) const {
  if (a >= ids_.size() || b >= ids_.size()) return std::nullopt;
  const auto& list = adjacency_[a];
  auto it = std::lower_bound(
      list.begin(), list.end(), b,
      [](const Incidence& x, NodeIndex n) { return x.neighbor < n; });
  if (it == list.end() || it->neighbor != b) return std::nullopt;
  return it->edge;
}

SimilarityGraph SimilarityGraph::WithSimilarities(
    std::span<const double> similarities) const {
  if (similarities.size() != edges_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "similarity count mismatch");
  }
  std::vector<Edge> edges = edges_;
  for (size_t e = 0; e < edges.size(); ++e) {
    if (!(similarities[e] >= 0.0 && similarities[e] <= 1.0)) {
      throw Error(ErrorCode::kInvalidSimilarity,
                  "similarity outside [0,1]");
    }
    edges[e].similarity = similarities[e];
  }
  return SimilarityGraph(ids_, sources_, std::move(edges));
}

SimilarityGraph SimilarityGraph::FilterEdges(
    const std::vector<bool>& keep) const {
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (size_t e = 0; e < edges_.size(); ++e) {
    if (keep[e]) edges.push_back(edges_[e]);
  }
  return SimilarityGraph(ids_, sources_, std::move(edges));
}

SimilarityGraph SimilarityGraph::InducedSubgraph(
    std::span<const NodeIndex> nodes) const {
  std::vector<NodeIndex> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  // Node index order equals record id order, so the sorted indices are
  // already in canonical order.
  std::unordered_map<NodeIndex, NodeIndex> local;
  std::vector<std::string> ids;
  std::vector<std::string> sources;
  for (NodeIndex n : sorted) {
    local.emplace(n, static_cast<NodeIndex>(ids.size()));
    ids.push_back(ids_[n]);
    sources.push_back(sources_[n]);
  }
  std::vector<Edge> edges;
  for (NodeIndex n : sorted) {
    for (const Incidence& inc : adjacency_[n]) {
      if (inc.neighbor <= n) continue;
      auto it = local.find(inc.neighbor);
      if (it == local.end()) continue;
      edges.push_back({local[n], it->second, edges_[inc.edge].similarity});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  return SimilarityGraph(std::move(ids), std::move(sources),
                         std::move(edges));
}

SimilarityGraph BuildGraph(std::span<const Record> records,
                           std::span<const WeightedPair> pairs) {
  std::vector<const Record*> sorted;
  sorted.reserve(records.size());
  for (const Record& r : records) {
    if (r.record_id.empty()) {
      throw Error(ErrorCode::kInvalidRecord, "empty record_id");
    }
    if (r.source_id.empty()) {
      throw Error(ErrorCode::kInvalidRecord,
                  "empty source_id for record '" + r.record_id + "'");
    }
    sorted.push_back(&r);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Record* x, const Record* y) {
              return x->record_id < y->record_id;
            });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->record_id == sorted[i - 1]->record_id) {
      throw Error(ErrorCode::kDuplicateRecordId,
                  "duplicate record_id '" + sorted[i]->record_id + "'");
    }
  }

  std::vector<std::string> ids;
  std::vector<std::string> sources;
  std::unordered_map<std::string, NodeIndex> index;
  for (const Record* r : sorted) {
    index.emplace(r->record_id, static_cast<NodeIndex>(ids.size()));
    ids.push_back(r->record_id);
    sources.push_back(r->source_id);
  }

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const WeightedPair& p : pairs) {
    auto a = index.find(p.a);
    if (a == index.end()) {
      throw Error(ErrorCode::kUnknownRecord, "unknown record '" + p.a + "'");
    }
    auto b = index.find(p.b);
    if (b == index.end()) {
      throw Error(ErrorCode::kUnknownRecord, "unknown record '" + p.b + "'");
    }
    if (a->second == b->second) {
      throw Error(ErrorCode::kSelfLoop, "self-loop on '" + p.a + "'");
    }
    if (!(p.similarity >= 0.0 && p.similarity <= 1.0)) {
      throw Error(ErrorCode::kInvalidSimilarity,
                  "similarity " + std::to_string(p.similarity) +
                      " outside [0,1] for '" + p.a + "'-'" + p.b + "'");
    }
    NodeIndex u = std::min(a->second, b->second);
    NodeIndex v = std::max(a->second, b->second);
    edges.push_back({u, v, p.similarity});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  for (size_t e = 1; e < edges.size(); ++e) {
    if (edges[e].u == edges[e - 1].u && edges[e].v == edges[e - 1].v) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "duplicate edge '" + ids[edges[e].u] + "'-'" +
                      ids[edges[e].v] + "'");
    }
  }
  return SimilarityGraph(std::move(ids), std::move(sources),
                         std::move(edges));
}

namespace {

// Maximum similarity from `node` toward any neighbor of `source`.
double MaxTowardSource(const SimilarityGraph& graph, NodeIndex node,
                       const std::string& source) {
  double best = -1.0;
  for (const Incidence& inc : graph.neighbors(node)) {
    if (graph.source(inc.neighbor) == source) {
      best = std::max(best, graph.edge(inc.edge).similarity);
    }
  }
  return best;
}

LinkCategory FromMaxima(bool a_max, bool b_max) {
  if (a_max && b_max) return LinkCategory::kStrong;
  if (a_max || b_max) return LinkCategory::kNormal;
  return LinkCategory::kWeak;
}

}  // namespace

LinkCategory CategorizeLink(const SimilarityGraph& graph, NodeIndex a,
                            NodeIndex b) {
  auto e = graph.FindEdge(a, b);
  if (!e) {
    throw Error(ErrorCode::kMissingEdge, "no edge between nodes " +
                                             std::to_string(a) + " and " +
                                             std::to_string(b));
  }
  const double sim = graph.edge(*e).similarity;
  const bool a_max = sim >= MaxTowardSource(graph, a, graph.source(b));
  const bool b_max = sim >= MaxTowardSource(graph, b, graph.source(a));
  return FromMaxima(a_max, b_max);
}

std::vector<LinkCategory> CategorizeLinks(const SimilarityGraph& graph) {
  // Per-node maximum toward each neighboring source, built in one pass.
  std::vector<std::unordered_map<std::string_view, double>> best(
      graph.num_nodes());
  for (const Edge& e : graph.edges()) {
    auto bump = [&](NodeIndex from, NodeIndex to) {
      auto [it, inserted] =
          best[from].try_emplace(graph.source(to), e.similarity);
      if (!inserted) it->second = std::max(it->second, e.similarity);
    };
    bump(e.u, e.v);
    bump(e.v, e.u);
  }
  std::vector<LinkCategory> out;
  out.reserve(graph.num_edges());
  for (const Edge& e : graph.edges()) {
    const bool u_max = e.similarity >= best[e.u].at(graph.source(e.v));
    const bool v_max = e.similarity >= best[e.v].at(graph.source(e.u));
    out.push_back(FromMaxima(u_max, v_max));
  }
  return out;
}

SimilarityGraph PruneWeakEdges(const SimilarityGraph& graph) {
  const std::vector<LinkCategory> categories = CategorizeLinks(graph);
  std::vector<bool> keep(categories.size());
  for (size_t e = 0; e < categories.size(); ++e) {
    keep[e] = categories[e] != LinkCategory::kWeak;
  }
  return graph.FilterEdges(keep);
}

std::vector<int> ComponentLabels(const SimilarityGraph& graph,
                                 int* num_components) {
  std::vector<int> label(graph.num_nodes(), -1);
  int next = 0;
  std::vector<NodeIndex> stack;
  for (NodeIndex start = 0; start < graph.num_nodes(); ++start) {
    if (label[start] >= 0) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeIndex n = stack.back();
      stack.pop_back();
      for (const Incidence& inc : graph.neighbors(n)) {
        if (label[inc.neighbor] < 0) {
          label[inc.neighbor] = next;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++next;
  }
  if (num_components != nullptr) *num_components = next;
  return label;
}

std::vector<Cluster> ConnectedComponents(const SimilarityGraph& graph) {
  int count = 0;
  const std::vector<int> label = ComponentLabels(graph, &count);
  std::vector<std::vector<NodeIndex>> members(count);
  for (NodeIndex n = 0; n < graph.num_nodes(); ++n) {
    members[label[n]].push_back(n);
  }
  std::vector<Cluster> clusters;
  clusters.reserve(count);
  for (int c = 0; c < count; ++c) {
    clusters.push_back({c, graph.InducedSubgraph(members[c])});
  }
  return clusters;
}

}  // namespace graphcr
