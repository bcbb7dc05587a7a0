#ifndef GRAPHCR_GRAPH_H_
#define GRAPHCR_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphcr/error.h"

namespace graphcr {

// Attribute columns in file order.
using AttributeList = std::vector<std::pair<std::string, std::string>>;

struct Record {
  std::string record_id;
  std::string source_id;
  AttributeList attributes;

  bool operator==(const Record&) const = default;
};

using NodeIndex = uint32_t;

// Undirected edge between node indices u < v.
struct Edge {
  NodeIndex u;
  NodeIndex v;
  double similarity;

  bool operator==(const Edge&) const = default;
};

struct Incidence {
  NodeIndex neighbor;
  size_t edge;
};

struct WeightedPair {
  std::string a;
  std::string b;
  double similarity;
};

enum class LinkCategory : int { kWeak = 0, kNormal = 1, kStrong = 2 };

const char* LinkCategoryName(LinkCategory category);

// Immutable undirected similarity graph. Nodes are stored in lexicographic
// byte order of their record ids, so node index order is the canonical
// iteration order; edges are sorted by (u, v).
class SimilarityGraph {
 public:
  SimilarityGraph() = default;

  // Trusted constructor: `ids` sorted and unique, `sources` parallel to
  // `ids`, edges with u < v, no duplicates, similarities in [0, 1].
  SimilarityGraph(std::vector<std::string> ids,
                  std::vector<std::string> sources, std::vector<Edge> edges);

  size_t num_nodes() const { return ids_.size(); }
  size_t num_edges() const { return edges_.size(); }

  const std::string& id(NodeIndex n) const { return ids_[n]; }
  const std::string& source(NodeIndex n) const { return sources_[n]; }
  std::span<const std::string> ids() const { return ids_; }
  std::span<const std::string> sources() const { return sources_; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(size_t e) const { return edges_[e]; }
  std::span<const Incidence> neighbors(NodeIndex n) const {
    return adjacency_[n];
  }
  size_t degree(NodeIndex n) const { return adjacency_[n].size(); }

  std::optional<NodeIndex> Find(const std::string& record_id) const;
  std::optional<size_t> FindEdge(NodeIndex a, NodeIndex b) const;

  // Same topology with the similarity of edge i replaced by similarities[i].
  SimilarityGraph WithSimilarities(std::span<const double> similarities) const;

  // Copy keeping only edges with keep[i] true; nodes are unchanged.
  SimilarityGraph FilterEdges(const std::vector<bool>& keep) const;

  // Subgraph induced by `nodes` (indices into this graph, any order).
  SimilarityGraph InducedSubgraph(std::span<const NodeIndex> nodes) const;

  bool operator==(const SimilarityGraph& other) const {
    return ids_ == other.ids_ && sources_ == other.sources_ &&
           edges_ == other.edges_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> sources_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::string, NodeIndex> index_;
};

// Validates records and pairs and builds the graph.
// Throws Error{kDuplicateRecordId, kInvalidRecord, kUnknownRecord, kSelfLoop,
// kInvalidSimilarity, kDuplicateEdge}.
SimilarityGraph BuildGraph(std::span<const Record> records,
                           std::span<const WeightedPair> pairs);

// CLIP-style category of edge (a, b): STRONG when its similarity is the
// maximum among a's edges toward b's source and among b's edges toward a's
// source, NORMAL when exactly one holds, WEAK otherwise. Ties attain the max.
LinkCategory CategorizeLink(const SimilarityGraph& graph, NodeIndex a,
                            NodeIndex b);

// Categories for every edge, indexed like graph.edges().
std::vector<LinkCategory> CategorizeLinks(const SimilarityGraph& graph);

// Removes all edges categorized WEAK on the input graph in one batch.
SimilarityGraph PruneWeakEdges(const SimilarityGraph& graph);

struct Cluster {
  int cluster_id = 0;
  // Induced subgraph; its node ids are the cluster members.
  SimilarityGraph graph;

  size_t size() const { return graph.num_nodes(); }
  std::span<const std::string> member_ids() const { return graph.ids(); }
};

// Connected components, numbered 0.. in ascending order of their smallest
// record id.
std::vector<Cluster> ConnectedComponents(const SimilarityGraph& graph);

// Component label per node for the given graph, labels 0.. in order of the
// smallest node index.
std::vector<int> ComponentLabels(const SimilarityGraph& graph,
                                 int* num_components = nullptr);

}  // namespace graphcr

#endif  // GRAPHCR_GRAPH_H_
