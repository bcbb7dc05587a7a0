#include "graphcr/repair.h"

#include <algorithm>

namespace graphcr {

std::vector<size_t> EdgePartition::matches() const {
  std::vector<size_t> out;
  for (size_t e = 0; e < is_match.size(); ++e) {
    if (is_match[e]) out.push_back(e);
  }
  return out;
}

std::vector<size_t> EdgePartition::non_matches() const {
  std::vector<size_t> out;
  for (size_t e = 0; e < is_match.size(); ++e) {
    if (!is_match[e]) out.push_back(e);
  }
  return out;
}

EdgePartition PartitionEdges(const Cluster& cluster, const FeatureSpace& space,
                             const EnsembleModel& model, double threshold) {
  EdgePartition partition;
  partition.is_match.resize(cluster.graph.num_edges());
  for (size_t e = 0; e < cluster.graph.num_edges(); ++e) {
    const int id = space.VectorIdFor(cluster.cluster_id, e);
    partition.is_match[e] =
        model.Classify(space.vector(id).values, threshold) == Label::kMatch;
  }
  return partition;
}

int Support(const SimilarityGraph& graph, const EdgePartition& partition,
            std::span<const int> assignment, NodeIndex record, int cluster) {
  int support = 0;
  for (const Incidence& inc : graph.neighbors(record)) {
    if (assignment[inc.neighbor] != cluster) continue;
    support += partition.is_match[inc.edge] ? 1 : -1;
  }
  return support;
}

RepairedClustering RepairCluster(const Cluster& cluster,
                                 const EdgePartition& partition) {
  const SimilarityGraph& g = cluster.graph;
  const size_t n = g.num_nodes();
  if (partition.is_match.size() != g.num_edges()) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge partition does not match cluster " +
                    std::to_string(cluster.cluster_id));
  }
  RepairedClustering out;
  out.origin_cluster_id = cluster.cluster_id;
  out.assignment.assign(n, -1);

  std::vector<NodeIndex> seeds;
  for (size_t e : partition.non_matches()) {
    seeds.push_back(g.edge(e).u);
    seeds.push_back(g.edge(e).v);
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  if (seeds.empty()) {
    std::fill(out.assignment.begin(), out.assignment.end(), 0);
    out.clusters.emplace_back(g.ids().begin(), g.ids().end());
    return out;
  }

  std::vector<char> immovable(n, 0);
  const int num_seeds = static_cast<int>(seeds.size());
  for (int c = 0; c < num_seeds; ++c) {
    out.assignment[seeds[c]] = c;
    immovable[seeds[c]] = 1;
    out.trace.push_back({RepairEvent::Kind::kSeed, 0, seeds[c], c, 0, -1, 0});
  }

  std::vector<int>& assign = out.assignment;
  std::vector<NodeIndex> members;
  std::vector<NodeIndex> candidates;
  for (int pass = 1;; ++pass) {
    bool changed = false;
    for (int c = 0; c < num_seeds; ++c) {
      members.clear();
      for (NodeIndex v = 0; v < n; ++v) {
        if (assign[v] == c) members.push_back(v);
      }
      candidates.clear();
      for (NodeIndex v : members) {
        for (const Incidence& inc : g.neighbors(v)) {
          if (partition.is_match[inc.edge] && assign[inc.neighbor] != c) {
            candidates.push_back(inc.neighbor);
          }
        }
      }
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()),
                       candidates.end());

      for (NodeIndex u : candidates) {
        if (immovable[u] || assign[u] == c) continue;
        const int support = Support(g, partition, assign, u, c);
        const int previous = assign[u];
        if (previous < 0) {
          assign[u] = c;
          changed = true;
          out.trace.push_back(
              {RepairEvent::Kind::kAssign, pass, u, c, support, -1, 0});
          continue;
        }
        const int previous_support = Support(g, partition, assign, u, previous);
        if (support > previous_support) {
          assign[u] = c;
          changed = true;
          out.trace.push_back({RepairEvent::Kind::kMove, pass, u, c, support,
                               previous, previous_support});
        } else {
          out.trace.push_back({RepairEvent::Kind::kKeep, pass, u, c, support,
                               previous, previous_support});
        }
      }
    }
    out.iterations = pass;
    if (!changed) break;
    if (static_cast<size_t>(pass) >= n) {
      out.hit_iteration_cap = true;
      break;
    }
  }

  // Records no seed reached keep their E_M connectivity.
  int next = num_seeds;
  std::vector<NodeIndex> stack;
  for (NodeIndex start = 0; start < n; ++start) {
    if (assign[start] >= 0) continue;
    const int id = next++;
    assign[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeIndex v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : g.neighbors(v)) {
        if (partition.is_match[inc.edge] && assign[inc.neighbor] < 0) {
          assign[inc.neighbor] = id;
          stack.push_back(inc.neighbor);
        }
      }
    }
  }

  out.clusters.resize(next);
  for (NodeIndex v = 0; v < n; ++v) {
    out.clusters[assign[v]].push_back(g.id(v));
  }
  return out;
}

RepairResult CombineRepairs(std::vector<RepairedClustering> per_cluster) {
  std::sort(per_cluster.begin(), per_cluster.end(),
            [](const RepairedClustering& a, const RepairedClustering& b) {
              return a.origin_cluster_id < b.origin_cluster_id;
            });
  RepairResult result;
  for (const RepairedClustering& r : per_cluster) {
    for (const auto& members : r.clusters) {
      const int id = static_cast<int>(result.clusters.size());
      for (const std::string& record : members) {
        result.provenance[record] = {r.origin_cluster_id, id};
      }
      result.clusters.push_back(members);
    }
  }
  result.per_cluster = std::move(per_cluster);
  return result;
}

RepairResult RepairAll(std::span<const Cluster> clusters,
                       const FeatureSpace& space, const EnsembleModel& model,
                       double threshold) {
  std::vector<const Cluster*> order;
  for (const Cluster& c : clusters) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Cluster* a, const Cluster* b) {
    return a->cluster_id < b->cluster_id;
  });
  std::vector<RepairedClustering> repaired;
  std::vector<EdgePartition> partitions;
  repaired.reserve(order.size());
  for (const Cluster* c : order) {
    partitions.push_back(PartitionEdges(*c, space, model, threshold));
    repaired.push_back(RepairCluster(*c, partitions.back()));
  }
  RepairResult result = CombineRepairs(std::move(repaired));
  result.partitions = std::move(partitions);
  return result;
}

}  // namespace graphcr
