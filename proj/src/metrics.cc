#include "graphcr/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphcr {

PageRankResult PageRank(const SimilarityGraph& graph,
                        const PageRankOptions& options) {
  PageRankResult result;
  const size_t n = graph.num_nodes();
  if (n == 0) return result;
  if (n == 1) {
    result.scores = {1.0};
    return result;
  }

  std::vector<double> out_weight(n, 0.0);
  for (const Edge& e : graph.edges()) {
    out_weight[e.u] += e.similarity;
    out_weight[e.v] += e.similarity;
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n);
  std::vector<double> next(n);
  result.converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    double dangling = 0.0;
    for (size_t v = 0; v < n; ++v) {
      if (out_weight[v] <= 0.0) dangling += rank[v];
    }
    const double base = (1.0 - options.damping) * inv_n +
                        options.damping * dangling * inv_n;
    std::fill(next.begin(), next.end(), base);
    for (const Edge& e : graph.edges()) {
      if (out_weight[e.u] > 0.0) {
        next[e.v] += options.damping * rank[e.u] * e.similarity /
                     out_weight[e.u];
      }
      if (out_weight[e.v] > 0.0) {
        next[e.u] += options.damping * rank[e.v] * e.similarity /
                     out_weight[e.v];
      }
    }
    double total = 0.0;
    for (double x : next) total += x;
    double change = 0.0;
    for (size_t v = 0; v < n; ++v) {
      next[v] /= total;
      change += std::abs(next[v] - rank[v]);
    }
    rank.swap(next);
    result.iterations = it;
    if (change < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(rank);
  return result;
}

namespace {

// Hop distances from `source`; unreachable nodes get -1.
std::vector<int> BfsDistances(const SimilarityGraph& graph, NodeIndex source) {
  std::vector<int> dist(graph.num_nodes(), -1);
  std::vector<NodeIndex> queue = {source};
  dist[source] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    NodeIndex v = queue[head];
    for (const Incidence& inc : graph.neighbors(v)) {
      if (dist[inc.neighbor] < 0) {
        dist[inc.neighbor] = dist[v] + 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> Closeness(const SimilarityGraph& graph) {
  const size_t n = graph.num_nodes();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (NodeIndex v = 0; v < n; ++v) {
    const std::vector<int> dist = BfsDistances(graph, v);
    long long total = 0;
    for (int d : dist) {
      if (d > 0) total += d;
    }
    if (total > 0) {
      out[v] = static_cast<double>(n - 1) / static_cast<double>(total);
    }
  }
  return out;
}

BetweennessResult Betweenness(const SimilarityGraph& graph) {
  const size_t n = graph.num_nodes();
  BetweennessResult result{std::vector<double>(n, 0.0),
                           std::vector<double>(graph.num_edges(), 0.0)};

  std::vector<NodeIndex> order;
  std::vector<std::vector<Incidence>> preds(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<int> dist(n);
  for (NodeIndex s = 0; s < n; ++s) {
    order.clear();
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    order.push_back(s);
    for (size_t head = 0; head < order.size(); ++head) {
      NodeIndex v = order[head];
      for (const Incidence& inc : graph.neighbors(v)) {
        NodeIndex w = inc.neighbor;
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back({v, inc.edge});
        }
      }
    }
    for (size_t i = order.size(); i-- > 0;) {
      NodeIndex w = order[i];
      for (const Incidence& p : preds[w]) {
        const double share = sigma[p.neighbor] / sigma[w] * (1.0 + delta[w]);
        result.edge[p.edge] += share;
        delta[p.neighbor] += share;
      }
      if (w != s) result.node[w] += delta[w];
    }
  }
  // Every unordered pair was counted from both ends.
  for (double& x : result.node) x /= 2.0;
  for (double& x : result.edge) x /= 2.0;
  return result;
}

std::vector<double> ClusteringCoefficients(const SimilarityGraph& graph) {
  const size_t n = graph.num_nodes();
  std::vector<double> out(n, 0.0);
  std::vector<char> mark(n, 0);
  for (NodeIndex v = 0; v < n; ++v) {
    const size_t deg = graph.degree(v);
    if (deg < 2) continue;
    for (const Incidence& inc : graph.neighbors(v)) mark[inc.neighbor] = 1;
    size_t links = 0;
    for (const Incidence& inc : graph.neighbors(v)) {
      for (const Incidence& inner : graph.neighbors(inc.neighbor)) {
        if (mark[inner.neighbor]) ++links;
      }
    }
    for (const Incidence& inc : graph.neighbors(v)) mark[inc.neighbor] = 0;
    // Each neighbor-neighbor link was seen from both sides.
    const double triangles = static_cast<double>(links) / 2.0;
    out[v] = 2.0 * triangles / (static_cast<double>(deg) * (deg - 1));
  }
  return out;
}

std::vector<bool> Bridges(const SimilarityGraph& graph) {
  const size_t n = graph.num_nodes();
  std::vector<bool> is_bridge(graph.num_edges(), false);
  std::vector<int> disc(n, -1);
  std::vector<int> low(n, 0);
  int timer = 0;

  struct Frame {
    NodeIndex node;
    size_t parent_edge;
    size_t next;
  };
  constexpr size_t kNoEdge = std::numeric_limits<size_t>::max();
  std::vector<Frame> stack;
  for (NodeIndex root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, kNoEdge, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto adj = graph.neighbors(f.node);
      if (f.next < adj.size()) {
        const Incidence inc = adj[f.next++];
        if (inc.edge == f.parent_edge) continue;
        if (disc[inc.neighbor] < 0) {
          disc[inc.neighbor] = low[inc.neighbor] = timer++;
          stack.push_back({inc.neighbor, inc.edge, 0});
        } else {
          low[f.node] = std::min(low[f.node], disc[inc.neighbor]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        NodeIndex parent = stack.back().node;
        low[parent] = std::min(low[parent], low[done.node]);
        if (low[done.node] > disc[parent]) is_bridge[done.parent_edge] = true;
      }
    }
  }
  return is_bridge;
}

double CompleteRatio(const SimilarityGraph& graph) {
  const double n = static_cast<double>(graph.num_nodes());
  if (graph.num_nodes() < 2) return 1.0;
  return static_cast<double>(graph.num_edges()) / (n * (n - 1.0) / 2.0);
}

ClusterMetrics ComputeClusterMetrics(const SimilarityGraph& graph,
                                     const PageRankOptions& options) {
  ClusterMetrics m;
  m.pagerank = PageRank(graph, options);
  m.closeness = Closeness(graph);
  m.betweenness = Betweenness(graph);
  m.clustering = ClusteringCoefficients(graph);
  m.bridges = Bridges(graph);
  m.categories = CategorizeLinks(graph);
  m.complete_ratio = CompleteRatio(graph);
  return m;
}

}  // namespace graphcr
