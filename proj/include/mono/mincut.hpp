#pragma once

#include <cstdint>
#include <vector>

namespace mono {

/// Dinic max-flow / min-cut on an explicit residual graph. Exact integral
/// flows; sized for unit-capacity-terminal networks with up to 2^16 + 2 nodes
/// and n * 2^15 order arcs.
class MaxFlow {
 public:
  explicit MaxFlow(int node_count);

  void add_edge(int from, int to, int64_t capacity);

  /// Returns the max-flow value from source to sink.
  int64_t run(int source, int sink);

  /// After run(): nodes reachable from the source in the residual network
  /// (the source side of a minimum cut).
  std::vector<uint8_t> source_side(int source) const;

 private:
  struct Arc {
    int to;
    int rev;
    int64_t cap;
  };

  bool bfs(int source, int sink);
  int64_t dfs(int v, int sink, int64_t limit);

  std::vector<std::vector<Arc>> arcs_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace mono
