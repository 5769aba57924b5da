#include "mono/mincut.hpp"

#include <algorithm>
#include <queue>

namespace mono {

MaxFlow::MaxFlow(int node_count)
    : arcs_(node_count), level_(node_count), iter_(node_count) {}

void MaxFlow::add_edge(int from, int to, int64_t capacity) {
  arcs_[from].push_back({to, static_cast<int>(arcs_[to].size()), capacity});
  arcs_[to].push_back({from, static_cast<int>(arcs_[from].size()) - 1, 0});
}

bool MaxFlow::bfs(int source, int sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> q;
  level_[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Arc& a : arcs_[v]) {
      if (a.cap > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[sink] >= 0;
}

int64_t MaxFlow::dfs(int v, int sink, int64_t limit) {
  if (v == sink) return limit;
  for (int& i = iter_[v]; i < static_cast<int>(arcs_[v].size()); ++i) {
    Arc& a = arcs_[v][i];
    if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
    int64_t pushed = dfs(a.to, sink, std::min(limit, a.cap));
    if (pushed > 0) {
      a.cap -= pushed;
      arcs_[a.to][a.rev].cap += pushed;
      return pushed;
    }
    level_[a.to] = -1;  // dead end
  }
  return 0;
}

int64_t MaxFlow::run(int source, int sink) {
  int64_t flow = 0;
  while (bfs(source, sink)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    while (int64_t pushed = dfs(source, sink, INT64_MAX)) flow += pushed;
  }
  return flow;
}

std::vector<uint8_t> MaxFlow::source_side(int source) const {
  std::vector<uint8_t> seen(arcs_.size(), 0);
  std::vector<int> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Arc& a : arcs_[v]) {
      if (a.cap > 0 && !seen[a.to]) {
        seen[a.to] = 1;
        stack.push_back(a.to);
      }
    }
  }
  return seen;
}

}  // namespace mono
