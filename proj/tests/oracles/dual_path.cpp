#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"

namespace oracle {

using latflow::Capacity;

Capacity dual_shortest_path(const latflow::CapacityField& field, const latflow::Region& box) {
  if (box.d != 2) throw std::invalid_argument("dual oracle is planar only");
  const int k = box.extent(0);
  const int m = box.extent(1);
  // Nodes: cells (i,j) with 0<=i<k, 0<=j<m, then L and R.
  const int cells = k * m;
  const int left = cells;
  const int right = cells + 1;
  std::vector<std::vector<std::pair<int, Capacity>>> adj(cells + 2);
  auto cell = [&](int i, int j) {
    if (i < 0) return left;
    if (i >= k) return right;
    return i * m + j;
  };
  auto link = [&](int a, int b, Capacity w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; j < m; ++j) {
      const latflow::Point p{box.lo[0] + i, box.lo[1] + j};
      link(cell(i - 1, j), cell(i, j), field.capacity(p, 1));
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 1; j < m; ++j) {
      const latflow::Point p{box.lo[0] + i, box.lo[1] + j};
      link(cell(i, j - 1), cell(i, j), field.capacity(p, 0));
    }
  }
  std::vector<Capacity> dist(cells + 2, std::numeric_limits<Capacity>::max());
  using Item = std::pair<Capacity, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[left] = 0;
  heap.push({0, left});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du != dist[u]) continue;
    if (u == right) return du;
    for (auto [v, w] : adj[u]) {
      if (du + w < dist[v]) {
        dist[v] = du + w;
        heap.push({dist[v], v});
      }
    }
  }
  return dist[right];
}

}  // namespace oracle
