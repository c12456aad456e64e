#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace hjrec {

// Refusal: the inputs are outside what an operation is prepared to do
// (size guards, unsupported flag combinations). Distinct from bad arguments.
class refusal_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Set-valued transition map on states 1..n, stored 0-based: adj[i][j] != 0
// iff state j+1 is a successor of state i+1. Every state must have at least
// one successor and at least one predecessor; both min/max below rely on it.
struct TransitionMap {
  int n = 0;
  std::vector<std::vector<std::uint8_t>> adj;

  TransitionMap(int n_, std::vector<std::vector<std::uint8_t>> adj_)
      : n(n_), adj(std::move(adj_)) {
    if (n < 1) throw std::invalid_argument("TransitionMap: need at least one state");
    if ((int)adj.size() != n) throw std::invalid_argument("TransitionMap: adjacency row count != n");
    for (const auto& row : adj)
      if ((int)row.size() != n) throw std::invalid_argument("TransitionMap: adjacency is not n x n");
    for (int i = 0; i < n; ++i)
      if (std::all_of(adj[i].begin(), adj[i].end(), [](std::uint8_t b) { return !b; }))
        throw std::invalid_argument("TransitionMap: state " + std::to_string(i + 1) + " has no successor");
    for (int j = 0; j < n; ++j) {
      bool any = false;
      for (int i = 0; i < n; ++i) any = any || adj[i][j];
      if (!any)
        throw std::invalid_argument("TransitionMap: state " + std::to_string(j + 1) + " has no predecessor");
    }
  }

  static TransitionMap identity(int n) {
    std::vector<std::vector<std::uint8_t>> a(n, std::vector<std::uint8_t>(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    return TransitionMap(n, std::move(a));
  }

  int edge_count() const {
    int e = 0;
    for (const auto& row : adj)
      for (auto b : row) e += b != 0;
    return e;
  }

  bool operator==(const TransitionMap& o) const { return n == o.n && adj == o.adj; }
};

using ValueVector = std::vector<std::int64_t>;

enum class Direction { forward, backward };

struct ValueTable {
  int T = 0;
  Direction direction = Direction::forward;
  std::vector<ValueVector> rows;  // T+1 rows, rows[k] is the values at time k

  bool operator==(const ValueTable& o) const {
    return T == o.T && direction == o.direction && rows == o.rows;
  }
};

namespace detail {
inline void require_length(const TransitionMap& phi, const ValueVector& g) {
  if ((int)g.size() != phi.n)
    throw std::domain_error("value vector length != state count");
}
}  // namespace detail

// one step of the cheapest-origin value: out(j) = min g(i) over predecessors i of j
inline ValueVector forward_step(const TransitionMap& phi, const ValueVector& g) {
  detail::require_length(phi, g);
  ValueVector out(phi.n, std::numeric_limits<std::int64_t>::max());
  for (int i = 0; i < phi.n; ++i)
    for (int j = 0; j < phi.n; ++j)
      if (phi.adj[i][j]) out[j] = std::min(out[j], g[i]);
  return out;
}

// one step of the best-reachable value: out(i) = max g(j) over successors j of i
inline ValueVector backward_step(const TransitionMap& phi, const ValueVector& g) {
  detail::require_length(phi, g);
  ValueVector out(phi.n, std::numeric_limits<std::int64_t>::min());
  for (int i = 0; i < phi.n; ++i)
    for (int j = 0; j < phi.n; ++j)
      if (phi.adj[i][j]) out[i] = std::max(out[i], g[j]);
  return out;
}

inline ValueTable forward_table(const TransitionMap& phi, const ValueVector& g0, int T) {
  if (T < 0) throw std::invalid_argument("forward_table: negative horizon");
  ValueTable tab{T, Direction::forward, {g0}};
  for (int k = 0; k < T; ++k) tab.rows.push_back(forward_step(phi, tab.rows.back()));
  return tab;
}

inline ValueTable backward_table(const TransitionMap& phi, const ValueVector& gT, int T) {
  if (T < 0) throw std::invalid_argument("backward_table: negative horizon");
  ValueTable tab{T, Direction::backward, {}};
  tab.rows.assign(T + 1, ValueVector{});
  tab.rows[T] = gT;
  for (int k = T - 1; k >= 0; --k) tab.rows[k] = backward_step(phi, tab.rows[k + 1]);
  return tab;
}

// Independent oracle: enumerates every trajectory x(0..T) with x(k+1) a
// successor of x(k) and takes min of g(x(0)) (forward) or max of g(x(T))
// (backward) over trajectories through each (k, state). Exponential, hence
// the size guard; exists to cross-check the recursions above, so it must not
// reuse them.
inline ValueTable brute_force_value(const TransitionMap& phi, const ValueVector& g, int T,
                                    Direction direction) {
  detail::require_length(phi, g);
  if (T < 0) throw std::invalid_argument("brute_force_value: negative horizon");
  if (phi.n > 8 || T > 8)
    throw refusal_error("brute_force_value: trajectory enumeration limited to n <= 8, T <= 8");

  const std::int64_t init = direction == Direction::forward
                                ? std::numeric_limits<std::int64_t>::max()
                                : std::numeric_limits<std::int64_t>::min();
  ValueTable tab{T, direction, std::vector<ValueVector>(T + 1, ValueVector(phi.n, init))};

  std::vector<int> path(T + 1);
  auto dfs = [&](auto&& self, int k) -> void {
    if (k == T) {
      const std::int64_t endpoint = direction == Direction::forward ? g[path[0]] : g[path[T]];
      for (int j = 0; j <= T; ++j) {
        auto& cell = tab.rows[j][path[j]];
        cell = direction == Direction::forward ? std::min(cell, endpoint) : std::max(cell, endpoint);
      }
      return;
    }
    for (int next = 0; next < phi.n; ++next)
      if (phi.adj[path[k]][next]) {
        path[k + 1] = next;
        self(self, k + 1);
      }
  };
  for (int start = 0; start < phi.n; ++start) {
    path[0] = start;
    dfs(dfs, 0);
  }
  return tab;
}

struct DiscreteReconstruction {
  ValueVector g0;  // backward-induced initial values, the reconstructible choice
  ValueTable U;    // forward table from g0
  ValueTable W;    // backward table from U's final row
  bool verdict = false;

  // times 0 < k < T where the two tables disagree (possible even when the
  // endpoints match)
  std::vector<int> interior_gap_times() const {
    std::vector<int> ks;
    for (int k = 1; k < U.T; ++k)
      if (U.rows[k] != W.rows[k]) ks.push_back(k);
    return ks;
  }
};

inline DiscreteReconstruction reconstruct_discrete(const TransitionMap& phi, const ValueVector& g,
                                                   int T) {
  detail::require_length(phi, g);
  if (T < 0) throw std::invalid_argument("reconstruct_discrete: negative horizon");
  ValueVector g0 = g;
  for (int k = 0; k < T; ++k) g0 = backward_step(phi, g0);
  DiscreteReconstruction rec;
  rec.g0 = g0;
  rec.U = forward_table(phi, g0, T);
  rec.W = backward_table(phi, rec.U.rows[T], T);
  rec.verdict = (rec.W.rows[0] == g0);
  return rec;
}

struct GapInstance {
  TransitionMap phi;
  ValueVector g;
};

// Serialized form of (phi, g) invariant under state relabeling: the
// lexicographically smallest (adjacency bits, g) over all permutations.
// Factorial in n, so guarded; big instances fall back to the raw encoding.
inline std::vector<std::int64_t> relabel_invariant_key(const TransitionMap& phi,
                                                       const ValueVector& g) {
  const int n = phi.n;
  auto encode = [&](const std::vector<int>& perm) {
    std::vector<std::int64_t> key(n * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (phi.adj[i][j]) key[perm[i] * n + perm[j]] = 1;
    key.resize(n * n + n);
    for (int i = 0; i < n; ++i) key[n * n + perm[i]] = g[i];
    return key;
  };
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n > 7) return encode(perm);  // identity only; relabelings too many to scan
  std::vector<std::int64_t> best = encode(perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    auto key = encode(perm);
    if (key < best) best = std::move(key);
  }
  return best;
}

namespace detail {

inline GapInstance instance_from_key(int n, const std::vector<std::int64_t>& key) {
  std::vector<std::vector<std::uint8_t>> adj(n, std::vector<std::uint8_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) adj[i][j] = key[i * n + j] != 0;
  ValueVector g(key.begin() + n * n, key.end());
  return GapInstance{TransitionMap(n, std::move(adj)), std::move(g)};
}

inline int interior_gap_cells(const DiscreteReconstruction& rec) {
  int cells = 0;
  for (int k = 1; k < rec.U.T; ++k)
    for (size_t j = 0; j < rec.U.rows[k].size(); ++j)
      if (rec.U.rows[k][j] != rec.W.rows[k][j]) ++cells;
  return cells;
}

}  // namespace detail

// Looks for instances whose reconstruction succeeds at the endpoints yet has
// U != W at some interior time. Exhaustive when the whole space is small
// enough (always at n <= 3 with modest value ranges), seeded rejection
// sampling of surjective maps otherwise. Results are deduped up to state
// relabeling and returned simplest-first: fewest edges, then fewest
// disagreeing cells, then canonical order.
inline std::vector<GapInstance> search_uv_gap(int n, int T, std::int64_t lo, std::int64_t hi,
                                              int budget, std::uint64_t seed = 0) {
  if (n < 1) throw std::invalid_argument("search_uv_gap: need at least one state");
  if (lo > hi) throw std::invalid_argument("search_uv_gap: empty value range");
  if (n == 1 || T < 2 || budget < 1) return {};  // no room for an interior gap

  struct Found {
    std::vector<std::int64_t> key;
    int edges;
    int cells;
  };
  std::vector<Found> found;
  std::set<std::vector<std::int64_t>> seen;

  auto consider = [&](const TransitionMap& phi, const ValueVector& g) {
    DiscreteReconstruction rec = reconstruct_discrete(phi, g, T);
    if (!rec.verdict || rec.interior_gap_times().empty()) return;
    // re-check against the trajectory oracle before emitting anything
    if (phi.n <= 8 && T <= 8) {
      ValueTable bfU = brute_force_value(phi, rec.g0, T, Direction::forward);
      ValueTable bfW = brute_force_value(phi, rec.U.rows[T], T, Direction::backward);
      if (bfU.rows != rec.U.rows || bfW.rows != rec.W.rows) return;
    }
    auto key = relabel_invariant_key(phi, g);
    if (!seen.insert(key).second) return;
    found.push_back({std::move(key), phi.edge_count(), detail::interior_gap_cells(rec)});
  };

  auto column_covered = [&](const std::vector<std::vector<std::uint8_t>>& adj) {
    for (int j = 0; j < n; ++j) {
      bool any = false;
      for (int i = 0; i < n; ++i) any = any || adj[i][j];
      if (!any) return false;
    }
    return true;
  };

  const double range = (double)(hi - lo) + 1.0;
  double space = 1.0;
  for (int i = 0; i < n; ++i) space *= (double)((1u << n) - 1) * range;
  const bool exhaustive = n <= 3 && space <= 2e6;

  if (exhaustive) {
    std::vector<int> rowmask(n, 1);
    auto next_masks = [&]() {
      for (int i = n - 1; i >= 0; --i) {
        if (++rowmask[i] < (1 << n)) return true;
        rowmask[i] = 1;
      }
      return false;
    };
    do {
      std::vector<std::vector<std::uint8_t>> adj(n, std::vector<std::uint8_t>(n, 0));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) adj[i][j] = (rowmask[i] >> j) & 1;
      if (!column_covered(adj)) continue;
      TransitionMap phi(n, adj);
      ValueVector g(n, lo);
      auto next_g = [&]() {
        for (int i = n - 1; i >= 0; --i) {
          if (++g[i] <= hi) return true;
          g[i] = lo;
        }
        return false;
      };
      do consider(phi, g);
      while (next_g());
    } while (next_masks());
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> mask_dist(1, (1 << n) - 1);
    std::uniform_int_distribution<std::int64_t> val_dist(lo, hi);
    const long attempts = std::max(200000L, (long)budget * 2000L);
    for (long a = 0; a < attempts && (int)found.size() < budget * 4; ++a) {
      std::vector<std::vector<std::uint8_t>> adj(n, std::vector<std::uint8_t>(n, 0));
      for (int i = 0; i < n; ++i) {
        int m = mask_dist(rng);
        for (int j = 0; j < n; ++j) adj[i][j] = (m >> j) & 1;
      }
      if (!column_covered(adj)) continue;
      ValueVector g(n);
      for (auto& v : g) v = val_dist(rng);
      consider(TransitionMap(n, adj), g);
    }
  }

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    return std::tie(a.edges, a.cells, a.key) < std::tie(b.edges, b.cells, b.key);
  });
  if ((int)found.size() > budget) found.resize(budget);

  std::vector<GapInstance> out;
  out.reserve(found.size());
  for (const auto& f : found) out.push_back(detail::instance_from_key(n, f.key));
  return out;
}

}  // namespace hjrec
