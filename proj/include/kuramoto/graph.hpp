#pragma once

// Undirected simple graphs as dense 0/1 adjacency matrices: ring lattices,
// complete graphs, Erdős–Rényi and Watts–Strogatz random graphs.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kuramoto/error.hpp"
#include "kuramoto/matrix.hpp"
#include "kuramoto/rng.hpp"

namespace kuramoto {

enum class GraphKind { ring, complete, erdos_renyi, watts_strogatz, custom };

inline std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::ring: return "ring";
    case GraphKind::complete: return "complete";
    case GraphKind::erdos_renyi: return "erdos_renyi";
    case GraphKind::watts_strogatz: return "watts_strogatz";
    case GraphKind::custom: return "custom";
  }
  return "custom";
}

/// Generator parameters echoed back for provenance.
struct GraphParams {
  std::optional<std::size_t> k;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<std::uint64_t> seed;
};

/// Symmetric, zero-diagonal, binary adjacency matrix. Immutable once built.
class AdjacencyMatrix {
public:
  /// Validates the invariants; throws InvalidParameter otherwise.
  static AdjacencyMatrix from_entries(Matrix<std::uint8_t> entries, GraphKind kind = GraphKind::custom,
                                      GraphParams params = {}) {
    detail::require(entries.rows() == entries.cols(), "adjacency matrix must be square");
    detail::require(entries.rows() >= 1, "adjacency matrix must be non-empty");
    const std::size_t n = entries.rows();
    for (std::size_t i = 0; i < n; ++i) {
      detail::require(entries(i, i) == 0, "adjacency matrix has a self-loop at node " + std::to_string(i));
      for (std::size_t j = 0; j < n; ++j) {
        detail::require(entries(i, j) <= 1, "adjacency entries must be 0 or 1");
        detail::require(entries(i, j) == entries(j, i), "adjacency matrix must be symmetric");
      }
    }
    return AdjacencyMatrix(std::move(entries), kind, params);
  }

  std::size_t size() const noexcept { return entries_.rows(); }
  GraphKind kind() const noexcept { return kind_; }
  const GraphParams& params() const noexcept { return params_; }
  const Matrix<std::uint8_t>& entries() const noexcept { return entries_; }

  bool operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j) != 0; }

  std::size_t degree(std::size_t i) const noexcept {
    std::size_t d = 0;
    for (auto v : entries_.row(i)) d += v;
    return d;
  }

  std::size_t edge_count() const noexcept {
    std::size_t m = 0;
    for (std::size_t i = 0; i < size(); ++i) m += degree(i);
    return m / 2;
  }

  Matrix<double> as_real() const {
    Matrix<double> a(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) a(i, j) = entries_(i, j);
    return a;
  }

  /// Same edges; kind and params are ignored.
  bool same_edges(const AdjacencyMatrix& other) const { return entries_ == other.entries_; }

private:
  AdjacencyMatrix(Matrix<std::uint8_t> entries, GraphKind kind, GraphParams params)
      : entries_(std::move(entries)), kind_(kind), params_(params) {}

  Matrix<std::uint8_t> entries_;
  GraphKind kind_ = GraphKind::custom;
  GraphParams params_;
};

/// First row of a circulant matrix.
struct GeneratingVector {
  std::vector<double> c;
  std::size_t size() const noexcept { return c.size(); }
};

inline std::size_t circular_distance(std::size_t i, std::size_t j, std::size_t n) noexcept {
  const std::size_t d = i > j ? i - j : j - i;
  return std::min(d, n - d);
}

namespace detail {

inline void check_ring_params(std::size_t n, std::size_t k) {
  require(n >= 2, "ring graph needs n >= 2 (got " + std::to_string(n) + ")");
  require(k >= 1 && k <= n / 2,
          "ring radius k must satisfy 1 <= k <= floor(n/2) (got k=" + std::to_string(k) +
              ", n=" + std::to_string(n) + ")");
}

inline void check_probability(double p, std::string_view name) {
  require(p >= 0.0 && p <= 1.0, std::string(name) + " must lie in [0, 1]");
}

inline Matrix<std::uint8_t> ring_entries(std::size_t n, std::size_t k) {
  Matrix<std::uint8_t> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t d = circular_distance(i, j, n);
      a(i, j) = (d >= 1 && d <= k) ? 1 : 0;
    }
  return a;
}

}  // namespace detail

inline AdjacencyMatrix gen_ring(std::size_t n, std::size_t k) {
  detail::check_ring_params(n, k);
  GraphParams params;
  params.k = k;
  return AdjacencyMatrix::from_entries(detail::ring_entries(n, k), GraphKind::ring, params);
}

inline AdjacencyMatrix gen_complete(std::size_t n) {
  detail::require(n >= 2, "complete graph needs n >= 2");
  GraphParams params;
  params.k = n / 2;
  return AdjacencyMatrix::from_entries(detail::ring_entries(n, n / 2), GraphKind::complete, params);
}

/// G(n, p): each pair i<j drawn in lexicographic order from the seed's stream.
inline AdjacencyMatrix gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  detail::require(n >= 2, "Erdos-Renyi graph needs n >= 2");
  detail::check_probability(p, "edge probability p");
  Rng rng(seed, stream::erdos_renyi);
  Matrix<std::uint8_t> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) a(i, j) = a(j, i) = 1;
  GraphParams params;
  params.p = p;
  params.seed = seed;
  return AdjacencyMatrix::from_entries(std::move(a), GraphKind::erdos_renyi, params);
}

/// Ring lattice with each original edge (i, i+o), visited in (i, o) order,
/// rewired with probability q: the far endpoint moves to a uniformly drawn
/// node, redrawn until it is neither i nor an existing neighbour of i.
/// Edge count is conserved.
inline AdjacencyMatrix gen_watts_strogatz(std::size_t n, std::size_t k, double q, std::uint64_t seed) {
  detail::require(n >= 2, "Watts-Strogatz graph needs n >= 2");
  detail::require(k >= 1 && k < n / 2,
                  "Watts-Strogatz radius k must satisfy 1 <= k < floor(n/2) (got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ")");
  detail::check_probability(q, "rewiring probability q");

  Rng rng(seed, stream::watts_strogatz);
  auto a = detail::ring_entries(n, k);
  std::vector<std::size_t> degree(n, 2 * k);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t offset = 1; offset <= k; ++offset) {
      if (!rng.bernoulli(q)) continue;
      // Saturated node: nowhere to go, the edge stays.
      if (degree[i] >= n - 1) continue;
      const std::size_t j = (i + offset) % n;
      std::size_t target;
      do {
        target = static_cast<std::size_t>(rng.below(n));
      } while (target == i || a(i, target) != 0);
      a(i, j) = a(j, i) = 0;
      a(i, target) = a(target, i) = 1;
      --degree[j];
      ++degree[target];
    }
  }

  GraphParams params;
  params.k = k;
  params.q = q;
  params.seed = seed;
  return AdjacencyMatrix::from_entries(std::move(a), GraphKind::watts_strogatz, params);
}

inline GeneratingVector ring_generating_vector(std::size_t n, std::size_t k) {
  detail::check_ring_params(n, k);
  GeneratingVector g{std::vector<double>(n, 0.0)};
  for (std::size_t j = 1; j < n; ++j) {
    const std::size_t d = circular_distance(0, j, n);
    g.c[j] = (d >= 1 && d <= k) ? 1.0 : 0.0;
  }
  return g;
}

/// circ(c): entry (i, j) = c[(j - i) mod n].
inline Matrix<double> circulant(const GeneratingVector& g) {
  const std::size_t n = g.size();
  Matrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = g.c[(j + n - i) % n];
  return m;
}

/// Generating vector of a circulant adjacency matrix, or nullopt.
inline std::optional<GeneratingVector> circulant_generator(const AdjacencyMatrix& a) {
  const std::size_t n = a.size();
  GeneratingVector g{std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) g.c[j] = a.entries()(0, j);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.entries()(i, j) != a.entries()(0, (j + n - i) % n)) return std::nullopt;
  return g;
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n m\n" then m lines "i j\n", 0-based, i < j.

inline void write_edge_list(std::ostream& os, const AdjacencyMatrix& a) {
  os << a.size() << ' ' << a.edge_count() << '\n';
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a(i, j)) os << i << ' ' << j << '\n';
}

inline AdjacencyMatrix read_edge_list(std::istream& is) {
  std::string line;
  auto next_line = [&](std::size_t lineno) {
    if (!std::getline(is, line)) throw InvalidParameter("edge list truncated at line " + std::to_string(lineno));
  };
  auto bad = [](std::size_t lineno, const std::string& why) {
    return InvalidParameter("edge list line " + std::to_string(lineno) + ": " + why);
  };

  next_line(1);
  std::istringstream header(line);
  long long n = -1, m = -1;
  std::string extra;
  if (!(header >> n >> m) || (header >> extra) || n < 1 || m < 0) throw bad(1, "expected header \"n m\"");
  if (static_cast<unsigned long long>(m) > static_cast<unsigned long long>(n) * (n - 1) / 2)
    throw bad(1, "more edges than node pairs");

  Matrix<std::uint8_t> entries(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (long long e = 0; e < m; ++e) {
    const auto lineno = static_cast<std::size_t>(e + 2);
    next_line(lineno);
    std::istringstream row(line);
    long long i = -1, j = -1;
    if (!(row >> i >> j) || (row >> extra)) throw bad(lineno, "expected \"i j\"");
    if (i < 0 || j >= n || i >= j) throw bad(lineno, "need 0 <= i < j < n");
    auto& cell = entries(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (cell) throw bad(lineno, "duplicate edge");
    cell = 1;
    entries(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = 1;
  }
  while (std::getline(is, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw InvalidParameter("edge list has trailing data");
  return AdjacencyMatrix::from_entries(std::move(entries));
}

}  // namespace kuramoto
