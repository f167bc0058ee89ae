#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "kuramoto/graph.hpp"

namespace kuramoto {
namespace {

void expect_simple_undirected(const AdjacencyMatrix& a) {
  const auto& e = a.entries();
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(e(i, i), 0);
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_TRUE(e(i, j) == 0 || e(i, j) == 1);
      EXPECT_EQ(e(i, j), e(j, i));
    }
  }
}

bool is_complete(const AdjacencyMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a(i, j) != (i != j)) return false;
  return true;
}

TEST(Ring, FiveNodesRadiusOne) {
  const auto a = gen_ring(5, 1);
  const std::vector<int> expected{0, 1, 0, 0, 1};
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(a.entries()(0, j), expected[j]);
  EXPECT_EQ(a.edge_count(), 5u);
}

TEST(Ring, MaximalRadiusIsComplete) {
  EXPECT_TRUE(is_complete(gen_ring(3, 1)));
  EXPECT_TRUE(is_complete(gen_ring(200, 100)));
}

TEST(Ring, RejectsBadParameters) {
  EXPECT_THROW(gen_ring(1, 1), InvalidParameter);
  EXPECT_THROW(gen_ring(10, 0), InvalidParameter);
  EXPECT_THROW(gen_ring(10, 6), InvalidParameter);
  EXPECT_NO_THROW(gen_ring(10, 5));
}

TEST(Ring, DegreeLaw) {
  for (std::size_t n = 2; n <= 40; ++n)
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const auto a = gen_ring(n, k);
      const std::size_t expected = 2 * k < n - 1 ? 2 * k : n - 1;
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(a.degree(i), expected) << "n=" << n << " k=" << k;
    }
}

TEST(Ring, CircularDistanceRule) {
  const std::size_t n = 17, k = 4;
  const auto a = gen_ring(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t d = std::min((i + n - j) % n, (j + n - i) % n);
      EXPECT_EQ(a(i, j), d >= 1 && d <= k);
    }
}

TEST(Complete, SmallCases) {
  const auto k2 = gen_complete(2);
  EXPECT_EQ(k2.entries()(0, 1), 1);
  EXPECT_EQ(k2.entries()(1, 0), 1);
  EXPECT_TRUE(is_complete(gen_complete(3)));
  const auto k4 = gen_complete(4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(k4.degree(i), 3u);
  EXPECT_THROW(gen_complete(1), InvalidParameter);
}

TEST(Complete, EqualsMaximalRing) {
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto c = gen_complete(n);
    EXPECT_TRUE(c.same_edges(gen_ring(n, n / 2))) << n;
    EXPECT_TRUE(is_complete(c)) << n;
  }
}

TEST(ErdosRenyi, DegenerateProbabilities) {
  EXPECT_EQ(gen_erdos_renyi(10, 0.0, 3).edge_count(), 0u);
  EXPECT_TRUE(is_complete(gen_erdos_renyi(10, 1.0, 3)));
  EXPECT_THROW(gen_erdos_renyi(10, -0.1, 3), InvalidParameter);
  EXPECT_THROW(gen_erdos_renyi(10, 1.5, 3), InvalidParameter);
  EXPECT_THROW(gen_erdos_renyi(1, 0.5, 3), InvalidParameter);
}

TEST(ErdosRenyi, EdgeCountMatchesBinomial) {
  // m ~ Binomial(19900, 0.2): mean 3980, sd sqrt(19900 * 0.2 * 0.8) = 56.43.
  const double mean = 3980.0, sd = std::sqrt(19900.0 * 0.2 * 0.8);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = static_cast<double>(gen_erdos_renyi(200, 0.2, seed).edge_count());
    EXPECT_LT(std::abs(m - mean), 4.0 * sd) << "seed " << seed;
    total += m;
  }
  // Average of 100 draws has sd 5.64.
  EXPECT_LT(std::abs(total / 100.0 - mean), 4.0 * sd / 10.0);
}

TEST(ErdosRenyi, Deterministic) {
  EXPECT_TRUE(gen_erdos_renyi(50, 0.3, 42).same_edges(gen_erdos_renyi(50, 0.3, 42)));
  EXPECT_FALSE(gen_erdos_renyi(50, 0.3, 42).same_edges(gen_erdos_renyi(50, 0.3, 43)));
}

TEST(WattsStrogatz, ZeroRewiringIsRing) {
  EXPECT_TRUE(gen_watts_strogatz(20, 2, 0.0, 9).same_edges(gen_ring(20, 2)));
}

TEST(WattsStrogatz, Figure4ParametersConserveEdges) {
  for (std::uint64_t seed : {0u, 1u, 7u}) {
    const auto a = gen_watts_strogatz(200, 10, 0.1, seed);
    EXPECT_EQ(a.edge_count(), 2000u);
    expect_simple_undirected(a);
    EXPECT_FALSE(a.same_edges(gen_ring(200, 10)));
  }
}

TEST(WattsStrogatz, FullRewiringConservesEdges) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = gen_watts_strogatz(20, 2, 1.0, seed);
    EXPECT_EQ(a.edge_count(), 40u);
    expect_simple_undirected(a);
  }
}

TEST(WattsStrogatz, RejectsBadParameters) {
  EXPECT_THROW(gen_watts_strogatz(20, 10, 0.1, 0), InvalidParameter);  // k must be < n/2
  EXPECT_THROW(gen_watts_strogatz(20, 0, 0.1, 0), InvalidParameter);
  EXPECT_THROW(gen_watts_strogatz(20, 2, 1.1, 0), InvalidParameter);
  EXPECT_THROW(gen_watts_strogatz(3, 1, 0.1, 0), InvalidParameter);
}

TEST(GraphProperties, AllGeneratorsProduceSimpleGraphs) {
  for (std::size_t n = 2; n <= 16; ++n) {
    for (std::size_t k = 1; k <= n / 2; ++k) expect_simple_undirected(gen_ring(n, k));
    expect_simple_undirected(gen_complete(n));
    for (double p : {0.0, 0.3, 0.7, 1.0})
      for (std::uint64_t s = 0; s < 3; ++s) expect_simple_undirected(gen_erdos_renyi(n, p, s));
    for (std::size_t k = 1; k < n / 2; ++k)
      for (double q : {0.0, 0.2, 0.5, 1.0})
        for (std::uint64_t s = 0; s < 3; ++s) {
          const auto ws = gen_watts_strogatz(n, k, q, s);
          expect_simple_undirected(ws);
          EXPECT_EQ(ws.edge_count(), n * k) << "n=" << n << " k=" << k << " q=" << q;
        }
  }
}

TEST(GeneratingVector, Examples) {
  EXPECT_EQ(ring_generating_vector(5, 1).c, (std::vector<double>{0, 1, 0, 0, 1}));
  EXPECT_EQ(ring_generating_vector(4, 2).c, (std::vector<double>{0, 1, 1, 1}));
  EXPECT_EQ(ring_generating_vector(6, 2).c, (std::vector<double>{0, 1, 1, 0, 1, 1}));
}

TEST(GeneratingVector, CirculantReconstructsRing) {
  for (std::size_t n = 2; n <= 64; ++n)
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const auto g = ring_generating_vector(n, k);
      EXPECT_EQ(g.c[0], 0.0);
      for (std::size_t j = 1; j < n; ++j) ASSERT_EQ(g.c[j], g.c[n - j]);
      ASSERT_EQ(max_abs_diff(circulant(g), gen_ring(n, k).as_real()), 0.0) << "n=" << n << " k=" << k;
      ASSERT_TRUE(circulant_generator(gen_ring(n, k)).has_value());
    }
}

TEST(GeneratingVector, DetectsNonCirculant) {
  // Path 0-1-2 is not circulant.
  Matrix<std::uint8_t> m(3, 3);
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = 1;
  EXPECT_FALSE(circulant_generator(AdjacencyMatrix::from_entries(m)).has_value());
}

TEST(AdjacencyMatrix, RejectsInvalidEntries) {
  Matrix<std::uint8_t> asym(3, 3);
  asym(0, 1) = 1;
  EXPECT_THROW(AdjacencyMatrix::from_entries(asym), InvalidParameter);
  Matrix<std::uint8_t> loop(2, 2);
  loop(1, 1) = 1;
  EXPECT_THROW(AdjacencyMatrix::from_entries(loop), InvalidParameter);
  Matrix<std::uint8_t> two(2, 2);
  two(0, 1) = two(1, 0) = 2;
  EXPECT_THROW(AdjacencyMatrix::from_entries(two), InvalidParameter);
}

TEST(EdgeList, WriteFormat) {
  std::ostringstream os;
  write_edge_list(os, gen_ring(5, 1));
  EXPECT_EQ(os.str(), "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n");

  std::ostringstream empty;
  write_edge_list(empty, gen_erdos_renyi(10, 0.0, 1));
  EXPECT_EQ(empty.str(), "10 0\n");
}

TEST(EdgeList, RoundTripPreservesEdges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = gen_erdos_renyi(30, 0.25, seed);
    std::stringstream ss;
    write_edge_list(ss, a);
    const auto b = read_edge_list(ss);
    EXPECT_TRUE(a.same_edges(b));
    EXPECT_EQ(b.kind(), GraphKind::custom);
  }
}

TEST(EdgeList, RejectsMalformedInput) {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_edge_list(is);
  };
  EXPECT_THROW(parse(""), InvalidParameter);
  EXPECT_THROW(parse("3\n"), InvalidParameter);
  EXPECT_THROW(parse("3 1\n1 0\n"), InvalidParameter);
  EXPECT_THROW(parse("3 1\n0 3\n"), InvalidParameter);
  EXPECT_THROW(parse("3 2\n0 1\n0 1\n"), InvalidParameter);
  EXPECT_THROW(parse("3 2\n0 1\n"), InvalidParameter);
  EXPECT_THROW(parse("3 1\n0 1\n1 2\n"), InvalidParameter);
  EXPECT_THROW(parse("2 5\n"), InvalidParameter);
  EXPECT_NO_THROW(parse("3 1\n0 2\n"));
}

}  // namespace
}  // namespace kuramoto
