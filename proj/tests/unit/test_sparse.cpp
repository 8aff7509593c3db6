#include <memory>
#include <random>
#include <set>

#include "doctest.h"
#include "ellcfd/cases.hpp"
#include "ellcfd/sparse.hpp"
#include "oracles.hpp"

using namespace ellcfd;

namespace {

using Graph = std::vector<std::vector<Index>>;

HybridMatrix fill_from_dense(std::shared_ptr<const SparsityPattern> p, const oracle::Dense& d) {
  HybridMatrix a(p);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (d(i, j) != 0.0 || i == j) {
        const EntryRef r = p->find(i, j);
        REQUIRE(r.valid());
        a.accumulate(r, d(i, j), false);
      }
  return a;
}

// Every structural invariant of a pattern, checked by direct scan.
void check_invariants(const SparsityPattern& p, const Graph& g) {
  const Index n = p.n();
  const Index k = p.k();
  std::set<std::pair<Index, Index>> stored;
  for (Index i = 0; i < n; ++i) {
    CHECK(p.col(i, p.diag_slots()[i]) == i);
    bool seen_pad = false;
    Index last = -1;
    for (Index s = 0; s < k; ++s) {
      const Index c = p.col(i, s);
      if (c == SparsityPattern::kSentinel) {
        seen_pad = true;
        CHECK(p.twin(i, s) == -1);
        continue;
      }
      CHECK_FALSE(seen_pad);
      CHECK(c > last);
      last = c;
      CHECK(stored.insert({i, c}).second);
      const Index t = p.twin(i, s);
      if (t >= 0) {
        CHECK(p.col(c, t) == i);
      } else {
        // Transposed entry must then be in the CRS part of row c.
        const auto& rp = p.crs_row_ptr();
        bool found = false;
        for (Index e = rp[c]; e < rp[c + 1]; ++e) found = found || p.crs_cols()[e] == i;
        CHECK(found);
      }
    }
    for (Index e = p.crs_row_ptr()[i]; e < p.crs_row_ptr()[i + 1]; ++e) {
      const Index c = p.crs_cols()[e];
      CHECK(stored.insert({i, c}).second);  // never in both parts
      CHECK(p.coordinates(p.crs_twins()[e]) == std::pair<Index, Index>{c, i});
    }
  }
  // Brute-force set oracle: graph edges plus the diagonal.
  std::set<std::pair<Index, Index>> expected;
  for (Index i = 0; i < n; ++i) {
    expected.insert({i, i});
    for (Index j : g[i]) expected.insert({i, j});
  }
  CHECK(stored == expected);
  for (const auto& [i, j] : stored) CHECK(stored.count({j, i}) == 1);
}

Graph wheel_with_tail(int spokes, int tail, std::mt19937_64& rng) {
  Graph g(static_cast<std::size_t>(1 + spokes + tail));
  auto link = [&](Index a, Index b) {
    g[a].push_back(b);
    g[b].push_back(a);
  };
  for (int s = 1; s <= spokes; ++s) {
    link(0, s);
    link(s, s % spokes + 1);
  }
  // A path hanging off a random rim vertex keeps every other degree at most 3.
  std::uniform_int_distribution<int> rim(1, spokes);
  Index prev = rim(rng);
  for (int t = 0; t < tail; ++t) {
    const Index v = 1 + spokes + t;
    link(prev, v);
    prev = v;
  }
  return g;
}

}  // namespace

TEST_SUITE("sparse") {
  TEST_CASE("four-by-four layout reproduces I and J of the illustration") {
    const auto p = build_pattern_from_example();
    REQUIRE(p.n() == 4);
    REQUIRE(p.k() == 3);
    const std::vector<Index> I = {0, 1, 3, 0, 1, 2, 1, 2, 3, 0, 2, 3};
    const std::vector<Index> J = {0, 0, 0, 1, 1, 0, 2, 1, 1, 2, 2, 2};
    CHECK(p.ell_cols() == I);
    CHECK(p.ell_twins() == J);
    CHECK(p.twin(1, 2) == 0);
    CHECK(p.crs_size() == 0);
    check_invariants(p, {{1, 3}, {0, 2}, {1, 3}, {0, 2}});
  }

  TEST_CASE("diagonal of the example sits at the B_ii slots") {
    auto p = std::make_shared<const SparsityPattern>(build_pattern_from_example());
    CHECK(p->diag_slots() == std::vector<Index>{0, 1, 1, 2});
    HybridMatrix a(p);
    for (Index i = 0; i < 4; ++i) a.accumulate(p->diagonal(i), 10.0 + i, false);
    CHECK(diagonal(a) == std::vector<double>{10, 11, 12, 13});
  }

  TEST_CASE("single-cell pattern is diagonal only") {
    const auto p = SparsityPattern::from_graph({{}}, 7);
    CHECK(p.n() == 1);
    CHECK(p.k() == 1);
    CHECK(p.ell_cols() == std::vector<Index>{0});
    CHECK(p.ell_twins() == std::vector<Index>{0});
    CHECK(p.crs_size() == 0);
    const auto pm = build_pattern(gen_cavity(1), 7);
    CHECK(pm.k() == 1);
    CHECK(pm.crs_size() == 0);
  }

  TEST_CASE("k_cap below one is rejected") {
    CHECK_THROWS_AS(build_pattern(gen_cavity(2), 0), std::invalid_argument);
    CHECK_THROWS_AS(SparsityPattern::from_graph({{}}, 0), std::invalid_argument);
  }

  TEST_CASE("asymmetric graph is rejected") {
    CHECK_THROWS_AS(SparsityPattern::from_graph({{1}, {}}, 3), std::invalid_argument);
  }

  TEST_CASE("structured box meshes need no CRS part") {
    for (Index n : {1, 2, 3, 6}) {
      const auto p = build_pattern(gen_cavity(n), 7);
      CHECK(p.crs_size() == 0);
      CHECK(p.k() == std::min<Index>(7, n == 1 ? 1 : (n == 2 ? 4 : 7)));
    }
    CHECK(build_pattern(gen_channel(5, 4), 7).crs_size() == 0);
    CHECK(build_pattern(gen_skewed_duct(5, 4, 30.0), 7).crs_size() == 0);
  }

  TEST_CASE("face slots address both coefficients of every internal face") {
    const Mesh m = gen_cavity(4);
    const auto p = build_pattern(m, 7);
    REQUIRE(p.face_slots().size() == static_cast<std::size_t>(m.n_internal_faces()));
    for (Index f = 0; f < m.n_internal_faces(); ++f) {
      const auto& s = p.face_slots()[f];
      CHECK(p.coordinates(s.upper) == std::pair<Index, Index>{m.owner()[f], m.neighbour()[f]});
      CHECK(p.coordinates(s.lower) == std::pair<Index, Index>{m.neighbour()[f], m.owner()[f]});
    }
  }

  TEST_CASE("one high-degree vertex overflows exactly one row") {
    std::mt19937_64 rng(7);
    for (int spokes : {5, 6, 8, 11}) {
      const Graph g = wheel_with_tail(spokes, 5, rng);
      const auto p = SparsityPattern::from_graph(g, spokes);
      CHECK(p.k() == spokes);
      int overflowing = 0;
      for (Index i = 0; i < p.n(); ++i) overflowing += p.crs_row_ptr()[i + 1] > p.crs_row_ptr()[i];
      CHECK(overflowing == 1);
      CHECK(p.crs_row_ptr()[1] - p.crs_row_ptr()[0] == 1);
      CHECK(p.crs_cols()[0] == spokes);  // highest column of row 0
      check_invariants(p, g);
    }
  }

  TEST_CASE("pattern build is deterministic") {
    const Mesh m = gen_skewed_duct(6, 3, 20.0);
    CHECK(build_pattern(m, 7) == build_pattern(m, 7));
    CHECK(build_pattern(m, 3) == build_pattern(m, 3));
  }

  TEST_CASE("random matrices agree with dense products") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> size(1, 64);
    std::uniform_real_distribution<double> dens(0.02, 0.3);
    int with_overflow = 0;
    for (int trial = 0; trial < 160; ++trial) {
      const int n = size(rng);
      const Graph g = oracle::random_graph(n, dens(rng), rng);
      std::size_t maxdeg = 0;
      for (const auto& r : g) maxdeg = std::max(maxdeg, r.size());
      // Half the trials cap K below the widest row to force CRS overflow.
      const Index cap = trial % 2 ? static_cast<Index>(maxdeg + 1) : std::max<Index>(1, static_cast<Index>(maxdeg / 2));
      auto p = std::make_shared<const SparsityPattern>(SparsityPattern::from_graph(g, cap));
      with_overflow += p->crs_size() > 0;
      check_invariants(*p, g);
      const auto d = oracle::random_values(g, rng);
      const auto a = fill_from_dense(p, d);
      CHECK(a.to_dense() == d.a);
      const auto x = oracle::random_vector(n, rng);
      CHECK(oracle::max_rel_diff(smvp(a, x), oracle::matvec(d, x)) < 1e-13);
      CHECK(oracle::max_rel_diff(stmvp(a, x), oracle::matvec_transposed(d, x)) < 1e-13);
      CHECK(diagonal(a) == [&] {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = d(i, i);
        return v;
      }());
    }
    CHECK(with_overflow >= 40);
  }

  TEST_CASE("identity products") {
    auto p = std::make_shared<const SparsityPattern>(SparsityPattern::from_graph(Graph(5), 4));
    HybridMatrix a(p);
    for (Index i = 0; i < 5; ++i) a.add_to_diagonal(i, 1.0);
    const std::vector<double> x = {3, -1, 0.5, 2, 7};
    CHECK(smvp(a, x) == x);
    CHECK(stmvp(a, x) == x);
    CHECK(diagonal(a) == std::vector<double>(5, 1.0));
  }

  TEST_CASE("example pattern with values 1..11 and x = ones gives the row sums") {
    auto p = std::make_shared<const SparsityPattern>(build_pattern_from_example());
    HybridMatrix a(p);
    oracle::Dense d(4);
    double v = 1.0;
    for (Index i = 0; i < 4; ++i)
      for (Index s = 0; s < p->k(); ++s) {
        const Index c = p->col(i, s);
        if (c < 0) continue;
        a.ell_values()[static_cast<std::size_t>(i * p->k() + s)] = v;
        d(i, c) = v;
        v += 1.0;
      }
    CHECK(v == 13.0);
    const std::vector<double> ones(4, 1.0);
    CHECK(smvp(a, ones) == oracle::matvec(d, ones));
    CHECK(smvp(a, ones) == std::vector<double>{6, 15, 24, 33});
    const std::vector<double> x = {0.3, -2.0, 1.5, 4.0};
    CHECK(oracle::max_rel_diff(stmvp(a, x), oracle::matvec_transposed(d, x)) < 1e-15);
  }

  TEST_CASE("mirrored values make stmvp equal smvp") {
    auto p = std::make_shared<const SparsityPattern>(build_pattern(gen_channel(4, 3), 7));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    HybridMatrix a(p);
    for (const auto& s : p->face_slots()) {
      const double w = u(rng);
      a.accumulate(s.upper, w, false);
      a.accumulate(s.lower, w, false);
    }
    for (Index i = 0; i < p->n(); ++i) a.add_to_diagonal(i, 4.0);
    const auto x = oracle::random_vector(p->n(), rng);
    CHECK(smvp(a, x) == stmvp(a, x));
  }

  TEST_CASE("padding slots stay zero and reject writes") {
    auto p = std::make_shared<const SparsityPattern>(SparsityPattern::from_graph({{1, 2}, {0}, {0}}, 3));
    HybridMatrix a(p);
    const EntryRef pad{static_cast<std::int64_t>(1 * p->k() + 2)};
    REQUIRE(p->is_padding(pad));
    CHECK_THROWS_AS(a.accumulate(pad, 1.0), std::invalid_argument);
    CHECK_THROWS(a.accumulate(EntryRef{}, 1.0));
    CHECK(a.ell_values()[static_cast<std::size_t>(pad.index)] == 0.0);
  }

  TEST_CASE("coefficient accumulation") {
    auto p = std::make_shared<const SparsityPattern>(build_pattern_from_example());
    HybridMatrix a(p);
    coeff_accumulate(a, p->diagonal(2), 5.0, false);
    CHECK(a.ell_values()[static_cast<std::size_t>(2 * p->k() + p->diag_slots()[2])] == 5.0);
    const EntryRef r = p->find(0, 3);
    coeff_accumulate(a, r, 1.0, true);
    coeff_accumulate(a, r, 1.0, true);
    CHECK(a.value(r) == 2.0);
    const auto dense = a.to_dense();
    int nonzero = 0;
    for (double x : dense) nonzero += x != 0.0;
    CHECK(nonzero == 2);
  }

  TEST_CASE("Laplacian-like triples assemble to the triple-list oracle") {
    const Mesh m = gen_skewed_duct(5, 4, 25.0);
    auto p = std::make_shared<const SparsityPattern>(build_pattern(m, 4));  // forces overflow
    REQUIRE(p->crs_size() > 0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    HybridMatrix a(p);
    oracle::Dense d(m.n_cells());
    for (Index f = 0; f < m.n_internal_faces(); ++f) {
      const double c = u(rng);
      const Index P = m.owner()[f], N = m.neighbour()[f];
      a.accumulate(p->face_slots()[f].upper, c);
      a.accumulate(p->face_slots()[f].lower, c);
      a.add_to_diagonal(P, -c);
      a.add_to_diagonal(N, -c);
      d(P, N) += c;
      d(N, P) += c;
      d(P, P) -= c;
      d(N, N) -= c;
    }
    const auto dense = a.to_dense();
    for (std::size_t i = 0; i < dense.size(); ++i) CHECK(dense[i] == doctest::Approx(d.a[i]).epsilon(1e-15));
    const auto x = oracle::random_vector(m.n_cells(), rng);
    CHECK(oracle::max_rel_diff(smvp(a, x), oracle::matvec(d, x)) < 1e-13);
    CHECK(oracle::max_rel_diff(stmvp(a, x), oracle::matvec_transposed(d, x)) < 1e-13);
  }

  TEST_CASE("dimension mismatch is rejected") {
    auto p = std::make_shared<const SparsityPattern>(build_pattern_from_example());
    HybridMatrix a(p);
    CHECK_THROWS_AS(smvp(a, std::vector<double>(3)), std::invalid_argument);
    CHECK_THROWS_AS(stmvp(a, std::vector<double>(5)), std::invalid_argument);
  }

  TEST_CASE("Q packing") {
    SUBCASE("worked values") {
      // One slot with I = 3, J = 2 in a pattern with N = 4.
      const auto p = build_pattern_from_example();
      const auto q = pack_q(p, QPacking::by_n);
      // Row 2 slot 2 holds column 3 whose twin slot is 1: Q = 4*3 + 1.
      CHECK(q[2 * 3 + 2] == 13);
      // Row 1 slot 2: column 2, twin 0. Row 0 slot 0: 0, 0.
      CHECK(q[0] == 0);
      CHECK(pack_q(p, QPacking::by_k)[0] == 0);
      // The arithmetic of the illustration: N*I + J with N = 4, I = 3, J = 2.
      const std::vector<std::int64_t> one = {4 * 3 + 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
      const auto u = unpack_q(one, 4, 3, QPacking::by_n);
      CHECK(u.cols[0] == 3);
      CHECK(u.twins[0] == 2);
    }
    SUBCASE("round trip on the example and on random patterns") {
      std::mt19937_64 rng(5);
      std::vector<SparsityPattern> patterns = {build_pattern_from_example()};
      for (int t = 0; t < 40; ++t) {
        const Graph g = oracle::random_graph(1 + t, 0.2, rng);
        std::size_t maxdeg = 0;
        for (const auto& r : g) maxdeg = std::max(maxdeg, r.size());
        patterns.push_back(SparsityPattern::from_graph(g, std::max<Index>(1, static_cast<Index>(maxdeg / 2 + 1))));
      }
      for (const auto& p : patterns)
        for (QPacking mode : {QPacking::by_n, QPacking::by_k}) {
          const auto q = pack_q(p, mode);
          const auto u = unpack_q(q, p.n(), p.k(), mode);
          CHECK(u.cols == p.ell_cols());
          CHECK(u.twins == p.ell_twins());
          for (std::size_t s = 0; s < q.size(); ++s)
            if (p.ell_cols()[s] < 0) CHECK(q[s] == -1);
        }
    }
  }

  TEST_CASE("debug dumps render small patterns") {
    const auto p = build_pattern_from_example();
    const std::string d = p.dump();
    CHECK(d.find('I') != std::string::npos);
    CHECK(d.find('J') != std::string::npos);
  }
}
