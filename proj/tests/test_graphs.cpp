#include <doctest.h>

#include "disktau/errors.hpp"
#include "disktau/stable_graphs.hpp"
#include "graph_suite.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <set>

using disktau::Label;
using disktau::StableGraph;
using disktau::Vertex;
using disktau::VertexKind;

namespace {

Label B(int i) { return Label::boundary(i); }
Label I(int i) { return Label::interior(i); }

Vertex open_vertex(std::vector<Label> lb, std::vector<Label> li = {}) {
  return Vertex{VertexKind::open, std::move(lb), std::move(li)};
}
Vertex closed_vertex(std::vector<Label> li) { return Vertex{VertexKind::closed, {}, std::move(li)}; }

// v1(1b,2b,3b; 1) -- v2(4b,5b)
StableGraph remark_graph() {
  StableGraph g;
  g.vertices = {open_vertex({B(1), B(2), B(3)}, {I(1)}), open_vertex({B(4), B(5)})};
  g.edges = {{0, 1}};
  return g;
}

// v(1b,2b,3b) -- u closed(1,2)
StableGraph closed_bubble() {
  StableGraph g;
  g.vertices = {open_vertex({B(1), B(2), B(3)}), closed_vertex({I(1), I(2)})};
  g.edges = {{0, 1}};
  return g;
}

std::pair<std::uint64_t, std::uint64_t> split_of(const StableGraph& g, int e) {
  const auto [a, b] = g.edges[static_cast<std::size_t>(e)];
  auto x = disktau::label_of_flag(g, a, e).bits();
  auto y = disktau::label_of_flag(g, b, e).bits();
  return {std::min(x, y), std::max(x, y)};
}

int edge_with_split(const StableGraph& g, std::pair<std::uint64_t, std::uint64_t> s) {
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (split_of(g, e) == s) return e;
  return -1;
}

}  // namespace

TEST_SUITE("stable_graphs") {
  TEST_CASE("validation") {
    CHECK(disktau::validate_graph(StableGraph::gamma(3, 0)));
    StableGraph unstable;
    unstable.vertices = {open_vertex({B(1), B(2)})};
    CHECK_FALSE(disktau::validate_graph(unstable));
    StableGraph shared;
    shared.vertices = {open_vertex({B(1), B(2), B(3)}), open_vertex({B(1), B(4), B(5)})};
    const auto r = disktau::validate_graph(shared);
    CHECK_FALSE(r);
    CHECK_FALSE(r.diagnostics.empty());
    CHECK(disktau::validate_graph(remark_graph()));
    StableGraph cycle = remark_graph();
    cycle.edges.push_back({0, 1});
    CHECK_FALSE(disktau::validate_graph(cycle));
    StableGraph closed_between;
    closed_between.vertices = {open_vertex({B(1)}, {I(1)}), closed_vertex({I(2), I(3)}), open_vertex({B(2), B(3), B(4)})};
    closed_between.edges = {{0, 1}, {1, 2}};
    CHECK_FALSE(disktau::validate_graph(closed_between));
  }

  TEST_CASE("dimensions") {
    CHECK(disktau::graph_dims(StableGraph::gamma(5, 1)).real_dim == 4);
    StableGraph c;
    c.vertices = {closed_vertex({I(1), I(2), I(3)})};
    CHECK(disktau::graph_dims(c).real_dim == 0);
    const auto d = disktau::graph_dims(remark_graph());
    CHECK(d.real_dim == 3);
    CHECK(d.complex_dim == disktau::frac(3, 2));
    CHECK_THROWS_AS(disktau::graph_dims(StableGraph{{open_vertex({B(1)})}, {}}), disktau::InvalidGraphError);
  }

  TEST_CASE("smoothing") {
    const StableGraph g = remark_graph();
    CHECK(disktau::smooth(g, {0}) == StableGraph::gamma(5, 1));
    CHECK(disktau::smooth(g, {}) == disktau::canonical(g));
    CHECK_THROWS_AS(disktau::smooth(g, {1}), disktau::NotInGraphError);

    // A 3-edge chain; every order of single smoothings agrees with smoothing all at once.
    StableGraph chain;
    chain.vertices = {open_vertex({B(1), B(2)}), open_vertex({B(3)}), open_vertex({B(4)}), open_vertex({B(5), B(6)})};
    chain.edges = {{0, 1}, {1, 2}, {2, 3}};
    REQUIRE(disktau::validate_graph(chain));
    const StableGraph all = disktau::smooth(chain, {0, 1, 2});
    CHECK(all == StableGraph::gamma(6, 0));
    std::vector<int> order{0, 1, 2};
    int orders = 0;
    std::set<std::string> middles;
    do {
      StableGraph cur = chain;
      for (int e : order) {
        const int idx = edge_with_split(cur, split_of(chain, e));
        REQUIRE(idx >= 0);
        cur = disktau::smooth(cur, {idx});
        if (cur.edges.size() == 1) middles.insert(disktau::canonical_key(cur));
      }
      CHECK(cur == all);
      ++orders;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(orders == 6);
    CHECK(middles.size() == 3);
  }

  TEST_CASE("boundary enumeration") {
    CHECK(disktau::enumerate_boundary(3, 0).empty());
    const auto codim1 = disktau::enumerate_boundary(5, 1, 1, true);
    CHECK(codim1.size() == 26);
    CHECK(oracle::GraphCount(5, 1).distribution().at({1, 1}) == 26);
    for (const auto& g : disktau::enumerate_boundary(3, 2)) {
      CHECK(disktau::validate_graph(g));
      std::vector<int> all(g.edges.size());
      for (std::size_t e = 0; e < all.size(); ++e) all[e] = static_cast<int>(e);
      CHECK(disktau::smooth(g, all) == StableGraph::gamma(3, 2));
    }
  }

  TEST_CASE("boundary is closed under iteration") {
    const auto boundary = disktau::enumerate_boundary(3, 1);
    std::set<std::string> keys;
    for (const auto& g : boundary) keys.insert(disktau::canonical_key(g));
    for (const auto& g : boundary)
      for (const auto& h : disktau::degenerations(g)) CHECK(keys.count(disktau::canonical_key(h)) == 1);
  }

  TEST_CASE("legality") {
    const StableGraph g = remark_graph();
    CHECK(disktau::edge_legality(g, 0, 0) == disktau::Legality::illegal);
    CHECK(disktau::edge_legality(g, 0, 1) == disktau::Legality::legal);
    CHECK_THROWS(disktau::edge_legality(closed_bubble(), 0, 0));
    for (const auto& h : disktau::enumerate_boundary(5, 1))
      for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
        if (!disktau::is_boundary_edge(h, e)) continue;
        const auto [a, b] = h.edges[static_cast<std::size_t>(e)];
        const bool la = disktau::edge_legality(h, e, a) == disktau::Legality::legal;
        const bool lb = disktau::edge_legality(h, e, b) == disktau::Legality::legal;
        CHECK(la != lb);
      }
    StableGraph even;
    even.vertices = {open_vertex({B(1), B(2)}, {I(1)}), open_vertex({B(3), B(4)})};
    even.edges = {{0, 1}};
    CHECK(disktau::edge_legality(even, 0, 0) == disktau::Legality::legal);
    CHECK(disktau::edge_legality(even, 0, 1) == disktau::Legality::legal);
    CHECK_FALSE(disktau::in_odd_family(even));
  }

  TEST_CASE("flag labels") {
    const StableGraph g = remark_graph();
    CHECK(disktau::label_of_flag(g, 1, 0) == (I(1) | B(1) | B(2) | B(3)));
    CHECK(disktau::label_of_flag(g, 0, 0) == (B(4) | B(5)));
    CHECK(disktau::label_of_flag(g, 0, I(1)) == I(1));
    CHECK_THROWS_AS(disktau::label_of_flag(g, 1, I(1)), disktau::NotInGraphError);
    CHECK(disktau::label_of_flag(g, 1, 0).to_string() == "{1,1b,2b,3b}");
  }

  TEST_CASE("base graph") {
    const StableGraph g = remark_graph();
    StableGraph expected;
    expected.vertices = {open_vertex({B(1), B(2), B(3)}, {I(1)}), open_vertex({B(4), B(5), I(1) | B(1) | B(2) | B(3)})};
    CHECK(disktau::base_graph(g) == disktau::canonical(expected));
    CHECK(disktau::graph_dims(disktau::base_graph(g)).real_dim == 2);
    CHECK(disktau::base_graph(StableGraph::gamma(5, 1)) == StableGraph::gamma(5, 1));
    CHECK_THROWS_AS(disktau::base_graph(StableGraph::gamma(4, 0)), disktau::DomainError);
    const long top = 5 + 2 * 2 - 3;
    for (const auto& h : disktau::enumerate_boundary(5, 2)) {
      const auto b = disktau::base_graph(h);
      CHECK(b.edges.empty());
      const long d = disktau::graph_dims(b).real_dim;
      CHECK(d % 2 == 0);
      CHECK(d <= top - 2);
    }
  }

  TEST_CASE("span") {
    const StableGraph g = remark_graph();
    CHECK(disktau::span_subgraph(g, {0, 1}) == disktau::canonical(g));
    StableGraph v2;
    v2.vertices = {open_vertex({B(4), B(5), I(1) | B(1) | B(2) | B(3)})};
    CHECK(disktau::span_subgraph(g, {1}) == disktau::canonical(v2));
    StableGraph v1;
    v1.vertices = {open_vertex({B(1), B(2), B(3), B(4) | B(5)}, {I(1)})};
    CHECK(disktau::span_subgraph(g, {0}) == disktau::canonical(v1));
  }

  TEST_CASE("forget and stabilization") {
    const StableGraph g = closed_bubble();
    StableGraph expected;
    expected.vertices = {open_vertex({B(1), B(2), B(3)}, {I(2)})};
    CHECK(disktau::forget_interior(g, I(1)) == disktau::canonical(expected));
    CHECK(disktau::forget_interior(g, I(3)) == disktau::canonical(g));
    CHECK_THROWS(disktau::forget_interior(StableGraph::gamma(1, 1), I(1)));

    // Two unstable closed vertices hanging off one open vertex.
    StableGraph two;
    two.vertices = {open_vertex({B(1), B(2), B(3)}), closed_vertex({I(1)}), closed_vertex({I(2)})};
    two.edges = {{0, 1}, {0, 2}};
    CHECK(disktau::unstable_vertices(two).size() == 2);
    auto run = [](StableGraph cur, bool first) {
      for (auto u = disktau::unstable_vertices(cur); !u.empty(); u = disktau::unstable_vertices(cur))
        cur = disktau::stabilize_at(cur, first ? u.front() : u.back());
      return disktau::canonical(cur);
    };
    StableGraph target;
    target.vertices = {open_vertex({B(1), B(2), B(3)}, {I(1), I(2)})};
    CHECK(run(two, true) == disktau::canonical(target));
    CHECK(run(two, false) == disktau::canonical(target));
    CHECK(disktau::stabilize(two) == disktau::canonical(target));
  }

  TEST_CASE("JSON") {
    const StableGraph g = disktau::canonical(remark_graph());
    CHECK(disktau::graph_from_json(disktau::graph_to_json(g)) == g);
    const auto boundary = disktau::enumerate_boundary(3, 1);
    CHECK(disktau::graphs_from_json(disktau::graphs_to_json(boundary)) == boundary);
    const StableGraph parsed = disktau::graph_from_json(
        R"({"vertices":[{"kind":"open","lB":[[{"boundary":1}],[{"boundary":2}],[{"boundary":3}]],"lI":[]}],"edges":[]})");
    CHECK(parsed == StableGraph::gamma(3, 0));
    CHECK_THROWS(disktau::graph_from_json("{\"vertices\":"));
  }

  TEST_CASE("graph suite on small families") {
    for (auto [k, l] : {std::pair{1, 2}, {3, 1}, {3, 2}, {5, 0}, {5, 1}}) {
      const auto r = gsuite::run(k, l);
      CHECK_MESSAGE(r.failures.empty(), k, " ", l, ": ", r.failures.empty() ? "" : r.failures.front());
      CHECK(r.counts_match());
      CHECK(r.closure_shape_equal == r.closure_checked);
    }
  }
}
