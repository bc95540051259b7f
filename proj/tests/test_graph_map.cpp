#include <cmath>
#include <random>

#include "doctest.h"
#include "gen.hpp"
#include "ttconvex/error.hpp"
#include "ttconvex/fixtures.hpp"
#include "ttconvex/graph_map.hpp"
#include "ttconvex/spectral.hpp"

using namespace ttconvex;

namespace {

GraphMap f6_map() { return parse_rose_map(fixtures::text("f6")); }

EdgePath rose_path(const GraphMap& f, const char* text) { return parse_edge_path(f.graph(), text); }

std::string show(const GraphMap& f, const EdgePath& p) { return format_edge_path(f.graph(), p.edges); }

}  // namespace

TEST_CASE("tighten") {
  MarkedGraph g({"v0", "v1"}, {{"E", 0, 1}, {"F", 1, 0}});
  auto E = positive_letter(0), F = positive_letter(1);
  CHECK(tighten(g, 0, std::vector<Letter>{E, -E, E}).edges == std::vector<Letter>{E});
  CHECK(tighten(g, 0, std::vector<Letter>{E, F}).edges == std::vector<Letter>{E, F});
  const auto t = tighten(g, 0, std::vector<Letter>{E, F, -F, -E});
  CHECK(t.empty());
  CHECK(t.start == 0);
  CHECK_THROWS_AS(tighten(g, 0, std::vector<Letter>{E, E}), PathError);
  CHECK_THROWS_AS(MarkedGraph({"v0", "v1"}, {{"E", 0, 0}}), GraphError);
}

TEST_CASE("circuits compare up to rotation") {
  const auto f = f6_map();
  const auto& g = f.graph();
  const auto a = parse_letters(g.edge_alphabet(), "a b c");
  const auto b = parse_letters(g.edge_alphabet(), "c a b");
  CHECK(Circuit(g, a) == Circuit(g, b));
  const auto c = parse_letters(g.edge_alphabet(), "d a b c d'");
  CHECK(Circuit(g, c) == Circuit(g, a));
}

TEST_CASE("f6 strata") {
  const auto f = f6_map();
  const auto& fl = f.filtration();
  REQUIRE(fl.size() == 5);
  CHECK(fl.stratum(1).constant());
  for (int r = 2; r <= 4; ++r) {
    CHECK(fl.stratum(r).cls == StratumClass::polynomial);
    CHECK(fl.stratum(r).suffix.has_value());
  }
  CHECK(format_edge_path(f.graph(), *fl.stratum(2).suffix) == "a");
  CHECK(format_edge_path(f.graph(), *fl.stratum(3).suffix) == "a a");
  CHECK(format_edge_path(f.graph(), *fl.stratum(4).suffix) == "c");
  const auto& h5 = fl.stratum(5);
  CHECK(h5.cls == StratumClass::exponential);
  Eigen::MatrixXi expect(2, 2);
  expect << 0, 1, 1, 1;
  CHECK(h5.transition == expect);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(h5.growth_rate - golden) < 1e-9);
  CHECK(f.graph().length(positive_letter(4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(f.graph().length(positive_letter(5)) - golden) < 1e-9);
  // h values: a constant, b->a, c->a, d->c, {x,y} -> c
  CHECK(fl.stratum(1).h_value == 0);
  CHECK(fl.stratum(2).h_value == 1);
  CHECK(fl.stratum(3).h_value == 1);
  CHECK(fl.stratum(4).h_value == 3);
  CHECK(fl.stratum(5).h_value == 3);
  CHECK(fl.leagues.at(3) == std::vector<int>{4, 5});
}

TEST_CASE("eglinear strata and infinite h") {
  const auto f = parse_rose_map(fixtures::text("eglinear"));
  const auto& fl = f.filtration();
  CHECK(fl.stratum(1).cls == StratumClass::exponential);
  CHECK(fl.stratum(1).h_value == kInfiniteH);
  CHECK(fl.stratum(2).cls == StratumClass::polynomial);
  CHECK(fl.stratum(2).h_value == 1);
}

TEST_CASE("filtration errors") {
  const auto phi = fixtures::f6();
  // {a,b} together is reducible: b crosses a but not vice versa
  CHECK_THROWS_AS(rose_map(phi, std::vector<std::vector<int>>{{0, 1}, {2}, {3}, {4, 5}}), FiltrationError);
  // d before c is not invariant
  CHECK_THROWS_AS(rose_map(phi, std::vector<std::vector<int>>{{0}, {1}, {3}, {2}, {4, 5}}), FiltrationError);
}

TEST_CASE("suggested filtration of f6 is the declared one") {
  const auto f = rose_map(fixtures::f6());
  std::vector<std::vector<int>> got;
  for (const auto& s : f.filtration().strata) got.push_back(s.edges);
  CHECK(got == std::vector<std::vector<int>>{{0}, {1}, {2}, {3}, {4, 5}});
}

TEST_CASE("map_path matches word iteration") {
  const auto f = f6_map();
  CHECK(show(f, map_path(f, rose_path(f, "d"), 2)) == "d c c a a");
  const auto phi = fixtures::f6();
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    auto w = testgen::random_reduced(rng, 6, 1 + rng() % 8);
    const int k = static_cast<int>(rng() % 5);
    const auto p = map_path(f, EdgePath{0, w}, k);
    const auto u = iterate(phi, ReducedWord::from_reduced(w), k);
    CHECK(p.edges == std::vector<Letter>(u.letters().begin(), u.letters().end()));
  }
}

TEST_CASE("property: map_path composes") {
  std::mt19937_64 rng(8);
  for (const auto& name : {"f6", "psi_f4", "eglinear"}) {
    const auto f = parse_rose_map(fixtures::text(name));
    const int n = static_cast<int>(f.edge_count());
    for (int t = 0; t < 60; ++t) {
      const EdgePath p{0, testgen::random_reduced(rng, n, 1 + rng() % 6)};
      const int j = static_cast<int>(rng() % 4), k = static_cast<int>(rng() % 3);
      CHECK(map_path(f, p, j + k) == map_path(f, map_path(f, p, j), k));
    }
  }
}

TEST_CASE("property: transition columns count crossings") {
  for (const auto& name : {"f6", "psi_f4", "eglinear"}) {
    const auto f = parse_rose_map(fixtures::text(name));
    for (const auto& s : f.filtration().strata) {
      for (std::size_t j = 0; j < s.edges.size(); ++j) {
        int count = 0;
        const int r = f.stratum_of(positive_letter(s.edges[j]));
        for (const Letter l : f.edge_image(s.edges[j])) count += f.stratum_of(l) == r;
        CHECK(s.transition.col(static_cast<Eigen::Index>(j)).sum() == count);
      }
    }
  }
}

TEST_CASE("property: h ordering") {
  for (const auto& name : {"f6", "psi_f4", "eglinear"}) {
    const auto f = parse_rose_map(fixtures::text(name));
    const auto& ord = f.filtration().h_order;
    for (std::size_t i = 0; i < ord.size(); ++i)
      for (std::size_t j = i + 1; j < ord.size(); ++j)
        CHECK(f.filtration().stratum(ord[i]).h_value <= f.filtration().stratum(ord[j]).h_value);
  }
}

TEST_CASE("perron frobenius oracle") {
  // Oracle: largest root of the characteristic polynomial via Eigen's general solver.
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng() % 4);
    Eigen::MatrixXi m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) m((i + 1) % n, i) = std::max(1, m((i + 1) % n, i));  // cycle => irreducible
    REQUIRE(irreducible(m));
    const auto pf = perron_frobenius<double>(m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.cast<double>());
    double best = 0;
    for (int i = 0; i < n; ++i) best = std::max(best, es.eigenvalues()(i).real());
    CHECK(std::abs(pf.eigenvalue - best) < 1e-8);
    const Eigen::VectorXd lhs = m.cast<double>().transpose() * pf.left;
    CHECK((lhs - pf.eigenvalue * pf.left).norm() < 1e-7);
    CHECK(pf.left.minCoeff() == doctest::Approx(1.0));
  }
  Eigen::MatrixXi red(2, 2);
  red << 1, 1, 0, 1;
  CHECK_FALSE(irreducible(red));
}

TEST_CASE("graph map text format") {
  const char* text = R"(
[graph]
vertex v0 v1
edge A = v0 v0
edge B = v0 v1
edge C = v1 v0
[map]
A -> A
B -> B C A C'
C -> C
)";
  const auto f = parse_graph_map(text);
  CHECK(f.filtration().size() == 3);
  const auto again = parse_graph_map(format_graph_map(f));
  CHECK(again.edge_image(1) == f.edge_image(1));
  CHECK_THROWS_WITH_AS(parse_graph_map("[graph]\nvertex v\nedge A = v w\n[map]\nA -> A\n"),
                       doctest::Contains("line 3"), ParseError);
  CHECK_THROWS_AS(parse_graph_map("[graph]\nvertex v\nedge A = v v\n[map]\nA -> A A'\n"), GraphError);
}
