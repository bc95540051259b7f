#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "ttconvex/error.hpp"
#include "ttconvex/fixtures.hpp"
#include "ttconvex/legality.hpp"

using namespace ttconvex;

namespace {

GraphMap load(const char* name) { return parse_rose_map(fixtures::text(name)); }

EdgePath path(const GraphMap& f, const char* text) { return parse_edge_path(f.graph(), text); }

// Brute-force oracle: iterate the turn under Df, tracking visited turns.
bool oracle_illegal(const GraphMap& f, Letter a, Letter b) {
  std::set<std::pair<Letter, Letter>> seen;
  while (a != b) {
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) return false;
    a = f.image(a).front();
    b = f.image(b).front();
  }
  return true;
}

bool has_path(const NielsenCatalog& cat, const GraphMap& f, const char* text, int period) {
  const auto p = path(f, text);
  for (const auto& np : cat.paths)
    if (np.path == p && np.period == period) return true;
  return false;
}

}  // namespace

TEST_CASE("legality table agrees with the orbit oracle") {
  for (const auto& name : fixtures::names()) {
    const auto f = load(name.c_str());
    const LegalityTable t(f);
    for (const Turn turn : t.turns()) {
      CHECK(t.illegal(turn) == oracle_illegal(f, turn.a, turn.b));
      if (turn.degenerate()) CHECK(t.illegal(turn));
    }
  }
}

TEST_CASE("Df preserves legality") {
  for (const auto& name : fixtures::names()) {
    const auto f = load(name.c_str());
    const LegalityTable t(f);
    for (const Turn turn : t.turns())
      if (!t.illegal(turn)) CHECK_FALSE(t.illegal(t.df(turn)));
  }
}

TEST_CASE("illegal turns of the fixtures") {
  const auto f = load("f6");
  const LegalityTable t(f);
  const auto x = path(f, "x").edges[0], y = path(f, "y").edges[0];
  CHECK(t.illegal(Turn::make(y, y)));
  std::vector<Turn> top;
  for (const Turn turn : t.turns())
    if (!turn.degenerate() && t.illegal(turn) && (f.stratum_of(turn.a) == 5 || f.stratum_of(turn.b) == 5))
      top.push_back(turn);
  REQUIRE(top.size() == 1);
  CHECK(top[0] == Turn::make(-x, -y));

  CHECK(LegalityTable(load("identity")).nondegenerate_illegal_count() == 0);
  const auto eg = load("eglinear");
  const LegalityTable te(eg);
  int count = 0;
  for (const Turn turn : te.turns()) count += !turn.degenerate() && oracle_illegal(eg, turn.a, turn.b);
  CHECK(te.nondegenerate_illegal_count() == count);
}

TEST_CASE("r_stats") {
  const auto f = load("f6");
  const LegalityTable t(f);
  const auto legal = r_stats(f, t, path(f, "y").edges, 5);
  CHECK(legal.legal_segments == 1);
  CHECK(legal.r_legal);
  // the junction x | y' crosses the illegal turn {x', y'}
  const auto split = r_stats(f, t, path(f, "x y'").edges, 5);
  CHECK(split.legal_segments == 2);
  CHECK_FALSE(split.r_legal);
  const auto segs = legal_segments(f, t, path(f, "c x y' c").edges, 5);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].end == 2);
  CHECK(segs[0].r_length == doctest::Approx(1.0));
  CHECK(segs[1].r_length == doctest::Approx(f.graph().length(path(f, "y").edges[0])));
  CHECK(r_stats(f, t, {}, 5).legal_segments == 0);
}

TEST_CASE("r-legal paths map to r-legal paths") {
  const auto f = load("f6");
  const LegalityTable t(f);
  int tested = 0;
  for (const auto& p : random_height_paths(f, 5, 3000, 40, 17)) {
    CHECK(is_immersed(f.graph(), p.edges));
    CHECK(f.height(p.edges) == 5);
    if (!r_stats(f, t, p.edges, 5).r_legal) continue;
    ++tested;
    CHECK(r_stats(f, t, map_path(f, p).edges, 5).r_legal);
  }
  CHECK(tested > 50);
}

TEST_CASE("number of legal segments does not increase") {
  const auto f = load("f6");
  const LegalityTable t(f);
  for (const auto& p : random_height_paths(f, 5, 300, 30, 5)) {
    int n = r_stats(f, t, p.edges, 5).legal_segments;
    EdgePath cur = p;
    for (int k = 1; k <= 4; ++k) {
      cur = map_path(f, cur);
      const int m = r_stats(f, t, cur.edges, 5).legal_segments;
      CHECK(m <= n);
      n = m;
    }
  }
}

TEST_CASE("Nielsen catalog") {
  NielsenBounds b;
  b.max_edges = 10;
  SUBCASE("f6") {
    const auto f = load("f6");
    const auto cat = find_nielsen(f, b);
    CHECK(has_path(cat, f, "a", 1));
    CHECK(has_path(cat, f, "b a b'", 1));
    CHECK(has_path(cat, f, "c a c'", 1));
    CHECK(has_path(cat, f, "b a a a b'", 1));
    CHECK_FALSE(cat.complete);  // the families b a^k b' are unbounded
    CHECK_FALSE(cat.saturated);
    for (const auto& np : cat.paths) {
      CHECK(nielsen_period(f, np.path, np.period) == np.period);
      CHECK(map_path(f, np.path, np.period) == np.path);
    }
  }
  SUBCASE("eglinear") {
    const auto f = load("eglinear");
    const auto cat = find_nielsen(f, b);
    CHECK(has_path(cat, f, "x y x' y'", 1));
    CHECK(cat.of_height(1).size() == 1);
    CHECK(cat.has_closed(1));
    for (const auto& np : cat.paths) CHECK(map_path(f, np.path, np.period) == np.path);
  }
  SUBCASE("identity") {
    const auto f = load("identity");
    const auto cat = find_nielsen(f, b);
    CHECK(cat.complete);
    CHECK(cat.saturated);
    CHECK(cat.paths.size() == 3);
  }
  SUBCASE("height restriction") {
    const auto f = load("f6");
    b.max_height = 2;
    for (const auto& np : find_nielsen(f, b).paths) CHECK(np.height <= 2);
  }
  CHECK_THROWS_AS(find_nielsen(load("f6"), NielsenBounds{0, 1, 0, 10}), ConfigError);
}

TEST_CASE("N_count") {
  NielsenBounds b;
  b.max_edges = 10;
  const auto f = load("eglinear");
  const LegalityTable t(f);
  const auto cat = find_nielsen(f, b);
  // sigma = x y x' y' is closed Nielsen of height 1
  CHECK(N_count(f, t, path(f, "x y x' y' x y x' y'").edges, 1, cat).value == 0);
  // y | sigma | x: every junction is illegal; only the outer segments survive
  const auto rho = path(f, "y x y x' y' x").edges;
  CHECK(r_stats(f, t, rho, 1).legal_segments == 6);
  CHECK(N_count(f, t, rho, 1, cat).value == 2);
  CHECK_FALSE(N_count(f, t, rho, 1, cat).exact);

  // no closed Nielsen path of height 5 in f6: N = n
  const auto f6 = load("f6");
  const LegalityTable t6(f6);
  const auto cat6 = find_nielsen(f6, b);
  CHECK_FALSE(cat6.has_closed(5));
  for (const auto& p : random_height_paths(f6, 5, 100, 20, 3))
    CHECK(N_count(f6, t6, p.edges, 5, cat6).value == r_stats(f6, t6, p.edges, 5).legal_segments);
}

TEST_CASE("trichotomy") {
  NielsenBounds b;
  b.max_edges = 10;
  const auto f = load("eglinear");
  const LegalityTable t(f);
  const auto cat = find_nielsen(f, b);
  const auto sigma = path(f, "x y x' y'");
  const auto nielsen = trichotomy(f, t, sigma, 1, 1000.0, 3, cat);
  CHECK(nielsen.which == TrichotomyCase::pre_nielsen);
  CHECK(nielsen.cut_begin == 0);
  CHECK(nielsen.cut_end == 4);

  const auto f6 = load("f6");
  const LegalityTable t6(f6);
  const auto cat6 = find_nielsen(f6, b);
  const auto grow = trichotomy(f6, t6, path(f6, "y"), 5, 1.0, 4, cat6);
  CHECK(grow.which == TrichotomyCase::long_legal);
  REQUIRE(grow.segment);
  CHECK(grow.segment->r_length > 1.0);
  CHECK_THROWS_AS(trichotomy(f6, t6, path(f6, "a"), 1, 1.0, 1, cat6), WrongStratumClassError);
  CHECK(std::string(to_string(TrichotomyCase::fewer_segments)) == "fewer_segments");

  // select_M: the chosen M certifies the whole corpus
  const auto corpus = random_height_paths(f6, 5, 60, 20, 9);
  const auto sel = select_M(f6, t6, 5, 8.0, corpus, cat6, 12);
  CHECK(sel.heuristic);
  if (sel.M > 0)
    for (const auto& p : corpus) CHECK(trichotomy(f6, t6, p, 5, 8.0, sel.M, cat6).which != TrichotomyCase::unknown);
}

TEST_CASE("fast polynomial exponent") {
  const auto f6 = load("f6");
  const LegalityTable t6(f6);
  CHECK_FALSE(fastpoly_exponent(f6, t6, {}, {0, 0, 0, 0, 0, 6.47}).applicable);

  // e -> e x over the positive stratum x -> y, y -> x y
  const auto f = parse_graph_map(R"([graph]
vertex v
edge x = v v
edge y = v v
edge e = v v
[map]
x -> y
y -> x y
e -> e x
[filtration]
stratum 1 = x y
stratum 2 = e
)");
  const LegalityTable t(f);
  const auto res = fastpoly_exponent(f, t, {2}, {0, 3.0, 0});
  CHECK(res.applicable);
  REQUIRE(res.k0);
  // oracle: direct check at k0 and k0 - 1
  auto long_enough = [&](int k) {
    const auto img = map_path(f, EdgePath{0, {positive_letter(2)}}, k).edges;
    std::vector<Letter> run;
    double best = 0.0;
    for (std::size_t i = 0; i <= img.size(); ++i) {
      if (i < img.size() && f.stratum_of(img[i]) == 1) {
        run.push_back(img[i]);
        continue;
      }
      for (const auto& s : legal_segments(f, t, run, 1)) best = std::max(best, s.r_length);
      run.clear();
    }
    return best > 3.0;
  };
  CHECK(long_enough(*res.k0));
  if (*res.k0 > 1) CHECK_FALSE(long_enough(*res.k0 - 1));
}
