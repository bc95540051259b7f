#include <random>

#include "doctest.h"
#include "ttconvex/cancellation.hpp"
#include "ttconvex/error.hpp"
#include "ttconvex/fixtures.hpp"
#include "ttconvex/hallway.hpp"

using namespace ttconvex;

namespace {

GraphMap load(const char* name) { return parse_rose_map(fixtures::text(name)); }

EdgePath path(const GraphMap& f, const char* text) { return parse_edge_path(f.graph(), text); }

std::string fmt(const GraphMap& f, const EdgePath& p) { return format_edge_path(f.graph(), p.edges); }

std::vector<Letter> random_word(std::mt19937_64& rng, int rank, int max_len) {
  std::vector<Letter> w;
  const int len = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
  while (static_cast<int>(w.size()) < len) {
    const Letter l = static_cast<Letter>(1 + rng() % static_cast<unsigned>(rank)) * (rng() % 2 ? 1 : -1);
    if (!w.empty() && l == -w.back()) continue;
    w.push_back(l);
  }
  return w;
}

ReducedWord word(const EdgePath& p) { return ReducedWord::reduce(p.edges); }

std::size_t count_letter(const EdgePath& p, int e) {
  return static_cast<std::size_t>(std::ranges::count_if(p.edges, [&](Letter l) { return symbol_index(l) == e; }));
}

}  // namespace

TEST_CASE("smooth hallways") {
  const auto f = load("f6");
  const auto fixed = smooth_hallway(f, path(f, "b a b'"), 7);
  CHECK(fixed.duration() == 7);
  for (const auto& s : fixed.slices) CHECK(fmt(f, s) == "b a b'");
  CHECK(fixed.visible_length == doctest::Approx(6.0));
  CHECK(fixed.smooth());

  for (const char* w : {"a a a", "c a' a' c'", "b a a a a b'"})
    for (const auto& s : smooth_hallway(f, path(f, w), 5).slices) CHECK(fmt(f, s) == w);

  // b a^m with m = -3: lengths drop by one until i = 3, then grow by one
  const auto dec = smooth_hallway(f, path(f, "b a' a' a'"), 6);
  for (int i = 0; i <= 6; ++i)
    CHECK(dec.slices[static_cast<std::size_t>(i)].edges.size() == static_cast<std::size_t>(i <= 3 ? 4 - i : i - 2));

  const auto one = smooth_hallway(f, path(f, "c a b"), 0);
  CHECK(one.duration() == 0);
  CHECK(one.visible_length == doctest::Approx(6.0));

  ResourceLimits tight;
  tight.max_iterations = 4;
  CHECK_THROWS_AS(smooth_hallway(f, path(f, "a"), 5, tight), ResourceLimitError);
}

TEST_CASE("smooth slices agree with iteration") {
  for (const char* name : {"f6", "psi_f4", "eglinear"}) {
    const auto f = load(name);
    const auto phi = fixtures::by_name(name);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const EdgePath rho0{0, random_word(rng, static_cast<int>(phi.rank()), 8)};
      const auto h = smooth_hallway(f, rho0, 5);
      for (int i = 0; i <= 5; ++i) {
        const auto& s = h.slices[static_cast<std::size_t>(i)];
        CHECK(s == map_path(f, rho0, i));
        CHECK(word(s) == iterate(phi, word(rho0), i));
      }
    }
  }
}

TEST_CASE("slice recurrence against free group arithmetic") {
  for (const char* name : {"f6", "psi_f4"}) {
    const auto f = load(name);
    const auto phi = fixtures::by_name(name);
    const int rank = static_cast<int>(phi.rank());
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 1 + static_cast<int>(rng() % 6);
      std::vector<EdgePath> mu, nu;
      for (int i = 1; i < k; ++i) {
        mu.push_back({0, random_word(rng, rank, 3)});
        nu.push_back({0, random_word(rng, rank, 3)});
      }
      const EdgePath rho0{0, random_word(rng, rank, 6)};
      const auto h = build_hallway(f, rho0, k, mu, nu);
      ReducedWord w = word(rho0);
      const auto& g = f.graph();
      double visible = path_length(g, rho0);
      for (int i = 1; i <= k; ++i) {
        w = apply(phi, w);
        if (i < k) {
          w = word(mu[static_cast<std::size_t>(i - 1)]) * w * word(nu[static_cast<std::size_t>(i - 1)]);
          visible += path_length(g, mu[static_cast<std::size_t>(i - 1)]) + path_length(g, nu[static_cast<std::size_t>(i - 1)]);
        }
        CHECK(word(h.slices[static_cast<std::size_t>(i)]) == w);
      }
      visible += path_length(g, h.slices.back());
      // closure
      CHECK(h.slices.back() == map_path(f, h.slices[h.slices.size() - 2]));
      CHECK(h.visible_length == doctest::Approx(visible));
    }
  }
}

TEST_CASE("group form and the bulge") {
  const auto f = load("f6");
  const int k = 5;
  const auto h = parse_group_hallway(f, "t^-5 c t^-5 b^-1 t^10 b c^-1");
  REQUIRE(h.duration() == 2 * k);
  for (int i = 0; i < k; ++i) CHECK(h.slices[static_cast<std::size_t>(i)].edges.size() == static_cast<std::size_t>(i + 1));
  for (int i = k; i <= 2 * k; ++i)
    CHECK(h.slices[static_cast<std::size_t>(i)].edges.size() == static_cast<std::size_t>(2 * k - i + 2));
  CHECK(fmt(f, h.slices[5]) == "c a' a' a' a' a' b'");
  CHECK(fmt(f, h.slices[10]) == "c b'");
  CHECK(h.max_slice_length == doctest::Approx(k + 2));
  CHECK(h.argmax == static_cast<std::size_t>(k));
  CHECK(h.visible_length == doctest::Approx(4.0));
  CHECK(h.quasi_smooth_bound == doctest::Approx(1.0));

  CHECK_THROWS_AS(parse_group_hallway(f, "t^-2 b t^2 b'"), HallwayError);
  CHECK_THROWS_AS(parse_group_hallway(f, "t b t^-1"), HallwayError);
  CHECK_THROWS_AS(parse_group_hallway(f, "b t^-1 a t a'"), HallwayError);
  CHECK_THROWS_AS(parse_group_hallway(f, "t^-1 a t a'", "a"), HallwayError);

  const auto same = parse_hallway(f, "[hallway]\nword = t^-5 c t^-5 b^-1 t^10 b c^-1\n");
  CHECK(same.slices == h.slices);
  const auto text = parse_hallway(f, "[hallway]\nrho0 = b'\nduration = 10\nmu_5 = c\n");
  CHECK(text.slices == h.slices);
  CHECK_THROWS_AS(parse_hallway(f, "[hallway]\nrho0 = b'\nduration = 3\nmu_3 = c\n"), HallwayError);
  CHECK_THROWS_AS(parse_hallway(f, "[hallway]\nduration = 3\n"), ParseError);

  // trivial notches reproduce the smooth hallway
  CHECK(build_hallway(f, path(f, "c a b"), 4, std::vector<EdgePath>(3), std::vector<EdgePath>(3)).slices ==
        smooth_hallway(f, path(f, "c a b"), 4).slices);
}

TEST_CASE("endpoint chain") {
  const auto f = parse_graph_map(R"([graph]
vertex p
vertex q
edge a = p p
edge e = p q
edge b = q q
[map]
a -> a
e -> e b
b -> b
)");
  const auto& g = f.graph();
  const EdgePath rho0 = parse_edge_path(g, "e");
  CHECK_NOTHROW(build_hallway(f, rho0, 3, {parse_edge_path(g, "a"), parse_edge_path(g, "a")},
                              {parse_edge_path(g, "b"), EdgePath{}}));
  CHECK_THROWS_AS(build_hallway(f, rho0, 3, {parse_edge_path(g, "b"), EdgePath{}}, {}), HallwayError);
  CHECK_THROWS_AS(build_hallway(f, rho0, 3, {}, {parse_edge_path(g, "a"), EdgePath{}}), HallwayError);
  CHECK_THROWS_AS(build_hallway(f, rho0, 3, {parse_edge_path(g, "a")}, {}), HallwayError);
}

TEST_CASE("bulges from inverse images") {
  const auto f = load("f6");
  const auto inv = rose_inverse_map(fixtures::f6());
  const auto& g = f.graph();
  const int k = 4;
  for (const char* seed : {"x c", "d c"}) {
    const auto w0 = concat(g, map_path(inv, path(f, seed), k), path(f, "b'"));
    CHECK(is_immersed(g, w0.edges));
    const auto h = smooth_hallway(f, w0, 2 * k);
    // f^k(w0) = seed . f^k(b)^-1
    CHECK(fmt(f, h.slices[k]) == std::string(seed) + " a' a' a' a' b'");
  }

  // the superlinear-marked edges at the top of the polyex hallway are d and c
  const auto w0 = concat(g, map_path(inv, path(f, "d c"), k), path(f, "b'"));
  const auto h = smooth_hallway(f, w0, 2 * k);
  const auto m = propagate_markings(f, h);
  const auto classes = stratum_classes(f, growth_degrees(f, NielsenCatalog{}));
  const auto& top = h.slices.back();
  const auto n = nonlin_count(m, top.edges.size() ? h.slices.size() - 1 : 0, classes);
  REQUIRE(n);
  CHECK(*n == static_cast<std::int64_t>(count_letter(top, 2) + count_letter(top, 3)));
  for (std::size_t j = 0; j < top.edges.size(); ++j)
    if (symbol_index(top.edges[j]) == 2) CHECK(m.marks.back()[j] == 4);
}

TEST_CASE("markings") {
  const auto f = load("f6");
  const auto h = smooth_hallway(f, path(f, "d"), 3);
  const auto m = propagate_markings(f, h);
  REQUIRE(fmt(f, h.slices[3]) == "d c c a a c a a a a");
  CHECK(m.marks[3] == std::vector<int>{4, 4, 4, 3, 3, 4, 3, 3, 3, 3});

  const auto classes = stratum_classes(f, growth_degrees(f, NielsenCatalog{}));
  CHECK(classes[1] == MarkClass::constant);
  CHECK(classes[2] == MarkClass::linear);
  CHECK(classes[4] == MarkClass::superlinear);
  CHECK(classes[5] == MarkClass::exponential);

  // notch edges carry their own height
  const auto n = build_hallway(f, path(f, "c"), 3, {path(f, "d b"), EdgePath{}}, {EdgePath{}, path(f, "x")});
  const auto mn = propagate_markings(f, n);
  CHECK(mn.marks[1].front() == 4);
  CHECK(mn.marks[1][1] == 2);
  CHECK(mn.marks[2].back() == 5);

  // under leftmost cancellation the surviving a of b a b' descends from f(b)
  const auto flat = smooth_hallway(f, path(f, "b a b'"), 4);
  const auto mf = propagate_markings(f, flat);
  CHECK(*nonlin_count(mf, 0, classes) == 1);
  for (std::size_t i = 1; i < flat.slices.size(); ++i) CHECK(*nonlin_count(mf, i, classes) == 0);
  const auto id = load("identity");
  const auto hid = smooth_hallway(id, path(id, "a b c"), 3);
  const auto cid = stratum_classes(id, growth_degrees(id, NielsenCatalog{}));
  CHECK(*nonlin_count(propagate_markings(id, hid), 2, cid) == 3);

  // zero strata keep their marking
  const auto z = parse_graph_map(R"([graph]
vertex p
vertex q
edge a = p p
edge t = p q
edge x = q q
edge y = q q
[map]
a -> a
t -> a
x -> t y t'
y -> t x y t'
[filtration]
stratum 1 = a
stratum 2 = t
stratum 3 = x y
)");
  const auto hz = build_hallway(z, EdgePath{0, {2}}, 3, {}, {});
  const auto mz = propagate_markings(z, hz);
  for (std::size_t j = 0; j < hz.slices[2].edges.size(); ++j)
    if (hz.slices[2].edges[j] == 1 || hz.slices[2].edges[j] == -1) CHECK(mz.marks[2][j] == 2);

  // totality on random hallways
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h2 = build_hallway(f, EdgePath{0, random_word(rng, 6, 6)}, 4,
                                  {EdgePath{0, random_word(rng, 6, 2)}, EdgePath{}, EdgePath{0, random_word(rng, 6, 2)}},
                                  {EdgePath{}, EdgePath{0, random_word(rng, 6, 2)}, EdgePath{}});
    const auto m2 = propagate_markings(f, h2);
    const auto counts = class_counts(m2, classes);
    for (std::size_t i = 0; i < h2.slices.size(); ++i) {
      CHECK(m2.marks[i].size() == h2.slices[i].edges.size());
      std::int64_t sum = 0;
      for (const auto c : counts[i]) sum += c;
      CHECK(sum == static_cast<std::int64_t>(h2.slices[i].edges.size()));
    }
  }
}

TEST_CASE("unknown growth labels") {
  auto deg = growth_degrees(load("f6"), NielsenCatalog{});
  deg[3].certain = false;
  const auto f = load("f6");
  const auto classes = stratum_classes(f, deg);
  CHECK(classes[4] == MarkClass::unknown);
  const auto m = propagate_markings(f, smooth_hallway(f, path(f, "d"), 2));
  CHECK_FALSE(nonlin_count(m, 1, classes));
}

TEST_CASE("cutting") {
  const auto f = load("f6");
  const auto h = smooth_hallway(f, path(f, "b a b' c"), 4);
  // b' ends f(b') = a' b', so the cut falls after it
  const auto c = cut(f, h, 2);
  CHECK(c.length == 4);
  CHECK(fmt(f, c.left.rho0()) == "b a b'");
  CHECK(fmt(f, c.right.rho0()) == "c");
  for (const auto& s : c.left.slices) CHECK(fmt(f, s) == "b a b'");
  CHECK(c.left.visible_length + c.right.visible_length == doctest::Approx(h.visible_length));
  CHECK(c.left.duration() <= h.duration());
  CHECK(c.right.duration() <= h.duration());

  CHECK_THROWS_AS(cut(f, h, 4), PathError);
  const auto ex = smooth_hallway(f, path(f, "x c"), 2);
  CHECK_THROWS_AS(cut(f, ex, 0), NotCuttableError);
  const auto notch = build_hallway(f, path(f, "a"), 3, {}, {path(f, "a'"), EdgePath{}});
  CHECK_THROWS_AS(cut(f, notch, 0), NotCuttableError);
  CHECK(is_indecomposable(f, notch));
  CHECK_FALSE(is_indecomposable(f, h));

  // cutting along parallel point trajectories conserves visible length
  std::mt19937_64 rng(5);
  int split = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto hr = build_hallway(f, EdgePath{0, random_word(rng, 6, 8)}, 3,
                                  {EdgePath{0, random_word(rng, 6, 2)}, EdgePath{}}, {EdgePath{}, EdgePath{0, random_word(rng, 6, 2)}});
    const std::size_t n = hr.rho0().edges.size();
    std::vector<std::size_t> pts;
    for (std::size_t p = 0; p <= n; ++p)
      if (rng() % 3 == 0 && point_trajectory(f, hr, p).survives) pts.push_back(p);
    const auto pieces = split_hallway(f, hr, pts);
    double V = 0.0;
    for (const auto& p : pieces) V += p.visible_length;
    CHECK(V == doctest::Approx(hr.visible_length));
    for (int i = 0; i <= 3; ++i) {
      std::vector<Letter> joined;
      for (const auto& p : pieces) {
        const auto& e = p.slices[static_cast<std::size_t>(i)].edges;
        joined.insert(joined.end(), e.begin(), e.end());
      }
      CHECK(joined == hr.slices[static_cast<std::size_t>(i)].edges);
    }
    split += pts.empty() ? 0 : 1;
  }
  CHECK(split > 50);
}

TEST_CASE("sawtooth") {
  const auto f = load("f6");
  const int d = 3;
  const auto h = smooth_hallway(f, path(f, "d c b a b' d'"), 4);
  const auto pieces = sawtooth(f, h, d);
  REQUIRE_FALSE(pieces.empty());
  for (const auto& p : pieces) {
    for (const auto& s : p.slices) CHECK(count_letter(s, d) == 0);
    CHECK(p.quasi_smooth_bound <= 1.0);
  }
  CHECK_THROWS_AS(sawtooth(f, h, 4), WrongStratumClassError);

  // constant edge: nothing moves
  const auto a = sawtooth(f, smooth_hallway(f, path(f, "a b"), 3), 0);
  REQUIRE(a.size() == 1);
  CHECK(fmt(f, a[0].rho0()) == "b");
  CHECK(a[0].smooth());

  // piece count and visible length bounds on random G_4 hallways
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int D = 1 + static_cast<int>(rng() % 5);
    const auto hr = smooth_hallway(f, EdgePath{0, random_word(rng, 4, 8)}, D);
    const double C = std::max(hr.quasi_smooth_bound, 1.0);
    const auto out = sawtooth(f, hr, d);
    double V = 0.0;
    std::size_t rough = 0;
    for (const auto& p : out) {
      for (const auto& s : p.slices) CHECK(count_letter(s, d) == 0);
      CHECK(p.duration() <= D);
      CHECK(p.quasi_smooth_bound <= 2 * C);
      V += p.visible_length;
      rough += p.smooth() ? 0 : 1;
    }
    CHECK(static_cast<double>(rough) <= 2 * C * D);
    CHECK(V <= hr.visible_length + (2 * C * D) * (2 * C * D) + 1e-9);
  }
}

TEST_CASE("carving subhallways") {
  const auto f = load("f6");
  const double T = longest_lower_run(f, 5);
  const auto h = smooth_hallway(f, path(f, "x c a a y"), 3);
  const auto fan = carve_subhallways(f, h, 5, 3.0);
  int from_zero = 0;
  for (const auto* side : {&fan.smooth, &fan.cut})
    for (const auto& el : *side) {
      CHECK(f.height(el.hallway.rho0().edges) < 5);
      CHECK(el.hallway.quasi_smooth_bound <= h.quasi_smooth_bound + T);
      if (el.start_slice == 0) {
        ++from_zero;
        CHECK(fmt(f, el.hallway.rho0()) == "c a a");
      }
      // fan slices sit inside their host slices
      for (int i = 0; i < el.hallway.duration(); ++i) {
        const auto& host = h.slices[el.start_slice + static_cast<std::size_t>(i)].edges;
        const auto& s = el.hallway.slices[static_cast<std::size_t>(i)].edges;
        CHECK(std::search(host.begin(), host.end(), s.begin(), s.end()) != host.end());
      }
    }
  CHECK(from_zero == 1);
  CHECK_THROWS_AS(carve_subhallways(f, h, 4, 3.0), WrongStratumClassError);

  // inverse map: H_5 images end in lower material, giving notches
  const auto inv = rose_inverse_map(fixtures::f6());
  const double Tinv = longest_lower_run(inv, 5);
  const double S = 2.0;
  std::mt19937_64 rng(8);
  std::size_t rough = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto hr = smooth_hallway(inv, EdgePath{0, random_word(rng, 6, 6)}, 4);
    const auto fr = carve_subhallways(inv, hr, 5, S);
    for (const auto& el : fr.cut) {
      ++rough;
      CHECK(el.hallway.quasi_smooth_bound <= hr.quasi_smooth_bound + Tinv);
      for (int i = 1; i < el.hallway.duration(); ++i)
        CHECK(path_length(inv.graph(), el.hallway.slices[static_cast<std::size_t>(i)]) >= S);
    }
    for (const auto& el : fr.smooth) CHECK(el.hallway.smooth());
  }
  CHECK(rough > 0);

  // no lower material anywhere: both fans are empty
  const auto fib = parse_graph_map(R"([graph]
vertex v
edge z = v v
edge x = v v
edge y = v v
[map]
z -> z
x -> y
y -> x y
[filtration]
stratum 1 = z
stratum 2 = x y
)");
  const auto empty = carve_subhallways(fib, smooth_hallway(fib, parse_edge_path(fib.graph(), "x y"), 5), 2, 1.0, true);
  CHECK(empty.smooth.empty());
  CHECK(empty.cut.empty());
  CHECK(empty.heuristic);
}
