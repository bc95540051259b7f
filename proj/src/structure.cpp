#include "ttconvex/structure.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ttconvex/cancellation.hpp"
#include "ttconvex/error.hpp"

namespace ttconvex {

const char* to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::bounded_pass:
      return "bounded_pass";
  }
  return "?";
}

bool ValidationReport::ok() const noexcept {
  return std::none_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.status == CheckStatus::fail; });
}

namespace {

std::string edge_name(const GraphMap& f, Letter l) { return format_edge_path(f.graph(), std::vector<Letter>{l}); }

/// Calls visit(path) for every immersed path of 1..max_edges edges that
/// starts at a vertex in `starts` and uses only edges accepted by `use`.
/// `extend(path, next)` may veto a step.
template <typename Use, typename Extend, typename Visit>
void enumerate_paths(const MarkedGraph& g, const std::vector<int>& starts, int max_edges, Use use, Extend extend,
                     Visit visit) {
  std::vector<Letter> path;
  auto dfs = [&](auto&& self, int v) -> void {
    for (const Letter l : g.directions_at(v)) {
      if (!use(l) || (!path.empty() && (l == -path.back() || !extend(path, l)))) continue;
      path.push_back(l);
      visit(EdgePath{g.origin(path.front()), path});
      if (static_cast<int>(path.size()) < max_edges) self(self, g.terminus(l));
      path.pop_back();
    }
  };
  for (const int v : starts) dfs(dfs, v);
}

PropertyCheck check_rtt1(const GraphMap& f) {
  PropertyCheck c{"rtt1", CheckStatus::pass, "first and last edges of f(E) lie in H_r"};
  const auto& fl = f.filtration();
  for (int r = 1; r <= fl.size(); ++r) {
    if (fl.stratum(r).cls != StratumClass::exponential) continue;
    for (const int e : fl.stratum(r).edges) {
      const auto& img = f.edge_image(e);
      if (f.stratum_of(img.front()) != r || f.stratum_of(img.back()) != r) {
        c.status = CheckStatus::fail;
        c.detail = "f(" + f.graph().edge(e).name + ") = " + format_edge_path(f.graph(), img) +
                   " does not start and end in stratum " + std::to_string(r);
        return c;
      }
    }
  }
  return c;
}

PropertyCheck check_rtt2(const GraphMap& f, int max_edges) {
  PropertyCheck c{"rtt2", CheckStatus::pass, "no exponential stratum meets a lower stratum"};
  const auto& fl = f.filtration();
  const auto& g = f.graph();
  std::int64_t tested = 0;
  for (int r = 1; r <= fl.size(); ++r) {
    if (fl.stratum(r).cls != StratumClass::exponential) continue;
    // vertices where H_r meets G_{r-1}
    std::vector<char> top(g.vertex_count(), 0), low(g.vertex_count(), 0);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (fl.edge_stratum[e] > r) continue;
      auto& mark = fl.edge_stratum[e] == r ? top : low;
      mark[static_cast<std::size_t>(g.edge(static_cast<int>(e)).from)] = 1;
      mark[static_cast<std::size_t>(g.edge(static_cast<int>(e)).to)] = 1;
    }
    std::vector<int> ends;
    for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v)
      if (top[static_cast<std::size_t>(v)] && low[static_cast<std::size_t>(v)]) ends.push_back(v);
    if (ends.empty()) continue;
    bool failed = false;
    enumerate_paths(
        g, ends, max_edges, [&](Letter l) { return f.stratum_of(l) < r; }, [](const auto&, Letter) { return true; },
        [&](const EdgePath& p) {
          if (failed) return;
          const int end = path_end(g, p);
          if (!top[static_cast<std::size_t>(end)] || !low[static_cast<std::size_t>(end)]) return;
          ++tested;
          if (map_path(f, p).empty()) {
            failed = true;
            c.status = CheckStatus::fail;
            c.detail = "path " + format_edge_path(g, p.edges) + " in G_" + std::to_string(r - 1) +
                       " has trivial image";
          }
        });
    if (failed) return c;
  }
  if (tested > 0) {
    c.status = CheckStatus::bounded_pass;
    c.detail = std::to_string(tested) + " paths of at most " + std::to_string(max_edges) + " edges";
  }
  return c;
}

PropertyCheck check_rtt3(const GraphMap& f, const LegalityTable& t, int max_edges) {
  PropertyCheck c{"rtt3", CheckStatus::pass, "no exponential strata"};
  const auto& fl = f.filtration();
  const auto& g = f.graph();
  std::vector<int> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  std::int64_t tested = 0;
  for (int r = 1; r <= fl.size(); ++r) {
    if (fl.stratum(r).cls != StratumClass::exponential) continue;
    bool failed = false;
    enumerate_paths(
        g, all, max_edges, [&](Letter l) { return f.stratum_of(l) <= r; },
        [&](const std::vector<Letter>& p, Letter next) {
          const Letter prev = p.back();
          return !((f.stratum_of(prev) == r || f.stratum_of(next) == r) && t.illegal_junction(prev, next));
        },
        [&](const EdgePath& p) {
          if (failed || f.height(p.edges) != r) return;
          ++tested;
          if (!r_stats(f, t, map_path(f, p).edges, r).r_legal) {
            failed = true;
            c.status = CheckStatus::fail;
            c.detail = "r-legal path " + format_edge_path(g, p.edges) + " has an r-illegal image";
          }
        });
    if (failed) return c;
  }
  if (tested > 0) {
    c.status = CheckStatus::bounded_pass;
    c.detail = std::to_string(tested) + " legal paths of at most " + std::to_string(max_edges) + " edges";
  }
  return c;
}

PropertyCheck check_improved1(const GraphMap& f, const LegalityTable& t) {
  PropertyCheck c{"ttimproved1", CheckStatus::pass, "no zero strata"};
  const auto& fl = f.filtration();
  const auto& g = f.graph();
  auto fail = [&](std::string why) {
    c.status = CheckStatus::fail;
    c.detail = std::move(why);
    return c;
  };
  for (int r = 1; r <= fl.size(); ++r) {
    const Stratum& s = fl.stratum(r);
    if (s.cls != StratumClass::zero) continue;
    c.detail = "zero strata are forests under exponential strata with immersive restriction";
    const std::string name = "stratum " + std::to_string(r);
    if (r == fl.size() || fl.stratum(r + 1).cls != StratumClass::exponential)
      return fail(name + " is zero but H_" + std::to_string(r + 1) + " is not exponential");
    // components are trees
    std::vector<int> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      return v;
    };
    for (const int e : s.edges) {
      const int a = find(g.edge(e).from), b = find(g.edge(e).to);
      if (a == b) return fail(name + " contains a cycle through " + g.edge(e).name);
      parent[static_cast<std::size_t>(a)] = b;
    }
    // f restricted to H_r is an immersion: distinct directions keep distinct first edges
    std::vector<Letter> dirs;
    for (const int e : s.edges) {
      dirs.push_back(positive_letter(e));
      dirs.push_back(-positive_letter(e));
    }
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i + 1; j < dirs.size(); ++j)
        if (g.origin(dirs[i]) == g.origin(dirs[j]) && t.df(dirs[i]) == t.df(dirs[j]))
          return fail(name + ": f folds " + edge_name(f, dirs[i]) + " and " + edge_name(f, dirs[j]));
  }
  return c;
}

PropertyCheck check_improved2(const GraphMap& f) {
  PropertyCheck c{"ttimproved2", CheckStatus::pass, "f(v) is fixed for every vertex"};
  for (int v = 0; v < static_cast<int>(f.graph().vertex_count()); ++v) {
    const int w = f.map_vertex(v);
    if (f.map_vertex(w) != w) {
      c.status = CheckStatus::fail;
      c.detail = "f(" + f.graph().vertex_name(v) + ") = " + f.graph().vertex_name(w) + " is not fixed";
      return c;
    }
  }
  return c;
}

PropertyCheck check_improved3(const GraphMap& f, const NielsenCatalog& cat) {
  PropertyCheck c{"ttimproved3", CheckStatus::pass, "at most one indivisible Nielsen path per exponential stratum"};
  const auto& fl = f.filtration();
  bool any = false;
  for (int r = 1; r <= fl.size(); ++r) {
    if (fl.stratum(r).cls != StratumClass::exponential) continue;
    any = true;
    int n = 0;
    for (const auto* p : cat.of_height(r)) n += p->period == 1;
    if (n > 1) {
      c.status = CheckStatus::fail;
      c.detail = std::to_string(n) + " indivisible Nielsen paths of height " + std::to_string(r);
      return c;
    }
  }
  if (any && !cat.complete) {
    c.status = CheckStatus::bounded_pass;
    c.detail += " (search bounded at " + std::to_string(cat.bounds.max_edges) + " edges)";
  }
  return c;
}

PropertyCheck check_improved4(const GraphMap& f) {
  PropertyCheck c{"ttimproved4", CheckStatus::pass, "polynomial strata are single edges with f(E) = E u"};
  const auto& fl = f.filtration();
  const auto& g = f.graph();
  for (int r = 1; r <= fl.size(); ++r) {
    const Stratum& s = fl.stratum(r);
    if (s.cls != StratumClass::polynomial) continue;
    auto fail = [&](const std::string& why) {
      c.status = CheckStatus::fail;
      c.detail = "stratum " + std::to_string(r) + ": " + why;
      return c;
    };
    if (!s.single_edge()) return fail("more than one edge");
    const int e = s.edges.front();
    const Letter E = positive_letter(e);
    const auto& img = f.edge_image(e);
    if (img.front() != E) return fail("f(" + g.edge(e).name + ") does not start with " + g.edge(e).name);
    const int base = g.terminus(E);
    if (g.terminus(img.back()) != base) return fail("u is not closed");
    for (std::size_t i = 1; i < img.size(); ++i)
      if (f.stratum_of(img[i]) >= r) return fail("u leaves G_" + std::to_string(r - 1));
    if (f.map_vertex(base) != base) return fail("base point of u is not fixed");
  }
  return c;
}

}  // namespace

ValidationReport validate_improved(const GraphMap& f, const ValidationBounds& bounds, const NielsenCatalog* catalog) {
  const LegalityTable t(f);
  NielsenCatalog own;
  if (!catalog) {
    own = find_nielsen(f, bounds.nielsen);
    catalog = &own;
  }
  ValidationReport rep;
  rep.checks.push_back(check_rtt1(f));
  rep.checks.push_back(check_rtt2(f, bounds.path_edges));
  rep.checks.push_back(check_rtt3(f, t, bounds.path_edges));
  rep.checks.push_back(check_improved1(f, t));
  rep.checks.push_back(check_improved2(f));
  rep.checks.push_back(check_improved3(f, *catalog));
  rep.checks.push_back(check_improved4(f));
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<Piece> split_poly_path(const GraphMap& f, const EdgePath& rho, int r) {
  if (rho.empty() || f.height(rho.edges) > r)
    throw PathError("path height " + std::to_string(f.height(rho.edges)) + " exceeds " + std::to_string(r));
  const Stratum& s = f.filtration().stratum(r);
  if (s.cls != StratumClass::polynomial || !s.single_edge())
    throw WrongStratumClassError("splitting needs a single-edge polynomial stratum");
  const Letter E = positive_letter(s.edges.front());
  const auto& g = f.graph();
  std::vector<Piece> out;
  std::size_t begin = 0;
  auto cut = [&](std::size_t end) {
    if (end <= begin) return;
    Piece p;
    p.path = EdgePath{g.origin(rho.edges[begin]), {rho.edges.begin() + static_cast<std::ptrdiff_t>(begin),
                                                   rho.edges.begin() + static_cast<std::ptrdiff_t>(end)}};
    const bool basic = std::any_of(p.path.edges.begin(), p.path.edges.end(), [&](Letter l) { return l == E || l == -E; });
    p.kind = basic ? PieceKind::basic : PieceKind::lower;
    out.push_back(std::move(p));
    begin = end;
  };
  for (std::size_t i = 0; i < rho.edges.size(); ++i) {
    if (rho.edges[i] == E) cut(i);
    if (rho.edges[i] == -E) cut(i + 1);
  }
  cut(rho.edges.size());
  return out;
}

Eigenray eigenray(const GraphMap& f, int edge, int n_blocks, const ResourceLimits& limits) {
  const Stratum& s = f.filtration().stratum(f.filtration().edge_stratum.at(static_cast<std::size_t>(edge)));
  if (s.cls != StratumClass::polynomial) throw WrongStratumClassError("eigenrays exist for polynomial strata only");
  auto blocks = eigenray_blocks(f, edge, n_blocks + 1, limits);
  Eigenray ray;
  ray.blocks.assign(std::make_move_iterator(blocks.begin() + 1), std::make_move_iterator(blocks.end()));
  for (const auto& b : ray.blocks) {
    ray.boundaries.push_back(ray.edges.size());
    ray.edges.insert(ray.edges.end(), b.begin(), b.end());
  }
  ray.cancellation_free = is_immersed(f.graph(), ray.edges);
  return ray;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kFast = 1 << 20;
constexpr int kExp = 1 << 21;

int cost_of(const GrowthDegree& d) {
  switch (d.kind) {
    case GrowthKind::polynomial:
      return d.degree;
    case GrowthKind::fast:
      return kFast;
    case GrowthKind::exponential:
      return kExp;
  }
  return kExp;
}

/// min over decompositions of `w` into single edges and catalogued Nielsen
/// paths of the max piece cost.
int cover_cost(std::span<const Letter> w, const std::vector<GrowthDegree>& deg,
               const std::vector<std::vector<Letter>>& nielsen) {
  const std::size_t n = w.size();
  std::vector<int> best(n + 1, kExp + 1);
  best[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] > kExp) continue;
    const int c = std::max(best[i], cost_of(deg[static_cast<std::size_t>(symbol_index(w[i]))]));
    best[i + 1] = std::min(best[i + 1], c);
    for (const auto& p : nielsen)
      if (i + p.size() <= n && std::equal(p.begin(), p.end(), w.begin() + static_cast<std::ptrdiff_t>(i)))
        best[i + p.size()] = std::min(best[i + p.size()], best[i]);
  }
  return best[n];
}

/// Subpaths of w whose f_#-orbit repeats within `horizon` steps, so their
/// iterates stay bounded.
std::vector<std::vector<Letter>> bounded_subpaths(const GraphMap& f, std::span<const Letter> w, int horizon) {
  constexpr std::size_t kCap = 20000;
  const auto& g = f.graph();
  std::vector<std::vector<Letter>> out;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j <= w.size(); ++j) {
      EdgePath cur{g.origin(w[i]), {w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j)}};
      std::vector<EdgePath> seen{cur};
      bool bounded = false;
      for (int k = 0; k < horizon && !bounded; ++k) {
        cur = map_path(f, cur);
        if (cur.edges.size() > kCap) break;
        bounded = std::find(seen.begin(), seen.end(), cur) != seen.end();
        seen.push_back(cur);
      }
      if (bounded) out.push_back(seen.front().edges);
    }
  return out;
}

}  // namespace

std::vector<GrowthDegree> growth_degrees(const GraphMap& f, const NielsenCatalog& catalog) {
  const auto& fl = f.filtration();
  std::vector<GrowthDegree> deg(f.edge_count(), GrowthDegree{GrowthKind::exponential, 0, true});
  std::vector<std::vector<Letter>> nielsen;
  for (const auto& np : catalog.paths) {
    nielsen.push_back(np.path.edges);
    nielsen.push_back(inverse(np.path.edges));
  }
  for (int r = 1; r <= fl.size(); ++r) {
    const Stratum& s = fl.stratum(r);
    if (s.cls == StratumClass::exponential) continue;
    for (const int e : s.edges) {
      const auto& img = f.edge_image(e);
      const bool poly = s.cls == StratumClass::polynomial;
      std::span<const Letter> w(img);
      if (poly) {
        if (img.front() != positive_letter(e)) {
          deg[static_cast<std::size_t>(e)] = {GrowthKind::fast, 0, false};
          continue;
        }
        w = w.subspan(1);
      }
      GrowthDegree& d = deg[static_cast<std::size_t>(e)];
      if (w.empty()) {
        d = {GrowthKind::polynomial, 0, true};
        continue;
      }
      auto pieces = nielsen;
      const auto local = bounded_subpaths(f, w, 2 * std::max(1, catalog.bounds.max_period));
      pieces.insert(pieces.end(), local.begin(), local.end());
      const int c = cover_cost(w, deg, pieces);
      bool inputs_certain = true;
      for (const Letter l : w) inputs_certain = inputs_certain && deg[static_cast<std::size_t>(symbol_index(l))].certain;
      if (c < kFast) {
        d = {GrowthKind::polynomial, poly ? c + 1 : c, inputs_certain};
      } else if (c < kExp || poly) {
        d = {GrowthKind::fast, 0, inputs_certain};
      } else {
        d = {GrowthKind::exponential, 0, inputs_certain};
      }
    }
  }
  return deg;
}

std::string format_growth(const GrowthDegree& g) {
  switch (g.kind) {
    case GrowthKind::polynomial:
      return std::to_string(g.degree);
    case GrowthKind::fast:
      return "fast";
    case GrowthKind::exponential:
      return "exponential";
  }
  return "?";
}

}  // namespace ttconvex
