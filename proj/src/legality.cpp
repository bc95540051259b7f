#include "ttconvex/legality.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "ttconvex/cancellation.hpp"
#include "ttconvex/error.hpp"

namespace ttconvex {

namespace {

Letter letter_of(std::size_t idx) {
  const Letter l = positive_letter(static_cast<int>(idx / 2));
  return idx % 2 ? -l : l;
}

}  // namespace

LegalityTable::LegalityTable(const GraphMap& f) : graph_(&f.graph()) {
  dirs_ = 2 * f.edge_count();
  df_.resize(dirs_);
  for (std::size_t i = 0; i < dirs_; ++i) df_[i] = f.image(letter_of(i)).front();
  illegal_.assign(dirs_ * dirs_, 0);
  const std::size_t cap = dirs_ * dirs_ + 1;
  for (std::size_t i = 0; i < dirs_; ++i) {
    for (std::size_t j = i; j < dirs_; ++j) {
      Letter a = letter_of(i), b = letter_of(j);
      if (graph_->origin(a) != graph_->origin(b)) continue;
      bool bad = false;
      for (std::size_t step = 0; step < cap; ++step) {
        if (a == b) {
          bad = true;
          break;
        }
        a = df_[index(a)];
        b = df_[index(b)];
      }
      illegal_[i * dirs_ + j] = illegal_[j * dirs_ + i] = bad ? 1 : 0;
    }
  }
}

std::vector<Turn> LegalityTable::turns() const {
  std::vector<Turn> out;
  for (std::size_t i = 0; i < dirs_; ++i)
    for (std::size_t j = i; j < dirs_; ++j) {
      const Letter a = letter_of(i), b = letter_of(j);
      if (graph_->origin(a) == graph_->origin(b)) out.push_back(Turn::make(a, b));
    }
  return out;
}

int LegalityTable::nondegenerate_illegal_count() const {
  int n = 0;
  for (const Turn t : turns()) n += !t.degenerate() && illegal(t);
  return n;
}

std::vector<std::size_t> r_illegal_turns(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges,
                                         int r, bool closed) {
  std::vector<std::size_t> out;
  const std::size_t n = edges.size();
  if (n == 0) return out;
  auto check = [&](std::size_t pos, Letter prev, Letter next) {
    if ((f.stratum_of(prev) == r || f.stratum_of(next) == r) && t.illegal_junction(prev, next)) out.push_back(pos);
  };
  for (std::size_t i = 0; i + 1 < n; ++i) check(i, edges[i], edges[i + 1]);
  if (closed) check(n - 1, edges[n - 1], edges[0]);
  return out;
}

RStats r_stats(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges, int r, bool closed) {
  RStats s;
  s.r_length = f.r_length(edges, r);
  if (edges.empty()) return s;
  const auto ill = r_illegal_turns(f, t, edges, r, closed);
  s.r_legal = ill.empty();
  const int k = static_cast<int>(ill.size());
  s.legal_segments = closed ? std::max(1, k) : k + 1;
  return s;
}

std::vector<Segment> legal_segments(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges, int r) {
  std::vector<Segment> out;
  if (edges.empty()) return out;
  std::size_t begin = 0;
  auto close = [&](std::size_t end) {
    out.push_back({begin, end, f.r_length(edges.subspan(begin, end - begin), r)});
    begin = end;
  };
  for (const std::size_t p : r_illegal_turns(f, t, edges, r)) close(p + 1);
  close(edges.size());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<const NielsenPath*> NielsenCatalog::of_height(int r) const {
  std::vector<const NielsenPath*> out;
  for (const auto& p : paths)
    if (p.height == r) out.push_back(&p);
  return out;
}

bool NielsenCatalog::has_closed(int r) const {
  return std::any_of(paths.begin(), paths.end(), [r](const NielsenPath& p) { return p.height == r && p.closed; });
}

int nielsen_period(const GraphMap& f, const EdgePath& rho, int max_period, const ResourceLimits& limits) {
  if (rho.empty()) return 0;
  EdgePath cur = rho;
  for (int q = 1; q <= max_period; ++q) {
    cur = map_path(f, cur, 1, limits);
    if (cur == rho) return q;
  }
  return 0;
}

namespace {

struct NielsenSearch {
  const GraphMap& f;
  const NielsenBounds& bounds;
  const ResourceLimits& limits;
  NielsenCatalog& catalog;
  std::set<std::pair<int, std::vector<Letter>>> seen;
  std::vector<std::vector<Letter>> power_images;
  std::int64_t slack = 0;
  int q = 1;
  bool out_of_budget = false;

  bool allowed(Letter l) const { return bounds.max_height <= 0 || f.stratum_of(l) <= bounds.max_height; }

  void record(const EdgePath& p) {
    EdgePath inv = path_inverse(f.graph(), p);
    const auto key_a = std::make_pair(p.start, p.edges);
    const auto key_b = std::make_pair(inv.start, inv.edges);
    // prefer the orientation that reads positive letters first
    auto rank = [](const std::pair<int, std::vector<Letter>>& k) {
      std::vector<Letter> r;
      for (const Letter l : k.second) r.push_back(l > 0 ? 2 * l : -2 * l + 1);
      return std::make_pair(r, k.first);
    };
    const auto& key = rank(key_b) < rank(key_a) ? key_b : key_a;
    if (!seen.insert(key).second) return;
    NielsenPath np;
    np.path = EdgePath{key.first, key.second};
    np.period = nielsen_period(f, np.path, q, limits);
    np.height = f.height(np.path.edges);
    np.closed = path_end(f.graph(), np.path) == np.path.start;
    catalog.paths.push_back(std::move(np));
  }

  void dfs(EdgePath& sigma, const std::vector<Letter>& img) {
    if (++catalog.nodes > bounds.node_budget) {
      out_of_budget = true;
      return;
    }
    const auto n = static_cast<std::int64_t>(sigma.edges.size());
    const auto m = static_cast<std::int64_t>(img.size());
    if (n > 0) {
      if (img == sigma.edges) {
        record(sigma);
        return;
      }
      const std::int64_t stable = m - slack;
      for (std::int64_t j = 0; j < std::min(n, stable); ++j)
        if (img[static_cast<std::size_t>(j)] != sigma.edges[static_cast<std::size_t>(j)]) return;
    }
    if (n >= bounds.max_edges) {
      catalog.complete = false;
      return;
    }
    const int v = path_end(f.graph(), sigma);
    std::optional<Letter> forced;
    if (n > 0 && m - slack > n) forced = img[static_cast<std::size_t>(n)];
    for (const Letter l : f.graph().directions_at(v)) {
      if (out_of_budget) return;
      if (!allowed(l)) continue;
      if (n > 0 && l == -sigma.edges.back()) continue;
      if (forced && l != *forced) continue;
      std::vector<Letter> next = img;
      const auto& add = power_images[static_cast<std::size_t>(symbol_index(l))];
      if (l > 0) {
        for (const Letter x : add) {
          if (!next.empty() && next.back() == -x) next.pop_back(); else next.push_back(x);
        }
      } else {
        for (auto it = add.rbegin(); it != add.rend(); ++it) {
          const Letter x = -*it;
          if (!next.empty() && next.back() == -x) next.pop_back(); else next.push_back(x);
        }
      }
      if (static_cast<std::int64_t>(next.size()) > limits.max_word_length) continue;
      sigma.edges.push_back(l);
      dfs(sigma, next);
      sigma.edges.pop_back();
    }
  }
};

}  // namespace

NielsenCatalog find_nielsen(const GraphMap& f, const NielsenBounds& bounds, const ResourceLimits& limits) {
  if (bounds.max_edges <= 0 || bounds.max_period <= 0 || bounds.node_budget <= 0)
    throw ConfigError("Nielsen search bounds must be positive");
  NielsenCatalog catalog;
  catalog.bounds = bounds;
  NielsenSearch s{f, bounds, limits, catalog, {}, {}, 0, 1, false};
  const auto& g = f.graph();
  for (int q = 1; q <= bounds.max_period; ++q) {
    s.q = q;
    s.power_images.clear();
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const Letter l = positive_letter(static_cast<int>(e));
      s.power_images.push_back(map_path(f, EdgePath{g.origin(l), {l}}, q, limits).edges);
    }
    const auto mc = max_cancellation(g, s.power_images, 3);
    s.slack = mc.edges / 2 + 1;  // one side of the cancellation plus a margin
    catalog.slack.push_back(s.slack);
    for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
      int w = v;
      for (int i = 0; i < q; ++i) w = f.map_vertex(w);
      if (w != v) continue;
      EdgePath sigma{v, {}};
      s.dfs(sigma, {});
      if (s.out_of_budget) break;
    }
    if (s.out_of_budget) {
      catalog.complete = false;
      break;
    }
  }
  std::sort(catalog.paths.begin(), catalog.paths.end(), [](const NielsenPath& a, const NielsenPath& b) {
    if (a.path.edges.size() != b.path.edges.size()) return a.path.edges.size() < b.path.edges.size();
    return std::tie(a.path.start, a.path.edges) < std::tie(b.path.start, b.path.edges);
  });
  std::size_t single = 0;
  for (const auto& p : catalog.paths) single += p.path.edges.size() == 1;
  catalog.saturated = single == g.edge_count();
  return catalog;
}

namespace {

/// Marks edge positions covered by occurrences of any path (or its inverse).
std::vector<char> coverage(const MarkedGraph& g, std::span<const Letter> edges,
                           const std::vector<const NielsenPath*>& paths) {
  std::vector<char> covered(edges.size(), 0);
  for (const NielsenPath* np : paths) {
    for (const auto& pat : {np->path.edges, inverse(np->path.edges)}) {
      if (pat.empty() || pat.size() > edges.size()) continue;
      for (std::size_t i = 0; i + pat.size() <= edges.size(); ++i)
        if (std::equal(pat.begin(), pat.end(), edges.begin() + static_cast<std::ptrdiff_t>(i)))
          std::fill(covered.begin() + static_cast<std::ptrdiff_t>(i),
                    covered.begin() + static_cast<std::ptrdiff_t>(i + pat.size()), 1);
    }
  }
  (void)g;
  return covered;
}

/// True if `edges` is a concatenation of catalogued Nielsen paths of height r
/// (or inverses) and edges of G_{r-1}.
bool nielsen_or_lower(const GraphMap& f, std::span<const Letter> edges, int r,
                      const std::vector<const NielsenPath*>& paths) {
  const std::size_t n = edges.size();
  std::vector<char> reach(n + 1, 0);
  reach[0] = 1;
  std::vector<std::vector<Letter>> pats;
  for (const NielsenPath* np : paths) {
    pats.push_back(np->path.edges);
    pats.push_back(inverse(np->path.edges));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!reach[i]) continue;
    if (f.stratum_of(edges[i]) < r) reach[i + 1] = 1;
    for (const auto& p : pats)
      if (i + p.size() <= n && std::equal(p.begin(), p.end(), edges.begin() + static_cast<std::ptrdiff_t>(i)))
        reach[i + p.size()] = 1;
  }
  return reach[n] != 0;
}

}  // namespace

bool is_nielsen_concatenation(const GraphMap& f, std::span<const Letter> edges, int r, const NielsenCatalog& catalog) {
  return nielsen_or_lower(f, edges, r, catalog.of_height(r));
}

NCount N_count(const GraphMap& f, const LegalityTable& t, std::span<const Letter> edges, int r,
               const NielsenCatalog& catalog) {
  NCount out;
  out.exact = catalog.complete;
  const auto segs = legal_segments(f, t, edges, r);
  if (!catalog.has_closed(r)) {
    out.value = static_cast<int>(segs.size());
    return out;
  }
  const auto covered = coverage(f.graph(), edges, catalog.of_height(r));
  for (const auto& s : segs) {
    bool overlaps = false;
    for (std::size_t i = s.begin; i < s.end && !overlaps; ++i) overlaps = covered[i] != 0;
    out.value += overlaps ? 0 : 1;
  }
  return out;
}

const char* to_string(TrichotomyCase c) noexcept {
  switch (c) {
    case TrichotomyCase::long_legal:
      return "long_legal";
    case TrichotomyCase::fewer_segments:
      return "fewer_segments";
    case TrichotomyCase::pre_nielsen:
      return "pre_nielsen";
    case TrichotomyCase::unknown:
      return "unknown";
  }
  return "?";
}

TrichotomyResult trichotomy(const GraphMap& f, const LegalityTable& t, const EdgePath& rho, int r, double L, int M,
                            const NielsenCatalog& catalog, const ResourceLimits& limits) {
  if (f.filtration().stratum(r).cls != StratumClass::exponential)
    throw WrongStratumClassError("trichotomy needs an exponential stratum");
  TrichotomyResult out;
  out.M = M;
  const auto img = map_path(f, rho, M, limits);
  for (const auto& s : legal_segments(f, t, img.edges, r)) {
    if (s.r_length > L) {
      out.which = TrichotomyCase::long_legal;
      out.segment = s;
      return out;
    }
  }
  out.n_before = r_stats(f, t, rho.edges, r).legal_segments;
  out.n_after = r_stats(f, t, img.edges, r).legal_segments;
  if (out.n_after < out.n_before) {
    out.which = TrichotomyCase::fewer_segments;
    return out;
  }
  const auto ill = r_illegal_turns(f, t, rho.edges, r);
  const std::size_t n = rho.edges.size();
  std::vector<std::size_t> begins{0}, ends{n};
  for (std::size_t k = 0; k < std::min<std::size_t>(2, ill.size()); ++k) begins.push_back(ill[k] + 1);
  for (std::size_t k = 0; k < std::min<std::size_t>(2, ill.size()); ++k) ends.push_back(ill[ill.size() - 1 - k] + 1);
  const auto paths = catalog.of_height(r);
  const auto& g = f.graph();
  auto short_legal = [&](std::size_t b, std::size_t e) {
    if (b >= e) return true;
    const auto sub = std::span<const Letter>(rho.edges).subspan(b, e - b);
    if (r_illegal_turns(f, t, sub, r).size() > 1) return false;
    for (const auto& s : legal_segments(f, t, sub, r))
      if (s.r_length > L) return false;
    return true;
  };
  for (const std::size_t b : begins) {
    for (const std::size_t e : ends) {
      if (b > e) continue;
      if (!short_legal(0, b) || !short_legal(e, n)) continue;
      const int start = b < n ? g.origin(rho.edges[b]) : path_end(g, rho);
      EdgePath mid{start, std::vector<Letter>(rho.edges.begin() + static_cast<std::ptrdiff_t>(b),
                                              rho.edges.begin() + static_cast<std::ptrdiff_t>(e))};
      const auto mid_img = map_path(f, mid, M, limits);
      if (nielsen_or_lower(f, mid_img.edges, r, paths)) {
        out.which = TrichotomyCase::pre_nielsen;
        out.cut_begin = b;
        out.cut_end = e;
        return out;
      }
    }
  }
  return out;
}

MSelection select_M(const GraphMap& f, const LegalityTable& t, int r, double L, const std::vector<EdgePath>& corpus,
                    const NielsenCatalog& catalog, int max_M, const ResourceLimits& limits) {
  MSelection out;
  out.corpus_size = corpus.size();
  for (int M = 1; M <= max_M; ++M) {
    std::size_t unknown = 0;
    try {
      for (const auto& p : corpus)
        if (trichotomy(f, t, p, r, L, M, catalog, limits).which == TrichotomyCase::unknown) ++unknown;
    } catch (const ResourceLimitError&) {
      out.unknown_at_max = corpus.size();
      return out;
    }
    out.unknown_at_max = unknown;
    if (unknown == 0) {
      out.M = M;
      return out;
    }
  }
  return out;
}

std::vector<EdgePath> random_height_paths(const GraphMap& f, int r, std::size_t count, int max_edges,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& g = f.graph();
  std::vector<Letter> top;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (f.filtration().edge_stratum[e] == r) top.push_back(positive_letter(static_cast<int>(e)));
  if (top.empty()) throw PathError("stratum has no edges");
  std::vector<EdgePath> out;
  std::uniform_int_distribution<int> len_dist(1, std::max(1, max_edges));
  while (out.size() < count) {
    const int len = len_dist(rng);
    // seed the walk with an H_r edge at a random position, then grow both ways
    Letter e0 = top[rng() % top.size()];
    if (rng() % 2) e0 = -e0;
    std::vector<Letter> path{e0};
    int stuck = 0;
    while (static_cast<int>(path.size()) < len && stuck < 2) {
      const bool forward = rng() % 2;
      const int v = forward ? g.terminus(path.back()) : g.origin(path.front());
      std::vector<Letter> options;
      for (const Letter l : g.directions_at(v)) {
        if (f.stratum_of(l) > r) continue;
        if (forward && l == -path.back()) continue;
        if (!forward && -l == -path.front()) continue;
        options.push_back(l);
      }
      if (options.empty()) {
        ++stuck;
        continue;
      }
      const Letter l = options[rng() % options.size()];
      if (forward) {
        path.push_back(l);
      } else {
        path.insert(path.begin(), -l);
      }
    }
    out.push_back(EdgePath{g.origin(path.front()), std::move(path)});
  }
  return out;
}

FastPolyResult fastpoly_exponent(const GraphMap& f, const LegalityTable& t, const std::vector<int>& fast_edges,
                                 const std::vector<double>& critical, const ResourceLimits& limits) {
  FastPolyResult out;
  if (fast_edges.empty()) return out;
  out.applicable = true;
  const auto& fl = f.filtration();
  auto long_legal = [&](const std::vector<Letter>& img, int below) {
    for (int s = 1; s < below; ++s) {
      if (fl.stratum(s).cls != StratumClass::exponential) continue;
      const double crit = critical.at(static_cast<std::size_t>(s));
      std::size_t i = 0;
      while (i < img.size()) {
        if (f.stratum_of(img[i]) > s) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < img.size() && f.stratum_of(img[j]) <= s) ++j;
        const auto run = std::span<const Letter>(img).subspan(i, j - i);
        for (const auto& seg : legal_segments(f, t, run, s))
          if (seg.r_length > crit) return true;
        i = j;
      }
    }
    return false;
  };
  const auto& g = f.graph();
  for (int k = 1; k <= limits.max_iterations; ++k) {
    bool all = true;
    try {
      for (const int e : fast_edges) {
        const Letter l = positive_letter(e);
        const auto img = map_path(f, EdgePath{g.origin(l), {l}}, k, limits);
        if (!long_legal(img.edges, f.stratum_of(l))) {
          all = false;
          break;
        }
      }
    } catch (const ResourceLimitError&) {
      return out;
    }
    if (all) {
      out.k0 = k;
      return out;
    }
  }
  return out;
}

}  // namespace ttconvex
