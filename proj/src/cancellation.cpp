#include "ttconvex/cancellation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ttconvex/error.hpp"

namespace ttconvex {

namespace {

void push_reduced(std::vector<Letter>& stack, Letter x) {
  if (!stack.empty() && stack.back() == -x) stack.pop_back(); else stack.push_back(x);
}

void push_image(std::vector<Letter>& stack, const std::vector<Letter>& img, Letter l) {
  if (l > 0) {
    for (const Letter x : img) push_reduced(stack, x);
  } else {
    for (auto it = img.rbegin(); it != img.rend(); ++it) push_reduced(stack, -*it);
  }
}

struct Entry {
  Letter tag;
  std::size_t img_off, img_len;
  std::size_t path_off, path_len;
};

}  // namespace

MaxCancellation max_cancellation(const MarkedGraph& g, const std::vector<std::vector<Letter>>& images, int B,
                                 std::int64_t path_cap) {
  if (B < 1 || B > 20) throw ConfigError("cancellation depth B must be in 1..20");
  if (images.size() != g.edge_count()) throw GraphError("one image per edge required");
  MaxCancellation best;
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
    std::vector<Letter> img_buf, path_buf;
    std::vector<Entry> entries;
    std::vector<Letter> path;
    std::vector<std::vector<Letter>> stack{{}};
    // iterative DFS over immersed paths from v
    std::vector<std::vector<Letter>> options{g.directions_at(v)};
    std::vector<std::size_t> next{0};
    while (!options.empty()) {
      const std::size_t depth = options.size() - 1;
      if (next[depth] == options[depth].size()) {
        options.pop_back();
        next.pop_back();
        stack.pop_back();
        if (!path.empty()) path.pop_back();
        continue;
      }
      const Letter l = options[depth][next[depth]++];
      path.push_back(l);
      std::vector<Letter> img = stack.back();
      push_image(img, images[static_cast<std::size_t>(symbol_index(l))], l);
      if (++best.paths > path_cap) throw ResourceLimitError("cancellation search exceeded the path cap");
      entries.push_back({path.front(), img_buf.size(), img.size(), path_buf.size(), path.size()});
      img_buf.insert(img_buf.end(), img.begin(), img.end());
      path_buf.insert(path_buf.end(), path.begin(), path.end());
      if (static_cast<int>(path.size()) < B) {
        std::vector<Letter> opts;
        for (const Letter d : g.directions_at(g.terminus(l)))
          if (d != -l) opts.push_back(d);
        options.push_back(std::move(opts));
        next.push_back(0);
        stack.push_back(std::move(img));
      } else {
        path.pop_back();
      }
    }
    auto span_of = [&](const Entry& e) {
      return std::span<const Letter>(img_buf).subspan(e.img_off, e.img_len);
    };
    std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
      const auto x = span_of(a), y = span_of(b);
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    });
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
      const Entry& a = entries[i];
      const Entry& b = entries[i + 1];
      if (a.tag == b.tag) continue;
      const auto x = span_of(a), y = span_of(b);
      std::size_t k = 0;
      double len = 0.0;
      while (k < x.size() && k < y.size() && x[k] == y[k]) len += g.length(x[k++]);
      if (2 * len > best.length || (2 * len == best.length && static_cast<std::int64_t>(2 * k) > best.edges)) {
        best.length = 2 * len;
        best.edges = static_cast<std::int64_t>(2 * k);
        const EdgePath ga{v, {path_buf.begin() + static_cast<std::ptrdiff_t>(a.path_off),
                              path_buf.begin() + static_cast<std::ptrdiff_t>(a.path_off + a.path_len)}};
        best.alpha = path_inverse(g, ga);
        best.beta = EdgePath{v, {path_buf.begin() + static_cast<std::ptrdiff_t>(b.path_off),
                                 path_buf.begin() + static_cast<std::ptrdiff_t>(b.path_off + b.path_len)}};
      }
    }
  }
  return best;
}

namespace {

double lipschitz_in(const MarkedGraph& g, const GraphMap& h) {
  if (h.edge_count() != g.edge_count()) throw ConfigError("inverse map must live on the same graph");
  double lip = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Letter l = positive_letter(static_cast<int>(e));
    lip = std::max(lip, path_length(g, h.edge_image(static_cast<int>(e))) / g.length(l));
  }
  return lip;
}

}  // namespace

BccEstimate bcc_constant(const GraphMap& f, int B, BccMode mode, const GraphMap* inverse, std::int64_t path_cap) {
  if (mode == BccMode::certified && !inverse) throw MissingInverseError("certified BCC needs the inverse map");
  const auto& g = f.graph();
  std::vector<std::vector<Letter>> images;
  for (std::size_t e = 0; e < g.edge_count(); ++e) images.push_back(f.edge_image(static_cast<int>(e)));
  const auto mc = max_cancellation(g, images, B, path_cap);
  BccEstimate out;
  out.B = B;
  out.lower_bound = mc.length;
  out.alpha = mc.alpha;
  out.beta = mc.beta;
  if (inverse) {
    out.upper_bound = f.lipschitz() * (1.0 + 2.0 * lipschitz_in(g, *inverse) * g.volume());
    out.certified = true;
    out.heuristic = false;
    out.selected = *out.upper_bound;
  } else {
    out.selected = 2.0 * out.lower_bound;
  }
  return out;
}

double critical_length(const GraphMap& f, double bcc, int r) {
  const Stratum& s = f.filtration().stratum(r);
  if (s.cls != StratumClass::exponential || !(s.growth_rate > 1.0))
    throw WrongStratumClassError("critical length needs an exponential stratum");
  return 2.0 * bcc / (s.growth_rate - 1.0);
}

double longest_lower_run(const GraphMap& f, int r) {
  const auto& g = f.graph();
  double best = 0.0;
  for (const int e : f.filtration().stratum(r).edges) {
    double run = 0.0;
    for (const Letter l : f.edge_image(e)) {
      if (f.stratum_of(l) < r) {
        run += g.length(l);
        best = std::max(best, run);
      } else {
        run = 0.0;
      }
    }
  }
  return best;
}

Thresholds thresholds(const GraphMap& f, double bcc, int r, const GraphMap* inverse, int exhaustive_edges,
                      std::size_t samples, std::uint64_t seed, const ResourceLimits& limits) {
  if (f.filtration().stratum(r).cls != StratumClass::exponential)
    throw WrongStratumClassError("thresholds need an exponential stratum");
  const auto& g = f.graph();
  Thresholds out;
  out.T = longest_lower_run(f, r);
  const double lf = f.lipschitz();
  out.S = lf * lf * out.T + 1.0;
  if (inverse) {
    out.S = std::max(out.S, lipschitz_in(g, *inverse) * lf * (3.0 * out.T + 2.0 * bcc) + 1.0);
    out.heuristic = false;
  }
  out.check.exhaustive_edges = exhaustive_edges;

  const double T = out.T, S = out.S;
  auto verify = [&](const EdgePath& p) {
    const double len = path_length(g, p);
    if (len >= S) {
      const auto p1 = map_path(f, p, 1, limits);
      const auto p2 = map_path(f, p1, 1, limits);
      if (!(path_length(g, p1) > 3 * T) || !(path_length(g, p2) > 3 * T))
        throw ThresholdError("long path with short image: " + format_edge_path(g, p.edges));
    }
    if (len <= T) {
      if (!(path_length(g, map_path(f, p, 1, limits)) < S))
        throw ThresholdError("short path with long image: " + format_edge_path(g, p.edges));
    }
  };
  auto lower = [&](Letter l) { return f.stratum_of(l) < r; };

  // exhaustive over short paths in G_{r-1}
  std::vector<Letter> path;
  auto dfs = [&](auto&& self, int v) -> void {
    for (const Letter l : g.directions_at(v)) {
      if (!lower(l) || (!path.empty() && l == -path.back())) continue;
      path.push_back(l);
      verify(EdgePath{g.origin(path.front()), path});
      ++out.check.exhaustive;
      if (static_cast<int>(path.size()) < exhaustive_edges) self(self, g.terminus(l));
      path.pop_back();
    }
  };
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) dfs(dfs, v);
  if (out.check.exhaustive == 0) return out;

  std::mt19937_64 rng(seed);
  const int max_len = static_cast<int>(std::min(200.0, std::ceil(2 * S)));
  std::uniform_int_distribution<int> len_dist(1, std::max(1, max_len));
  std::uniform_int_distribution<int> vdist(0, static_cast<int>(g.vertex_count()) - 1);
  std::size_t attempts = 0;
  while (out.check.sampled < static_cast<std::int64_t>(samples) && attempts++ < 20 * samples) {
    const int len = len_dist(rng);
    const int v0 = vdist(rng);
    path.clear();
    int v = v0;
    while (static_cast<int>(path.size()) < len) {
      std::vector<Letter> opts;
      for (const Letter l : g.directions_at(v))
        if (lower(l) && (path.empty() || l != -path.back())) opts.push_back(l);
      if (opts.empty()) break;
      const Letter l = opts[rng() % opts.size()];
      path.push_back(l);
      v = g.terminus(l);
    }
    if (path.empty()) continue;
    verify(EdgePath{v0, path});
    ++out.check.sampled;
  }
  return out;
}

DeltaReport delta_nielsen(const GraphMap& f, const EdgePath& mu, const EdgePath& nu, int k_max,
                          const ResourceLimits& limits) {
  const auto& g = f.graph();
  if (mu.empty() || map_path(f, mu, 1, limits) != mu) throw NotNielsenError("mu is not a period-one Nielsen path");
  if (path_end(g, mu) != nu.start) throw PathError("mu and nu are not concatenable");
  const EdgePath gamma = concat(g, mu, nu);
  DeltaReport out;
  out.delta = path_length(g, gamma) - path_length(g, nu);
  out.within_bound = std::abs(out.delta) <= path_length(g, mu) + 1e-9;
  EdgePath gk = gamma, nk = nu;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      gk = map_path(f, gk, 1, limits);
      nk = map_path(f, nk, 1, limits);
    }
    if (std::abs(path_length(g, gk) - path_length(g, nk) - out.delta) > 1e-9) out.identity_failures.push_back(k);
  }
  return out;
}

std::vector<std::vector<Letter>> eigenray_blocks(const GraphMap& f, int edge, int n, const ResourceLimits& limits) {
  const auto& g = f.graph();
  const Letter E = positive_letter(edge);
  const auto& img = f.edge_image(edge);
  if (img.empty() || img.front() != E) throw WrongStratumClassError("edge image does not start with the edge");
  if (img.size() == 1) throw EmptyRayError("edge has trivial suffix");
  std::vector<std::vector<Letter>> blocks;
  if (n <= 0) return blocks;
  blocks.push_back({E});
  EdgePath u{g.terminus(E), std::vector<Letter>(img.begin() + 1, img.end())};
  while (static_cast<int>(blocks.size()) < n) {
    blocks.push_back(u.edges);
    u = map_path(f, u, 1, limits);
    if (u.empty()) throw EmptyRayError("suffix iterates to a trivial path");
  }
  return blocks;
}

SublemmaReport sublemma_check(const GraphMap& f, int edge_i, int edge_j, int blocks_i, int blocks_j, int k_max,
                              bool superlinear, const ResourceLimits& limits) {
  const auto& g = f.graph();
  for (const int e : {edge_i, edge_j}) {
    const Stratum& s = f.filtration().stratum(f.filtration().edge_stratum.at(static_cast<std::size_t>(e)));
    if (s.cls != StratumClass::polynomial || !s.single_edge())
      throw WrongStratumClassError("sublemma needs single-edge polynomial strata");
  }
  if (blocks_i < 1 || blocks_j < 1) throw PathError("each side needs at least one block");
  // f^k_#(S) is the eigenray prefix with k more blocks
  auto raw_at = [&](int k, std::vector<std::size_t>& sizes_i, std::vector<std::size_t>& sizes_j) {
    const auto left = eigenray_blocks(f, edge_i, blocks_i + k, limits);
    const auto right = eigenray_blocks(f, edge_j, blocks_j + k, limits);
    std::vector<Letter> raw;
    sizes_i.clear();
    sizes_j.clear();
    for (const auto& b : left) {
      raw.insert(raw.end(), b.begin(), b.end());
      sizes_i.push_back(b.size());
    }
    for (auto it = right.rbegin(); it != right.rend(); ++it) {
      const auto inv = inverse(*it);
      raw.insert(raw.end(), inv.begin(), inv.end());
      sizes_j.push_back(it->size());
    }
    return raw;
  };
  std::vector<std::size_t> sizes_i, sizes_j;
  if (!is_immersed(g, raw_at(0, sizes_i, sizes_j))) throw PathError("S_i S_j^-1 is not an immersed path");

  SublemmaReport out;
  for (int k = 0; k <= k_max; ++k) {
    const auto tt = tighten_tracked(raw_at(k, sizes_i, sizes_j));
    SublemmaStep step{k, 0, 0};
    std::size_t pos = 0;
    auto gone = [&](std::size_t len) {
      bool all = true;
      for (std::size_t i = 0; i < len; ++i) all = all && tt.position[pos + i] < 0;
      pos += len;
      return all;
    };
    // block 0 is the edge itself; only blocks of the ray count
    for (std::size_t b = 0; b < sizes_i.size(); ++b) step.lost_i += gone(sizes_i[b]) && b > 0;
    // the right side appears in reverse block order
    for (std::size_t p = 0; p < sizes_j.size(); ++p) step.lost_j += gone(sizes_j[p]) && p + 1 < sizes_j.size();
    out.steps.push_back(step);
    if (step.lost_i > 0 && step.lost_j > 0) out.both_sides = true;
  }
  out.violation = out.both_sides && superlinear;
  return out;
}

}  // namespace ttconvex
