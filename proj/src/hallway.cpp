#include "ttconvex/hallway.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <stdexcept>

#include "ttconvex/error.hpp"
#include "ttconvex/text_format.hpp"

namespace ttconvex {

namespace {

double notch_length(const MarkedGraph& g, const std::vector<EdgePath>& ps) {
  double m = 0.0;
  for (const auto& p : ps) m = std::max(m, path_length(g, p));
  return m;
}

void finish_stats(const MarkedGraph& g, Hallway& h) {
  h.visible_length = path_length(g, h.slices.front()) + path_length(g, h.slices.back());
  for (std::size_t i = 0; i < h.mu.size(); ++i) h.visible_length += path_length(g, h.mu[i]) + path_length(g, h.nu[i]);
  h.quasi_smooth_bound = std::max(notch_length(g, h.mu), notch_length(g, h.nu));
  h.max_slice_length = 0.0;
  h.argmax = 0;
  for (std::size_t i = 0; i < h.slices.size(); ++i) {
    const double l = path_length(g, h.slices[i]);
    if (l > h.max_slice_length) {
      h.max_slice_length = l;
      h.argmax = i;
    }
  }
}

/// Raw mu_i f(rho_{i-1}) nu_i with the offset of every image block.
struct RawStep {
  std::vector<Letter> raw;
  /// offset[j] = raw index where f(edge j) starts; offset[n] = end of f(rho).
  std::vector<std::size_t> offset;
};

RawStep raw_step(const GraphMap& f, const Hallway& h, int i) {
  RawStep s;
  const auto& prev = h.slices[static_cast<std::size_t>(i - 1)].edges;
  const bool notched = i < h.duration() && !h.mu.empty();
  if (notched) s.raw = h.mu[static_cast<std::size_t>(i - 1)].edges;
  for (const Letter l : prev) {
    s.offset.push_back(s.raw.size());
    const auto img = f.image(l);
    s.raw.insert(s.raw.end(), img.begin(), img.end());
  }
  s.offset.push_back(s.raw.size());
  if (notched) {
    const auto& n = h.nu[static_cast<std::size_t>(i - 1)].edges;
    s.raw.insert(s.raw.end(), n.begin(), n.end());
  }
  return s;
}

TrackedTightening tighten_step(const Hallway& h, const RawStep& s, int i) {
  auto tt = tighten_tracked(s.raw);
  if (tt.result != h.slices[static_cast<std::size_t>(i)].edges)
    throw std::logic_error("hallway slice does not match its recurrence");
  return tt;
}

int vertex_at(const MarkedGraph& g, const EdgePath& p, std::size_t pos) {
  if (pos < p.edges.size()) return g.origin(p.edges[pos]);
  return path_end(g, p);
}

EdgePath subpath(const MarkedGraph& g, const EdgePath& p, std::size_t b, std::size_t e) {
  return {vertex_at(g, p, b),
          {p.edges.begin() + static_cast<std::ptrdiff_t>(b), p.edges.begin() + static_cast<std::ptrdiff_t>(e)}};
}

EdgePath rose_path(const std::vector<Letter>& letters) {
  const auto w = ReducedWord::reduce(letters);
  return EdgePath{0, {w.letters().begin(), w.letters().end()}};
}

}  // namespace

bool Hallway::smooth() const noexcept {
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (!mu[i].empty() || !nu[i].empty()) return false;
  return true;
}

Hallway build_hallway(const GraphMap& f, const EdgePath& rho0, int k, std::vector<EdgePath> mu,
                      std::vector<EdgePath> nu, const ResourceLimits& limits) {
  limits.validate();
  const auto& g = f.graph();
  if (k < 0) throw HallwayError("negative duration");
  if (k > limits.max_iterations) throw ResourceLimitError("duration exceeds max_iterations");
  const std::size_t steps = k > 0 ? static_cast<std::size_t>(k - 1) : 0;
  if (mu.empty()) mu.assign(steps, EdgePath{});
  if (nu.empty()) nu.assign(steps, EdgePath{});
  if (mu.size() != steps || nu.size() != steps) throw HallwayError("expected k-1 notches on each side");
  if (!is_immersed(g, rho0.edges)) throw HallwayError("initial slice is not an immersed path");

  Hallway h;
  h.slices.push_back(rho0);
  for (int i = 1; i <= k; ++i) {
    const EdgePath& prev = h.slices.back();
    const int from = f.map_vertex(prev.start);
    const int to = f.map_vertex(path_end(g, prev));
    std::vector<Letter> raw;
    int start = from;
    if (i < k) {
      EdgePath& m = mu[static_cast<std::size_t>(i - 1)];
      EdgePath& n = nu[static_cast<std::size_t>(i - 1)];
      check_incident(g, m.edges);
      check_incident(g, n.edges);
      if (m.empty()) m.start = from;
      if (n.empty()) n.start = to;
      if (path_end(g, m) != from) throw HallwayError("mu_" + std::to_string(i) + " does not end at f(start of slice)");
      if (n.start != to) throw HallwayError("nu_" + std::to_string(i) + " does not start at f(end of slice)");
      start = m.start;
      raw = m.edges;
    }
    const auto img = map_raw(f, prev.edges);
    raw.insert(raw.end(), img.begin(), img.end());
    if (i < k) raw.insert(raw.end(), nu[static_cast<std::size_t>(i - 1)].edges.begin(),
                          nu[static_cast<std::size_t>(i - 1)].edges.end());
    if (static_cast<std::int64_t>(raw.size()) > limits.max_word_length)
      throw ResourceLimitError("hallway slice exceeds max_word_length");
    h.slices.push_back(tighten(g, start, raw));
  }
  h.mu = std::move(mu);
  h.nu = std::move(nu);
  finish_stats(g, h);
  return h;
}

Hallway smooth_hallway(const GraphMap& f, const EdgePath& rho0, int N, const ResourceLimits& limits) {
  return build_hallway(f, rho0, N, {}, {}, limits);
}

Hallway parse_group_hallway(const GraphMap& rose, std::string_view word, const std::string& stable,
                            const ResourceLimits& limits) {
  const auto& g = rose.graph();
  if (g.vertex_count() != 1) throw HallwayError("group form needs a rose");
  if (g.edge_alphabet().find(stable) >= 0) throw HallwayError("stable letter '" + stable + "' is a generator");
  const Alphabet ext = g.edge_alphabet().extended(stable);
  const Letter t = positive_letter(static_cast<int>(g.edge_count()));
  const auto w = ReducedWord::reduce(parse_letters(ext, word));

  std::vector<std::vector<Letter>> segs(1);
  std::vector<int> signs;
  for (const Letter l : w.letters()) {
    if (l == t || l == -t) {
      signs.push_back(l == t ? 1 : -1);
      segs.emplace_back();
    } else {
      segs.back().push_back(l);
    }
  }
  const std::size_t k = signs.size() / 2;
  if (k == 0 || signs.size() % 2 != 0) throw HallwayError("expected t^-k ... t^k with k >= 1");
  for (std::size_t j = 0; j < signs.size(); ++j)
    if (signs[j] != (j < k ? -1 : 1)) throw HallwayError("all t^-1 must precede all t");
  if (!segs.front().empty()) throw HallwayError("word must start with t^-1");

  std::vector<EdgePath> mu(k - 1), nu(k - 1);
  for (std::size_t j = 1; j < k; ++j) mu[k - j - 1] = rose_path(segs[j]);
  for (std::size_t j = 1; j < k; ++j) nu[j - 1] = rose_path(segs[k + j]);
  auto h = build_hallway(rose, rose_path(segs[k]), static_cast<int>(k), mu, nu, limits);
  if (h.slices.back().edges != inverse(segs[2 * k]))
    throw HallwayError("word is not trivial in the mapping torus: expected last segment " +
                       format_edge_path(g, inverse(h.slices.back().edges)));
  return h;
}

Hallway parse_hallway(const GraphMap& f, std::string_view text, const ResourceLimits& limits) {
  const auto sections = split_sections(text);
  const TextSection* sec = find_section(sections, "hallway");
  if (!sec) throw ParseError("missing [hallway] section");
  std::optional<std::string> rho0, word;
  std::string stable = "t";
  int k = 0;
  std::map<int, std::string> mus, nus;
  for (const auto& line : sec->lines) {
    std::string lhs, rhs;
    if (!split_pair(line.text, "=", lhs, rhs)) throw ParseError(located(*sec, line, "expected 'key = value'"));
    lhs = trim(lhs);
    rhs = trim(rhs);
    try {
      if (lhs == "rho0") {
        rho0 = rhs;
      } else if (lhs == "word") {
        word = rhs;
      } else if (lhs == "stable") {
        stable = rhs;
      } else if (lhs == "duration") {
        k = std::stoi(rhs);
      } else if (lhs.starts_with("mu_")) {
        mus[std::stoi(lhs.substr(3))] = rhs;
      } else if (lhs.starts_with("nu_")) {
        nus[std::stoi(lhs.substr(3))] = rhs;
      } else {
        throw ParseError(located(*sec, line, "unknown key '" + lhs + "'"));
      }
    } catch (const std::logic_error&) {
      throw ParseError(located(*sec, line, "bad number"));
    }
  }
  if (word) return parse_group_hallway(f, *word, stable, limits);
  if (!rho0) throw ParseError("[hallway] needs rho0 or word");
  const auto& g = f.graph();
  std::vector<EdgePath> mu, nu;
  if (!mus.empty() || !nus.empty()) {
    if (k < 1) throw HallwayError("notches need duration >= 2");
    mu.assign(static_cast<std::size_t>(k - 1), EdgePath{});
    nu = mu;
    auto fill = [&](const std::map<int, std::string>& src, std::vector<EdgePath>& dst) {
      for (const auto& [i, s] : src) {
        if (i < 1 || i >= k) throw HallwayError("notch index out of range: " + std::to_string(i));
        dst[static_cast<std::size_t>(i - 1)] = parse_edge_path(g, s);
      }
    };
    fill(mus, mu);
    fill(nus, nu);
  }
  return build_hallway(f, parse_edge_path(g, *rho0), k, mu, nu, limits);
}

// ---------------------------------------------------------------------------

Marking propagate_markings(const GraphMap& f, const Hallway& h) {
  const auto& fl = f.filtration();
  Marking m;
  auto heights = [&](const EdgePath& p) {
    std::vector<int> out;
    for (const Letter l : p.edges) out.push_back(f.stratum_of(l));
    return out;
  };
  m.marks.push_back(heights(h.slices.front()));
  for (int i = 1; i <= h.duration(); ++i) {
    const auto s = raw_step(f, h, i);
    const auto tt = tighten_step(h, s, i);
    std::vector<int> raw(s.raw.size());
    for (std::size_t x = 0; x < s.offset.front(); ++x) raw[x] = f.stratum_of(s.raw[x]);
    const auto& prev = h.slices[static_cast<std::size_t>(i - 1)].edges;
    for (std::size_t j = 0; j < prev.size(); ++j) {
      const int r = f.stratum_of(prev[j]);
      const int mark = m.marks.back()[j];
      const bool zero = fl.stratum(mark).cls == StratumClass::zero;
      for (std::size_t x = s.offset[j]; x < s.offset[j + 1]; ++x)
        raw[x] = (f.stratum_of(s.raw[x]) == r || zero) ? mark : r;
    }
    for (std::size_t x = s.offset.back(); x < s.raw.size(); ++x) raw[x] = f.stratum_of(s.raw[x]);
    std::vector<int> out(tt.result.size());
    for (std::size_t x = 0; x < raw.size(); ++x)
      if (tt.position[x] >= 0) out[static_cast<std::size_t>(tt.position[x])] = raw[x];
    m.marks.push_back(std::move(out));
  }
  return m;
}

const char* to_string(MarkClass c) noexcept {
  switch (c) {
    case MarkClass::constant:
      return "constant";
    case MarkClass::linear:
      return "linear";
    case MarkClass::superlinear:
      return "superlinear";
    case MarkClass::exponential:
      return "exponential";
    case MarkClass::zero:
      return "zero";
    case MarkClass::unknown:
      return "unknown";
  }
  return "?";
}

std::vector<MarkClass> stratum_classes(const GraphMap& f, const std::vector<GrowthDegree>& growth) {
  const auto& fl = f.filtration();
  std::vector<MarkClass> out(static_cast<std::size_t>(fl.size()) + 1, MarkClass::unknown);
  for (int r = 1; r <= fl.size(); ++r) {
    const Stratum& s = fl.stratum(r);
    MarkClass& c = out[static_cast<std::size_t>(r)];
    if (s.cls == StratumClass::zero) {
      c = MarkClass::zero;
    } else if (s.cls == StratumClass::exponential) {
      c = MarkClass::exponential;
    } else {
      bool certain = true, fast = false;
      int deg = 0;
      for (const int e : s.edges) {
        const auto& gd = growth.at(static_cast<std::size_t>(e));
        certain = certain && gd.certain;
        fast = fast || gd.kind != GrowthKind::polynomial;
        deg = std::max(deg, gd.degree);
      }
      if (!certain && (fast || deg > 0)) c = MarkClass::unknown;
      else if (fast || deg >= 2) c = MarkClass::superlinear;
      else c = deg == 1 ? MarkClass::linear : MarkClass::constant;
    }
  }
  return out;
}

std::vector<std::array<std::int64_t, 6>> class_counts(const Marking& m, const std::vector<MarkClass>& classes) {
  std::vector<std::array<std::int64_t, 6>> out;
  for (const auto& slice : m.marks) {
    std::array<std::int64_t, 6> c{};
    for (const int s : slice) ++c[static_cast<std::size_t>(classes.at(static_cast<std::size_t>(s)))];
    out.push_back(c);
  }
  return out;
}

std::optional<std::int64_t> nonlin_count(const Marking& m, std::size_t slice, const std::vector<MarkClass>& classes) {
  std::int64_t n = 0;
  for (const int s : m.marks.at(slice)) {
    const MarkClass c = classes.at(static_cast<std::size_t>(s));
    if (c == MarkClass::unknown) return std::nullopt;
    if (c != MarkClass::linear) ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------

Trajectory point_trajectory(const GraphMap& f, const Hallway& h, std::size_t p) {
  if (p > h.rho0().edges.size()) throw PathError("point outside rho_0");
  Trajectory t;
  t.start = p;
  t.positions.push_back(static_cast<std::int64_t>(p));
  for (int i = 1; i <= h.duration(); ++i) {
    const auto s = raw_step(f, h, i);
    const auto tt = tighten_step(h, s, i);
    const std::size_t b = s.offset[static_cast<std::size_t>(t.positions.back())];
    std::int64_t pos = 0;
    for (std::size_t x = 0; x < b; ++x) {
      if (tt.partner[x] >= static_cast<std::int64_t>(b)) return t;
      if (tt.position[x] >= 0) ++pos;
    }
    t.positions.push_back(pos);
  }
  t.survives = true;
  return t;
}

Trajectory edge_trajectory(const GraphMap& f, const Hallway& h, std::size_t p) {
  if (p >= h.rho0().edges.size()) throw PathError("edge outside rho_0");
  const Letter l = h.rho0().edges[p];
  const auto img = f.image(l);
  Trajectory t;
  t.start = p;
  t.positions.push_back(static_cast<std::int64_t>(p));
  const bool front = img.front() == l;
  if (!front && img.back() != l) return t;
  for (int i = 1; i <= h.duration(); ++i) {
    const auto s = raw_step(f, h, i);
    const auto tt = tighten_step(h, s, i);
    const auto j = static_cast<std::size_t>(t.positions.back());
    const std::size_t x = front ? s.offset[j] : s.offset[j + 1] - 1;
    if (tt.position[x] < 0) return t;
    t.positions.push_back(tt.position[x]);
  }
  t.survives = true;
  return t;
}

std::vector<Hallway> split_hallway(const GraphMap& f, const Hallway& h, std::vector<std::size_t> points,
                                   const ResourceLimits& limits) {
  const auto& g = f.graph();
  const std::size_t n = h.rho0().edges.size();
  std::ranges::sort(points);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  // outer bounds follow the ends of the slices, notches included
  std::vector<std::vector<std::int64_t>> bounds{std::vector<std::int64_t>(h.slices.size(), 0)};
  for (const std::size_t p : points) {
    if (p > n) throw PathError("point outside rho_0");
    const auto t = point_trajectory(f, h, p);
    if (!t.survives) throw NotCuttableError("point trajectory at " + std::to_string(p) + " does not survive");
    bounds.push_back(t.positions);
  }
  bounds.emplace_back();
  for (const auto& sl : h.slices) bounds.back().push_back(static_cast<std::int64_t>(sl.edges.size()));

  std::vector<Hallway> out;
  const int k = h.duration();
  for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
    const auto& lo = bounds[j];
    const auto& hi = bounds[j + 1];
    const EdgePath rho0 = subpath(g, h.rho0(), static_cast<std::size_t>(lo[0]), static_cast<std::size_t>(hi[0]));
    auto piece = build_hallway(f, rho0, k, j == 0 ? h.mu : std::vector<EdgePath>{},
                               j + 2 == bounds.size() ? h.nu : std::vector<EdgePath>{}, limits);
    for (int i = 0; i <= k; ++i) {
      const auto& whole = h.slices[static_cast<std::size_t>(i)];
      const auto expect = subpath(g, whole, static_cast<std::size_t>(lo[static_cast<std::size_t>(i)]),
                                  static_cast<std::size_t>(hi[static_cast<std::size_t>(i)]));
      if (piece.slices[static_cast<std::size_t>(i)].edges != expect.edges)
        throw std::logic_error("split piece does not match the parent slices");
    }
    out.push_back(std::move(piece));
  }
  return out;
}

Cut cut(const GraphMap& f, const Hallway& h, std::size_t edge, const ResourceLimits& limits) {
  const auto t = edge_trajectory(f, h, edge);
  if (!t.survives) throw NotCuttableError("edge " + std::to_string(edge) + " cancels within the hallway");
  const Letter l = h.rho0().edges[edge];
  const std::size_t point = f.image(l).front() == l ? edge : edge + 1;
  auto pieces = split_hallway(f, h, {point}, limits);
  Cut c;
  c.length = h.duration();
  c.left = std::move(pieces[0]);
  c.right = std::move(pieces[1]);
  return c;
}

bool is_indecomposable(const GraphMap& f, const Hallway& h) {
  for (std::size_t p = 0; p < h.rho0().edges.size(); ++p)
    if (edge_trajectory(f, h, p).survives) return false;
  return true;
}

std::vector<Hallway> sawtooth(const GraphMap& f, const Hallway& h, int e, const ResourceLimits& limits) {
  const auto& g = f.graph();
  const Stratum& st = f.filtration().stratum(f.stratum_of(positive_letter(e)));
  if (st.cls != StratumClass::polynomial || !st.single_edge() || !st.suffix)
    throw WrongStratumClassError("sawtooth needs a single-edge polynomial stratum");
  const Letter E = positive_letter(e);
  const std::vector<Letter>& u = *st.suffix;

  std::vector<std::size_t> points;
  const auto& r0 = h.rho0().edges;
  for (std::size_t p = 0; p < r0.size(); ++p)
    if (symbol_index(r0[p]) == e && edge_trajectory(f, h, p).survives) points.push_back(r0[p] == E ? p : p + 1);

  std::vector<Hallway> out;
  const int k = h.duration();
  for (auto& piece : split_hallway(f, h, points, limits)) {
    auto all = [&](auto pred) {
      return std::ranges::all_of(piece.slices, [&](const EdgePath& s) { return !s.empty() && pred(s); });
    };
    const bool lead = all([&](const EdgePath& s) { return s.edges.front() == E; });
    const bool trail = all([&](const EdgePath& s) { return s.edges.back() == -E && (!lead || s.edges.size() > 1); });
    if (lead || trail) {
      EdgePath rho0 = piece.rho0();
      if (lead) rho0 = subpath(g, rho0, 1, rho0.edges.size());
      if (trail) rho0 = subpath(g, rho0, 0, rho0.edges.size() - 1);
      std::vector<EdgePath> mu = piece.mu, nu = piece.nu;
      const std::size_t steps = k > 0 ? static_cast<std::size_t>(k - 1) : 0;
      if (lead) mu.assign(steps, EdgePath{g.terminus(E), u});
      if (trail) nu.assign(steps, path_inverse(g, EdgePath{g.terminus(E), u}));
      piece = build_hallway(f, rho0, k, mu, nu, limits);
    }
    const bool trivial = piece.smooth() && std::ranges::all_of(piece.slices, [](const EdgePath& s) { return s.empty(); });
    if (!trivial) out.push_back(std::move(piece));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct LowerRun {
  std::size_t begin = 0, end = 0;
};

std::vector<LowerRun> lower_segments(const GraphMap& f, const EdgePath& p, int r) {
  std::vector<LowerRun> out;
  for (std::size_t i = 0; i < p.edges.size();) {
    if (f.stratum_of(p.edges[i]) >= r) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < p.edges.size() && f.stratum_of(p.edges[j]) < r) ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

struct Link {
  std::size_t prev = SIZE_MAX;  // segment index in the previous slice
  EdgePath mu, nu;
};

}  // namespace

Fan carve_subhallways(const GraphMap& f, const Hallway& h, int r, double S, bool heuristic_thresholds,
                      const ResourceLimits& limits) {
  const auto& g = f.graph();
  if (f.filtration().stratum(r).cls != StratumClass::exponential)
    throw WrongStratumClassError("carving needs an exponential stratum");
  for (const auto& s : h.slices)
    if (f.height(s.edges) > r) throw HallwayError("hallway crosses strata above r");
  for (std::size_t i = 0; i < h.mu.size(); ++i)
    if (f.height(h.mu[i].edges) > r || f.height(h.nu[i].edges) > r) throw HallwayError("notch crosses strata above r");

  const int k = h.duration();
  std::vector<std::vector<LowerRun>> segs;
  for (const auto& s : h.slices) segs.push_back(lower_segments(f, s, r));

  // links[i][j]: how segment j of slice i continues a segment of slice i-1
  std::vector<std::vector<Link>> links(static_cast<std::size_t>(k) + 1);
  links[0].resize(segs[0].size());
  for (int i = 1; i <= k; ++i) {
    const auto& prev = h.slices[static_cast<std::size_t>(i - 1)];
    const auto& cur = h.slices[static_cast<std::size_t>(i)];
    const auto st = raw_step(f, h, i);
    const auto tt = tighten_step(h, st, i);
    auto& li = links[static_cast<std::size_t>(i)];
    li.resize(segs[static_cast<std::size_t>(i)].size());
    std::vector<bool> used(segs[static_cast<std::size_t>(i - 1)].size(), false);
    for (std::size_t pj = 0; pj < segs[static_cast<std::size_t>(i - 1)].size(); ++pj) {
      const LowerRun P = segs[static_cast<std::size_t>(i - 1)][pj];
      const std::size_t lo = st.offset[P.begin], hi = st.offset[P.end];
      std::size_t a = lo, b = hi;
      while (a > 0 && f.stratum_of(st.raw[a - 1]) < r) --a;
      while (b < st.raw.size() && f.stratum_of(st.raw[b]) < r) ++b;
      // the surviving letters of raw[a, b) must form one segment of slice i
      std::int64_t first = -1, last = -1;
      for (std::size_t x = a; x < b; ++x)
        if (tt.position[x] >= 0) {
          if (first < 0) first = tt.position[x];
          last = tt.position[x];
        }
      if (first < 0) continue;
      const auto& cs = segs[static_cast<std::size_t>(i)];
      const auto it = std::ranges::find_if(cs, [&](const LowerRun& s) {
        return s.begin == static_cast<std::size_t>(first) && s.end == static_cast<std::size_t>(last) + 1;
      });
      if (it == cs.end() || used[pj]) continue;
      const EdgePath mu{g.origin(st.raw[a < lo ? a : lo]), {st.raw.begin() + static_cast<std::ptrdiff_t>(a),
                                                            st.raw.begin() + static_cast<std::ptrdiff_t>(lo)}};
      EdgePath nu{0, {st.raw.begin() + static_cast<std::ptrdiff_t>(hi), st.raw.begin() + static_cast<std::ptrdiff_t>(b)}};
      nu.start = nu.empty() ? f.map_vertex(path_end(g, subpath(g, prev, P.begin, P.end))) : g.origin(nu.edges.front());
      std::vector<Letter> whole(st.raw.begin() + static_cast<std::ptrdiff_t>(a), st.raw.begin() + static_cast<std::ptrdiff_t>(b));
      if (tighten_tracked(whole).result != subpath(g, cur, it->begin, it->end).edges) continue;
      used[pj] = true;
      auto& L = li[static_cast<std::size_t>(it - cs.begin())];
      L.prev = pj;
      L.mu = a < lo ? mu : EdgePath{f.map_vertex(vertex_at(g, prev, P.begin)), {}};
      L.nu = nu;
    }
  }

  // chains of linked segments, cut at short interior slices
  std::vector<std::vector<bool>> continued(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) continued[static_cast<std::size_t>(i)].assign(segs[static_cast<std::size_t>(i)].size(), false);
  for (int i = 1; i <= k; ++i)
    for (const auto& L : links[static_cast<std::size_t>(i)])
      if (L.prev != SIZE_MAX) continued[static_cast<std::size_t>(i - 1)][L.prev] = true;

  Fan fan;
  fan.heuristic = heuristic_thresholds;
  auto emit = [&](std::size_t start, const std::vector<std::size_t>& chain) {
    const std::size_t d = chain.size() - 1;
    const auto& s0 = segs[start][chain[0]];
    std::vector<EdgePath> mu, nu;
    for (std::size_t j = 1; j < d; ++j) {
      const auto& L = links[start + j][chain[j]];
      mu.push_back(L.mu);
      nu.push_back(L.nu);
    }
    FanElement el;
    el.start_slice = start;
    el.hallway = build_hallway(f, subpath(g, h.slices[start], s0.begin, s0.end), static_cast<int>(d), mu, nu, limits);
    if (d > 0) {
      const auto& L = links[start + d][chain[d]];
      el.clipped = path_length(g, L.mu) + path_length(g, L.nu);
    }
    (el.hallway.smooth() ? fan.smooth : fan.cut).push_back(std::move(el));
  };
  for (int i0 = 0; i0 <= k; ++i0) {
    const auto i = static_cast<std::size_t>(i0);
    for (std::size_t j = 0; j < segs[i].size(); ++j) {
      if (links[i][j].prev != SIZE_MAX) continue;
      std::size_t start = i;
      std::vector<std::size_t> chain{j};
      std::size_t at = i, idx = j;
      while (at < static_cast<std::size_t>(k) && continued[at][idx]) {
        const auto& next = links[at + 1];
        idx = static_cast<std::size_t>(std::ranges::find_if(next, [&](const Link& L) { return L.prev == idx; }) -
                                       next.begin());
        ++at;
        chain.push_back(idx);
        const bool interior = at < static_cast<std::size_t>(k) && continued[at][idx];
        const auto& sg = segs[at][idx];
        if (interior && path_length(g, subpath(g, h.slices[at], sg.begin, sg.end)) < S) {
          emit(start, chain);
          start = at;
          chain = {idx};
        }
      }
      emit(start, chain);
    }
  }
  return fan;
}

}  // namespace ttconvex
