#include "ttconvex/graph_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "ttconvex/error.hpp"
#include "ttconvex/spectral.hpp"
#include "ttconvex/text_format.hpp"

namespace ttconvex {

const char* to_string(StratumClass c) noexcept {
  switch (c) {
    case StratumClass::zero:
      return "zero";
    case StratumClass::polynomial:
      return "polynomial";
    case StratumClass::exponential:
      return "exponential";
  }
  return "?";
}

namespace {

constexpr double kUnitTolerance = 1e-9;

int lower_height(const std::vector<Letter>& image, const std::vector<int>& edge_stratum, int below) {
  int h = 0;
  for (const Letter l : image) {
    const int s = edge_stratum[static_cast<std::size_t>(symbol_index(l))];
    if (s < below) h = std::max(h, s);
  }
  return h;
}

}  // namespace

Filtration classify_strata(const MarkedGraph& g, const std::vector<std::vector<Letter>>& edge_images,
                           const std::vector<std::vector<int>>& strata, std::vector<double>& metric) {
  const std::size_t ne = g.edge_count();
  Filtration out;
  out.edge_stratum.assign(ne, 0);
  for (std::size_t r = 0; r < strata.size(); ++r) {
    if (strata[r].empty()) throw FiltrationError("stratum " + std::to_string(r + 1) + " is empty");
    for (const int e : strata[r]) {
      if (e < 0 || static_cast<std::size_t>(e) >= ne) throw FiltrationError("stratum edge out of range");
      if (out.edge_stratum[static_cast<std::size_t>(e)] != 0)
        throw FiltrationError("edge '" + g.edge(e).name + "' is listed in two strata");
      out.edge_stratum[static_cast<std::size_t>(e)] = static_cast<int>(r + 1);
    }
  }
  for (std::size_t e = 0; e < ne; ++e)
    if (out.edge_stratum[e] == 0) throw FiltrationError("edge '" + g.edge(static_cast<int>(e)).name + "' is in no stratum");

  metric = g.lengths();
  for (std::size_t ri = 0; ri < strata.size(); ++ri) {
    const int r = static_cast<int>(ri + 1);
    Stratum s;
    s.edges = strata[ri];
    const auto n = static_cast<Eigen::Index>(s.edges.size());
    s.transition = Eigen::MatrixXi::Zero(n, n);
    std::map<int, Eigen::Index> local;
    for (Eigen::Index i = 0; i < n; ++i) local[s.edges[static_cast<std::size_t>(i)]] = i;
    for (Eigen::Index j = 0; j < n; ++j) {
      const int e = s.edges[static_cast<std::size_t>(j)];
      for (const Letter l : edge_images[static_cast<std::size_t>(e)]) {
        const int t = out.edge_stratum[static_cast<std::size_t>(symbol_index(l))];
        if (t > r)
          throw FiltrationError("f(" + g.edge(e).name + ") crosses stratum " + std::to_string(t) +
                                " above its own stratum " + std::to_string(r) + "; G_r is not invariant");
        if (t == r) ++s.transition(local.at(symbol_index(l)), j);
      }
    }
    if (s.transition.isZero()) {
      s.cls = StratumClass::zero;
    } else if (!irreducible(s.transition)) {
      throw FiltrationError("stratum " + std::to_string(r) +
                            " has a reducible nonzero transition matrix; refine it (see suggest-filtration)");
    } else if (n == 1 && s.transition(0, 0) == 1) {
      s.cls = StratumClass::polynomial;
      s.growth_rate = 1.0;
      const auto& img = edge_images[static_cast<std::size_t>(s.edges[0])];
      if (img.front() == positive_letter(s.edges[0])) s.suffix = std::vector<Letter>(img.begin() + 1, img.end());
    } else {
      const auto pf = perron_frobenius<double>(s.transition);
      s.growth_rate = pf.eigenvalue;
      if (std::abs(pf.eigenvalue - 1.0) < kUnitTolerance) {
        s.cls = StratumClass::polynomial;
        s.growth_rate = 1.0;
      } else {
        s.cls = StratumClass::exponential;
        for (Eigen::Index i = 0; i < n; ++i) metric[static_cast<std::size_t>(s.edges[static_cast<std::size_t>(i)])] = pf.left(i);
      }
    }
    out.strata.push_back(std::move(s));
  }

  // h values
  const int k = out.size();
  for (int r = 1; r <= k; ++r) {
    auto& s = out.strata[static_cast<std::size_t>(r - 1)];
    auto image_height = [&](const std::vector<int>& edges, int below) {
      int h = 0;
      for (const int e : edges) h = std::max(h, lower_height(edge_images[static_cast<std::size_t>(e)], out.edge_stratum, below));
      return h;
    };
    switch (s.cls) {
      case StratumClass::polynomial:
        if (s.constant()) {
          s.h_value = 0;
        } else {
          s.h_value = image_height(s.edges, r);
        }
        break;
      case StratumClass::exponential: {
        const bool below_zero = r >= 2 && out.strata[static_cast<std::size_t>(r - 2)].cls == StratumClass::zero;
        if (below_zero) {
          auto edges = s.edges;
          const auto& z = out.strata[static_cast<std::size_t>(r - 2)].edges;
          edges.insert(edges.end(), z.begin(), z.end());
          const int h = image_height(edges, r - 1);
          s.h_value = h == 0 ? kInfiniteH : h;
          out.strata[static_cast<std::size_t>(r - 2)].h_value = s.h_value;
        } else {
          const int h = image_height(s.edges, r);
          s.h_value = h == 0 ? kInfiniteH : h;
        }
        break;
      }
      case StratumClass::zero:
        s.h_value = image_height(s.edges, r);
        break;
    }
  }
  for (int r = 1; r <= k; ++r) {
    const int h = out.strata[static_cast<std::size_t>(r - 1)].h_value;
    if (h != kInfiniteH) out.leagues[h].push_back(r);
  }
  out.h_order.resize(static_cast<std::size_t>(k));
  std::iota(out.h_order.begin(), out.h_order.end(), 1);
  std::stable_sort(out.h_order.begin(), out.h_order.end(), [&](int a, int b) {
    return out.stratum(a).h_value < out.stratum(b).h_value;
  });
  return out;
}

GraphMap::GraphMap(MarkedGraph graph, std::vector<std::vector<Letter>> edge_images,
                   std::vector<std::vector<int>> strata)
    : graph_(std::move(graph)), edge_images_(std::move(edge_images)) {
  const std::size_t ne = graph_.edge_count();
  if (edge_images_.size() != ne) throw GraphError("every edge needs exactly one image");
  vertex_images_.assign(graph_.vertex_count(), -1);
  auto set_vertex = [&](int v, int image, const std::string& edge) {
    auto& slot = vertex_images_[static_cast<std::size_t>(v)];
    if (slot >= 0 && slot != image)
      throw GraphError("edge images disagree on the image of vertex '" + graph_.vertex_name(v) + "' (at edge " + edge + ")");
    slot = image;
  };
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& img = edge_images_[e];
    const auto& name = graph_.edge(static_cast<int>(e)).name;
    if (img.empty()) throw GraphError("image of edge '" + name + "' is trivial");
    for (const Letter l : img)
      if (l == 0 || static_cast<std::size_t>(symbol_index(l)) >= ne)
        throw GraphError("image of edge '" + name + "' uses an unknown edge");
    if (!is_immersed(graph_, img)) throw GraphError("image of edge '" + name + "' is not an immersed path");
    set_vertex(graph_.edge(static_cast<int>(e)).from, graph_.origin(img.front()), name);
    set_vertex(graph_.edge(static_cast<int>(e)).to, graph_.terminus(img.back()), name);
  }
  std::vector<double> metric;
  filtration_ = classify_strata(graph_, edge_images_, strata, metric);
  for (std::size_t e = 0; e < ne; ++e) graph_.set_length(static_cast<int>(e), metric[e]);
}

std::vector<Letter> GraphMap::image(Letter l) const {
  const auto& img = edge_images_[static_cast<std::size_t>(symbol_index(l))];
  if (l > 0) return img;
  return inverse(img);
}

int GraphMap::height(std::span<const Letter> edges) const {
  int h = 0;
  for (const Letter l : edges) h = std::max(h, stratum_of(l));
  return h;
}

double GraphMap::r_length(std::span<const Letter> edges, int r) const {
  double s = 0.0;
  for (const Letter l : edges)
    if (stratum_of(l) == r) s += graph_.length(l);
  return s;
}

double GraphMap::lipschitz() const {
  double lip = 0.0;
  for (std::size_t e = 0; e < edge_images_.size(); ++e)
    lip = std::max(lip, path_length(graph_, edge_images_[e]) / graph_.length(positive_letter(static_cast<int>(e))));
  return lip;
}

std::int64_t GraphMap::max_image_edges() const {
  std::int64_t m = 0;
  for (const auto& img : edge_images_) m = std::max<std::int64_t>(m, static_cast<std::int64_t>(img.size()));
  return m;
}

std::vector<Letter> map_raw(const GraphMap& f, std::span<const Letter> edges) {
  std::vector<Letter> raw;
  for (const Letter l : edges) {
    const auto& img = f.edge_image(symbol_index(l));
    if (l > 0) {
      raw.insert(raw.end(), img.begin(), img.end());
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) raw.push_back(-*it);
    }
  }
  return raw;
}

EdgePath map_path(const GraphMap& f, const EdgePath& rho, int k, const ResourceLimits& limits) {
  if (k < 0 || k > limits.max_iterations)
    throw ResourceLimitError("k=" + std::to_string(k) + " outside [0, max_iterations]");
  EdgePath cur = rho;
  for (int i = 0; i < k; ++i) {
    // Streaming stack reduction keeps the working set at the tightened size.
    std::vector<Letter> stack;
    for (const Letter l : cur.edges) {
      const auto& img = f.edge_image(symbol_index(l));
      auto push = [&](Letter x) {
        if (!stack.empty() && stack.back() == -x) {
          stack.pop_back();
        } else {
          stack.push_back(x);
          if (static_cast<std::int64_t>(stack.size()) > limits.max_word_length)
            throw ResourceLimitError("path length exceeds max_word_length=" + std::to_string(limits.max_word_length));
        }
      };
      if (l > 0) {
        for (const Letter x : img) push(x);
      } else {
        for (auto it = img.rbegin(); it != img.rend(); ++it) push(-*it);
      }
    }
    cur = EdgePath{f.map_vertex(cur.start), std::move(stack)};
  }
  return cur;
}

Circuit map_circuit(const GraphMap& f, const Circuit& c, int k, const ResourceLimits& limits) {
  Circuit cur = c;
  for (int i = 0; i < k; ++i) {
    if (cur.edge_count() == 0) return cur;
    const auto p = map_path(f, EdgePath{f.graph().origin(cur.edges().front()),
                                        std::vector<Letter>(cur.edges().begin(), cur.edges().end())},
                            1, limits);
    cur = Circuit(f.graph(), p.edges);
  }
  return cur;
}

std::vector<std::vector<int>> suggest_filtration(const MarkedGraph& g,
                                                 const std::vector<std::vector<Letter>>& edge_images) {
  const int n = static_cast<int>(g.edge_count());
  // arc j -> i when f(E_j) crosses E_i
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (const Letter l : edge_images.at(static_cast<std::size_t>(j))) adj[static_cast<std::size_t>(j)].push_back(symbol_index(l));
    auto& a = adj[static_cast<std::size_t>(j)];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  // Tarjan
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0), comp(static_cast<std::size_t>(n), -1);
  std::vector<bool> on(static_cast<std::size_t>(n), false);
  std::vector<int> st;
  int counter = 0, ncomp = 0;
  std::function<void(int)> dfs = [&](int v) {
    const auto uv = static_cast<std::size_t>(v);
    index[uv] = low[uv] = counter++;
    st.push_back(v);
    on[uv] = true;
    for (const int w : adj[uv]) {
      const auto uw = static_cast<std::size_t>(w);
      if (index[uw] < 0) {
        dfs(w);
        low[uv] = std::min(low[uv], low[uw]);
      } else if (on[uw]) {
        low[uv] = std::min(low[uv], index[uw]);
      }
    }
    if (low[uv] == index[uv]) {
      int w;
      do {
        w = st.back();
        st.pop_back();
        on[static_cast<std::size_t>(w)] = false;
        comp[static_cast<std::size_t>(w)] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[static_cast<std::size_t>(v)] < 0) dfs(v);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(ncomp));
  for (int v = 0; v < n; ++v) members[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);
  // component c depends on d when some edge of c maps across d; d must come first
  std::vector<std::vector<int>> deps(static_cast<std::size_t>(ncomp));
  for (int v = 0; v < n; ++v)
    for (const int w : adj[static_cast<std::size_t>(v)]) {
      const int c = comp[static_cast<std::size_t>(v)], d = comp[static_cast<std::size_t>(w)];
      if (c != d) deps[static_cast<std::size_t>(c)].push_back(d);
    }
  std::vector<int> pending(static_cast<std::size_t>(ncomp), 0);
  std::vector<std::vector<int>> users(static_cast<std::size_t>(ncomp));
  for (int c = 0; c < ncomp; ++c) {
    auto& d = deps[static_cast<std::size_t>(c)];
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    pending[static_cast<std::size_t>(c)] = static_cast<int>(d.size());
    for (const int x : d) users[static_cast<std::size_t>(x)].push_back(c);
  }
  auto key = [&](int c) { return members[static_cast<std::size_t>(c)].front(); };
  std::vector<std::vector<int>> out;
  std::vector<int> ready;
  for (int c = 0; c < ncomp; ++c)
    if (pending[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end(), [&](int a, int b) { return key(a) < key(b); });
    const int c = *it;
    ready.erase(it);
    out.push_back(members[static_cast<std::size_t>(c)]);
    for (const int u : users[static_cast<std::size_t>(c)])
      if (--pending[static_cast<std::size_t>(u)] == 0) ready.push_back(u);
  }
  return out;
}

GraphMap rose_map(const Automorphism& phi, std::optional<std::vector<std::vector<int>>> strata) {
  auto g = MarkedGraph::rose(phi.alphabet());
  std::vector<std::vector<Letter>> images;
  for (const auto& w : phi.images()) {
    if (w.empty()) throw GraphError("generator image is trivial; not an automorphism");
    images.emplace_back(w.letters().begin(), w.letters().end());
  }
  auto s = strata ? std::move(*strata) : suggest_filtration(g, images);
  return GraphMap(std::move(g), std::move(images), std::move(s));
}

GraphMap rose_inverse_map(const Automorphism& phi) { return rose_map(phi.inverse()); }

namespace {

std::vector<std::vector<int>> parse_filtration(const TextSection& sec, const Alphabet& edges) {
  std::vector<std::vector<int>> strata;
  for (const auto& line : sec.lines) {
    std::string lhs, rhs;
    if (!split_pair(line.text, "=", lhs, rhs)) throw ParseError(located(sec, line, "expected 'stratum N = edges'"));
    const auto head = split_ws(lhs);
    if (head.size() != 2 || head[0] != "stratum") throw ParseError(located(sec, line, "expected 'stratum N = edges'"));
    if (head[1] != std::to_string(strata.size() + 1))
      throw ParseError(located(sec, line, "strata must be numbered 1, 2, ... in ascending order"));
    std::vector<int> s;
    for (const auto& name : split_ws(rhs)) {
      const int e = edges.find(name);
      if (e < 0) throw ParseError(located(sec, line, "unknown edge '" + name + "'"));
      s.push_back(e);
    }
    if (s.empty()) throw ParseError(located(sec, line, "empty stratum"));
    strata.push_back(std::move(s));
  }
  return strata;
}

}  // namespace

GraphMap parse_graph_map(std::string_view text) {
  const auto sections = split_sections(text);
  const TextSection* gs = find_section(sections, "graph");
  const TextSection* ms = find_section(sections, "map");
  if (!gs) throw ParseError("missing [graph] section");
  if (!ms) throw ParseError("missing [map] section");
  std::vector<std::string> vertices;
  struct PendingEdge {
    std::string name, from, to;
    std::optional<double> length;
    TextSection::Line line;
  };
  std::vector<PendingEdge> pending;
  for (const auto& line : gs->lines) {
    const auto tok = split_ws(line.text);
    if (tok[0] == "vertex") {
      if (tok.size() < 2) throw ParseError(located(*gs, line, "expected 'vertex NAME'"));
      vertices.insert(vertices.end(), tok.begin() + 1, tok.end());
    } else if (tok[0] == "edge") {
      // edge NAME = FROM TO [length X]
      if (tok.size() != 5 && tok.size() != 7) throw ParseError(located(*gs, line, "expected 'edge NAME = FROM TO [length X]'"));
      if (tok[2] != "=") throw ParseError(located(*gs, line, "expected '=' after edge name"));
      PendingEdge pe{tok[1], tok[3], tok[4], std::nullopt, line};
      if (tok.size() == 7) {
        if (tok[5] != "length") throw ParseError(located(*gs, line, "expected 'length X'"));
        try {
          std::size_t used = 0;
          pe.length = std::stod(tok[6], &used);
          if (used != tok[6].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ParseError(located(*gs, line, "malformed length '" + tok[6] + "'"));
        }
      }
      pending.push_back(std::move(pe));
    } else {
      throw ParseError(located(*gs, line, "expected 'vertex' or 'edge'"));
    }
  }
  std::vector<Edge> edges;
  std::vector<double> lengths;
  for (const auto& pe : pending) {
    auto vid = [&](const std::string& v) {
      const auto it = std::find(vertices.begin(), vertices.end(), v);
      if (it == vertices.end()) throw ParseError(located(*gs, pe.line, "unknown vertex '" + v + "'"));
      return static_cast<int>(it - vertices.begin());
    };
    edges.push_back({pe.name, vid(pe.from), vid(pe.to)});
    lengths.push_back(pe.length.value_or(1.0));
  }
  MarkedGraph g;
  try {
    g = MarkedGraph(vertices, edges, lengths);
  } catch (const GraphError& e) {
    throw ParseError(std::string("[graph]: ") + e.what());
  }
  const auto& alpha = g.edge_alphabet();
  std::vector<std::optional<std::vector<Letter>>> images(g.edge_count());
  for (const auto& line : ms->lines) {
    std::string lhs, rhs;
    if (!split_pair(line.text, "->", lhs, rhs)) throw ParseError(located(*ms, line, "expected 'E -> path'"));
    const int e = alpha.find(lhs);
    if (e < 0) throw ParseError(located(*ms, line, "unknown edge '" + lhs + "'"));
    if (images[static_cast<std::size_t>(e)]) throw ParseError(located(*ms, line, "duplicate image for '" + lhs + "'"));
    try {
      auto raw = parse_letters(alpha, rhs);
      check_incident(g, raw);
      images[static_cast<std::size_t>(e)] = std::move(raw);
    } catch (const Error& err) {
      throw ParseError(located(*ms, line, err.what()));
    }
  }
  std::vector<std::vector<Letter>> imgs;
  for (std::size_t e = 0; e < images.size(); ++e) {
    if (!images[e]) throw ParseError("[map]: missing image for edge '" + g.edge(static_cast<int>(e)).name + "'");
    imgs.push_back(*images[e]);
  }
  std::vector<std::vector<int>> strata;
  if (const TextSection* fs = find_section(sections, "filtration")) {
    strata = parse_filtration(*fs, alpha);
  } else {
    strata = suggest_filtration(g, imgs);
  }
  return GraphMap(std::move(g), std::move(imgs), std::move(strata));
}

GraphMap parse_rose_map(std::string_view text) {
  const auto phi = parse_automorphism(text);
  const auto sections = split_sections(text);
  std::optional<std::vector<std::vector<int>>> strata;
  if (const TextSection* fs = find_section(sections, "filtration")) strata = parse_filtration(*fs, phi.alphabet());
  return rose_map(phi, std::move(strata));
}

GraphMap parse_any_map(std::string_view text) {
  const auto sections = split_sections(text);
  if (find_section(sections, "graph")) return parse_graph_map(text);
  return parse_rose_map(text);
}

std::string format_graph_map(const GraphMap& f) {
  std::ostringstream out;
  out << std::setprecision(10);
  const auto& g = f.graph();
  out << "[graph]\n";
  for (const auto& v : g.vertices()) out << "vertex " << v << '\n';
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(static_cast<int>(e));
    out << "edge " << ed.name << " = " << g.vertex_name(ed.from) << ' ' << g.vertex_name(ed.to) << " length "
        << g.lengths()[e] << '\n';
  }
  out << "\n[map]\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    out << g.edge(static_cast<int>(e)).name << " -> " << format_edge_path(g, f.edge_image(static_cast<int>(e))) << '\n';
  out << "\n[filtration]\n";
  for (int r = 1; r <= f.filtration().size(); ++r) {
    out << "stratum " << r << " =";
    for (const int e : f.filtration().stratum(r).edges) out << ' ' << g.edge(e).name;
    out << '\n';
  }
  return out.str();
}

}  // namespace ttconvex
