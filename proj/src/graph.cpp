#include "ttconvex/graph.hpp"

#include <numeric>

#include "ttconvex/error.hpp"

namespace ttconvex {

namespace {

Alphabet names_of(const std::vector<Edge>& edges) {
  std::vector<std::string> names;
  for (const auto& e : edges) names.push_back(e.name);
  return Alphabet(std::move(names));
}

}  // namespace

MarkedGraph::MarkedGraph(std::vector<std::string> vertices, std::vector<Edge> edges, std::vector<double> lengths)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), lengths_(std::move(lengths)) {
  if (vertices_.empty()) throw GraphError("graph has no vertices");
  if (edges_.empty()) throw GraphError("graph has no edges");
  if (lengths_.empty()) lengths_.assign(edges_.size(), 1.0);
  if (lengths_.size() != edges_.size()) throw GraphError("edge length count mismatch");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    if (ed.from < 0 || ed.to < 0 || static_cast<std::size_t>(ed.from) >= vertices_.size() ||
        static_cast<std::size_t>(ed.to) >= vertices_.size())
      throw GraphError("edge '" + ed.name + "' has an endpoint outside the vertex set");
    if (!(lengths_[e] > 0.0)) throw GraphError("edge '" + ed.name + "' must have positive length");
  }
  try {
    alphabet_ = names_of(edges_);
  } catch (const AlphabetError& e) {
    throw GraphError(e.what());
  }
  // connectivity
  std::vector<int> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] =
        parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    return v;
  };
  for (const auto& ed : edges_) parent[static_cast<std::size_t>(find(ed.from))] = find(ed.to);
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (find(static_cast<int>(v)) != find(0)) throw GraphError("graph is not connected");
}

MarkedGraph MarkedGraph::rose(const Alphabet& alphabet) {
  std::vector<Edge> edges;
  for (const auto& n : alphabet.names()) edges.push_back({n, 0, 0});
  return MarkedGraph({"v"}, std::move(edges));
}

void MarkedGraph::set_length(int e, double len) {
  if (!(len > 0.0)) throw GraphError("edge length must be positive");
  lengths_.at(static_cast<std::size_t>(e)) = len;
}

int MarkedGraph::find_vertex(const std::string& name) const noexcept {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<Letter> MarkedGraph::directions_at(int v) const {
  std::vector<Letter> out;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Letter l = positive_letter(static_cast<int>(e));
    if (edges_[e].from == v) out.push_back(l);
    if (edges_[e].to == v) out.push_back(-l);
  }
  return out;
}

double MarkedGraph::volume() const noexcept { return std::accumulate(lengths_.begin(), lengths_.end(), 0.0); }

int path_end(const MarkedGraph& g, const EdgePath& p) { return p.empty() ? p.start : g.terminus(p.edges.back()); }

double path_length(const MarkedGraph& g, std::span<const Letter> edges) {
  double s = 0.0;
  for (const Letter l : edges) s += g.length(l);
  return s;
}

EdgePath path_inverse(const MarkedGraph& g, const EdgePath& p) { return {path_end(g, p), inverse(p.edges)}; }

void check_incident(const MarkedGraph& g, std::span<const Letter> edges) {
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (g.terminus(edges[i - 1]) != g.origin(edges[i]))
      throw PathError("edges " + g.edge_alphabet().token(edges[i - 1]) + " and " +
                      g.edge_alphabet().token(edges[i]) + " are not incident");
}

bool is_immersed(const MarkedGraph& g, std::span<const Letter> edges) {
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (g.terminus(edges[i - 1]) != g.origin(edges[i])) return false;
    if (edges[i] == -edges[i - 1]) return false;
  }
  return true;
}

EdgePath tighten(const MarkedGraph& g, int start, std::span<const Letter> raw) {
  if (!raw.empty() && g.origin(raw.front()) != start) throw PathError("path does not start at its base vertex");
  check_incident(g, raw);
  EdgePath p{start, std::vector<Letter>(raw.begin(), raw.end())};
  reduce_in_place(p.edges);
  return p;
}

EdgePath concat(const MarkedGraph& g, const EdgePath& a, const EdgePath& b) {
  if (path_end(g, a) != b.start) throw PathError("paths are not concatenable");
  std::vector<Letter> raw = a.edges;
  raw.insert(raw.end(), b.edges.begin(), b.edges.end());
  reduce_in_place(raw);
  return {a.start, std::move(raw)};
}

TrackedTightening tighten_tracked(std::span<const Letter> raw) {
  TrackedTightening t;
  t.position.assign(raw.size(), -1);
  t.partner.assign(raw.size(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!stack.empty() && raw[stack.back()] == -raw[i]) {
      t.partner[stack.back()] = static_cast<std::int64_t>(i);
      t.partner[i] = static_cast<std::int64_t>(stack.back());
      stack.pop_back();
    } else {
      stack.push_back(i);
    }
  }
  t.result.reserve(stack.size());
  for (std::size_t k = 0; k < stack.size(); ++k) {
    t.position[stack[k]] = static_cast<std::int64_t>(k);
    t.result.push_back(raw[stack[k]]);
  }
  return t;
}

std::vector<Letter> cyclically_tighten(std::span<const Letter> s) {
  std::size_t lo = 0, hi = s.size();
  while (hi - lo >= 2 && s[lo] == -s[hi - 1]) {
    ++lo;
    --hi;
  }
  return {s.begin() + static_cast<std::ptrdiff_t>(lo), s.begin() + static_cast<std::ptrdiff_t>(hi)};
}

Circuit::Circuit(const MarkedGraph& g, std::span<const Letter> closed_edges) {
  check_incident(g, closed_edges);
  if (!closed_edges.empty() && g.terminus(closed_edges.back()) != g.origin(closed_edges.front()))
    throw PathError("circuit is not closed");
  std::vector<Letter> raw(closed_edges.begin(), closed_edges.end());
  reduce_in_place(raw);
  auto core = cyclically_tighten(raw);
  const std::size_t k = least_rotation(core);
  edges_.assign(core.begin() + static_cast<std::ptrdiff_t>(k), core.end());
  edges_.insert(edges_.end(), core.begin(), core.begin() + static_cast<std::ptrdiff_t>(k));
}

EdgePath parse_edge_path(const MarkedGraph& g, std::string_view text, int start_vertex) {
  auto raw = parse_letters(g.edge_alphabet(), text);
  int start = start_vertex;
  if (!raw.empty()) {
    if (start >= 0 && g.origin(raw.front()) != start) throw PathError("path does not start at the given vertex");
    start = g.origin(raw.front());
  }
  if (start < 0) start = 0;
  return tighten(g, start, raw);
}

std::string format_edge_path(const MarkedGraph& g, std::span<const Letter> edges) {
  return format_letters(g.edge_alphabet(), edges);
}

}  // namespace ttconvex
