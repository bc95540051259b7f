#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ttconvex/automorphism.hpp"
#include "ttconvex/cancellation.hpp"
#include "ttconvex/convexity.hpp"
#include "ttconvex/error.hpp"
#include "ttconvex/fixtures.hpp"
#include "ttconvex/graph_map.hpp"
#include "ttconvex/hallway.hpp"
#include "ttconvex/legality.hpp"
#include "ttconvex/structure.hpp"
#include "ttconvex/text_format.hpp"

namespace ttconvex::cli {

using json = nlohmann::ordered_json;

double round10(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::strtod(buf, nullptr);
}

namespace {

json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round10(x);
}

struct RunConfig {
  std::string input;
  std::string fixture;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::int64_t max_length = 10'000'000;
  int max_iterations = 64;
  // Nielsen search (p_N is the period bound, B_N the edge bound)
  int nielsen_edges = 12;
  int nielsen_period = 6;
  int bcc_B = 4;
};

struct Input {
  std::string name;
  std::optional<Automorphism> phi;
  std::optional<GraphMap> f;
  std::optional<GraphMap> inverse;
};


Input load(const RunConfig& cfg) {
  if (cfg.input.empty() == cfg.fixture.empty()) throw ConfigError("give exactly one of --input and --fixture");
  Input in;
  std::string text;
  if (!cfg.fixture.empty()) {
    text = fixtures::text(cfg.fixture);
    in.name = cfg.fixture;
  } else {
    try {
      text = read_file(cfg.input);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    in.name = cfg.input;
  }
  const auto sections = split_sections(text);
  if (find_section(sections, "automorphism")) {
    in.phi = parse_automorphism(text);
    in.f = parse_rose_map(text);
    if (in.phi->has_inverse()) in.inverse = rose_inverse_map(*in.phi);
  } else {
    in.f = parse_graph_map(text);
  }
  return in;
}

ResourceLimits limits_of(const RunConfig& cfg) {
  ResourceLimits l;
  l.max_word_length = cfg.max_length;
  l.max_iterations = cfg.max_iterations;
  l.validate();
  return l;
}

NielsenBounds nielsen_of(const RunConfig& cfg) {
  if (cfg.nielsen_edges < 1 || cfg.nielsen_period < 1) throw ConfigError("Nielsen bounds must be positive");
  NielsenBounds b;
  b.max_edges = cfg.nielsen_edges;
  b.max_period = cfg.nielsen_period;
  return b;
}

std::string edge_list(const GraphMap& f, const std::vector<int>& edges) {
  std::string s;
  for (const int e : edges) s += (s.empty() ? "" : " ") + f.graph().edge(e).name;
  return s;
}

void catalog_flags(const NielsenCatalog& cat, std::set<std::string>& flags) {
  if (!cat.complete) flags.insert("nielsen-catalog-incomplete");
  if (cat.heuristic && !cat.saturated) flags.insert("nielsen-pruning-heuristic");
}

void growth_flags(const std::vector<GrowthDegree>& growth, std::set<std::string>& flags) {
  for (const auto& g : growth)
    if (!g.certain) flags.insert("growth-degree-uncertain");
}

json nielsen_json(const GraphMap& f, const NielsenCatalog& cat) {
  json paths = json::array();
  for (const auto& p : cat.paths)
    paths.push_back({{"path", format_edge_path(f.graph(), p.path.edges)},
                     {"period", p.period},
                     {"height", p.height},
                     {"closed", p.closed}});
  return {{"complete", cat.complete}, {"saturated", cat.saturated}, {"paths", paths}};
}

// ---------------------------------------------------------------------------
// Subcommands

json cmd_validate(const RunConfig& cfg, int path_edges, std::set<std::string>& flags) {
  const auto in = load(cfg);
  const auto& f = *in.f;
  const auto cat = find_nielsen(f, nielsen_of(cfg), limits_of(cfg));
  catalog_flags(cat, flags);
  ValidationBounds vb;
  vb.path_edges = path_edges;
  vb.nielsen = nielsen_of(cfg);
  const auto rep = validate_improved(f, vb, &cat);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    if (c.status == CheckStatus::bounded_pass) flags.insert("bounded-check-" + c.name);
  }
  json failing = json::array();
  for (const auto& c : rep.checks)
    if (c.status == CheckStatus::fail) failing.push_back(c.name);
  return {{"ok", rep.ok()}, {"failing", failing}, {"checks", checks}};
}

json cmd_analyze(const RunConfig& cfg, std::set<std::string>& flags) {
  const auto in = load(cfg);
  const auto& f = *in.f;
  const auto& g = f.graph();
  const auto lim = limits_of(cfg);
  const auto cat = find_nielsen(f, nielsen_of(cfg), lim);
  catalog_flags(cat, flags);
  const auto growth = growth_degrees(f, cat);
  growth_flags(growth, flags);
  const auto bcc = bcc_constant(f, cfg.bcc_B, BccMode::exhaustive, in.inverse ? &*in.inverse : nullptr);
  if (bcc.heuristic) flags.insert("bcc-heuristic");

  json strata = json::array();
  const auto& filt = f.filtration();
  for (int r = 1; r <= filt.size(); ++r) {
    const auto& st = filt.stratum(r);
    json s = {{"index", r}, {"edges", edge_list(f, st.edges)}, {"class", to_string(st.cls)},
              {"growth_rate", num(st.growth_rate)}, {"h", st.h_value}};
    if (st.suffix) s["suffix"] = format_edge_path(g, *st.suffix);
    if (st.single_edge()) s["growth"] = format_growth(growth.at(static_cast<std::size_t>(st.edges.front())));
    if (st.cls == StratumClass::exponential) {
      const auto th = thresholds(f, bcc.selected, r, in.inverse ? &*in.inverse : nullptr, 5, 2000, cfg.seed + 1, lim);
      if (th.heuristic) flags.insert("threshold-heuristic");
      s["critical_length"] = num(critical_length(f, bcc.selected, r));
      s["T"] = num(th.T);
      s["S"] = num(th.S);
    }
    strata.push_back(s);
  }
  json lengths = json::object();
  for (std::size_t e = 0; e < g.edge_count(); ++e) lengths[g.edge(static_cast<int>(e)).name] = num(g.lengths()[e]);
  json b = {{"B", bcc.B}, {"lower_bound", num(bcc.lower_bound)}, {"certified", bcc.certified},
            {"selected", num(bcc.selected)}};
  b["upper_bound"] = bcc.upper_bound ? num(*bcc.upper_bound) : json(nullptr);
  return {{"edges", g.edge_count()}, {"vertices", g.vertex_count()}, {"lengths", lengths},
          {"strata", strata}, {"bcc", b}, {"nielsen", nielsen_json(f, cat)}};
}

json cmd_orbit(const RunConfig& cfg, const std::string& word, int N, const std::string& mode) {
  const auto in = load(cfg);
  const auto lim = limits_of(cfg);
  if (N < 0) throw ConfigError("--N must be non-negative");
  json lengths = json::array();
  if (mode == "word" || mode == "cyclic") {
    if (!in.phi) throw ConfigError("word and cyclic modes need an automorphism input");
    const auto w = parse_word(in.phi->alphabet(), word);
    for (const auto l : orbit_lengths(*in.phi, w, N, mode == "word" ? LengthMode::word : LengthMode::cyclic, lim))
      lengths.push_back(l);
  } else if (mode == "path" || mode == "circuit") {
    const auto& f = *in.f;
    const auto p = parse_edge_path(f.graph(), word);
    if (mode == "path") {
      EdgePath q = p;
      for (int k = 0; k <= N; ++k) {
        lengths.push_back(num(path_length(f.graph(), q)));
        if (k < N) q = map_path(f, q, 1, lim);
      }
    } else {
      Circuit c(f.graph(), p.edges);
      for (int k = 0; k <= N; ++k) {
        lengths.push_back(num(path_length(f.graph(), c.edges())));
        if (k < N) c = map_circuit(f, c, 1, lim);
      }
    }
  } else {
    throw ConfigError("unknown orbit mode '" + mode + "'");
  }
  return {{"word", word}, {"N", N}, {"mode", mode}, {"lengths", lengths}};
}

json hallway_json(const GraphMap& f, const Hallway& h, bool with_slices, std::set<std::string>& flags,
                  const NielsenCatalog& cat) {
  const auto growth = growth_degrees(f, cat);
  growth_flags(growth, flags);
  const auto classes = stratum_classes(f, growth);
  const auto marks = propagate_markings(f, h);
  json lengths = json::array(), nonlin = json::array(), slices = json::array();
  for (std::size_t i = 0; i < h.slices.size(); ++i) {
    lengths.push_back(num(path_length(f.graph(), h.slices[i])));
    const auto n = nonlin_count(marks, i, classes);
    if (!n) flags.insert("unknown-mark-class");
    nonlin.push_back(n ? json(*n) : json(nullptr));
    if (with_slices) slices.push_back(format_edge_path(f.graph(), h.slices[i].edges));
  }
  json j = {{"duration", h.duration()},
            {"visible_length", num(h.visible_length)},
            {"max_slice_length", num(h.max_slice_length)},
            {"argmax", h.argmax},
            {"quasi_smooth_bound", num(h.quasi_smooth_bound)},
            {"smooth", h.smooth()},
            {"slice_lengths", lengths},
            {"nonlinear_counts", nonlin}};
  if (with_slices) j["slices"] = slices;
  return j;
}

json cmd_hallway(const RunConfig& cfg, const std::string& file, const std::string& word, const std::string& stable,
                 bool with_slices, std::set<std::string>& flags) {
  const auto in = load(cfg);
  const auto& f = *in.f;
  const auto lim = limits_of(cfg);
  if (file.empty() == word.empty()) throw ConfigError("give exactly one of --hallway and --word");
  Hallway h;
  if (!word.empty()) {
    h = parse_group_hallway(f, word, stable, lim);
  } else {
    std::string text;
    try {
      text = read_file(file);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    h = parse_hallway(f, text, lim);
  }
  const auto cat = find_nielsen(f, nielsen_of(cfg), lim);
  catalog_flags(cat, flags);
  return hallway_json(f, h, with_slices, flags, cat);
}

json cmd_convexity(const RunConfig& cfg, const std::string& corpus_text, int N, const std::string& mode,
                   std::set<std::string>& flags) {
  const auto in = load(cfg);
  if (!in.phi) throw ConfigError("convexity corpora are generated over a rose; give an automorphism input");
  const auto lim = limits_of(cfg);
  auto spec = parse_corpus_spec(corpus_text);
  if (spec.kind == CorpusSpec::Kind::random && corpus_text.find(',') == corpus_text.rfind(',')) spec.seed = cfg.seed;
  const auto corpus = make_corpus(*in.phi, spec);
  if (corpus.words.empty()) throw ConfigError("corpus '" + corpus_text + "' has no words");
  const std::string name = format_corpus_spec(spec);
  ConvexityReport rep;
  if (mode == "word" || mode == "cyclic") {
    rep = empirical_K(*in.phi, corpus.words, N, mode == "word" ? LengthMode::word : LengthMode::cyclic, lim, name);
  } else if (mode == "path" || mode == "circuit") {
    std::vector<EdgePath> paths;
    for (const auto& w : corpus.words) paths.push_back({0, {w.letters().begin(), w.letters().end()}});
    rep = empirical_K(*in.f, paths, N, mode == "circuit", lim, name);
  } else {
    throw ConfigError("unknown convexity mode '" + mode + "'");
  }
  for (const auto& fl : rep.flags) flags.insert(fl);
  json series = json::array(), diag = json::array();
  for (const double v : rep.series) series.push_back(num(v));
  for (const double v : rep.diagonal) diag.push_back(num(v));
  json j = {{"mode", to_string(rep.mode)}, {"corpus", rep.corpus},       {"corpus_size", corpus.words.size()},
            {"N_max", rep.N_max},          {"raw_K", num(rep.raw_K)},   {"empirical_K", num(rep.empirical_K)}};
  if (rep.witness)
    j["witness"] = {{"index", rep.witness->index},
                    {"word", rep.witness->text},
                    {"i", rep.witness->i},
                    {"N", rep.witness->N},
                    {"ratio", num(rep.witness->ratio)}};
  else
    j["witness"] = nullptr;
  j["series"] = series;
  j["diagonal"] = diag;
  j["evaluated"] = rep.evaluated;
  j["skipped"] = rep.skipped;
  return j;
}

struct LedgerArgs {
  std::optional<int> degree, power;
  std::optional<double> K, M, C, K_prime, L;
  std::vector<std::string> heuristic;
  bool exponential = false;
};

json cmd_ledger(const LedgerArgs& a) {
  LedgerInputs in;
  in.degree = a.degree;
  in.power = a.power;
  in.exponential_strata = a.exponential;
  const std::set<std::string> heur(a.heuristic.begin(), a.heuristic.end());
  for (const auto& h : heur)
    if (h != "K" && h != "M" && h != "C" && h != "K_prime" && h != "L")
      throw ConfigError("unknown ledger input '" + h + "' in --heuristic");
  auto value = [&](const std::optional<double>& v, const char* name) -> std::optional<LedgerValue> {
    if (!v) return std::nullopt;
    return LedgerValue{*v, heur.count(name) ? Provenance::heuristic : Provenance::measured};
  };
  in.K = value(a.K, "K");
  in.M = value(a.M, "M");
  in.C = value(a.C, "C");
  in.K_prime = value(a.K_prime, "K_prime");
  in.L = value(a.L, "L");
  const auto led = ledger(in);
  json entries = json::array();
  for (const auto& e : led.entries)
    entries.push_back({{"name", e.name}, {"value", num(e.value)}, {"provenance", to_string(e.provenance)}});
  return {{"entries", entries}};
}

// Fixture suite ------------------------------------------------------------

struct Suite {
  json checks = json::array();
  bool ok = true;
  void add(const std::string& name, bool pass, json detail) {
    ok = ok && pass;
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
  }
};

json lengths_json(const GraphMap& f, const Hallway& h) {
  json a = json::array();
  for (const auto& s : h.slices) a.push_back(num(path_length(f.graph(), s)));
  return a;
}

void suite_f6(Suite& s, const RunConfig& cfg, std::set<std::string>& flags) {
  const auto phi = fixtures::f6();
  const auto f = parse_rose_map(fixtures::text("f6"));
  const auto inv = rose_inverse_map(phi);
  const auto& g = f.graph();
  const auto lim = limits_of(cfg);

  const auto orbit = orbit_lengths(phi, parse_word(phi.alphabet(), "d"), 8, LengthMode::word, lim);
  bool pass = true;
  for (int k = 0; k <= 8; ++k) pass = pass && orbit[static_cast<std::size_t>(k)] == k * k + 1;
  s.add("orbit-d", pass, orbit);

  // smoothex: conjugates of a^m stay constant, b a^m grows by one per step
  CorpusSpec smooth;
  smooth.kind = CorpusSpec::Kind::fixture;
  smooth.name = "smoothex";
  smooth.param = 5;
  bool constant = true, unit = true;
  std::size_t checked = 0;
  for (const auto& w : make_corpus(phi, smooth).words) {
    const EdgePath p{0, {w.letters().begin(), w.letters().end()}};
    const auto h = smooth_hallway(f, p, 8, lim);
    const std::string t = format_word(phi.alphabet(), w);
    const bool conj = t.front() == 'a' || (t.size() > 2 && (t.front() == 'b' || t.front() == 'c') && t.back() == '\'' &&
                                           t[t.size() - 2] == t.front());
    const bool ba = t.front() == 'b' && t.find('\'') == std::string::npos;
    for (std::size_t i = 1; i < h.slices.size(); ++i) {
      const double d = path_length(g, h.slices[i]) - path_length(g, h.slices[i - 1]);
      if (conj && d != 0) constant = false;
      if (ba && d != 1) unit = false;
    }
    checked += conj || ba;
  }
  s.add("smoothex-constant-conjugates", constant, {{"words", checked}});
  s.add("smoothex-unit-growth", unit, {{"words", checked}});

  // bulgeex: a slice of length k + 2 over four visible letters
  for (const int k : {5, 8}) {
    const std::string word = "t^-" + std::to_string(k) + " c t^-" + std::to_string(k) + " b^-1 t^" +
                             std::to_string(2 * k) + " b c^-1";
    const auto h = parse_group_hallway(f, word, "t", lim);
    s.add("bulgeex-k" + std::to_string(k),
          h.max_slice_length == k + 2 && h.visible_length == 4 && h.argmax == static_cast<std::size_t>(k),
          {{"word", word},
           {"max_slice_length", num(h.max_slice_length)},
           {"visible_length", num(h.visible_length)},
           {"argmax", h.argmax}});
  }

  // expex / polyex: w0 = f^-k(seed) b^-1 passes through seed a^-k b^-1 at slice k
  // and both ends are longer
  const int k = 4;
  const auto cat = find_nielsen(f, nielsen_of(cfg), lim);
  catalog_flags(cat, flags);
  const auto growth = growth_degrees(f, cat);
  growth_flags(growth, flags);
  const auto classes = stratum_classes(f, growth);
  for (const auto& [name, seed] : {std::pair{"expex", "x c"}, std::pair{"polyex", "d c"}}) {
    auto raw = map_path(inv, parse_edge_path(g, seed), k, lim).edges;
    raw.push_back(-positive_letter(g.edge_alphabet().find("b")));
    const EdgePath w0 = tighten(g, 0, raw);
    const auto h = smooth_hallway(f, w0, 2 * k, lim);
    std::string expect = seed;
    for (int i = 0; i < k; ++i) expect += " a'";
    expect += " b'";
    const auto mid = format_edge_path(g, h.slices[k].edges);
    const double lmid = path_length(g, h.slices[k]);
    const bool ends_longer = path_length(g, h.slices.front()) > lmid && path_length(g, h.slices.back()) > lmid;
    const auto marks = propagate_markings(f, h);
    const auto nl = nonlin_count(marks, h.slices.size() - 1, classes);
    s.add(name, mid == expect && ends_longer,
          {{"middle_slice", mid},
           {"slice_lengths", lengths_json(f, h)},
           {"top_nonlinear_count", nl ? json(*nl) : json(nullptr)}});
  }
}

void suite_eglinear(Suite& s, const RunConfig& cfg) {
  const auto phi = fixtures::eglinear();
  const auto f = parse_rose_map(fixtures::text("eglinear"));
  const auto lim = limits_of(cfg);
  const auto orbit = orbit_lengths(phi, parse_word(phi.alphabet(), "a"), 20, LengthMode::word, lim);
  bool pass = true;
  for (int k = 0; k <= 20; ++k) pass = pass && orbit[static_cast<std::size_t>(k)] == 1 + 4 * k;
  s.add("orbit-a", pass, orbit);
  const auto period = nielsen_period(f, parse_edge_path(f.graph(), "x y x' y'"), 6, lim);
  s.add("commutator-nielsen", period == 1, {{"period", period}});
}

void suite_psi_f4(Suite& s, const RunConfig& cfg) {
  const auto phi = fixtures::psi_f4();
  const auto lim = limits_of(cfg);
  // d -> d c b^-1 gains one a per step from each of c and b^-1 after cancellation
  const auto orbit = orbit_lengths(phi, parse_word(phi.alphabet(), "d"), 8, LengthMode::word, lim);
  bool pass = true;
  for (std::size_t k = 1; k < orbit.size(); ++k) pass = pass && orbit[k] >= orbit[k - 1];
  s.add("orbit-d-monotone", pass, orbit);
}

json cmd_examples(const RunConfig& cfg, const std::string& name, std::set<std::string>& flags, bool& ok) {
  Suite s;
  if (name == "f6")
    suite_f6(s, cfg, flags);
  else if (name == "eglinear")
    suite_eglinear(s, cfg);
  else if (name == "psi_f4")
    suite_psi_f4(s, cfg);
  else
    throw ConfigError("no example suite named '" + name + "'");
  ok = s.ok;
  return {{"name", name}, {"ok", s.ok}, {"checks", s.checks}};
}

json cmd_suggest(const RunConfig& cfg) {
  const auto in = load(cfg);
  const auto& f = *in.f;
  std::vector<std::vector<Letter>> images;
  for (std::size_t e = 0; e < f.edge_count(); ++e) images.push_back(f.edge_image(static_cast<int>(e)));
  const auto strata = suggest_filtration(f.graph(), images);
  json a = json::array();
  std::string text = "[filtration]\n";
  for (std::size_t r = 0; r < strata.size(); ++r) {
    a.push_back(edge_list(f, strata[r]));
    text += "stratum " + std::to_string(r + 1) + " = " + edge_list(f, strata[r]) + "\n";
  }
  return {{"strata", a}, {"filtration", text}};
}

// Output -------------------------------------------------------------------

std::string number_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return number_text(v.get<double>());
  return v.dump();
}

// Like json::dump(2) but floats use %.10g.
void write_json(const json& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' '), close(static_cast<std::size_t>(2 * depth), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      out += (first ? "" : ",\n") + pad + json(it.key()).dump() + ": ";
      write_json(it.value(), depth + 1, out);
      first = false;
    }
    out += "\n" + close + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += (i ? ",\n" : "") + pad;
      write_json(v[i], depth + 1, out);
    }
    out += "\n" + close + "]";
  } else if (v.is_number_float()) {
    out += number_text(v.get<double>());
  } else {
    out += v.dump();
  }
}

std::string inline_json(const json& v) {
  if (!v.is_array()) return scalar_text(v);
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + (v[i].is_string() ? v[i].dump() : scalar_text(v[i]));
  return s + "]";
}

void flatten(const json& v, const std::string& key, std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(it.value(), key.empty() ? it.key() : key + "." + it.key(), rows);
  } else if (v.is_array()) {
    bool flat = true;
    for (const auto& x : v) flat = flat && x.is_primitive();
    if (flat) {
      rows.emplace_back(key, inline_json(v));
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], key + "[" + std::to_string(i) + "]", rows);
    }
  } else {
    rows.emplace_back(key, scalar_text(v));
  }
}

std::string render(const json& report, const std::string& format) {
  if (format == "json") {
    std::string out;
    write_json(report, 0, out);
    return out + "\n";
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::ostringstream os;
  if (format == "csv") {
    os << "key,value\n";
    for (const auto& [k, v] : rows) {
      std::string q = v;
      if (q.find_first_of(",\"\n") != std::string::npos) {
        std::string e = "\"";
        for (const char c : q) e += c == '"' ? std::string("\"\"") : std::string(1, c);
        q = e + "\"";
      }
      os << k << ',' << q << '\n';
    }
  } else {
    std::size_t w = 0;
    for (const auto& [k, v] : rows) w = std::max(w, k.size());
    for (const auto& [k, v] : rows) os << k << std::string(w - k.size() + 2, ' ') << v << '\n';
  }
  return os.str();
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_input = true) {
  if (needs_input) {
    sub->add_option("--input,-i", cfg.input, "automorphism (.aut) or graph map (.gm) file");
    sub->add_option("--fixture", cfg.fixture, "built-in map: f6, psi_f4, eglinear, identity");
    sub->add_option("--max-length", cfg.max_length, "abort orbits beyond this many letters")->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", cfg.max_iterations, "largest allowed iterate")->check(CLI::PositiveNumber);
    sub->add_option("--nielsen-edges", cfg.nielsen_edges, "edge bound B_N for the Nielsen search")
        ->check(CLI::PositiveNumber);
    sub->add_option("--nielsen-period", cfg.nielsen_period, "period bound p_N for the Nielsen search")
        ->check(CLI::PositiveNumber);
  }
  sub->add_option("--out,-o", cfg.out, "write the report here instead of stdout");
  sub->add_option("--format", cfg.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
  sub->add_option("--seed", cfg.seed, "seed for sampled quantities");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train track and hallway tools for free group automorphisms", "ttconvex"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* validate = app.add_subcommand("validate", "check the improved relative train track properties");
  add_common(validate, cfg);
  int path_edges = 5;
  validate->add_option("--path-edges", path_edges, "edge bound for quantified checks")->check(CLI::PositiveNumber);

  auto* analyze = app.add_subcommand("analyze", "strata, growth, Nielsen paths and cancellation constants");
  add_common(analyze, cfg);
  analyze->add_option("--bcc-B", cfg.bcc_B, "path length bound B_bcc for the cancellation search")
      ->check(CLI::PositiveNumber);

  auto* orbit = app.add_subcommand("orbit", "lengths of f^k(w) for k = 0..N");
  add_common(orbit, cfg);
  std::string word, mode = "word";
  int N = 8;
  orbit->add_option("--word,-w", word, "word or edge path")->required();
  orbit->add_option("--N", N, "last iterate");
  orbit->add_option("--mode", mode, "word, cyclic, path or circuit");

  auto* hallway = app.add_subcommand("hallway", "slices, markings and lengths of a hallway");
  add_common(hallway, cfg);
  std::string hallway_file, hallway_word, stable = "t";
  bool with_slices = false;
  hallway->add_option("--hallway", hallway_file, "file with a [hallway] section");
  hallway->add_option("--word,-w", hallway_word, "group form t^-k w t^k ...");
  hallway->add_option("--stable", stable, "stable letter of the group form");
  hallway->add_flag("--slices", with_slices, "include every slice in the report");

  auto* convexity = app.add_subcommand("convexity", "measure the empirical convexity constant");
  add_common(convexity, cfg);
  std::string corpus = "ball(4)", cmode = "word";
  int N_max = 16;
  convexity->add_option("--corpus", corpus, "ball(r), sphere(r), random(n,len[,seed]) or fixture(name[,p]), optional @gens");
  convexity->add_option("--N", N_max, "N_max");
  convexity->add_option("--mode", cmode, "word, cyclic, path or circuit");

  auto* led = app.add_subcommand("ledger", "compose the polynomial constants");
  add_common(led, cfg, false);
  LedgerArgs la;
  led->add_option("--degree", la.degree, "q");
  led->add_option("--K", la.K);
  led->add_option("--M", la.M);
  led->add_option("--C", la.C);
  led->add_option("--K-prime", la.K_prime);
  led->add_option("--L", la.L);
  led->add_option("--power", la.power, "k");
  led->add_option("--heuristic", la.heuristic, "inputs that are heuristic estimates");
  led->add_flag("--exponential", la.exponential, "exponential strata are present");

  auto* examples = app.add_subcommand("examples", "reproduce the fixture behaviours");
  add_common(examples, cfg, false);
  std::string ex_name = "f6";
  examples->add_option("--name", ex_name, "f6, psi_f4 or eglinear");

  auto* suggest = app.add_subcommand("suggest-filtration", "finest invariant filtration of the input map");
  add_common(suggest, cfg);

  std::vector<std::string> argv_store{"ttconvex"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? 0 : 2;
  }

  std::set<std::string> flags;
  json body;
  bool ok = true;
  std::string command;
  try {
    if (*validate) {
      command = "validate";
      body = cmd_validate(cfg, path_edges, flags);
      ok = body["ok"].get<bool>();
    } else if (*analyze) {
      command = "analyze";
      body = cmd_analyze(cfg, flags);
    } else if (*orbit) {
      command = "orbit";
      body = cmd_orbit(cfg, word, N, mode);
    } else if (*hallway) {
      command = "hallway";
      body = cmd_hallway(cfg, hallway_file, hallway_word, stable, with_slices, flags);
    } else if (*convexity) {
      command = "convexity";
      body = cmd_convexity(cfg, corpus, N_max, cmode, flags);
    } else if (*led) {
      command = "ledger";
      body = cmd_ledger(la);
    } else if (*examples) {
      command = "examples";
      body = cmd_examples(cfg, ex_name, flags, ok);
    } else {
      command = "suggest-filtration";
      body = cmd_suggest(cfg);
    }
  } catch (const Error& e) {
    err << "ttconvex " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "ttconvex " << command << ": " << e.what() << '\n';
    return 2;
  }

  json report = {{"command", command}};
  if (!cfg.input.empty()) report["input"] = cfg.input;
  if (!cfg.fixture.empty()) report["fixture"] = cfg.fixture;
  report["seed"] = cfg.seed;
  for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = it.value();
  report["flags"] = json(std::vector<std::string>(flags.begin(), flags.end()));

  const std::string text = render(report, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "ttconvex: cannot write " << cfg.out << '\n';
      return 2;
    }
    f << text;
  }
  if (!ok && command == "validate") {
    err << "ttconvex validate: failing properties:";
    for (const auto& n : report["failing"]) err << ' ' << n.get<std::string>();
    err << '\n';
  }
  return ok ? 0 : 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ttconvex::cli
