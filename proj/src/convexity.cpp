#include "ttconvex/convexity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "ttconvex/error.hpp"
#include "ttconvex/text_format.hpp"

namespace ttconvex {

// ---------------------------------------------------------------------------
// Corpora

CorpusSpec parse_corpus_spec(std::string_view text) {
  CorpusSpec spec;
  std::string body = trim(text);
  if (const auto at = body.find('@'); at != std::string::npos) {
    std::string gens = body.substr(at + 1);
    std::replace(gens.begin(), gens.end(), ',', ' ');
    spec.generators = split_ws(gens);
    body = trim(body.substr(0, at));
  }
  const auto open = body.find('(');
  if (open == std::string::npos || body.back() != ')') throw ConfigError("bad corpus spec '" + body + "'");
  const std::string kind = trim(body.substr(0, open));
  std::string args = body.substr(open + 1, body.size() - open - 2);
  std::replace(args.begin(), args.end(), ',', ' ');
  const auto a = split_ws(args);
  auto num = [&](std::size_t i) -> long long {
    if (i >= a.size()) throw ConfigError("corpus spec '" + body + "' needs more arguments");
    try {
      return std::stoll(a[i]);
    } catch (const std::logic_error&) {
      throw ConfigError("bad number '" + a[i] + "' in corpus spec");
    }
  };
  if (kind == "ball" || kind == "sphere") {
    spec.kind = kind == "ball" ? CorpusSpec::Kind::ball : CorpusSpec::Kind::sphere;
    spec.radius = static_cast<int>(num(0));
    if (spec.radius < 0) throw ConfigError("negative radius");
  } else if (kind == "random") {
    spec.kind = CorpusSpec::Kind::random;
    spec.count = static_cast<int>(num(0));
    spec.length = static_cast<int>(num(1));
    spec.seed = a.size() > 2 ? static_cast<std::uint64_t>(num(2)) : 0;
    if (spec.count < 0 || spec.length < 0) throw ConfigError("negative random corpus size");
  } else if (kind == "fixture") {
    spec.kind = CorpusSpec::Kind::fixture;
    if (a.empty()) throw ConfigError("fixture corpus needs a name");
    spec.name = a[0];
    if (a.size() > 1) spec.param = static_cast<int>(num(1));
  } else {
    throw ConfigError("unknown corpus kind '" + kind + "'");
  }
  return spec;
}

std::string format_corpus_spec(const CorpusSpec& spec) {
  std::ostringstream os;
  switch (spec.kind) {
    case CorpusSpec::Kind::ball:
      os << "ball(" << spec.radius << ")";
      break;
    case CorpusSpec::Kind::sphere:
      os << "sphere(" << spec.radius << ")";
      break;
    case CorpusSpec::Kind::random:
      os << "random(" << spec.count << "," << spec.length << "," << spec.seed << ")";
      break;
    case CorpusSpec::Kind::fixture:
      os << "fixture(" << spec.name << "," << spec.param << ")";
      break;
  }
  for (std::size_t i = 0; i < spec.generators.size(); ++i) os << (i ? "," : "@") << spec.generators[i];
  return os.str();
}

namespace {

std::vector<Letter> allowed_letters(const Alphabet& al, const std::vector<std::string>& gens) {
  std::vector<Letter> out;
  if (gens.empty()) {
    for (int i = 0; i < static_cast<int>(al.rank()); ++i) out.insert(out.end(), {positive_letter(i), -positive_letter(i)});
    return out;
  }
  for (const auto& g : gens) {
    const int i = al.find(g);
    if (i < 0) throw ConfigError("unknown generator '" + g + "' in corpus spec");
    out.insert(out.end(), {positive_letter(i), -positive_letter(i)});
  }
  return out;
}

void extend_words(const std::vector<Letter>& letters, std::vector<Letter>& cur, int left, std::vector<ReducedWord>& out) {
  if (left == 0) {
    out.push_back(ReducedWord::from_reduced(cur));
    return;
  }
  for (const Letter l : letters) {
    if (!cur.empty() && l == -cur.back()) continue;
    cur.push_back(l);
    extend_words(letters, cur, left - 1, out);
    cur.pop_back();
  }
}

ReducedWord power(const ReducedWord& w, int m) {
  ReducedWord out;
  const ReducedWord base = m < 0 ? w.inverse() : w;
  for (int i = 0; i < std::abs(m); ++i) out = out * base;
  return out;
}

void fixture_corpus(const Automorphism& phi, const CorpusSpec& spec, Corpus& c) {
  const Alphabet& al = phi.alphabet();
  auto gen = [&](const char* name) {
    const int i = al.find(name);
    if (i < 0) throw ConfigError(std::string("fixture '") + spec.name + "' needs generator '" + name + "'");
    return ReducedWord::from_reduced({positive_letter(i)});
  };
  const int p = spec.param;
  if (spec.name == "smoothex") {
    const auto a = gen("a"), b = gen("b"), cc = gen("c");
    for (int m = -p; m <= p; ++m) {
      const auto am = power(a, m);
      for (const auto& w : {am, b * am * b.inverse(), cc * am * cc.inverse(), b * am, cc * am, cc * am * b.inverse()})
        if (!w.empty()) c.words.push_back(w);
    }
  } else if (spec.name == "expex" || spec.name == "polyex") {
    if (!phi.has_inverse()) throw MissingInverseError("fixture '" + spec.name + "' needs the inverse automorphism");
    const auto inv = phi.inverse();
    const auto seed = (spec.name == "expex" ? gen("x") : gen("d")) * gen("c");
    for (int k = 1; k <= p; ++k) c.words.push_back(iterate(inv, seed, k) * gen("b").inverse());
  } else if (spec.name == "eglinear") {
    const auto a = gen("a"), comm = gen("x") * gen("y") * gen("x").inverse() * gen("y").inverse();
    c.words.push_back(a);
    for (int m = 1; m <= p; ++m) {
      c.words.push_back(power(comm, m));
      c.words.push_back(a * power(comm, m) * a.inverse());
    }
  } else if (spec.name == "bulgeex") {
    gen("b");
    gen("c");
    if (al.find("t") >= 0) throw ConfigError("fixture 'bulgeex' needs 't' free for the stable letter");
    c.hallways.push_back("t^-" + std::to_string(p) + " c t^-" + std::to_string(p) + " b^-1 t^" +
                         std::to_string(2 * p) + " b c^-1");
  } else {
    throw ConfigError("unknown fixture corpus '" + spec.name + "'");
  }
}

}  // namespace

Corpus make_corpus(const Automorphism& phi, const CorpusSpec& spec) {
  Corpus c;
  const auto letters = allowed_letters(phi.alphabet(), spec.generators);
  std::vector<Letter> cur;
  switch (spec.kind) {
    case CorpusSpec::Kind::ball:
      for (int len = 0; len <= spec.radius; ++len) extend_words(letters, cur, len, c.words);
      break;
    case CorpusSpec::Kind::sphere:
      extend_words(letters, cur, spec.radius, c.words);
      break;
    case CorpusSpec::Kind::random: {
      std::mt19937_64 rng(spec.seed);
      for (int n = 0; n < spec.count; ++n) {
        cur.clear();
        while (static_cast<int>(cur.size()) < spec.length) {
          const Letter l = letters[rng() % letters.size()];
          if (!cur.empty() && l == -cur.back()) continue;
          cur.push_back(l);
        }
        c.words.push_back(ReducedWord::from_reduced(cur));
      }
      break;
    }
    case CorpusSpec::Kind::fixture:
      fixture_corpus(phi, spec, c);
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Empirical K

const char* to_string(ConvexityMode m) noexcept {
  switch (m) {
    case ConvexityMode::word:
      return "word";
    case ConvexityMode::cyclic:
      return "cyclic";
    case ConvexityMode::path:
      return "path";
    case ConvexityMode::circuit:
      return "circuit";
  }
  return "?";
}

double ConvexityReport::raw_K_at(int n) const {
  double k = 0.0;
  for (int N = 0; N <= n && N < static_cast<int>(series.size()); ++N) k = std::max(k, series[static_cast<std::size_t>(N)]);
  return k;
}

unsigned thread_count() {
  if (const char* env = std::getenv("TTCONVEX_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

/// Runs body(i) for i in [0, n) on up to thread_count() threads.
template <class F>
void parallel_for(std::size_t n, F body) {
  const unsigned t = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < t; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

/// lengths[w] is empty for skipped elements.
void reduce_lengths(const std::vector<std::vector<double>>& lengths, int N_max,
                    const std::function<std::string(std::size_t)>& text, ConvexityReport& rep) {
  rep.N_max = N_max;
  rep.series.assign(static_cast<std::size_t>(N_max) + 1, 0.0);
  rep.diagonal.assign(static_cast<std::size_t>(N_max) + 1, 0.0);
  for (std::size_t w = 0; w < lengths.size(); ++w) {
    const auto& L = lengths[w];
    if (L.empty()) {
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    for (int N = 0; N <= N_max; ++N) {
      const double den = L[0] + L[static_cast<std::size_t>(N)];
      if (den <= 0.0) continue;
      for (int i = 0; i <= N; ++i) {
        const double ratio = L[static_cast<std::size_t>(i)] / den;
        rep.series[static_cast<std::size_t>(N)] = std::max(rep.series[static_cast<std::size_t>(N)], ratio);
        if (i == N) rep.diagonal[static_cast<std::size_t>(N)] = std::max(rep.diagonal[static_cast<std::size_t>(N)], ratio);
        // strict comparison keeps the first witness in (word, N, i) order
        if (!rep.witness || ratio > rep.witness->ratio) rep.witness = ConvexityWitness{w, {}, i, N, ratio};
      }
    }
  }
  if (rep.witness) {
    rep.witness->text = text(rep.witness->index);
    rep.raw_K = rep.witness->ratio;
  }
  rep.empirical_K = std::max(1.0, rep.raw_K);
  if (rep.skipped > 0) rep.flags.push_back("orbits-exceeding-limits-skipped");
}

void check_N(int N_max, const ResourceLimits& limits) {
  limits.validate();
  if (N_max < 0) throw ConfigError("N_max must be nonnegative");
  if (N_max > limits.max_iterations) throw ResourceLimitError("N_max exceeds max_iterations");
}

}  // namespace

ConvexityReport empirical_K(const Automorphism& phi, const std::vector<ReducedWord>& corpus, int N_max, LengthMode mode,
                            const ResourceLimits& limits, std::string corpus_name) {
  check_N(N_max, limits);
  if (corpus.empty()) throw ConfigError("empty corpus");
  ConvexityReport rep;
  rep.mode = mode == LengthMode::word ? ConvexityMode::word : ConvexityMode::cyclic;
  rep.corpus = std::move(corpus_name);
  std::vector<std::vector<double>> lengths(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t w) {
    try {
      const auto l = orbit_lengths(phi, corpus[w], N_max, mode, limits);
      lengths[w].assign(l.begin(), l.end());
    } catch (const ResourceLimitError&) {
      lengths[w].clear();
    }
  });
  reduce_lengths(lengths, N_max, [&](std::size_t w) { return format_word(phi.alphabet(), corpus[w]); }, rep);
  return rep;
}

ConvexityReport empirical_K(const GraphMap& f, const std::vector<EdgePath>& corpus, int N_max, bool circuits,
                            const ResourceLimits& limits, std::string corpus_name) {
  check_N(N_max, limits);
  if (corpus.empty()) throw ConfigError("empty corpus");
  const auto& g = f.graph();
  ConvexityReport rep;
  rep.mode = circuits ? ConvexityMode::circuit : ConvexityMode::path;
  rep.corpus = std::move(corpus_name);
  std::vector<std::vector<double>> lengths(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t w) {
    try {
      auto& L = lengths[w];
      if (circuits) {
        Circuit c(g, corpus[w].edges);
        for (int k = 0; k <= N_max; ++k) {
          L.push_back(path_length(g, c.edges()));
          if (k < N_max) c = map_circuit(f, c, 1, limits);
        }
      } else {
        EdgePath p = corpus[w];
        for (int k = 0; k <= N_max; ++k) {
          L.push_back(path_length(g, p));
          if (k < N_max) p = map_path(f, p, 1, limits);
        }
      }
    } catch (const ResourceLimitError&) {
      lengths[w].clear();
    }
  });
  reduce_lengths(lengths, N_max, [&](std::size_t w) { return format_edge_path(g, corpus[w].edges); }, rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Lower bounds

namespace {

bool excluded_concatenation(const GraphMap& f, const EdgePath& p, int r, const NielsenCatalog& cat, bool circuits) {
  if (!circuits) return is_nielsen_concatenation(f, p.edges, r, cat);
  std::vector<Letter> rot = p.edges;
  for (std::size_t s = 0; s < rot.size(); ++s) {
    if (is_nielsen_concatenation(f, rot, r, cat)) return true;
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
  }
  return false;
}

}  // namespace

LowerBoundFit lowerbound_fit(const GraphMap& f, const std::vector<EdgePath>& corpus, int r, int k_max,
                             const NielsenCatalog& catalog, const std::vector<GrowthDegree>& growth, bool circuits,
                             const ResourceLimits& limits) {
  const auto& g = f.graph();
  const Stratum& st = f.filtration().stratum(r);
  LowerBoundFit fit;
  fit.r = r;
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (st.cls == StratumClass::exponential) {
    fit.exponential = true;
  } else if (st.cls == StratumClass::polynomial && st.single_edge()) {
    const auto& gd = growth.at(static_cast<std::size_t>(st.edges.front()));
    if (gd.kind == GrowthKind::polynomial) {
      if (gd.degree <= 1) throw WrongStratumClassError("lower bound fit needs degree > 1");
      fit.degree = gd.degree;
      fit.heuristic = !gd.certain;
    } else {
      fit.exponential = true;
    }
  } else {
    throw WrongStratumClassError("lower bound fit needs a polynomial or exponential stratum");
  }
  if (fit.exponential) fit.heuristic = !catalog.complete;

  fit.value = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    const EdgePath& p = corpus[n];
    if (p.empty() || f.height(p.edges) != r || (fit.exponential && excluded_concatenation(f, p, r, catalog, circuits))) {
      ++fit.excluded;
      continue;
    }
    ++fit.used;
    Circuit c(g, p.edges);
    const double l0 = circuits ? path_length(g, c.edges()) : path_length(g, p);
    EdgePath q = p;
    for (int k = 1; k <= k_max; ++k) {
      double lk;
      if (circuits) {
        c = map_circuit(f, c, 1, limits);
        lk = path_length(g, c.edges());
      } else {
        q = map_path(f, q, 1, limits);
        lk = path_length(g, q);
      }
      const double v = fit.exponential ? std::pow(l0 + lk, 1.0 / k) : (l0 + lk) / std::pow(k, fit.degree);
      if (v < fit.value) {
        fit.value = v;
        fit.witness = n;
        fit.witness_k = k;
      }
    }
  }
  if (fit.used == 0) throw EmptyAfterExclusionError("no corpus element of height " + std::to_string(r) + " remains");
  return fit;
}

// ---------------------------------------------------------------------------
// Ledger

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::recurrence:
      return "recurrence";
    case Provenance::measured:
      return "measured";
    case Provenance::heuristic:
      return "heuristic";
    case Provenance::empirical_only:
      return "empirical-only";
  }
  return "?";
}

const LedgerEntry* ConstantLedger::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

double ledger_K(int d, double K, double M) {
  double k = 1.0;
  for (int i = 1; i < d; ++i) k = K + k + M;
  return k;
}

double ledger_K_prime(int d, double C, double K, double M) {
  if (d <= 1) return 4 * C * C;
  return 4 * C * C * ledger_K(d - 1, K, M) + 2 * C * ledger_K_prime(d - 1, 2 * C, K, M);
}

ConstantLedger ledger(const LedgerInputs& in) {
  if (!in.degree) throw MissingInputError("ledger needs: degree");
  const int q = *in.degree;
  if (q < 1) throw ConfigError("degree must be at least 1");
  std::vector<std::string> missing;
  if (q >= 2 && !in.K) missing.push_back("K (nonlinear count constant)");
  if (q >= 2 && !in.M) missing.push_back("M (lower bound constant)");
  if (q >= 2 && !in.C && !in.K_prime) missing.push_back("C (cancellation constant)");
  if (!missing.empty()) {
    std::string msg = "ledger needs:";
    for (const auto& m : missing) msg += " " + m + ";";
    throw MissingInputError(msg);
  }
  auto weakest = [](std::initializer_list<std::optional<LedgerValue>> vs) {
    Provenance p = Provenance::recurrence;
    for (const auto& v : vs)
      if (v) p = std::max(p, v->provenance);
    return p;
  };
  const double K = in.K ? in.K->value : 0.0, M = in.M ? in.M->value : 0.0;
  ConstantLedger out;
  const Provenance kp = weakest({in.K, in.M});
  for (int d = 1; d <= q; ++d)
    out.entries.push_back({"K_" + std::to_string(d), ledger_K(d, K, M), d == 1 ? Provenance::recurrence : kp});
  if (in.C) {
    const double C = in.C->value;
    for (int d = 1; d <= q; ++d)
      out.entries.push_back({"K'_" + std::to_string(d) + "(C)", ledger_K_prime(d, C, K, M),
                             d == 1 ? weakest({in.C}) : weakest({in.C, in.K, in.M})});
  }
  std::optional<LedgerEntry> kprime;
  if (in.K_prime) kprime = LedgerEntry{"K'", in.K_prime->value, in.K_prime->provenance};
  else if (in.C) kprime = LedgerEntry{"K'", out.entries.back().value, out.entries.back().provenance};
  if (kprime) {
    if (in.exponential_strata) kprime->provenance = Provenance::empirical_only;
    out.entries.push_back(*kprime);
    out.entries.push_back({"K_word", 2 * kprime->value, kprime->provenance});
    if (in.L && in.power) {
      out.entries.push_back({"K_cyclic", std::pow(in.L->value, 2 * *in.power) * kprime->value,
                             std::max(kprime->provenance, in.L->provenance)});
    }
  }
  return out;
}

}  // namespace ttconvex
