// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances are pinned in code next to each check.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "lexaudit/analyze.hpp"
#include "lexaudit/config.hpp"
#include "lexaudit/corpus.hpp"
#include "lexaudit/errors.hpp"
#include "lexaudit/lexicon.hpp"
#include "lexaudit/pipeline.hpp"
#include "lexaudit/regress.hpp"
#include "lexaudit/scorer.hpp"
#include "lexaudit/util.hpp"
#include "oracles.hpp"

using namespace lexaudit;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> g_failures;

void expect(bool condition, const std::string& message) {
  if (!condition) g_failures.push_back(message);
}

TokenCounts counts_of(std::map<std::string, std::size_t> counts) {
  TokenCounts tc;
  tc.counts = std::move(counts);
  for (const auto& [w, c] : tc.counts) tc.total += c;
  return tc;
}

// --- criterion 1: scoring correctness --------------------------------------

void scoring_correctness() {
  const Lexicon lex({{"laughter", 8.50}, {"hate", 2.34}, {"the", 4.98}}, "fixture");
  const TokenCounts base = counts_of({{"laughter", 2}, {"hate", 1}});
  const double expected = (2.0 * 8.50 + 1.0 * 2.34) / 3.0;  // 6.44666...
  const double score = hedonometer_score(base, lex);
  expect(std::fabs(score - expected) <= 1e-9,
         "hedonometer_score {laughter:2, hate:1} = " + format_double(score) + ", want " +
             format_double(expected) + " within 1e-9");

  for (std::size_t k = 1; k <= 5; ++k) {
    std::map<std::string, std::size_t> scaled;
    for (const auto& [w, c] : base.counts) scaled[w] = c * k;
    const double scaled_score = hedonometer_score(counts_of(scaled), lex);
    expect(scaled_score == score, "duplication invariance broke exactly at k=" +
                                      std::to_string(k) + ": " + format_double(scaled_score));
  }
}

// --- criterion 2: OLS oracle equivalence ------------------------------------

void ols_oracle_equivalence() {
  std::mt19937_64 rng(20240501);
  auto normal = [&rng]() {
    const double u1 = std::max(draw_unit(rng), 1e-12);
    const double u2 = draw_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };

  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t cols = 2 + draw_below(rng, 4);  // 2..5 including intercept
    const std::size_t rows = cols + 2 + draw_below(rng, 20 - (cols + 2) + 1);  // <= 20
    std::vector<std::vector<double>> x(rows, std::vector<double>(cols, 1.0));
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 1; c < cols; ++c) x[r][c] = normal();
      y[r] = normal();
    }

    DesignMatrix design;
    design.rows = rows;
    design.cols = cols;
    design.values.assign(rows * cols, 0.0);
    design.response = y;
    for (std::size_t c = 0; c < cols; ++c) {
      design.column_labels.push_back(c == 0 ? kInterceptLabel : "x" + std::to_string(c));
      for (std::size_t r = 0; r < rows; ++r) design.at(r, c) = x[r][c];
    }

    const auto oracle = oracles::ols_normal_equations(x, y);
    OlsResult fit;
    try {
      fit = ols_fit(design);
    } catch (const Error& err) {
      expect(false, "instance " + std::to_string(instance) + ": unexpected error " + err.what());
      continue;
    }
    if (!fit.dropped_columns.empty()) {
      expect(false, "instance " + std::to_string(instance) + ": unexpected column drop");
      continue;
    }

    for (std::size_t c = 0; c < cols; ++c) {
      const double beta_ref = oracle.coefficients[c];
      const double beta_tol = 1e-8 * std::max(1.0, std::fabs(beta_ref));
      if (std::fabs(fit.coefficients[c] - beta_ref) > beta_tol) {
        expect(false, "instance " + std::to_string(instance) + " coefficient " +
                          std::to_string(c) + ": " + format_double(fit.coefficients[c]) +
                          " vs oracle " + format_double(beta_ref));
      }
      const double se_ref = oracle.standard_errors[c];
      const double se_tol = 1e-8 * std::max(1.0, se_ref);
      if (std::fabs(fit.standard_errors[c] - se_ref) > se_tol) {
        expect(false, "instance " + std::to_string(instance) + " standard error " +
                          std::to_string(c) + ": " + format_double(fit.standard_errors[c]) +
                          " vs oracle " + format_double(se_ref));
      }
    }

    // residual orthogonality on every instance
    double y_norm = 0;
    for (const double v : y) y_norm += v * v;
    y_norm = std::sqrt(y_norm);
    for (std::size_t c = 0; c < cols; ++c) {
      double dot = 0;
      for (std::size_t r = 0; r < rows; ++r) {
        double fitted = 0;
        for (std::size_t j = 0; j < cols; ++j) fitted += x[r][j] * fit.coefficients[j];
        dot += x[r][c] * (y[r] - fitted);
      }
      if (std::fabs(dot) > 1e-8 * y_norm) {
        expect(false, "instance " + std::to_string(instance) + ": residual orthogonality " +
                          format_double(std::fabs(dot)) + " > 1e-8*||y||");
      }
    }
  }
}

// --- criterion 3: t distribution --------------------------------------------

void t_distribution_accuracy() {
  for (const long df : {1L, 2L, 5L, 30L, 100L}) {
    for (double t = -10.0; t <= 10.0 + 1e-9; t += 0.25) {
      const double got = student_t_sf(t, df);
      const double want = oracles::student_t_sf_quadrature(t, df);
      if (std::fabs(got - want) > 1e-10) {
        expect(false, "sf(" + format_double(t) + ", " + std::to_string(df) + ") = " +
                          format_double(got) + ", oracle " + format_double(want));
      }
      const double symmetry = got + student_t_sf(-t, df) - 1.0;
      if (std::fabs(symmetry) > 1e-12) {
        expect(false, "sf symmetry violated at t=" + format_double(t) +
                          " df=" + std::to_string(df) + ": " + format_double(symmetry));
      }
    }
  }
}

// --- criterion 4: spearman ---------------------------------------------------

void spearman_criterion() {
  expect(spearman(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{2, 4, 6, 8, 10}) == 1.0,
         "spearman on increasing sequences must be exactly 1");
  expect(spearman(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{9, 7, 5, 3, 1}) == -1.0,
         "spearman on opposing sequences must be exactly -1");
  const double rho = spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 1, 4, 3});
  expect(std::fabs(rho - 0.6) <= 1e-12, "spearman([1,2,3,4],[2,1,4,3]) = " + format_double(rho));

  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + draw_below(rng, 40);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = static_cast<double>(draw_below(rng, 8));  // heavy ties
      ys[i] = static_cast<double>(draw_below(rng, 8));
    }
    double want;
    try {
      want = oracles::spearman_bruteforce(xs, ys);
    } catch (const std::runtime_error&) {
      --trial;  // degenerate draw; try again
      continue;
    }
    const double got = spearman(xs, ys);
    if (std::fabs(got - want) > 1e-12) {
      expect(false, "tied-input trial " + std::to_string(trial) + ": " + format_double(got) +
                        " vs oracle " + format_double(want));
    }
  }
}

// --- criterion 5: planted outlier end-to-end --------------------------------

struct PlantedWorld {
  fs::path dir;
  fs::path true_lexicon;
  fs::path corpus;
};

// 400 generated words, happiness spread over [1.3, 8.7]
void write_fixture_lexicon(const fs::path& path) {
  std::ostringstream out;
  std::mt19937_64 rng(777);
  std::vector<double> scores(400);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = 1.3 + 7.4 * static_cast<double>(i) / 399.0;
  }
  for (std::size_t i = scores.size(); i > 1; --i) {
    std::swap(scores[i - 1], scores[draw_below(rng, i)]);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::string word = "w";
    std::size_t v = i;
    for (int c = 0; c < 3; ++c) {
      word.push_back(static_cast<char>('a' + v % 26));
      v /= 26;
    }
    out << word << '\t' << format_double(scores[i]) << '\n';
  }
  write_file(path, out.str());
}

PlantedWorld make_world(const fs::path& base, std::uint64_t seed) {
  PlantedWorld world;
  world.dir = base / ("seed-" + std::to_string(seed));
  fs::create_directories(world.dir);
  world.true_lexicon = world.dir / "true_lexicon.tsv";
  write_fixture_lexicon(world.true_lexicon);

  RunConfig synth;
  synth.lexicon_path = world.true_lexicon;
  synth.seed = seed;
  synth.synth_docs = 2000;
  synth.synth_domains = {"finance", "news", "social", "reviews"};
  synth.synth_vocab = 300;
  synth.synth_words_min = 8;
  synth.synth_words_max = 30;
  synth.synth_output = world.dir / "corpus.jsonl";
  run_synth(synth);
  world.corpus = synth.synth_output;
  return world;
}

RunConfig audit_config(const PlantedWorld& world, const fs::path& lexicon,
                       const fs::path& outdir) {
  RunConfig config;
  config.lexicon_path = lexicon;
  config.corpus_path = world.corpus;
  config.cache_path = outdir.string() + ".cache.jsonl";
  config.output_dir = outdir;
  config.provider = "stub:lexicon-echo";
  config.stub_lexicon_path = world.true_lexicon;
  config.min_domains = 3;
  config.top_k = 10;
  return config;
}

// flip the most polar vocabulary word across the neutral midpoint 5
std::string corrupt_lexicon(const PlantedWorld& world, const fs::path& out_path) {
  const Lexicon lexicon = load_lexicon_file(world.true_lexicon).lexicon;
  const Corpus corpus = load_corpus_file(world.corpus);
  const auto vocabulary = select_vocabulary(corpus, lexicon, 3);

  std::string target;
  double polarity = -1;
  for (const auto& word : vocabulary) {
    const double h = *lexicon.find(word);
    if (std::fabs(h - 5.0) > polarity) {
      polarity = std::fabs(h - 5.0);
      target = word;
    }
  }
  auto entries = lexicon.entries();
  entries[target] = 10.0 - entries[target];

  std::ostringstream out;
  write_lexicon(out, Lexicon(entries, "corrupted"));
  write_file(out_path, out.str());
  return target;
}

const ScopeOutcome* pooled_scope(const AuditOutcome& outcome) {
  for (const auto& scope : outcome.scopes) {
    if (scope.name == "pooled") return &scope;
  }
  return nullptr;
}

void planted_outlier() {
  const auto started = std::chrono::steady_clock::now();
  const fs::path base =
      fs::temp_directory_path() / ("lexaudit-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(base);

  int planted_hits = 0;
  int null_clean = 0;
  const int seeds = 20;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const PlantedWorld world = make_world(base, seed);

    // perturbed run: one word flipped across neutral
    const fs::path bad_lexicon = world.dir / "corrupted_lexicon.tsv";
    const std::string target = corrupt_lexicon(world, bad_lexicon);
    const AuditOutcome planted =
        run_audit(audit_config(world, bad_lexicon, world.dir / "planted"));
    const ScopeOutcome* pooled = pooled_scope(planted);
    if (pooled != nullptr && !pooled->failed) {
      const auto& smallest = pooled->report.smallest_p;
      const std::size_t top = std::min<std::size_t>(5, smallest.size());
      for (std::size_t i = 0; i < top; ++i) {
        if (smallest[i].word == target) {
          ++planted_hits;
          break;
        }
      }
    }

    // null run: untouched lexicon, BH-adjusted p must stay above 0.001
    const AuditOutcome null_run =
        run_audit(audit_config(world, world.true_lexicon, world.dir / "null"));
    const ScopeOutcome* null_pooled = pooled_scope(null_run);
    if (null_pooled != nullptr && !null_pooled->failed) {
      const std::string regression = read_file(world.dir / "null" / "pooled" / "regression.csv");
      std::istringstream in(regression);
      std::string line;
      std::getline(in, line);  // header
      bool clean = true;
      while (std::getline(in, line)) {
        const auto fields = csv_split(line, ',');
        if (fields.size() < 7 || fields[0] == kInterceptLabel) continue;
        if (fields[6] == "true") continue;  // dropped column, no p
        const auto p_bh = parse_double(fields[5]);
        if (p_bh && *p_bh < 0.001) {
          clean = false;
          break;
        }
      }
      if (clean) ++null_clean;
    }
  }
  fs::remove_all(base);

  expect(planted_hits >= 19, "planted word reached the top-5 smallest-p list in only " +
                                 std::to_string(planted_hits) + "/20 seeds (need >= 19)");
  expect(null_clean >= 19, "null runs stayed clean (no BH-adjusted p < 0.001) in only " +
                               std::to_string(null_clean) + "/20 seeds (need >= 19)");

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("       planted-outlier: %d/20 hits, %d/20 clean nulls, %.1f s\n", planted_hits,
              null_clean, elapsed);
}

// --- criterion 6: BH adjustment ----------------------------------------------

void bh_criterion() {
  const auto adjusted = bh_adjust(std::vector<double>{0.01, 0.02, 0.03, 0.04});
  for (std::size_t i = 0; i < adjusted.size(); ++i) {
    expect(adjusted[i] == 0.04, "bh_adjust[" + std::to_string(i) + "] = " +
                                    format_double(adjusted[i]) + ", want exactly 0.04");
  }

  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + draw_below(rng, 50);
    std::vector<double> ps(n);
    for (double& p : ps) p = draw_unit(rng);
    const auto out = bh_adjust(ps);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ps[a] < ps[b]; });
    for (std::size_t i = 1; i < n; ++i) {
      if (out[order[i - 1]] > out[order[i]]) {
        expect(false, "bh_adjust not monotone on trial " + std::to_string(trial));
        break;
      }
    }
  }
}

// --- criterion 7: coverage fixture -------------------------------------------

void coverage_fixture() {
  const Lexicon lex(
      {{"alpha", 8.0}, {"beta", 6.0}, {"gamma", 4.0}, {"delta", 2.0}, {"omega", 5.0}}, "fixture");
  // hand-tallied: alpha in A,B,C,D; beta in A,B; gamma in B,C,D; delta in D; omega nowhere
  Corpus corpus{
      {"1", "A", "alpha beta alpha"},  {"2", "A", "beta noise"},
      {"3", "B", "alpha gamma"},       {"4", "B", "beta gamma zz"},
      {"5", "C", "gamma alpha"},       {"6", "C", "nothing here"},
      {"7", "D", "delta gamma alpha"}, {"8", "D", "delta"},
  };
  const CoverageStats stats = coverage_stats(corpus, lex);
  expect(stats.per_domain.at("A") == 2, "per_domain[A] = " + std::to_string(stats.per_domain.at("A")));
  expect(stats.per_domain.at("B") == 3, "per_domain[B] = " + std::to_string(stats.per_domain.at("B")));
  expect(stats.per_domain.at("C") == 2, "per_domain[C] = " + std::to_string(stats.per_domain.at("C")));
  expect(stats.per_domain.at("D") == 3, "per_domain[D] = " + std::to_string(stats.per_domain.at("D")));
  expect(stats.total_distinct == 4, "total_distinct = " + std::to_string(stats.total_distinct));
  expect(stats.overlap.at(1) == 1, "overlap[1] = " + std::to_string(stats.overlap.at(1)));  // delta
  expect(stats.overlap.at(2) == 1, "overlap[2] = " + std::to_string(stats.overlap.at(2)));  // beta
  expect(stats.overlap.at(3) == 1, "overlap[3] = " + std::to_string(stats.overlap.at(3)));  // gamma
  expect(stats.overlap.at(4) == 1, "overlap[4] = " + std::to_string(stats.overlap.at(4)));  // alpha

  // antitone vocabulary selection on the same fixture
  const auto v1 = select_vocabulary(corpus, lex, 1);
  const auto v2 = select_vocabulary(corpus, lex, 2);
  const auto v3 = select_vocabulary(corpus, lex, 3);
  const auto v4 = select_vocabulary(corpus, lex, 4);
  expect(v1 == std::vector<std::string>{"alpha", "beta", "delta", "gamma"}, "vocab(1) wrong");
  expect(v2 == std::vector<std::string>{"alpha", "beta", "gamma"}, "vocab(2) wrong");
  expect(v3 == std::vector<std::string>{"alpha", "gamma"}, "vocab(3) wrong");
  expect(v4 == std::vector<std::string>{"alpha"}, "vocab(4) wrong");
  expect(v4.size() <= v3.size() && v3.size() <= v2.size() && v2.size() <= v1.size(),
         "select_vocabulary must be antitone in min_domains");
}

// --- criterion 8: determinism with a warm cache ------------------------------

void determinism_warm_cache() {
  const fs::path base =
      fs::temp_directory_path() / ("lexaudit-determinism-" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);

  const fs::path lexicon_path = base / "lexicon.tsv";
  write_fixture_lexicon(lexicon_path);

  RunConfig config;
  config.lexicon_path = lexicon_path;
  config.seed = 7;
  config.synth_docs = 400;
  config.synth_domains = {"finance", "news", "social", "reviews"};
  config.synth_vocab = 120;
  config.synth_words_min = 6;
  config.synth_words_max = 18;
  config.synth_output = base / "corpus.jsonl";
  run_synth(config);

  config.corpus_path = config.synth_output;
  config.cache_path = base / "cache.jsonl";
  config.provider = "stub:perturbed-lexicon";
  config.stub_lexicon_path = lexicon_path;
  config.stub_overrides_path = base / "overrides.tsv";
  write_file(config.stub_overrides_path, "waaa\t5.0\n");
  config.min_domains = 2;
  config.top_k = 5;
  config.output_dir = base / "out";

  auto snapshot = [&]() {
    std::map<std::string, std::string> hashes;
    for (const auto& entry : fs::recursive_directory_iterator(config.output_dir)) {
      if (entry.is_regular_file()) {
        hashes[fs::relative(entry.path(), config.output_dir).string()] =
            fnv1a64_hex(read_file(entry.path()));
      }
    }
    return hashes;
  };

  const AuditOutcome first = run_audit(config);   // cold cache
  const auto before = snapshot();
  const AuditOutcome second = run_audit(config);  // warm cache, same directory
  const auto after = snapshot();

  expect(first.exit_code == second.exit_code, "exit codes differ between reruns");
  expect(before.size() == after.size(), "rerun changed the set of output files");
  for (const auto& [name, hash] : before) {
    const auto it = after.find(name);
    if (it == after.end() || it->second != hash) {
      expect(false, "rerun changed " + name);
    }
  }
  expect(!before.empty(), "audit produced no output files");
  fs::remove_all(base);
}

struct Criterion {
  const char* name;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"scoring-correctness", scoring_correctness},
      {"ols-oracle-equivalence", ols_oracle_equivalence},
      {"t-distribution-accuracy", t_distribution_accuracy},
      {"spearman", spearman_criterion},
      {"planted-outlier-end-to-end", planted_outlier},
      {"bh-adjustment", bh_criterion},
      {"coverage-fixture", coverage_fixture},
      {"determinism-warm-cache", determinism_warm_cache},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    g_failures.clear();
    try {
      criterion.body();
    } catch (const std::exception& ex) {
      g_failures.push_back(std::string("unhandled exception: ") + ex.what());
    }
    if (g_failures.empty()) {
      std::printf("[PASS] %s\n", criterion.name);
    } else {
      ++failed;
      std::printf("[FAIL] %s\n", criterion.name);
      for (const auto& failure : g_failures) {
        std::printf("       %s\n", failure.c_str());
      }
    }
    std::fflush(stdout);
  }
  if (failed > 0) {
    std::printf("%d criterion(s) failed\n", failed);
    return 1;
  }
  std::printf("all %zu acceptance criteria passed\n", criteria.size());
  return 0;
}
