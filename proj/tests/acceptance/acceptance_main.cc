// Copyright 2026 The HoGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL/SKIP line per criterion.
//
// Criteria that need Cora read it from --cora-dir or HOGS_CORA_DIR (a
// directory written by "hogs ingest"). Without it they run on a planted
// partition graph with Cora's published shape; checks that anchor to
// numbers measured on the real dataset are then reported as SKIP with the
// surrogate value shown.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "../reference.h"
#include "CLI11.hpp"
#include "hogs/collection.h"
#include "hogs/errors.h"
#include "hogs/features.h"
#include "hogs/gcn.h"
#include "hogs/graph_data.h"
#include "hogs/ldp.h"
#include "hogs/pipeline.h"
#include "hogs/planted_partition.h"
#include "hogs/random.h"
#include "hogs/topology.h"

namespace hogs {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSurrogateSeed = 2026;
constexpr int kFinalRepeats = 10;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CoraSource {
  GraphDataset data;
  bool real = false;
};

CoraSource load_cora(const std::string& dir) {
  if (!dir.empty()) return {load_dataset(DatasetFiles::in(dir)), true};
  return {generate_planted_partition(cora_shaped_spec(kSurrogateSeed)), false};
}

// ---------------------------------------------------------------------------
// Criteria without a dataset.

Outcome mechanism_fidelity() {
  const auto t0 = Clock::now();
  const int trials = 1'000'000;
  double worst_z = 0.0;
  std::uint64_t stream = 0;
  for (double eps : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double expected_flip = 1.0 / (std::exp(eps) + 1.0);
    const RrParams rr = RrParams::from_epsilon(eps);
    KeyedRng rng(17, stream++, StreamTag::kSynthetic);
    int flips = 0;
    for (int t = 0; t < trials; ++t) flips += rr_perturb_bit(true, rr, rng) ? 0 : 1;
    const double sigma = std::sqrt(expected_flip * (1 - expected_flip) / trials);
    worst_z = std::max(worst_z, std::abs(flips / double(trials) - expected_flip) / sigma);

    const OneBitParams one_bit{eps, 0.0, 1.0};
    for (double x : {0.0, 0.5, 1.0}) {
      const double e = std::exp(eps);
      const double expected = 1.0 / (e + 1.0) + x * (e - 1.0) / (e + 1.0);
      KeyedRng bit_rng(17, stream++, StreamTag::kSynthetic);
      int ones = 0;
      for (int t = 0; t < trials; ++t) ones += one_bit_perturb(x, one_bit, bit_rng) ? 1 : 0;
      const double s = std::sqrt(expected * (1 - expected) / trials);
      worst_z = std::max(worst_z, std::abs(ones / double(trials) - expected) / s);
    }
  }
  const double secs = seconds_since(t0);
  return verdict(worst_z <= 4.0 && secs < 10.0,
                 fmt("worst deviation %.2f sigma over 20 rates (limit 4), %.1f s (limit 10)",
                     worst_z, secs));
}

Outcome exact_ldp_bound() {
  double worst = 0.0;
  for (double eps : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    for (auto m : {Mechanism::kRandomizedResponse, Mechanism::kOneBit}) {
      worst = std::max(worst, std::abs(max_likelihood_ratio(m, eps) / std::exp(eps) - 1.0));
    }
  }
  return verdict(worst <= 1e-12, fmt("max relative error %.3g (limit 1e-12)", worst));
}

CollectionRound random_round(std::size_t n, std::size_t d, double eps_adj, KeyedRng& rng) {
  CollectionRound round;
  round.shape = {n, d, {}};
  round.budget = split_budget(2.0 * eps_adj, 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    NoisyReport r{static_cast<NodeId>(i), BitVector(n), BitVector(d), round.budget};
    for (std::size_t j = 0; j < n; ++j) r.noisy_adjacency.set(j, rng.bernoulli(0.4));
    for (std::size_t k = 0; k < d; ++k) r.noisy_features.set(k, rng.bernoulli(0.5));
    round.reports.push_back(std::move(r));
  }
  return round;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  KeyedRng rng(3, 0, StreamTag::kSynthetic);
  int topology_mismatch = 0;
  double feature_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const std::size_t d = 1 + rng.below(4);
    const double eps = 0.2 + 3.0 * rng.uniform();
    const double tau = rng.uniform();
    const CollectionRound round = random_round(n, d, eps, rng);
    const auto post = reference::pair_posteriors(round);
    const TopologyResult result = reconstruct_topology(round, tau);
    if (result.topology.edges != reference::thresholded_edges(post, tau)) ++topology_mismatch;
    const Matrix noisy = noisy_feature_matrix(round);
    const Matrix got = weighted_aggregate(build_neighbor_index(result.posteriors), noisy);
    const Matrix want = reference::dense_weighted_aggregate(post, noisy);
    feature_err = std::max(feature_err, (got - want).cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  return verdict(topology_mismatch == 0 && feature_err <= 1e-12 && secs < 5.0,
                 fmt("%d/200 topology mismatches, max feature error %.3g (limit 1e-12), %.2f s",
                     topology_mismatch, feature_err, secs));
}

Outcome posterior_worked_value() {
  const double p = RrParams::from_epsilon(std::log(3.0)).flip_prob;
  const Likelihoods lk = pair_likelihoods(true, true, p);
  const double post = link_posterior(0.5, lk.l, lk.l_prime);
  return verdict(std::abs(post - 0.9) <= 1e-12, fmt("P = %.17g (expected 0.9)", post));
}

Outcome gradient_correctness() {
  const auto t0 = Clock::now();
  KeyedRng rng(5, 0, StreamTag::kSynthetic);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(7), d = 1 + rng.below(5), h = 1 + rng.below(4),
                      c = 2 + rng.below(3);
    SyntheticTopology t{n, {}};
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (rng.bernoulli(0.4)) t.edges.push_back({i, j});
      }
    }
    Matrix x(n, d);
    for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = 2 * rng.uniform() - 1;
    std::vector<int> labels(n);
    std::vector<NodeId> nodes;
    for (NodeId i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.below(c));
      nodes.push_back(i);
    }
    GcnModel m = GcnModel::initialize(normalize_adjacency(t, n), d, h, c, 0.0, trial);
    const double wd = 1e-3;
    const LossAndGradients g = loss_and_gradients(m, x, labels, nodes, wd);
    for (auto [w, grad] : {std::pair{&m.w1, &g.grad_w1}, std::pair{&m.w2, &g.grad_w2}}) {
      for (Eigen::Index k = 0; k < w->size(); ++k) {
        const double saved = w->data()[k];
        w->data()[k] = saved + 1e-5;
        const double up = loss_and_gradients(m, x, labels, nodes, wd).loss;
        w->data()[k] = saved - 1e-5;
        const double down = loss_and_gradients(m, x, labels, nodes, wd).loss;
        w->data()[k] = saved;
        const double numeric = (up - down) / 2e-5;
        const double analytic = grad->data()[k];
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-3});
        worst = std::max(worst, std::abs(numeric - analytic) / scale);
      }
    }
  }
  const double secs = seconds_since(t0);
  return verdict(worst <= 1e-4 && secs < 30.0,
                 fmt("max relative error %.3g over 50 instances (limit 1e-4), %.2f s", worst,
                     secs));
}

// ---------------------------------------------------------------------------
// Dataset criteria.

class CoraCriteria {
 public:
  explicit CoraCriteria(CoraSource source) : src_(std::move(source)) {}

  bool real() const { return src_.real; }
  std::string tag() const { return src_.real ? "cora" : "cora-shaped surrogate"; }

  Outcome no_noise_limit() {
    const auto t0 = Clock::now();
    ExperimentConfig cfg = base();
    cfg.epsilon = 64.0;
    cfg.delta = 0.5;
    cfg.tau = 0.5;
    cfg.l = 0;
    int exact = 0;
    for (int r = 0; r < kFinalRepeats; ++r) {
      const SynthesizedGraph g = synthesize(ds(), cfg, cfg.repeat_seed(r));
      exact += g.topology.edges == ds().edges() ? 1 : 0;
    }
    const RunReport hogs = run_pipeline(cfg, ds());
    const RunReport& np = nonprivate();
    const double gap = std::abs(hogs.mean - np.mean);
    const double secs = seconds_since(t0);
    return verdict(exact == kFinalRepeats && gap <= 0.02 && secs < 300.0,
                   fmt("E recovered exactly in %d/%d repeats; accuracy %.4f vs nonprivate %.4f "
                       "(gap %.4f, limit 0.02); %.0f s",
                       exact, kFinalRepeats, hogs.mean, np.mean, gap, secs));
  }

  Outcome nonprivate_anchor() {
    const auto t0 = Clock::now();
    const RunReport& np = nonprivate();
    const double secs = seconds_since(t0) + nonprivate_secs_;
    const std::string detail = fmt("nonprivate GCN accuracy %.4f +- %.4f over %d seeds "
                                   "(floor 0.80); %.0f s",
                                   np.mean, np.std, kFinalRepeats, secs);
    if (!real()) return {Status::kSkip, detail + "; floor is specific to the real dataset"};
    return verdict(np.mean >= 0.80 && secs < 600.0, detail);
  }

  Outcome utility_ordering() {
    const auto t0 = Clock::now();
    std::map<std::pair<double, Variant>, RunReport> runs;
    std::string detail;
    for (double eps : {4.0, 6.0, 8.0}) {
      for (Variant v : {Variant::kHogs, Variant::kNoTr, Variant::kNoFr}) {
        runs[{eps, v}] = tuned_run(eps, v);
        const RunReport& r = runs[{eps, v}];
        std::printf("    eps %g %-6s acc %.4f +- %.4f  (delta %g, l %d, lr %g)\n", eps,
                    std::string(to_string(v)).c_str(), r.mean, r.std, r.config.delta,
                    r.config.l, r.config.gnn.learning_rate);
        std::fflush(stdout);
      }
    }
    bool ok = true;
    for (double eps : {4.0, 6.0, 8.0}) {
      const double h = runs[{eps, Variant::kHogs}].mean;
      const double tr = runs[{eps, Variant::kNoTr}].mean;
      const double fr = runs[{eps, Variant::kNoFr}].mean;
      const bool beats_tr = h >= tr + 0.05;
      const bool beats_fr = eps < 6.0 || h >= fr;
      ok = ok && beats_tr && beats_fr;
      detail += fmt("eps %g: hogs %.4f no_tr %.4f no_fr %.4f%s%s; ", eps, h, tr, fr,
                    beats_tr ? "" : " [hogs < no_tr + 0.05]",
                    beats_fr ? "" : " [hogs < no_fr]");
    }
    const RunReport& h4 = runs[{4.0, Variant::kHogs}];
    const RunReport& h6 = runs[{6.0, Variant::kHogs}];
    const RunReport& h8 = runs[{8.0, Variant::kHogs}];
    const bool monotone = h6.mean >= h4.mean - std::max(h4.std, h6.std) &&
                          h8.mean >= h6.mean - std::max(h6.std, h8.std);
    ok = ok && monotone;
    const double secs = seconds_since(t0);
    ok = ok && secs < 3600.0;
    detail += fmt("hogs non-decreasing in eps within 1 sigma: %s; %.0f s (limit 3600)",
                  monotone ? "yes" : "no", secs);
    return verdict(ok, detail);
  }

  Outcome public_feature_spot_check() {
    const auto t0 = Clock::now();
    ExperimentConfig cfg = base();
    cfg.epsilon = 5.0;
    cfg.public_features = true;
    cfg.delta = 0.0;
    GridSpec grid;
    grid.taus = {0.5, 0.7, 0.9};
    grid.learning_rates = {1e-2, 1e-3};
    grid.cell_repeats = 1;
    const GridResult chosen = grid_search(cfg, grid, ds());
    const RunReport r = run_pipeline(chosen.best, ds());
    const double secs = seconds_since(t0);
    const bool within = std::abs(r.mean - 0.847) <= 0.05;
    const std::string detail =
        fmt("accuracy %.4f +- %.4f (target 0.847 +- 0.05, tau %g, lr %g); %.0f s", r.mean, r.std,
            chosen.best.tau, chosen.best.gnn.learning_rate, secs);
    if (!real()) return {Status::kSkip, detail + "; target is specific to the real dataset"};
    return verdict(within && secs < 1800.0, detail);
  }

  Outcome homophily_recovery() {
    const auto t0 = Clock::now();
    ExperimentConfig cfg = base();
    cfg.epsilon = 8.0;
    double hogs_h = 0.0, raw_h = 0.0;
    for (int r = 0; r < kFinalRepeats; ++r) {
      const std::uint64_t seed = cfg.repeat_seed(r);
      const CollectionRound round = collect_round(ds(), cfg, seed);
      const TopologyResult topo = reconstruct_topology(round, cfg.tau);
      hogs_h += edge_homophily(topo.topology, ds().labels()).value_or(0.0);
      raw_h += edge_homophily(noisy_topology_or(round), ds().labels()).value_or(0.0);
    }
    hogs_h /= kFinalRepeats;
    raw_h /= kFinalRepeats;
    const double truth = edge_homophily(topology_of(ds()), ds().labels()).value_or(0.0);
    const double secs = seconds_since(t0);
    return verdict(hogs_h - raw_h >= 0.2 && secs < 600.0,
                   fmt("edge homophily %.4f (hogs) vs %.4f (raw noisy), gap %.4f (limit 0.2); "
                       "true graph %.4f; %.0f s",
                       hogs_h, raw_h, hogs_h - raw_h, truth, secs));
  }

  Outcome performance_envelope() {
    ExperimentConfig cfg = base();
    cfg.threads = 1;
    const auto t0 = Clock::now();
    const SynthesizedGraph g = synthesize(ds(), cfg, 1);
    const double secs = seconds_since(t0);
    return verdict(secs < 60.0,
                   fmt("n=%zu d=%zu: synthesis %.2f s single-threaded (collect %.0f ms, "
                       "topology %.0f ms, features %.0f ms; limit 60 s)",
                       ds().node_count(), ds().feature_dim(), secs, g.timings.collect,
                       g.timings.topology, g.timings.features));
  }

 private:
  const GraphDataset& ds() const { return src_.data; }

  ExperimentConfig base() const {
    ExperimentConfig cfg;
    cfg.repeats = kFinalRepeats;
    cfg.master_seed = 1;
    return cfg;
  }

  const RunReport& nonprivate() {
    if (!nonprivate_) {
      const auto t0 = Clock::now();
      ExperimentConfig cfg = base();
      cfg.variant = Variant::kNonprivate;
      nonprivate_ = run_pipeline(cfg, ds());
      nonprivate_secs_ = seconds_since(t0);
    }
    return *nonprivate_;
  }

  // Validation-selected configuration for one (epsilon, variant), then a
  // final run over kFinalRepeats seeds.
  RunReport tuned_run(double eps, Variant v) {
    ExperimentConfig cfg = base();
    cfg.epsilon = eps;
    cfg.variant = v;
    GridSpec grid;
    grid.deltas = {0.1, 0.3, 0.5, 0.7, 0.9};
    // no_fr publishes the noisy bits, so l has no effect there.
    grid.ls = v == Variant::kNoFr ? std::vector<int>{0} : std::vector<int>{0, 1, 2};
    grid.learning_rates = {1e-2, 1e-3};
    grid.cell_repeats = 1;
    const GridResult chosen = grid_search(cfg, grid, ds());
    return run_pipeline(chosen.best, ds());
  }

  CoraSource src_;
  std::optional<RunReport> nonprivate_;
  double nonprivate_secs_ = 0.0;
};

}  // namespace
}  // namespace hogs

int main(int argc, char** argv) {
  using namespace hogs;
  CLI::App app{"Acceptance criteria"};
  std::string cora_dir;
  if (const char* env = std::getenv("HOGS_CORA_DIR")) cora_dir = env;
  std::vector<int> only;
  std::string surrogate_out;
  app.add_option("--cora-dir", cora_dir, "Cora dataset directory (hogs ingest layout)");
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--write-surrogate", surrogate_out, "Write the surrogate dataset and exit");
  CLI11_PARSE(app, argc, argv);

  if (!surrogate_out.empty()) {
    save_dataset(generate_planted_partition(cora_shaped_spec(kSurrogateSeed)), surrogate_out);
    return 0;
  }

  const std::set<int> selected(only.begin(), only.end());
  auto wanted = [&](int id) { return selected.empty() || selected.count(id) > 0; };

  std::optional<CoraCriteria> cora;
  auto dataset = [&]() -> CoraCriteria& {
    if (!cora) cora.emplace(load_cora(cora_dir));
    return *cora;
  };

  struct Criterion {
    int id;
    const char* name;
    bool needs_data;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "mechanism fidelity", false, mechanism_fidelity},
      {2, "exact LDP bound", false, exact_ldp_bound},
      {3, "Bayesian oracle equivalence", false, oracle_equivalence},
      {4, "posterior worked value", false, posterior_worked_value},
      {5, "no-noise limit", true, [&] { return dataset().no_noise_limit(); }},
      {6, "gradient correctness", false, gradient_correctness},
      {7, "non-private anchor", true, [&] { return dataset().nonprivate_anchor(); }},
      {8, "utility ordering", true, [&] { return dataset().utility_ordering(); }},
      {9, "public-feature spot check", true,
       [&] { return dataset().public_feature_spot_check(); }},
      {10, "homophily recovery", true, [&] { return dataset().homophily_recovery(); }},
      {11, "performance envelope", true, [&] { return dataset().performance_envelope(); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!wanted(c.id)) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Status::kFail, std::string("threw: ") + e.what()};
    }
    const char* status = out.status == Status::kPass   ? "PASS"
                         : out.status == Status::kSkip ? "SKIP"
                                                       : "FAIL";
    if (out.status == Status::kFail) ++failures;
    std::string data;
    if (c.needs_data) data = " [" + dataset().tag() + "]";
    std::printf("criterion %2d %s  %s%s: %s\n", c.id, status, c.name, data.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
