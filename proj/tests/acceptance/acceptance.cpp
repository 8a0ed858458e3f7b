// Copyright 2026 The advgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
// The toy-conversion criteria train four width-1/8 models for 5000 steps
// each plus one energy ablation run, so a full run takes on the order of an
// hour on one core. ADVGAN_ACCEPTANCE_ITERS lowers the step count for
// smoke runs; criteria 5 to 7 then report FAIL because the budget differs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "advgan/data.hpp"
#include "advgan/log.hpp"
#include "advgan/trainer.hpp"
#include "advgan/verify.hpp"

using namespace advgan;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string failing_checks(const SuiteReport& r) {
  std::string s;
  for (const auto& c : r.checks) {
    if (!c.passed) s += " [" + c.name + " measured=" + format_double(c.measured) + "]";
  }
  return s;
}

bool all_finite(const StepMetrics& m) {
  for (double v : {m.d_x, m.d_y, m.g_adv_xy, m.g_adv_yx, m.cycle, m.energy, m.mean_d_real_x,
                   m.mean_d_fake_x, m.mean_d_real_y, m.mean_d_fake_y, m.w_entropy_g,
                   m.w_entropy_d}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ToyRun {
  std::string label;
  ToyEvalReport before;
  ToyEvalReport after;
  double seconds = 0.0;
  bool finite = true;
  std::uint64_t first_nonfinite = 0;
};

TrainConfig toy_config(Variant v, std::uint64_t iterations) {
  TrainConfig c;
  c.variant = VariantSelector::with_defaults(v);
  c.scale = NetScale{0.125, kMelBins, kToyFrames};
  c.batch = 4;
  c.iterations = iterations;
  c.seed = 2024;
  return c;
}

ToyRun run_toy(const std::string& label, const TrainConfig& cfg, const ToyCorpora& data) {
  ToyRun r;
  r.label = label;
  TrainerState st = TrainerState::initialize(cfg, data.x.stats, data.y.stats);
  r.before = toy_eval(st);
  const auto t0 = Clock::now();
  train(st, data.x, data.y, [&](const StepMetrics& m, const TrainerState&) {
    if (r.finite && !all_finite(m)) {
      r.finite = false;
      r.first_nonfinite = m.iter;
    }
  });
  r.seconds = seconds_since(t0);
  r.after = toy_eval(st);
  std::printf("  %-14s before=%.3f after=%.3f (xy %zu/%zu, yx %zu/%zu) energy_dev=%.4f %.0fs\n",
              label.c_str(), r.before.accuracy, r.after.accuracy, r.after.matched_xy,
              r.after.patches, r.after.matched_yx, r.after.patches, r.after.energy_deviation,
              r.seconds);
  std::fflush(stdout);
  return r;
}

}  // namespace

int main() {
  set_log_level(LogLevel::kError);
  std::uint64_t toy_iters = 5000;
  if (const char* env = std::getenv("ADVGAN_ACCEPTANCE_ITERS")) toy_iters = std::stoull(env);
  const bool full_budget = toy_iters == 5000;

  {
    const auto t0 = Clock::now();
    const SuiteReport r = gradcheck_suite(1e-4, 1e-5);
    const double s = seconds_since(t0);
    report(1, r.passed() && s < 120.0,
           std::to_string(r.checks.size()) + " finite-difference checks, " + format_double(s) +
               " s" + failing_checks(r));
  }
  {
    const SuiteReport r = formula_suite(1000, 5);
    report(2, r.passed(), std::to_string(r.checks.size()) + " formula checks" + failing_checks(r));
  }
  {
    const auto t0 = Clock::now();
    const SuiteReport r = collapse_suite(200, NetScale{0.125, kMelBins, kToyFrames});
    report(3, r.passed(),
           "gimgan rho=1, wegan m=1, gewegan eta=0 vs vanilla over 200 steps, " +
               format_double(std::round(seconds_since(t0))) + " s" + failing_checks(r));
  }
  {
    const SuiteReport r = gim_scaling_suite();
    std::string detail;
    for (const auto& c : r.checks) {
      detail += " " + c.name + "=" + format_double(c.measured) + (c.passed ? "" : "(fail)");
    }
    report(4, r.passed(), "fake-term loss and gradient vs rho^2 x vanilla:" + detail);
  }

  // Criteria 5 to 7 share the toy runs.
  const ToyCorpora data = make_toy_corpora(1);
  std::vector<ToyRun> runs;
  for (Variant v : {Variant::kVanilla, Variant::kWeGan, Variant::kGeweGan, Variant::kGimGan}) {
    runs.push_back(run_toy(variant_name(v), toy_config(v, toy_iters), data));
  }
  TrainConfig no_energy = toy_config(Variant::kVanilla, toy_iters);
  no_energy.loss.lambda_energy = 0.0;
  const ToyRun ablation = run_toy("vanilla_le0", no_energy, data);

  {
    bool pass = full_budget;
    std::string detail;
    for (const auto& r : runs) {
      const bool ok =
          r.after.accuracy >= 0.8 && r.before.accuracy <= 0.1 && r.seconds <= 1800.0;
      pass = pass && ok;
      detail += " " + r.label + "=" + format_double(r.before.accuracy) + "->" +
                format_double(r.after.accuracy) + "/" +
                format_double(std::round(r.seconds)) + "s";
    }
    if (!full_budget) detail += " (reduced budget " + std::to_string(toy_iters) + " steps)";
    report(5, pass, "held-out peak accuracy before->after:" + detail);
  }
  {
    const double with = runs[0].after.energy_deviation, without = ablation.after.energy_deviation;
    const bool pass = full_budget && with < without && with <= 0.1;
    report(6, pass,
           "energy deviation lambda_e=1 " + format_double(with) + " vs lambda_e=0 " +
               format_double(without) + (full_budget ? "" : " (reduced budget)"));
  }
  {
    bool pass = full_budget;
    std::string detail;
    for (const auto& r : runs) {
      pass = pass && r.finite;
      detail += " " + r.label + (r.finite ? "=finite"
                                          : "=non-finite at " + std::to_string(r.first_nonfinite));
    }
    report(7, pass, std::to_string(toy_iters) + " steps per variant:" + detail);
  }

  {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "advgan_acceptance_determinism";
    fs::remove_all(root);
    const ToyCorpora small = make_toy_corpora(17, 40, 64);
    TrainConfig c = toy_config(Variant::kGeweGan, 30);
    c.scale = NetScale{0.0625, kMelBins, 64};
    c.checkpoint_every = 15;
    auto fresh = [&](const TrainConfig& cfg) {
      return TrainerState::initialize(cfg, small.x.stats, small.y.stats);
    };
    TrainerState a = fresh(c), b = fresh(c);
    train_to_dir(a, small.x, small.y, (root / "a").string());
    train_to_dir(b, small.x, small.y, (root / "b").string());
    const bool same_csv = slurp(root / "a/metrics.csv") == slurp(root / "b/metrics.csv");

    TrainConfig half = c;
    half.iterations = 15;
    TrainerState p = fresh(half);
    train_to_dir(p, small.x, small.y, (root / "r").string());
    TrainerState q = load_checkpoint((root / "r/ckpt_15.cgvc").string());
    q.config.iterations = 30;
    train_to_dir(q, small.x, small.y, (root / "r").string());
    const bool same_resume = slurp(root / "a/metrics.csv") == slurp(root / "r/metrics.csv") &&
                             slurp(root / "a/ckpt_30.cgvc") == slurp(root / "r/ckpt_30.cgvc");
    fs::remove_all(root);
    report(8, same_csv && same_resume,
           std::string("same-seed metrics ") + (same_csv ? "identical" : "differ") +
               ", resume at 15 of 30 " + (same_resume ? "bit-exact" : "diverges"));
  }
  {
    const ParamReport r = param_report(1.0);
    std::printf("  %s\n", param_report_json(r).c_str());
    report(9, r.generator > 0 && r.discriminator > 0,
           "generator " + std::to_string(r.generator) + ", discriminator " +
               std::to_string(r.discriminator) + ", reference generator " +
               std::to_string(r.reference_generator) + " (report only)");
  }

  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
