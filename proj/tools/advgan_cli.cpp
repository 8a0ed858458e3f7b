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

// advgan command-line tool. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "advgan/advgan.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int exit_code(advgan_status s) {
  switch (s) {
    case ADVGAN_OK: return kExitOk;
    case ADVGAN_PARTIAL:
    case ADVGAN_VERIFY_FAILED:
    case ADVGAN_E_NUMERIC:
    case ADVGAN_E_INTERNAL: return kExitFailure;
    default: return kExitUsage;
  }
}

int report(advgan_status s, const char* what) {
  if (s != ADVGAN_OK && s != ADVGAN_PARTIAL && s != ADVGAN_VERIFY_FAILED) {
    std::fprintf(stderr, "advgan %s: %s: %s\n", what, advgan_status_name(s), advgan_last_error());
  }
  return exit_code(s);
}

// Prints and frees a library-owned string.
void emit(char* s, std::FILE* to = stdout) {
  if (s == nullptr) return;
  std::fputs(s, to);
  advgan_free_string(s);
}

bool has_wav_extension(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".wav";
}

struct TrainFlags {
  std::string config, x, y, out, resume, variant;
  std::optional<double> rho, eta_gen, eta_dis, lambda_c, lambda_e, width;
  std::optional<std::uint64_t> iterations, seed, batch, checkpoint_every;
  std::vector<std::string> sets;
};

int run_train(const TrainFlags& f) {
  advgan_config* cfg = nullptr;
  advgan_status s = advgan_config_create(&cfg);
  if (s != ADVGAN_OK) return report(s, "train");

  auto set = [&](const char* key, const std::string& value) {
    if (s == ADVGAN_OK) s = advgan_config_set(cfg, key, value.c_str());
  };
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  if (!f.config.empty()) s = advgan_config_load_file(cfg, f.config.c_str());
  if (!f.variant.empty()) set("variant", f.variant);
  if (f.rho) set("rho_gen", fmt(*f.rho));
  if (f.eta_gen) set("eta_gen", fmt(*f.eta_gen));
  if (f.eta_dis) set("eta_dis", fmt(*f.eta_dis));
  if (f.lambda_c) set("lambda_c", fmt(*f.lambda_c));
  if (f.lambda_e) set("lambda_e", fmt(*f.lambda_e));
  if (f.width) set("width", fmt(*f.width));
  if (f.iterations) set("iterations", std::to_string(*f.iterations));
  if (f.seed) set("seed", std::to_string(*f.seed));
  if (f.batch) set("batch", std::to_string(*f.batch));
  if (f.checkpoint_every) set("checkpoint_every", std::to_string(*f.checkpoint_every));
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "advgan train: --set expects key=value, got '%s'\n", kv.c_str());
      advgan_config_destroy(cfg);
      return kExitUsage;
    }
    set(kv.substr(0, eq).c_str(), kv.substr(eq + 1));
  }
  if (s == ADVGAN_OK) {
    s = advgan_train(cfg, f.x.c_str(), f.y.c_str(), f.out.c_str(),
                     f.resume.empty() ? nullptr : f.resume.c_str());
  }
  advgan_config_destroy(cfg);
  return report(s, "train");
}

int run_convert(const std::string& ckpt, const std::string& in, const std::string& out,
                const std::string& direction) {
  advgan_model* model = nullptr;
  advgan_status s = advgan_model_load(ckpt.c_str(), &model);
  if (s == ADVGAN_OK) {
    s = has_wav_extension(in)
            ? advgan_convert_wav(model, in.c_str(), out.c_str(), direction.c_str())
            : advgan_convert_gram(model, in.c_str(), out.c_str(), direction.c_str());
  }
  advgan_model_destroy(model);
  return report(s, "convert");
}

int run_verify(const std::string& suite, const std::string& ckpt) {
  if (suite == "toyeval" && ckpt.empty()) {
    std::fprintf(stderr, "advgan verify: the toyeval suite needs --ckpt\n");
    return kExitUsage;
  }
  advgan_model* model = nullptr;
  if (!ckpt.empty()) {
    const advgan_status s = advgan_model_load(ckpt.c_str(), &model);
    if (s != ADVGAN_OK) return report(s, "verify");
  }
  char* out = nullptr;
  const advgan_status s = advgan_verify(suite.c_str(), model, &out);
  emit(out);
  advgan_model_destroy(model);
  return report(s, "verify");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-envelope voice conversion with adversarially reweighted cycleGANs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(advgan_version()));

  std::string in_dir, out_dir;
  auto* extract = app.add_subcommand("extract", "Analyze a directory of WAV files into a corpus");
  extract->add_option("--in", in_dir, "Directory of 16 kHz mono PCM WAV files")->required();
  extract->add_option("--out", out_dir, "Corpus directory to write")->required();

  std::uint64_t synth_seed = 0;
  auto* synthgen = app.add_subcommand("synthgen", "Write the synthetic two-domain toy corpora");
  synthgen->add_option("--out", out_dir, "Output directory (gets x/ and y/)")->required();
  synthgen->add_option("--seed", synth_seed, "Generator seed");

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "Train a conversion model");
  train->add_option("--config", tf.config, "key=value config file");
  train->add_option("--x", tf.x, "Source-domain corpus directory")->required();
  train->add_option("--y", tf.y, "Target-domain corpus directory")->required();
  train->add_option("--out", tf.out, "Run directory")->required();
  train->add_option("--variant", tf.variant, "vanilla, wegan, gewegan or gimgan");
  train->add_option("--rho", tf.rho, "gimGAN rho_gen");
  train->add_option("--eta-gen", tf.eta_gen, "weGAN/geweGAN eta_gen");
  train->add_option("--eta-dis", tf.eta_dis, "geweGAN eta_dis");
  train->add_option("--lambda-c", tf.lambda_c, "Cycle loss weight");
  train->add_option("--lambda-e", tf.lambda_e, "Energy loss weight");
  train->add_option("--width", tf.width, "Width multiplier in (0, 1]");
  train->add_option("--iterations", tf.iterations, "Total iterations");
  train->add_option("--seed", tf.seed, "Run seed");
  train->add_option("--batch", tf.batch, "Batch size m");
  train->add_option("--checkpoint-every", tf.checkpoint_every, "Checkpoint interval");
  train->add_option("--set", tf.sets, "Extra key=value config override (repeatable)");
  train->add_option("--resume", tf.resume, "Continue from this checkpoint");

  std::string ckpt, in_path, out_path, direction;
  auto* convert = app.add_subcommand("convert", "Convert a gram or WAV file");
  convert->add_option("--ckpt", ckpt, "Checkpoint file")->required();
  convert->add_option("--in", in_path, "Input .egrm gram or .wav file")->required();
  convert->add_option("--out", out_path, "Output path (same kind as the input)")->required();
  convert->add_option("--direction", direction, "xy or yx")
      ->required()
      ->check(CLI::IsMember({"xy", "yx"}));

  std::string suite;
  std::string verify_ckpt;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "gradcheck, invariants or toyeval")
      ->required()
      ->check(CLI::IsMember({"gradcheck", "invariants", "toyeval"}));
  verify->add_option("--ckpt", verify_ckpt, "Checkpoint (toyeval)");

  double width = 1.0;
  auto* params = app.add_subcommand("params", "Print generator and discriminator sizes");
  params->add_option("--width", width, "Width multiplier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*extract) {
    std::size_t failures = 0;
    char* failed = nullptr;
    const advgan_status s = advgan_extract(in_dir.c_str(), out_dir.c_str(), &failures, &failed);
    emit(failed, stderr);
    if (s == ADVGAN_PARTIAL) {
      std::fprintf(stderr, "advgan extract: %zu file(s) failed\n", failures);
    }
    return report(s, "extract");
  }
  if (*synthgen) return report(advgan_synthgen(out_dir.c_str(), synth_seed), "synthgen");
  if (*train) return run_train(tf);
  if (*convert) return run_convert(ckpt, in_path, out_path, direction);
  if (*verify) return run_verify(suite, verify_ckpt);
  if (*params) {
    char* out = nullptr;
    const advgan_status s = advgan_param_report(width, &out);
    emit(out);
    return report(s, "params");
  }
  return kExitUsage;
}
