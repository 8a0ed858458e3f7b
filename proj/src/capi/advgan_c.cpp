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

#include "advgan/advgan.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "advgan/config.hpp"
#include "advgan/data.hpp"
#include "advgan/error.hpp"
#include "advgan/features.hpp"
#include "advgan/log.hpp"
#include "advgan/trainer.hpp"
#include "advgan/verify.hpp"

struct advgan_config {
  advgan::RunConfig run;
};

struct advgan_model {
  advgan::TrainerState state;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

advgan_status fail(advgan_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
advgan_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const advgan::ConfigError& e) {
    return fail(ADVGAN_E_CONFIG, e.what());
  } catch (const advgan::DimensionError& e) {
    return fail(ADVGAN_E_DIMENSION, e.what());
  } catch (const advgan::FormatError& e) {
    return fail(ADVGAN_E_FORMAT, e.what());
  } catch (const advgan::IoError& e) {
    return fail(ADVGAN_E_IO, e.what());
  } catch (const advgan::NumericError& e) {
    return fail(ADVGAN_E_NUMERIC, e.what());
  } catch (const advgan::ContractError& e) {
    return fail(ADVGAN_E_CONTRACT, e.what());
  } catch (const NullArgument& e) {
    return fail(ADVGAN_E_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ADVGAN_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ADVGAN_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ADVGAN_E_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw NullArgument(std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* advgan_version(void) { return "0.1.0"; }

const char* advgan_last_error(void) { return g_last_error.c_str(); }

const char* advgan_status_name(advgan_status status) {
  switch (status) {
    case ADVGAN_OK: return "ok";
    case ADVGAN_PARTIAL: return "partial";
    case ADVGAN_VERIFY_FAILED: return "verify_failed";
    case ADVGAN_E_CONFIG: return "config_error";
    case ADVGAN_E_ARGUMENT: return "argument_error";
    case ADVGAN_E_DIMENSION: return "dimension_error";
    case ADVGAN_E_FORMAT: return "format_error";
    case ADVGAN_E_IO: return "io_error";
    case ADVGAN_E_NUMERIC: return "numeric_error";
    case ADVGAN_E_CONTRACT: return "contract_error";
    case ADVGAN_E_INTERNAL: return "internal_error";
  }
  return "unknown";
}

void advgan_free_string(char* s) { std::free(s); }

void advgan_set_log_level(advgan_log_level level) {
  switch (level) {
    case ADVGAN_LOG_ERROR: advgan::set_log_level(advgan::LogLevel::kError); break;
    case ADVGAN_LOG_INFO: advgan::set_log_level(advgan::LogLevel::kInfo); break;
    case ADVGAN_LOG_DEBUG: advgan::set_log_level(advgan::LogLevel::kDebug); break;
  }
}

advgan_status advgan_config_create(advgan_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new advgan_config();
    return ADVGAN_OK;
  });
}

void advgan_config_destroy(advgan_config* cfg) { delete cfg; }

advgan_status advgan_config_set(advgan_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    cfg->run.set(key, value);
    return ADVGAN_OK;
  });
}

advgan_status advgan_config_load_file(advgan_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "cfg");
    require(path, "path");
    cfg->run.load_file(path);
    return ADVGAN_OK;
  });
}

advgan_status advgan_config_resolve(const advgan_config* cfg, char** text_out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(text_out, "text_out");
    *text_out = dup_string(advgan::format_config(cfg->run.resolve()));
    return ADVGAN_OK;
  });
}

advgan_status advgan_extract(const char* wav_dir, const char* corpus_dir, size_t* failures,
                             char** report_out) {
  return guarded([&] {
    require(wav_dir, "wav_dir");
    require(corpus_dir, "corpus_dir");
    if (!std::filesystem::is_directory(wav_dir)) {
      throw advgan::ConfigError(std::string("input directory '") + wav_dir + "' does not exist");
    }
    const auto result = advgan::ingest(wav_dir);
    advgan::save_corpus(corpus_dir, result.corpus);
    if (failures != nullptr) *failures = result.failures;
    if (report_out != nullptr) {
      std::string report;
      for (const auto& e : result.corpus.manifest) {
        if (e.status != "ok") report += e.relative_path + ": " + e.status + "\n";
      }
      *report_out = dup_string(report);
    }
    return result.failures == 0 ? ADVGAN_OK : ADVGAN_PARTIAL;
  });
}

advgan_status advgan_synthgen(const char* out_dir, uint64_t seed) {
  return guarded([&] {
    require(out_dir, "out_dir");
    const auto toy = advgan::make_toy_corpora(seed);
    const std::filesystem::path root(out_dir);
    advgan::save_corpus((root / "x").string(), toy.x);
    advgan::save_corpus((root / "y").string(), toy.y);
    return ADVGAN_OK;
  });
}

advgan_status advgan_train(const advgan_config* cfg, const char* x_dir, const char* y_dir,
                           const char* run_dir, const char* resume_checkpoint) {
  return guarded([&] {
    require(cfg, "cfg");
    require(x_dir, "x_dir");
    require(y_dir, "y_dir");
    require(run_dir, "run_dir");
    const advgan::TrainConfig requested = cfg->run.resolve();
    const advgan::Corpus cx = advgan::load_corpus(x_dir);
    const advgan::Corpus cy = advgan::load_corpus(y_dir);
    if (cx.grams.empty() || cy.grams.empty()) throw advgan::ConfigError("empty corpus");
    if (cx.min_frames() < requested.scale.frames || cy.min_frames() < requested.scale.frames) {
      throw advgan::ConfigError("corpus grams are shorter than patch_width=" +
                                std::to_string(requested.scale.frames));
    }

    advgan::TrainerState state;
    if (resume_checkpoint != nullptr) {
      state = advgan::load_checkpoint(resume_checkpoint);
      advgan::TrainConfig merged = state.config;
      merged.iterations = requested.iterations;
      merged.checkpoint_every = requested.checkpoint_every;
      if (advgan::format_config(merged) != advgan::format_config(requested)) {
        throw advgan::ConfigError(
            "resume config differs from the checkpoint beyond iterations/checkpoint_every");
      }
      state.config = merged;
    } else {
      state = advgan::TrainerState::initialize(requested, cx.stats, cy.stats);
    }
    advgan::train_to_dir(state, cx, cy, run_dir);
    return ADVGAN_OK;
  });
}

advgan_status advgan_model_load(const char* checkpoint, advgan_model** out) {
  return guarded([&] {
    require(checkpoint, "checkpoint");
    require(out, "out");
    if (!std::filesystem::is_regular_file(checkpoint)) {
      throw advgan::ConfigError(std::string("checkpoint '") + checkpoint + "' not found");
    }
    auto model = std::make_unique<advgan_model>();
    model->state = advgan::load_checkpoint(checkpoint);
    *out = model.release();
    return ADVGAN_OK;
  });
}

void advgan_model_destroy(advgan_model* model) { delete model; }

advgan_status advgan_model_iteration(const advgan_model* model, uint64_t* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->state.iteration;
    return ADVGAN_OK;
  });
}

advgan_status advgan_convert_gram(const advgan_model* model, const char* in_gram,
                                  const char* out_gram, const char* direction) {
  return guarded([&] {
    require(model, "model");
    require(in_gram, "in_gram");
    require(out_gram, "out_gram");
    require(direction, "direction");
    const auto dir = advgan::parse_direction(direction);
    const auto gram = advgan::read_gram(in_gram);
    advgan::write_gram(out_gram, advgan::convert(model->state, gram, dir));
    return ADVGAN_OK;
  });
}

advgan_status advgan_convert_wav(const advgan_model* model, const char* in_wav,
                                 const char* out_wav, const char* direction) {
  return guarded([&] {
    require(model, "model");
    require(in_wav, "in_wav");
    require(out_wav, "out_wav");
    require(direction, "direction");
    const auto dir = advgan::parse_direction(direction);
    const auto clip = advgan::read_wav(in_wav);
    const auto fb = advgan::build_mel_filterbank();
    const auto src = advgan::extract_gram(clip, fb);
    const auto conv = advgan::convert(model->state, src, dir);
    advgan::write_wav(out_wav, advgan::resynthesize(clip, src, conv, fb));
    return ADVGAN_OK;
  });
}

advgan_status advgan_verify(const char* suite, const advgan_model* model, char** report_out) {
  return guarded([&] {
    require(suite, "suite");
    require(report_out, "report_out");
    const std::string name(suite);
    advgan::SuiteReport report;
    if (name == "gradcheck") {
      report = advgan::gradcheck_suite();
    } else if (name == "invariants") {
      report = advgan::invariants_suite();
    } else if (name == "toyeval") {
      if (model == nullptr) throw advgan::ConfigError("toyeval needs a checkpoint");
      report = advgan::toyeval_suite(model->state);
    } else {
      throw advgan::ConfigError("unknown suite '" + name +
                                "' (expected gradcheck, invariants or toyeval)");
    }
    *report_out = dup_string(report.json_lines());
    return report.passed() ? ADVGAN_OK : ADVGAN_VERIFY_FAILED;
  });
}

advgan_status advgan_param_report(double width, char** report_out) {
  return guarded([&] {
    require(report_out, "report_out");
    *report_out = dup_string(advgan::param_report_json(advgan::param_report(width)) + "\n");
    return ADVGAN_OK;
  });
}

}  // extern "C"
