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

#include "advgan/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../common/binio.hpp"
#include "advgan/adversarial.hpp"
#include "advgan/error.hpp"
#include "advgan/log.hpp"
#include "advgan/ops.hpp"

namespace fs = std::filesystem;

namespace advgan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void zero_grads(const std::vector<Tensor>& params) {
  for (auto t : params) t.zero_grad();
}

double mean_of(const Tensor& t) {
  double s = 0.0;
  for (double v : t.data()) s += v;
  return s / static_cast<double>(t.numel());
}

std::string score_summary(const char* name, const Tensor& t) {
  if (!t.defined()) return std::string(name) + "=n/a";
  double lo = t.data()[0], hi = t.data()[0];
  for (double v : t.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::ostringstream os;
  os << name << "[mean=" << mean_of(t) << " min=" << lo << " max=" << hi << "]";
  return os.str();
}

}  // namespace

TrainerState TrainerState::initialize(const TrainConfig& config, NormStats stats_x,
                                      NormStats stats_y) {
  config.validate();
  TrainerState s;
  s.config = config;
  const std::uint64_t seed = config.seed;
  s.g_xy = Generator::build(config.scale, splitmix64(seed * 8 + 1));
  s.g_yx = Generator::build(config.scale, splitmix64(seed * 8 + 2));
  s.d_x = Discriminator::build(config.scale, splitmix64(seed * 8 + 3));
  s.d_y = Discriminator::build(config.scale, splitmix64(seed * 8 + 4));
  s.adam_g_xy = AdamState::for_params(s.g_xy.parameters());
  s.adam_g_yx = AdamState::for_params(s.g_yx.parameters());
  s.adam_d_x = AdamState::for_params(s.d_x.parameters());
  s.adam_d_y = AdamState::for_params(s.d_y.parameters());
  s.rng.seed(splitmix64(seed * 8 + 5));
  s.stats_x = std::move(stats_x);
  s.stats_y = std::move(stats_y);
  return s;
}

std::vector<NamedTensor> TrainerState::named_tensors() const {
  std::vector<NamedTensor> out;
  for (auto& nt : g_xy.named_parameters("g_xy")) out.push_back(nt);
  for (auto& nt : g_yx.named_parameters("g_yx")) out.push_back(nt);
  for (auto& nt : d_x.named_parameters("d_x")) out.push_back(nt);
  for (auto& nt : d_y.named_parameters("d_y")) out.push_back(nt);
  return out;
}

std::string format_metrics_row(const StepMetrics& m) {
  std::string row = std::to_string(m.iter);
  for (double v : {m.d_x, m.d_y, m.g_adv_xy, m.g_adv_yx, m.cycle, m.energy, m.mean_d_real_x,
                   m.mean_d_fake_x, m.mean_d_real_y, m.mean_d_fake_y, m.w_entropy_g,
                   m.w_entropy_d}) {
    row += ',';
    row += format_double(v);
  }
  return row;
}

StepMetrics train_step(TrainerState& state, const Tensor& batch_x, const Tensor& batch_y) {
  const auto& cfg = state.config;
  const auto dx_params = state.d_x.parameters();
  const auto dy_params = state.d_y.parameters();
  const auto gxy_params = state.g_xy.parameters();
  const auto gyx_params = state.g_yx.parameters();

  StepMetrics m;
  m.iter = state.iteration + 1;
  Tensor rx, fx, ry, fy;
  try {
    // (1) Generators on fresh batches; the graphs are reused for G's update.
    const Tensor fake_y = state.g_xy.forward(batch_x);
    const Tensor fake_x = state.g_yx.forward(batch_y);

    // (2) Discriminators on real and detached fake patches.
    zero_grads(dx_params);
    zero_grads(dy_params);
    rx = state.d_x.forward(batch_x);
    fx = state.d_x.forward(stop_gradient(fake_x));
    ry = state.d_y.forward(batch_y);
    fy = state.d_y.forward(stop_gradient(fake_y));
    const DiscriminatorLoss loss_dx = d_loss(rx, fx, cfg.variant);
    const DiscriminatorLoss loss_dy = d_loss(ry, fy, cfg.variant);
    add(loss_dx.loss, loss_dy.loss).backward();
    {
      auto p = dx_params;
      adam_step(p, state.adam_d_x, cfg.lr_d);
      auto q = dy_params;
      adam_step(q, state.adam_d_y, cfg.lr_d);
    }
    m.d_x = loss_dx.loss.item();
    m.d_y = loss_dy.loss.item();
    m.mean_d_real_x = mean_of(rx);
    m.mean_d_fake_x = mean_of(fx);
    m.mean_d_real_y = mean_of(ry);
    m.mean_d_fake_y = mean_of(fy);
    m.w_entropy_d = 0.5 * (weight_entropy(loss_dx.fake_weights) +
                           weight_entropy(loss_dy.fake_weights));

    // (3) Generators against the updated discriminators.
    zero_grads(gxy_params);
    zero_grads(gyx_params);
    const Tensor score_fake_y = state.d_y.forward(fake_y);
    const Tensor score_fake_x = state.d_x.forward(fake_x);
    const GeneratorAdvLoss adv_xy = g_adv_loss(score_fake_y, cfg.variant);
    const GeneratorAdvLoss adv_yx = g_adv_loss(score_fake_x, cfg.variant);
    const Tensor cyc = cycle_loss(batch_x, state.g_yx.forward(fake_y), batch_y,
                                  state.g_xy.forward(fake_x));
    const Tensor energy = energy_loss(batch_x, fake_y, batch_y, fake_x, 1.0);
    const Tensor total = total_generator_loss(
        {adv_xy.loss, adv_yx.loss, cyc, scale(energy, cfg.loss.lambda_energy)}, cfg.loss);
    total.backward();
    {
      auto p = gxy_params;
      adam_step(p, state.adam_g_xy, cfg.lr_g);
      auto q = gyx_params;
      adam_step(q, state.adam_g_yx, cfg.lr_g);
    }
    // The generator pass also reached the discriminators; keep them clean.
    zero_grads(dx_params);
    zero_grads(dy_params);

    m.g_adv_xy = adv_xy.loss.item();
    m.g_adv_yx = adv_yx.loss.item();
    m.cycle = cyc.item();
    m.energy = energy.item();
    m.w_entropy_g = 0.5 * (weight_entropy(adv_xy.weights) + weight_entropy(adv_yx.weights));
  } catch (const NumericError& e) {
    std::ostringstream os;
    os << "training diverged at iteration " << m.iter << ": " << e.what() << "; "
       << score_summary("d_real_x", rx) << ' ' << score_summary("d_fake_x", fx) << ' '
       << score_summary("d_real_y", ry) << ' ' << score_summary("d_fake_y", fy);
    log_error(os.str());
    throw NumericError(os.str());
  }
  state.iteration += 1;
  return m;
}

// ---------------------------------------------------------------------------

CropSampler::CropSampler(const Corpus& corpus, std::size_t width)
    : width_(width), bins_(corpus.grams.empty() ? 0 : corpus.grams.front().bins) {
  if (corpus.grams.empty()) throw ConfigError("cannot sample from an empty corpus");
  for (const auto& g : corpus.grams) {
    if (g.frames < width) {
      throw ConfigError("corpus '" + corpus.speaker + "' holds a gram of " +
                        std::to_string(g.frames) + " frames, shorter than the patch width " +
                        std::to_string(width));
    }
    if (g.bins != bins_) throw DimensionError("corpus grams disagree on bin count");
    normalized_.push_back(g.normalized ? g : apply_norm(g, corpus.stats));
  }
}

Tensor CropSampler::sample(std::size_t m, std::mt19937_64& rng) const {
  std::vector<double> data(m * bins_ * width_);
  std::uniform_int_distribution<std::size_t> pick(0, normalized_.size() - 1);
  for (std::size_t s = 0; s < m; ++s) {
    const auto& g = normalized_[pick(rng)];
    std::uniform_int_distribution<std::size_t> offset(0, g.frames - width_);
    const std::size_t t0 = offset(rng);
    for (std::size_t b = 0; b < bins_; ++b) {
      for (std::size_t t = 0; t < width_; ++t) {
        data[(s * bins_ + b) * width_ + t] = g.at(b, t0 + t);
      }
    }
  }
  return Tensor::from({m, 1, bins_, width_}, std::move(data));
}

void train(TrainerState& state, const Corpus& corpus_x, const Corpus& corpus_y,
           const StepObserver& observer) {
  const auto& cfg = state.config;
  if (corpus_x.grams.empty() || corpus_y.grams.empty()) {
    throw ConfigError("training needs two non-empty corpora");
  }
  const CropSampler sample_x(corpus_x, cfg.scale.frames);
  const CropSampler sample_y(corpus_y, cfg.scale.frames);
  while (state.iteration < cfg.iterations) {
    const Tensor bx = sample_x.sample(cfg.batch, state.rng);
    const Tensor by = sample_y.sample(cfg.batch, state.rng);
    const StepMetrics m = train_step(state, bx, by);
    if (observer) observer(m, state);
  }
}

void train_to_dir(TrainerState& state, const Corpus& corpus_x, const Corpus& corpus_y,
                  const std::string& run_dir) {
  std::error_code ec;
  fs::create_directories(run_dir, ec);
  if (ec) throw IoError("cannot create run directory '" + run_dir + "': " + ec.message());
  const std::string resolved = format_config(state.config);
  binio::write_file_atomic((fs::path(run_dir) / "config.txt").string(), resolved);
  log_info("resolved config:\n" + resolved);

  const fs::path csv_path = fs::path(run_dir) / "metrics.csv";
  std::string kept = std::string(kMetricsHeader) + "\n";
  if (state.iteration > 0 && fs::exists(csv_path)) {
    std::istringstream in(binio::read_file(csv_path.string()));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto iter = std::stoull(line.substr(0, line.find(',')));
      if (iter <= state.iteration) kept += line + "\n";
    }
  }
  {
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + csv_path.string() + "'");
    out << kept;
  }
  std::ofstream csv(csv_path, std::ios::binary | std::ios::app);
  if (!csv) throw IoError("cannot append to '" + csv_path.string() + "'");

  const std::uint64_t every = state.config.checkpoint_every;
  train(state, corpus_x, corpus_y, [&](const StepMetrics& m, const TrainerState& s) {
    csv << format_metrics_row(m) << '\n';
    if (m.iter % every == 0) {
      csv.flush();
      const std::string name = "ckpt_" + std::to_string(m.iter) + ".cgvc";
      save_checkpoint(s, (fs::path(run_dir) / name).string());
      save_checkpoint(s, (fs::path(run_dir) / "latest.cgvc").string());
      log_info("iteration " + std::to_string(m.iter) + ": d_x=" + format_double(m.d_x) +
               " d_y=" + format_double(m.d_y) + " cycle=" + format_double(m.cycle) +
               " energy=" + format_double(m.energy));
    }
  });
  csv.flush();
  save_checkpoint(state, (fs::path(run_dir) / "latest.cgvc").string());
}

// ---------------------------------------------------------------------------

Direction parse_direction(const std::string& s) {
  if (s == "xy") return Direction::kXtoY;
  if (s == "yx") return Direction::kYtoX;
  throw ConfigError("direction must be 'xy' or 'yx', got '" + s + "'");
}

EnvelopeGram convert(const TrainerState& state, const EnvelopeGram& gram, Direction direction) {
  gram.validate();
  const bool forward = direction == Direction::kXtoY;
  const NormStats& src = forward ? state.stats_x : state.stats_y;
  const NormStats& dst = forward ? state.stats_y : state.stats_x;
  if (src.mean.size() != gram.bins || dst.mean.size() != gram.bins) {
    throw ConfigError("normalization statistics do not match the gram's " +
                      std::to_string(gram.bins) + " bins");
  }
  if (gram.bins != state.config.scale.bins) {
    throw DimensionError("gram has " + std::to_string(gram.bins) + " bins, model expects " +
                         std::to_string(state.config.scale.bins));
  }
  const EnvelopeGram norm = gram.normalized ? gram : apply_norm(gram, src);

  const std::size_t bins = gram.bins, frames = gram.frames;
  const std::size_t padded = (frames + 3) / 4 * 4;
  std::vector<double> data(bins * padded);
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t t = 0; t < padded; ++t) {
      data[b * padded + t] = norm.at(b, std::min(t, frames - 1));
    }
  }
  const Generator& g = forward ? state.g_xy : state.g_yx;
  const Tensor out = g.forward(Tensor::from({1, 1, bins, padded}, std::move(data)));

  EnvelopeGram result;
  result.bins = bins;
  result.frames = frames;
  result.hop_seconds = gram.hop_seconds;
  result.normalized = true;
  result.values.resize(bins * frames);
  const auto y = out.data();
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < bins; ++b) result.at(b, t) = y[b * padded + t];
  }
  return invert_norm(result, dst);
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

void write_tensor(binio::Writer& w, const std::string& name, const Shape& shape,
                  std::span<const double> data) {
  w.str(name);
  w.u32(static_cast<std::uint32_t>(shape.size()));
  for (auto d : shape) w.u32(static_cast<std::uint32_t>(d));
  w.f64s(data.data(), data.size());
}

struct StoredTensor {
  std::string name;
  Shape shape;
  std::vector<double> data;
};

StoredTensor read_tensor(binio::Reader& r) {
  StoredTensor t;
  t.name = r.str();
  const auto rank = r.u32();
  if (rank == 0 || rank > 8) throw FormatError(r.what() + ": bad rank for tensor '" + t.name + "'");
  for (std::uint32_t i = 0; i < rank; ++i) t.shape.push_back(r.u32());
  t.data = r.f64s(shape_numel(t.shape));
  return t;
}

struct AdamGroup {
  const char* name;
  AdamState TrainerState::*state;
  std::vector<NamedTensor> (*params)(const TrainerState&);
};

const AdamGroup kAdamGroups[] = {
    {"g_xy", &TrainerState::adam_g_xy,
     [](const TrainerState& s) { return s.g_xy.named_parameters("g_xy"); }},
    {"g_yx", &TrainerState::adam_g_yx,
     [](const TrainerState& s) { return s.g_yx.named_parameters("g_yx"); }},
    {"d_x", &TrainerState::adam_d_x,
     [](const TrainerState& s) { return s.d_x.named_parameters("d_x"); }},
    {"d_y", &TrainerState::adam_d_y,
     [](const TrainerState& s) { return s.d_y.named_parameters("d_y"); }},
};

void write_stats_block(binio::Writer& w, const NormStats& s) {
  w.f64s(s.mean.data(), s.mean.size());
  w.f64s(s.stddev.data(), s.stddev.size());
  w.u64(s.count);
}

NormStats read_stats_block(binio::Reader& r, std::size_t bins) {
  NormStats s;
  s.mean = r.f64s(bins);
  s.stddev = r.f64s(bins);
  s.count = r.u64();
  return s;
}

struct Checkpoint {
  TrainConfig config;
  std::uint64_t iteration = 0;
  std::vector<StoredTensor> tensors;
  struct Adam {
    std::string name;
    AdamState state;
    std::vector<StoredTensor> m, v;
  };
  std::vector<Adam> adam;
  std::string rng;
  NormStats stats_x, stats_y;
};

Checkpoint parse_checkpoint(const std::string& path) {
  binio::Reader r(binio::read_file(path), path);
  r.expect_magic("CGVC");
  const auto version = r.u32();
  if (version != kCheckpointVersion) {
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ck;
  const std::string snapshot = r.str();
  RunConfig rc;
  std::string config_text;
  {
    std::istringstream in(snapshot);
    std::string line;
    bool have_iter = false;
    while (std::getline(in, line)) {
      if (line.rfind("state.iteration=", 0) == 0) {
        ck.iteration = std::stoull(line.substr(16));
        have_iter = true;
      } else {
        config_text += line + "\n";
      }
    }
    if (!have_iter) throw FormatError(path + ": config snapshot lacks the iteration counter");
  }
  try {
    rc.load_text(config_text, path);
    ck.config = rc.resolve();
  } catch (const ConfigError& e) {
    throw FormatError(path + ": invalid config snapshot: " + e.what());
  }
  const auto count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) ck.tensors.push_back(read_tensor(r));
  const auto groups = r.u32();
  for (std::uint32_t i = 0; i < groups; ++i) {
    Checkpoint::Adam a;
    a.name = r.str();
    a.state.step = r.u64();
    a.state.hyper.beta1 = r.f64();
    a.state.hyper.beta2 = r.f64();
    a.state.hyper.eps = r.f64();
    const auto n = r.u32();
    for (std::uint32_t k = 0; k < n; ++k) a.m.push_back(read_tensor(r));
    for (std::uint32_t k = 0; k < n; ++k) a.v.push_back(read_tensor(r));
    ck.adam.push_back(std::move(a));
  }
  ck.rng = r.str();
  const auto bins = r.u32();
  ck.stats_x = read_stats_block(r, bins);
  ck.stats_y = read_stats_block(r, bins);
  if (!r.at_end()) throw FormatError(path + ": trailing bytes after checkpoint");
  return ck;
}

void apply_checkpoint(TrainerState& state, const Checkpoint& ck, const std::string& path) {
  auto targets = state.named_tensors();
  if (targets.size() != ck.tensors.size()) {
    throw DimensionError(path + ": checkpoint holds " + std::to_string(ck.tensors.size()) +
                         " tensors, model has " + std::to_string(targets.size()));
  }
  auto check = [&](const std::string& what, const Shape& expected, const StoredTensor& got) {
    if (got.name != what || got.shape != expected) {
      throw DimensionError(path + ": tensor '" + got.name + "' " + shape_str(got.shape) +
                           " does not match model tensor '" + what + "' " + shape_str(expected));
    }
  };
  for (std::size_t i = 0; i < targets.size(); ++i) {
    check(targets[i].name, targets[i].tensor.shape(), ck.tensors[i]);
  }
  if (ck.adam.size() != std::size(kAdamGroups)) {
    throw FormatError(path + ": expected 4 optimizer groups");
  }
  for (std::size_t gi = 0; gi < ck.adam.size(); ++gi) {
    const auto& group = kAdamGroups[gi];
    const auto params = group.params(state);
    const auto& a = ck.adam[gi];
    if (a.name != group.name || a.m.size() != params.size() || a.v.size() != params.size()) {
      throw DimensionError(path + ": optimizer group '" + a.name + "' does not match model");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      check(params[k].name, params[k].tensor.shape(), a.m[k]);
      check(params[k].name, params[k].tensor.shape(), a.v[k]);
    }
  }
  if (ck.stats_x.mean.size() != state.config.scale.bins) {
    throw DimensionError(path + ": stats cover " + std::to_string(ck.stats_x.mean.size()) + " bins");
  }
  std::mt19937_64 rng;
  {
    std::istringstream in(ck.rng);
    in >> rng;
    if (!in) throw FormatError(path + ": corrupt RNG state");
  }

  // Everything validated; commit.
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto dst = targets[i].tensor.mutable_data();
    std::copy(ck.tensors[i].data.begin(), ck.tensors[i].data.end(), dst.begin());
    targets[i].tensor.zero_grad();
  }
  for (std::size_t gi = 0; gi < ck.adam.size(); ++gi) {
    AdamState& s = state.*(kAdamGroups[gi].state);
    const auto& a = ck.adam[gi];
    s.step = a.state.step;
    s.hyper = a.state.hyper;
    for (std::size_t k = 0; k < a.m.size(); ++k) {
      s.m[k] = a.m[k].data;
      s.v[k] = a.v[k].data;
    }
  }
  state.config = ck.config;
  state.iteration = ck.iteration;
  state.rng = rng;
  state.stats_x = ck.stats_x;
  state.stats_y = ck.stats_y;
}

}  // namespace

void save_checkpoint(const TrainerState& state, const std::string& path) {
  binio::Writer w;
  w.magic("CGVC");
  w.u32(kCheckpointVersion);
  w.str(format_config(state.config) + "state.iteration=" + std::to_string(state.iteration) + "\n");

  const auto tensors = state.named_tensors();
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& nt : tensors) write_tensor(w, nt.name, nt.tensor.shape(), nt.tensor.data());

  w.u32(static_cast<std::uint32_t>(std::size(kAdamGroups)));
  for (const auto& group : kAdamGroups) {
    const AdamState& s = state.*(group.state);
    const auto params = group.params(state);
    w.str(group.name);
    w.u64(s.step);
    w.f64(s.hyper.beta1);
    w.f64(s.hyper.beta2);
    w.f64(s.hyper.eps);
    w.u32(static_cast<std::uint32_t>(params.size()));
    for (std::size_t k = 0; k < params.size(); ++k) {
      write_tensor(w, params[k].name, params[k].tensor.shape(), s.m[k]);
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      write_tensor(w, params[k].name, params[k].tensor.shape(), s.v[k]);
    }
  }

  std::ostringstream rng;
  rng << state.rng;
  w.str(rng.str());

  w.u32(static_cast<std::uint32_t>(state.stats_x.mean.size()));
  write_stats_block(w, state.stats_x);
  write_stats_block(w, state.stats_y);
  binio::write_file_atomic(path, w.buffer());
}

TrainerState load_checkpoint(const std::string& path) {
  const Checkpoint ck = parse_checkpoint(path);
  TrainerState state = TrainerState::initialize(ck.config, ck.stats_x, ck.stats_y);
  apply_checkpoint(state, ck, path);
  return state;
}

void restore_checkpoint(TrainerState& state, const std::string& path) {
  const Checkpoint ck = parse_checkpoint(path);
  apply_checkpoint(state, ck, path);
}

}  // namespace advgan
