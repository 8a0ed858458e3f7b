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

#include "advgan/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "../common/binio.hpp"
#include "advgan/error.hpp"

namespace advgan {

void TrainConfig::validate() const {
  variant.validate();
  if (!(lr_g > 0.0) || !(lr_d > 0.0)) throw ConfigError("learning rates must be positive");
  if (batch < 1) throw ConfigError("batch must be at least 1");
  if (!(loss.lambda_cycle >= 0.0) || !(loss.lambda_energy >= 0.0)) {
    throw ConfigError("lambda_c and lambda_e must be nonnegative");
  }
  if (scale.frames % 4 != 0) throw ConfigError("patch_width must be divisible by 4");
  if (checkpoint_every < 1) throw ConfigError("checkpoint_every must be at least 1");
  scale.validate();
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "variant", "eta_gen",    "eta_dis", "rho_gen",       "lambda_c",
      "lambda_e", "lr_g",      "lr_d",    "batch",         "iterations",
      "seed",    "width",      "patch_width", "deterministic", "checkpoint_every"};
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a nonnegative integer");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  const std::string v = trim(value);
  // Validate eagerly so errors point at the offending entry.
  if (key == "variant") {
    parse_variant(v);
  } else if (key == "batch" || key == "iterations" || key == "seed" || key == "patch_width" ||
             key == "checkpoint_every") {
    parse_uint(key, v);
  } else if (key == "deterministic") {
    parse_bool(key, v);
  } else {
    parse_double(key, v);
  }
  values_[key] = v;
}

void RunConfig::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void RunConfig::load_file(const std::string& path) {
  std::string text;
  try {
    text = binio::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  load_text(text, path);
}

TrainConfig RunConfig::resolve() const {
  TrainConfig c;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  };
  const Variant variant = get("variant") ? parse_variant(*get("variant")) : Variant::kVanilla;
  c.variant = VariantSelector::with_defaults(variant);
  if (auto v = get("eta_gen")) c.variant.eta_gen = parse_double("eta_gen", *v);
  if (auto v = get("eta_dis")) c.variant.eta_dis = parse_double("eta_dis", *v);
  if (auto v = get("rho_gen")) c.variant.rho_gen = parse_double("rho_gen", *v);
  if (auto v = get("lambda_c")) c.loss.lambda_cycle = parse_double("lambda_c", *v);
  if (auto v = get("lambda_e")) c.loss.lambda_energy = parse_double("lambda_e", *v);
  if (auto v = get("lr_g")) c.lr_g = parse_double("lr_g", *v);
  if (auto v = get("lr_d")) c.lr_d = parse_double("lr_d", *v);
  // Weights are normalized over the batch, so m=1 would make them all 1.
  if (variant == Variant::kWeGan || variant == Variant::kGeweGan) c.batch = 4;
  if (auto v = get("batch")) c.batch = parse_uint("batch", *v);
  if (auto v = get("iterations")) c.iterations = parse_uint("iterations", *v);
  if (auto v = get("seed")) c.seed = parse_uint("seed", *v);
  if (auto v = get("width")) c.scale.width = parse_double("width", *v);
  if (auto v = get("patch_width")) c.scale.frames = parse_uint("patch_width", *v);
  if (auto v = get("deterministic")) c.deterministic = parse_bool("deterministic", *v);
  if (auto v = get("checkpoint_every")) c.checkpoint_every = parse_uint("checkpoint_every", *v);
  c.validate();
  return c;
}

std::string format_config(const TrainConfig& c) {
  std::ostringstream os;
  os << "variant=" << variant_name(c.variant.variant) << '\n'
     << "eta_gen=" << format_double(c.variant.eta_gen) << '\n'
     << "eta_dis=" << format_double(c.variant.eta_dis) << '\n'
     << "rho_gen=" << format_double(c.variant.rho_gen) << '\n'
     << "lambda_c=" << format_double(c.loss.lambda_cycle) << '\n'
     << "lambda_e=" << format_double(c.loss.lambda_energy) << '\n'
     << "lr_g=" << format_double(c.lr_g) << '\n'
     << "lr_d=" << format_double(c.lr_d) << '\n'
     << "batch=" << c.batch << '\n'
     << "iterations=" << c.iterations << '\n'
     << "seed=" << c.seed << '\n'
     << "width=" << format_double(c.scale.width) << '\n'
     << "patch_width=" << c.scale.frames << '\n'
     << "deterministic=" << (c.deterministic ? "true" : "false") << '\n'
     << "checkpoint_every=" << c.checkpoint_every << '\n';
  return os.str();
}

}  // namespace advgan
