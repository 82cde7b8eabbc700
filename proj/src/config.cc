// Copyright 2026 The Smartmarket Authors
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

#include "smartmarket/config.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "smartmarket/errors.h"

namespace smartmarket {

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string Unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

// Strips a '#' comment that is not inside quotes.
std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool ValidKey(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
      return false;
    }
  }
  return true;
}

double ToDouble(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(std::string_view text) {
  KeyValueConfig config;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const std::string line = Trim(StripComment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_number) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = Trim(std::string_view(line).substr(1, line.size() - 2));
      if (!ValidKey(section)) throw ConfigError(where + "bad section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string name = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (!ValidKey(name)) throw ConfigError(where + "bad key '" + name + "'");
    if (value.empty()) throw ConfigError(where + "missing value for '" + name + "'");
    const std::string key = section.empty() ? name : section + "." + name;
    if (!config.values_.emplace(key, value).second) {
      throw ConfigError(where + "key '" + key + "' given twice");
    }
  }
  return config;
}

bool KeyValueConfig::Has(const std::string& key) const {
  return values_.count(key) > 0;
}

const std::string& KeyValueConfig::Raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  used_.insert(key);
  return it->second;
}

std::string KeyValueConfig::GetString(const std::string& key) const {
  return Unquote(Raw(key));
}

std::string KeyValueConfig::GetString(const std::string& key,
                                      const std::string& fallback) const {
  return Has(key) ? GetString(key) : fallback;
}

double KeyValueConfig::GetDouble(const std::string& key) const {
  return ToDouble(key, Raw(key));
}

double KeyValueConfig::GetDouble(const std::string& key, double fallback) const {
  return Has(key) ? GetDouble(key) : fallback;
}

int KeyValueConfig::GetInt(const std::string& key, int fallback) const {
  if (!Has(key)) return fallback;
  const double v = GetDouble(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError(key + ": expected an integer");
  }
  return static_cast<int>(v);
}

std::uint64_t KeyValueConfig::GetUint64(const std::string& key,
                                        std::uint64_t fallback) const {
  if (!Has(key)) return fallback;
  const std::string& text = Raw(key);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key + ": expected a nonnegative integer");
  }
  return std::strtoull(text.c_str(), nullptr, 10);
}

std::vector<std::string> KeyValueConfig::GetList(const std::string& key) const {
  const std::string& text = Raw(key);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    return {Unquote(text)};
  }
  std::vector<std::string> items;
  const std::string inner = Trim(std::string_view(text).substr(1, text.size() - 2));
  if (inner.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = inner.find(',', start);
    const std::string item = Unquote(Trim(std::string_view(inner).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (item.empty()) throw ConfigError(key + ": empty list element");
    items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<double> KeyValueConfig::GetDoubleList(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : GetList(key)) out.push_back(ToDouble(key, item));
  return out;
}

std::vector<std::string> KeyValueConfig::UnusedKeys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) out.push_back(key);
  }
  return out;
}

void SetSeed(ExperimentConfig* config, std::uint64_t seed) {
  config->seed = seed;
  config->synthetic.seed = seed;
  config->cs2.train.seed = seed;
}

std::string_view LagPresetName(LagPreset preset) {
  return preset == LagPreset::kCorrect ? "correct" : "misspecified";
}

LagFeatureSpec LagSpecFor(LagPreset preset) {
  return preset == LagPreset::kCorrect ? LagFeatureSpec::Correct()
                                       : LagFeatureSpec::Misspecified();
}

ExperimentConfig ParseExperimentConfig(std::string_view text,
                                       const std::filesystem::path& base_dir) {
  const KeyValueConfig kv = KeyValueConfig::Parse(text);
  ExperimentConfig c;

  if (kv.Has("prices.retail") || kv.Has("prices.wholesale") ||
      kv.Has("prices.balance_sell") || kv.Has("prices.balance_buy")) {
    try {
      c.prices = MarketPrices(kv.GetDouble("prices.retail"), kv.GetDouble("prices.wholesale"),
                              kv.GetDouble("prices.balance_sell"),
                              kv.GetDouble("prices.balance_buy"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("prices: ") + e.what());
    }
  }
  SetSeed(&c, kv.GetUint64("run.seed", c.seed));

  auto resolve = [&](const std::string& key) -> std::filesystem::path {
    if (!kv.Has(key)) return {};
    std::filesystem::path p = kv.GetString(key);
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw ConfigError(key + ": file " + p.string() + " not found");
    return p;
  };
  c.meters_path = resolve("data.meters");
  c.reference_path = resolve("data.reference");
  if (c.meters_path.empty() != c.reference_path.empty()) {
    throw ConfigError("data.meters and data.reference must be given together");
  }

  c.synthetic.consumers = kv.GetInt("synthetic.consumers", c.synthetic.consumers);
  c.synthetic.days = kv.GetInt("synthetic.days", c.synthetic.days);
  c.synthetic.start = kv.GetString("synthetic.start", c.synthetic.start);
  c.synthetic.noise = kv.GetDouble("synthetic.noise", c.synthetic.noise);

  // Case study 1.
  Cs1Settings& s1 = c.cs1;
  if (kv.Has("cs1.gammas")) s1.gammas = kv.GetDoubleList("cs1.gammas");
  if (s1.gammas.empty()) throw ConfigError("cs1.gammas must not be empty");
  for (double g : s1.gammas) {
    if (g < 0.0) throw ConfigError("cs1.gammas must be >= 0");
  }
  if (kv.Has("cs1.c_sigma")) s1.c_sigma = kv.GetDouble("cs1.c_sigma");
  if (kv.Has("cs1.k")) {
    const std::string k = kv.GetString("cs1.k");
    if (k != "calibrated") s1.k = kv.GetDouble("cs1.k");
  }
  s1.confidence = kv.GetDouble("cs1.confidence", s1.confidence);
  if (kv.Has("cs1.kinds")) {
    s1.kinds.clear();
    for (const std::string& name : kv.GetList("cs1.kinds")) s1.kinds.push_back(ParseValueKind(name));
  }
  if (kv.Has("cs1.scenarios")) {
    s1.scenarios.clear();
    for (const std::string& name : kv.GetList("cs1.scenarios")) {
      s1.scenarios.push_back(ParseScenario(name));
    }
  }
  if (s1.kinds.empty() || s1.scenarios.empty()) {
    throw ConfigError("cs1.kinds and cs1.scenarios must not be empty");
  }
  for (ValueKind kind : s1.kinds) {
    if (kind == ValueKind::kDeltaSigma && !s1.c_sigma) {
      throw ConfigError("cs1.c_sigma is required when delta_sigma is valued");
    }
  }
  if (kv.Has("cs1.scheduled_share")) {
    s1.population.scheduled_share = kv.GetDoubleList("cs1.scheduled_share");
  }
  if (kv.Has("cs1.mean_load")) {
    s1.population.fallback_mean_load = kv.GetDoubleList("cs1.mean_load");
  }
  s1.population.scheduled_cv = kv.GetDouble("cs1.scheduled_cv", s1.population.scheduled_cv);
  s1.population.unscheduled_cv =
      kv.GetDouble("cs1.unscheduled_cv", s1.population.unscheduled_cv);
  s1.population.load_scale = kv.GetDouble("cs1.load_scale", s1.population.load_scale);

  // Case study 2.
  Cs2Settings& s2 = c.cs2;
  s2.k_f = kv.GetDouble("cs2.k_f", s2.k_f);
  if (!(s2.k_f > 0.0)) throw ConfigError("cs2.k_f must be > 0");
  s2.confidence = kv.GetDouble("cs2.confidence", s2.confidence);
  if (!(s2.confidence > 0.0 && s2.confidence < 1.0)) {
    throw ConfigError("cs2.confidence must lie in (0, 1)");
  }
  if (kv.Has("cs2.k")) {
    const std::string k = kv.GetString("cs2.k");
    if (k == "global") {
      s2.k_policy = KPolicy::kGlobal;
    } else if (k == "calibrated") {
      s2.k_policy = KPolicy::kCalibrated;
    } else {
      s2.k_policy = KPolicy::kFixed;
      s2.k_value = kv.GetDouble("cs2.k");
      if (!(s2.k_value > 0.0)) throw ConfigError("cs2.k must be > 0");
    }
  }
  if (kv.Has("cs2.b_ref")) {
    const std::string b = kv.GetString("cs2.b_ref");
    if (b != "validation") {
      s2.budget_policy = BudgetPolicy::kFixed;
      s2.b_ref_value = kv.GetDouble("cs2.b_ref");
      if (s2.b_ref_value < 0.0) throw ConfigError("cs2.b_ref must be >= 0");
    }
  }
  s2.theta_max_ratio = kv.GetDouble("cs2.theta_max_ratio", s2.theta_max_ratio);
  s2.theta_step_ratio = kv.GetDouble("cs2.theta_step_ratio", s2.theta_step_ratio);
  if (!(s2.theta_step_ratio > 0.0) || s2.theta_max_ratio < 0.0) {
    throw ConfigError("cs2 theta grid needs step > 0 and max >= 0");
  }
  s2.n_trials = kv.GetInt("cs2.n_trials", s2.n_trials);
  if (s2.n_trials < 1) throw ConfigError("cs2.n_trials must be >= 1");
  if (kv.Has("cs2.lags")) {
    const std::string lags = kv.GetString("cs2.lags");
    if (lags == "correct") {
      s2.lags = LagPreset::kCorrect;
    } else if (lags == "misspecified") {
      s2.lags = LagPreset::kMisspecified;
    } else {
      throw ConfigError("cs2.lags must be correct or misspecified");
    }
  }
  if (kv.Has("cs2.variants")) {
    s2.variants.clear();
    for (const std::string& name : kv.GetList("cs2.variants")) {
      s2.variants.push_back(ParseVariant(name));
    }
    if (s2.variants.empty()) throw ConfigError("cs2.variants must not be empty");
  }
  if (kv.Has("cs2.clearing")) {
    const std::string mode = kv.GetString("cs2.clearing");
    if (mode == "bids") {
      s2.clearing = ClearingMode::kRealizedBids;
    } else if (mode == "posted") {
      s2.clearing = ClearingMode::kPostedPrice;
    } else {
      throw ConfigError("cs2.clearing must be bids or posted");
    }
  }
  s2.sweep_points = kv.GetInt("cs2.sweep_points", s2.sweep_points);
  if (s2.sweep_points < 2) throw ConfigError("cs2.sweep_points must be >= 2");
  s2.sweep_theta_ratio = kv.GetDouble("cs2.sweep_theta_ratio", s2.sweep_theta_ratio);
  s2.sweep_k_theta_ratio = kv.GetDouble("cs2.sweep_k_theta_ratio", s2.sweep_k_theta_ratio);

  TrainConfig& t = s2.train;
  t.epochs = kv.GetInt("train.epochs", t.epochs);
  t.learning_rate = kv.GetDouble("train.learning_rate", t.learning_rate);
  t.hidden_neurons = kv.GetInt("train.hidden", t.hidden_neurons);
  t.batch_size = kv.GetInt("train.batch_size", t.batch_size);
  if (t.epochs < 1 || t.hidden_neurons < 1 || t.batch_size < 0 || !(t.learning_rate > 0.0)) {
    throw ConfigError("train: epochs and hidden must be >= 1, batch_size >= 0, lr > 0");
  }

  s2.split.train = kv.GetDouble("split.train", s2.split.train);
  s2.split.validation = kv.GetDouble("split.validation", s2.split.validation);
  s2.split.test = kv.GetDouble("split.test", s2.split.test);
  if (std::abs(s2.split.train + s2.split.validation + s2.split.test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }

  const std::vector<std::string> unused = kv.UnusedKeys();
  if (!unused.empty()) {
    std::string list;
    for (const std::string& k : unused) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown configuration keys: " + list);
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str(), path.parent_path());
}

}  // namespace smartmarket
