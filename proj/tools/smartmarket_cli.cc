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

// Command-line driver for the data-market experiments.
//
// Exit status: 0 success, 1 usage or configuration error, 2 data error,
// 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "smartmarket/config.h"
#include "smartmarket/csv.h"
#include "smartmarket/errors.h"
#include "smartmarket/experiments.h"
#include "smartmarket/synthetic.h"

namespace sm = smartmarket;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string variant;
  std::string scenario;
  std::string input;
};

sm::ExperimentConfig Configure(const Options& options, bool required) {
  sm::ExperimentConfig config;
  if (!options.config.empty()) {
    config = sm::LoadExperimentConfig(options.config);
  } else if (required) {
    throw sm::ConfigError("--config is required");
  }
  if (options.seed) sm::SetSeed(&config, *options.seed);
  if (!options.variant.empty()) config.cs2.variants = {sm::ParseVariant(options.variant)};
  if (!options.scenario.empty()) config.cs1.scenarios = {sm::ParseScenario(options.scenario)};
  return config;
}

std::filesystem::path OutputDir(const Options& options) {
  std::filesystem::path dir = options.out;
  std::filesystem::create_directories(dir);
  return dir;
}

void GenSynthetic(const Options& options) {
  const sm::ExperimentConfig config = Configure(options, false);
  const sm::SyntheticData data = sm::GenerateSynthetic(config.synthetic);
  const std::filesystem::path dir = OutputDir(options);
  sm::WriteSmartMeterCsv(data.meters, dir / "meters.csv");
  sm::WriteSmartMeterCsv(sm::ReferenceTable(data), dir / "reference.csv");
  std::cout << "wrote " << data.meters.ids.size() << " meters x "
            << data.meters.periods() << " periods to " << dir.string() << "\n";
}

void Ingest(const Options& options) {
  std::filesystem::path path = options.input;
  if (path.empty()) {
    const sm::ExperimentConfig config = Configure(options, true);
    if (config.meters_path.empty()) throw sm::ConfigError("no --input and no data.meters");
    path = config.meters_path;
  }
  const sm::SmartMeterTable table = sm::IngestCsv(path);
  sm::CsvWriter csv(OutputDir(options) / "ingest_summary.csv");
  csv.Row({"id", "periods", "first", "last", "mean_kwh"});
  for (std::size_t c = 0; c < table.ids.size(); ++c) {
    double sum = 0.0;
    for (double v : table.loads[c]) sum += v;
    csv.Row({table.ids[c], std::to_string(table.periods()),
             sm::FormatTimestamp(table.timestamps.front()),
             sm::FormatTimestamp(table.timestamps.back()),
             sm::FormatNumber(sum / static_cast<double>(table.periods()))});
  }
  std::cout << table.ids.size() << " meters, " << table.periods()
            << " aligned half-hourly periods\n";
}

void ValueForecasts(const Options& options) {
  const sm::ExperimentConfig config = Configure(options, true);
  const sm::Cs1Result result = sm::RunCs1(config, sm::LoadMeterData(config));
  sm::WriteCs1Report(result, OutputDir(options));
}

void ValueData(const Options& options) {
  const sm::ExperimentConfig config = Configure(options, true);
  const sm::Cs2Instance instance = sm::PrepareCs2(config, sm::LoadMeterData(config));
  sm::WriteCs2Valuation(instance, OutputDir(options));
}

void Procure(const sm::ExperimentConfig& config, const sm::Cs2Instance& instance,
             const std::filesystem::path& dir) {
  sm::TrialConfig trials;
  trials.theta_bars = sm::ThetaGrid(config.cs2, instance.market.b_ref, instance.market.n);
  trials.n_trials = config.cs2.n_trials;
  trials.seed = config.seed;
  trials.variants = config.cs2.variants;
  trials.clearing = config.cs2.clearing;
  sm::WriteCs2Procurement(instance, sm::SimulateTrials(instance.market, trials), dir);
  sm::WriteCs2Sweeps(sm::RunSweeps(config, instance), dir);
}

void ProcureCommand(const Options& options) {
  const sm::ExperimentConfig config = Configure(options, true);
  const sm::Cs2Instance instance = sm::PrepareCs2(config, sm::LoadMeterData(config));
  Procure(config, instance, OutputDir(options));
}

void Calibrate(const Options& options) {
  const sm::ExperimentConfig config = Configure(options, true);
  const sm::MeterData data = sm::LoadMeterData(config);
  const sm::Cs1Result cs1 = sm::RunCs1(config, data);
  const sm::Cs2Instance cs2 = sm::PrepareCs2(config, data);
  sm::WriteCalibration(cs1, &cs2, config.prices, OutputDir(options));
}

void Report(const Options& options) {
  const sm::ExperimentConfig config = Configure(options, true);
  const sm::MeterData data = sm::LoadMeterData(config);
  const std::filesystem::path dir = OutputDir(options);
  const sm::Cs1Result cs1 = sm::RunCs1(config, data);
  sm::WriteCs1Report(cs1, dir);
  const sm::Cs2Instance cs2 = sm::PrepareCs2(config, data);
  sm::WriteCs2Valuation(cs2, dir);
  Procure(config, cs2, dir);
  sm::WriteCalibration(cs1, &cs2, config.prices, dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint energy and data market experiments"};
  app.require_subcommand(1);
  Options options;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config, "Experiment config file");
    sub->add_option("--seed", options.seed, "Override the run seed");
    sub->add_option("--out", options.out, "Output directory (default .)");
  };
  struct Command {
    const char* name;
    const char* help;
    void (*run)(const Options&);
  };
  const Command commands[] = {
      {"gen-synthetic", "Write synthetic meter and reference CSVs", GenSynthetic},
      {"ingest", "Validate a meter CSV and summarize it", Ingest},
      {"value-forecasts", "Forecast valuation and DP sweeps", ValueForecasts},
      {"value-data", "Smart-meter data valuation", ValueData},
      {"procure", "Procurement trials and sensitivity sweeps", ProcureCommand},
      {"calibrate", "Lipschitz constants and bound curves", Calibrate},
      {"report", "Run every experiment", Report},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    if (std::string(c.name) == "ingest") {
      sub->add_option("--input", options.input, "Meter CSV (id,timestamp,kwh)");
    }
    if (std::string(c.name) == "procure" || std::string(c.name) == "report") {
      sub->add_option("--variant", options.variant, "fin, inf, cen-ir or cen-ic")
          ->check(CLI::IsMember({"fin", "inf", "cen-ir", "cen-ic"}));
    }
    if (std::string(c.name) == "value-forecasts" || std::string(c.name) == "report") {
      sub->add_option("--scenario", options.scenario, "corr, inv, uni or rand")
          ->check(CLI::IsMember({"corr", "inv", "uni", "rand"}));
    }
    auto run = c.run;
    sub->callback([run, &options] { run(options); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const sm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sm::DataError& e) {
    std::cerr << "data error:\n";
    for (const std::string& item : e.items()) std::cerr << "  " << item << "\n";
    return kExitData;
  } catch (const sm::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitData;
  } catch (const sm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "file system error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
