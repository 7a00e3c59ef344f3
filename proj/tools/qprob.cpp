// Copyright 2026 The quasiprob Authors
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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qp/report.hpp"
#include "qp/scenario.hpp"

namespace {

void emit_error(const std::string& type, const std::string& message) {
  qp::Report e = qp::Report::object();
  qp::Report inner = qp::Report::object();
  inner.set("type", type);
  inner.set("message", message);
  e.set("error", std::move(inner));
  std::cerr << e.dump(0);
}

// --limits accepts comma-separated key=value pairs; known keys: atoms, prune.
void apply_limits(const std::string& spec, qp::EnumerationLimits* limits) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw qp::ValidationError("--limits: expected key=value, got '" + item +
                                "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "atoms")
        limits->max_atoms = std::stoull(value);
      else if (key == "prune")
        limits->prune_weight = std::stod(value);
      else
        throw qp::ValidationError("--limits: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw qp::ValidationError("--limits: bad value for '" + key + "'");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "quasiprobability distributions, noise convolution positivity, and "
      "weak-measurement verification"};

  std::string scenario_path, task, out_path, format = "json", limits_spec;
  int threads = 1;
  app.add_option("--scenario", scenario_path,
                 "scenario JSON file (optional for table1-demo)");
  app.add_option("--task", task, "task to run")->required();
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "worker cap for grid searches")
      ->check(CLI::PositiveNumber);
  app.add_option("--limits", limits_spec,
                 "override enumeration caps, e.g. atoms=1000000,prune=1e-14");

  CLI11_PARSE(app, argc, argv);

  try {
    qp::RunOptions options;
    options.format = format == "csv" ? qp::OutputFormat::Csv
                                     : qp::OutputFormat::Json;
    options.threads = threads;
    apply_limits(limits_spec, &options.limits);

    qp::Scenario scenario;
    if (!scenario_path.empty()) {
      scenario = qp::load_scenario(scenario_path);
    } else if (task != "table1-demo") {
      throw qp::ValidationError("--scenario is required for task '" + task +
                                "'");
    }

    const std::string report = qp::run_task(scenario, task, options);
    if (out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out)
        throw qp::ValidationError("cannot open output file: " + out_path);
      out << report;
    }
    return 0;
  } catch (const qp::ValidationError& e) {
    emit_error("validation", e.what());
    return 1;
  } catch (const qp::ResourceError& e) {
    emit_error("resource", e.what());
    return 2;
  } catch (const qp::ConvergenceError& e) {
    emit_error("convergence", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 2;
  }
}
