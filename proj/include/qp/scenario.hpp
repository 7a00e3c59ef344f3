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

#ifndef QP_SCENARIO_HPP_
#define QP_SCENARIO_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qp/moments.hpp"
#include "qp/noise.hpp"
#include "qp/quasiprob.hpp"
#include "qp/weakmeas.hpp"

namespace qp {

struct TaskSpec {
  std::string name;
  nlohmann::json options;
};

// One scenario file drives every task; tasks ignore the sections they do
// not need. Validation errors name the JSON path of the offending field.
struct Scenario {
  int dimension = 0;
  std::vector<std::pair<std::string, HermitianObservable>> observables;
  std::optional<HermitianObservable> hamiltonian;
  std::optional<DensityState> initial_state;
  std::vector<std::pair<std::string, double>> schedule_entries;
  std::optional<NoiseModel> noise;
  std::optional<MemoryKernel> kernel;
  std::vector<TaskSpec> tasks;

  Schedule schedule() const;
  const DensityState& state_or_throw() const;
  const NoiseModel& noise_or_throw() const;
  const TaskSpec* find_task(const std::string& name) const;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

enum class OutputFormat { Json, Csv };

struct RunOptions {
  OutputFormat format = OutputFormat::Json;
  int threads = 1;
  EnumerationLimits limits;
};

const std::vector<std::string>& known_tasks();

// Executes one task against a scenario and returns the rendered report
// (JSON with 17 significant digits, CSV with 12). Throws ValidationError /
// ResourceError / ConvergenceError; the CLI maps those to exit codes.
std::string run_task(const Scenario& scenario, const std::string& task,
                     const RunOptions& options);

// The two-level fixture behind the table1-demo task: A = sigma_x observed
// first, B = sigma_z second, on the +1 eigenstate of B.
Scenario table1_scenario();

}  // namespace qp

#endif  // QP_SCENARIO_HPP_
