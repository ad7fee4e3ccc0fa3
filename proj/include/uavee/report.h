// Copyright 2026 The uavee Authors.
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

#ifndef UAVEE_REPORT_H_
#define UAVEE_REPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uavee/config.h"
#include "uavee/harness.h"

namespace uavee {

inline constexpr const char* kMetricsHeader =
    "fleet_size,episode,policy,seed,total_throughput_bits,total_energy_J,"
    "ee_bits_per_J,norm_ee,norm_throughput,norm_energy";
inline constexpr const char* kAggregateHeader =
    "fleet_size,policy,episodes,mean_ee_bits_per_J,mean_norm_ee,"
    "mean_norm_throughput,mean_norm_energy";

// Numbers use shortest round-trip formatting so a CSV re-parses to the same
// doubles.
std::string FormatMetricsCsv(std::span<const MetricsRow> rows);
std::string FormatAggregateCsv(std::span<const AggregateRow> rows);
void WriteMetrics(std::span<const MetricsRow> rows, const std::string& path);
void WriteAggregate(std::span<const AggregateRow> rows, const std::string& path);

struct RunManifest {
  ScenarioConfig config;
  std::vector<std::uint64_t> seeds;
  std::string policy;
  std::vector<int> fleet_sizes;
  int episodes = 0;
  std::string output_dir;
  std::string version;
};

std::string FormatManifest(const RunManifest& manifest);
void WriteManifest(const RunManifest& manifest, const std::string& path);

void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace uavee

#endif  // UAVEE_REPORT_H_
