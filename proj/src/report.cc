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

#include "uavee/report.h"

#include <fstream>

#include "uavee/error.h"

namespace uavee {

std::string FormatMetricsCsv(std::span<const MetricsRow> rows) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.fleet_size) + ',' + std::to_string(r.episode) + ',' +
           r.policy + ',' + std::to_string(r.seed) + ',' +
           FormatDouble(r.total_throughput_bits) + ',' + FormatDouble(r.total_energy_j) +
           ',' + FormatDouble(r.ee_bits_per_j) + ',' + FormatDouble(r.norm_ee) + ',' +
           FormatDouble(r.norm_throughput) + ',' + FormatDouble(r.norm_energy) + '\n';
  }
  return out;
}

std::string FormatAggregateCsv(std::span<const AggregateRow> rows) {
  std::string out = kAggregateHeader;
  out += '\n';
  for (const AggregateRow& r : rows) {
    out += std::to_string(r.fleet_size) + ',' + r.policy + ',' + std::to_string(r.rows) +
           ',' + FormatDouble(r.mean_ee_bits_per_j) + ',' + FormatDouble(r.mean_norm_ee) +
           ',' + FormatDouble(r.mean_norm_throughput) + ',' +
           FormatDouble(r.mean_norm_energy) + '\n';
  }
  return out;
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) Fail(ErrorKind::kIo, "write to '" + path + "' failed");
}

void WriteMetrics(std::span<const MetricsRow> rows, const std::string& path) {
  WriteTextFile(path, FormatMetricsCsv(rows));
}

void WriteAggregate(std::span<const AggregateRow> rows, const std::string& path) {
  WriteTextFile(path, FormatAggregateCsv(rows));
}

std::string FormatManifest(const RunManifest& m) {
  std::string out = "# uavee run manifest\n";
  out += "run.version=" + m.version + "\n";
  out += "run.policy=" + m.policy + "\n";
  out += "run.episodes=" + std::to_string(m.episodes) + "\n";
  out += "run.seeds=";
  for (std::size_t i = 0; i < m.seeds.size(); ++i) {
    out += (i ? "," : "") + std::to_string(m.seeds[i]);
  }
  out += "\nrun.fleet_sizes=";
  for (std::size_t i = 0; i < m.fleet_sizes.size(); ++i) {
    out += (i ? "," : "") + std::to_string(m.fleet_sizes[i]);
  }
  out += "\nrun.output_dir=" + m.output_dir + "\n";
  out += "# resolved config\n";
  out += SerializeConfig(m.config);
  return out;
}

void WriteManifest(const RunManifest& manifest, const std::string& path) {
  WriteTextFile(path, FormatManifest(manifest));
}

}  // namespace uavee
