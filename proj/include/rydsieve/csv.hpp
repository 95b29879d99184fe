#pragma once

#include <cstdint>
#include <iosfwd>

#include <json.hpp>

#include "rydsieve/rate_table.hpp"
#include "rydsieve/trajectories.hpp"

namespace rydsieve {

// Every CSV starts with "# rydsieve <version> config <hash>" so an output
// file can be traced back to the exact resolved configuration.  Floats are
// written with %.9g.

void write_evolution_csv(const EnsembleTimeSeries& series,
                         std::uint64_t config_hash, std::ostream& out);

void write_histogram_csv(const Histogram& hist, std::uint64_t config_hash,
                         std::ostream& out);

void write_sweep_csv(const std::vector<SweepPoint>& points,
                     std::uint64_t config_hash, std::ostream& out);

void write_trajectories_csv(const std::vector<TrajectoryRecord>& records,
                            std::uint64_t config_hash, std::ostream& out);

// Companion metadata for a rate-table CSV.
nlohmann::json rate_table_sidecar(const LossRateTable& table,
                                  std::uint64_t config_hash);

}
