/*
* Copyright (C) 2026 The lctsim Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef LCTSIM_IO_H
#define LCTSIM_IO_H

#include "lctsim/analysis.h"
#include "lctsim/config.h"
#include "lctsim/ensemble.h"
#include "lctsim/init.h"
#include "lctsim/model.h"
#include "lctsim/solvers.h"
#include "lctsim/trajectory.h"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace lctsim
{

namespace fs = std::filesystem;

/// Day stamp (days since 1970-01-01) of an ISO-8601 date YYYY-MM-DD.
int parse_date(const std::string& text);

/// ISO-8601 date of a day stamp.
std::string format_date(int day_stamp);

/// Shortest decimal representation that reads back to the same double.
std::string format_number(ScalarType value);

/// Parse a complete string as a double; throws Validation naming @p where.
ScalarType parse_number(const std::string& text, const std::string& where);

/**
 * @brief Square matrix from a CSV file without header, one row per line.
 */
Matrix<ScalarType> read_matrix_csv(const fs::path& path);

/**
 * @brief Reported cases (date,age_group,cumulative_confirmed,cumulative_deaths) and ICU data (date,icu_occupancy).
 *
 * Groups keep the order of their first appearance. Every group must have a row for every date of the covered
 * range and cumulative columns must not decrease.
 */
ReportedData load_reported(const fs::path& cases, const std::optional<fs::path>& icu);

/// Write the two reported-data files read by load_reported.
void write_reported(const fs::path& cases, const fs::path& icu, const ReportedData& data);

struct SolverPlan {
    enum class Type
    {
        Fixed,
        Adaptive
    };
    Type type        = Type::Fixed;
    ScalarType dt    = 1e-2;
    ScalarType abs_tol = 1e-10;
    ScalarType rel_tol = 1e-5;
};

struct Horizon {
    ScalarType t_start        = 0;
    ScalarType t_end          = 1;
    ScalarType output_cadence = 1;
};

struct InitialStatePlan {
    enum class Kind
    {
        Totals,
        ConstantDynamics,
        FromData
    };
    Kind kind = Kind::Totals;
    CompartmentTotals<ScalarType> totals;
    ScalarType sigma = 0;
    fs::path cases;
    std::optional<fs::path> icu;
    int t0_stamp               = 0;
    ScalarType detection_ratio = 1;
    bool icu_rescale           = true;
};

/**
 * @brief A validated configuration document.
 */
struct RunConfig {
    ModelSpec<ScalarType> spec;
    InitialStatePlan initial;
    SolverPlan solver;
    Horizon horizon;
    nlohmann::json resolved; ///< Normalized document with defaults and absolute paths.
};

/**
 * @brief Validate a configuration document; relative paths are resolved against @p base_dir.
 *
 * Errors name the offending location, e.g. "$.contacts.baseline[2]".
 */
RunConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir);

/// Read and validate a JSON configuration file.
RunConfig load_config(const fs::path& path);

/// FNV-1a 64 bit hash of the canonical serialization of @p doc as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

/// Initial state described by the plan of @p cfg.
Vector<ScalarType> build_initial_state(const Model<ScalarType>& model, const RunConfig& cfg);

/// Simulate a configuration with its solver and horizon.
Trajectory<ScalarType> simulate(const Model<ScalarType>& model, const Vector<ScalarType>& y0, const RunConfig& cfg);

/// Column names of write_trajectory.
std::vector<std::string> trajectory_columns(const Model<ScalarType>& model, bool subcompartments);

/**
 * @brief CSV with header t,<group>_<compartment>,... of compartment totals, or one column per subcompartment.
 */
void write_trajectory(const fs::path& path, const Model<ScalarType>& model, const Trajectory<ScalarType>& traj,
                      bool subcompartments = false);

/// Generic numeric CSV with a header row.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<ScalarType>> rows;
};

Table read_table(const fs::path& path);
void write_table(const fs::path& path, const Table& table);

/// CSV with header day,<label>.
void write_series(const fs::path& path, const DailySeries& series);
DailySeries read_series(const fs::path& path);

/// CSV with header day,series,p5,p25,p50,p75,p95.
void write_percentiles(const fs::path& path, const std::vector<PercentileBand>& bands);
std::vector<PercentileBand> read_percentiles(const fs::path& path);

/// CSV with header workers,wall_seconds,speedup.
void write_timing(const fs::path& path, const std::vector<TimingRow>& rows);

/**
 * @brief JSON with spec_hash, solver_stats, software_version and the resolved configuration.
 */
void write_metadata(const fs::path& path, const nlohmann::json& resolved, const SolverStats& stats);

/// Open @p path for writing, creating parent directories; throws Io on failure.
std::ofstream open_output(const fs::path& path);

} // namespace lctsim

#endif // LCTSIM_IO_H
