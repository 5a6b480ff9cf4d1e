#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pandasim/engine.hpp"

namespace pandasim {

/// Long format: a "# {metadata}" line, a header, then one row per (scenario, year):
/// scenario_id, g2g, f2e, year, n_replicates, then <field>_mean and <field>_std for
/// every indicator. Numbers use 17 significant digits so values round-trip exactly.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
std::string sweep_csv(const SweepResult& sweep);

/// Throws DataError naming the 1-based line of the first malformed row.
SweepResult read_sweep_csv(std::istream& in);
SweepResult load_sweep_csv(const std::string& path);

nlohmann::ordered_json metadata_json(const SweepMetadata& meta);

/// Called after the temporary file is complete and before it is renamed over the
/// target. Empty by default; tests use it to simulate a crash at that point.
extern std::function<void(const std::string& temp_path)> g_before_rename_hook;

/// Write to "<path>.tmp-<pid>" and rename over `path`. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);  // throws IoError

}  // namespace pandasim
