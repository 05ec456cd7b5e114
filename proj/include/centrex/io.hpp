#pragma once

// Config files, sweep tables and report serialisation.
//
// Config files are JSON objects whose keys mirror ExperimentConfig; missing
// keys keep their defaults, unknown keys are rejected. CSV columns follow
// SweepRow field order, numbers use the shortest round-trip form with '.'
// as decimal separator, NaN is written as "nan".

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "centrex/experiment.hpp"

namespace centrex {

inline constexpr const char* kSchemaVersion = "1";

nlohmann::json to_json(const ExperimentConfig& config);
// Throws std::invalid_argument on unknown keys, wrong types or invalid
// values.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Throws IoError when the file cannot be read or written, and
// std::invalid_argument when it does not parse.
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

const std::array<const char*, 19>& sweep_columns();

std::string format_double(double x);
double parse_double(const std::string& s);

void write_csv(const SweepTable& table, std::ostream& os);
std::string to_csv(const SweepTable& table);
// Throws std::invalid_argument on a malformed header or row.
SweepTable parse_csv(const std::string& text);

nlohmann::json to_json(const SweepRow& row);
nlohmann::json sweep_json(const SweepTable& table);

// "# x y" header then one "x y" line per row with both values finite.
// Throws std::invalid_argument for unknown numeric column names.
std::string plot_series(const SweepTable& table, const std::string& x,
                        const std::string& y);

enum class Format { csv, json, dat };

// Writes <out_dir>/<stem>.csv, .json or, for dat, one <stem>_<x>_<y>.dat
// per pair. Creates out_dir. Returns the paths written; throws IoError.
std::vector<std::string> emit(
    const SweepTable& table, Format format, const std::string& out_dir,
    const std::string& stem,
    const std::vector<std::pair<std::string, std::string>>& pairs = {
        {"k", "sigma_c"}, {"k", "lower_bound"}, {"k", "epsilon"}});

nlohmann::json to_json(const SpectralData& s);
nlohmann::json to_json(const ConeConstants& c);
nlohmann::json to_json(const ConeCertificate& cert);
nlohmann::json to_json(const LyapunovEstimate& est);
nlohmann::json to_json(const SigmaEstimate& est);
nlohmann::json to_json(const IntegralEstimate& est);
nlohmann::json to_json(const PositiveWitness& w);
nlohmann::json to_json(const R0Result& r);

}  // namespace centrex
