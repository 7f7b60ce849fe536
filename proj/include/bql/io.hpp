#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bql/channels.hpp"
#include "bql/coboson.hpp"
#include "bql/measure.hpp"

namespace bql::io {

using nlohmann::json;

/// {"type", "n_max", "params", "f"}
json to_json(const LadderChannel& ch);

/// Rebuilds a channel from its descriptor. Named types are regenerated from
/// n_max and params; "custom" takes f verbatim.
LadderChannel channel_from_json(const json& j);

json to_json(const MeasureReport& r);
json to_json(const CobosonTable& t);

/// {"lambda": [..]}
SchmidtSpectrum spectrum_from_json(const json& j);
SchmidtSpectrum load_spectrum(const std::filesystem::path& path);

/// 12 significant digits, '.' decimal separator.
std::string format_number(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Header row then one line per row, LF terminated.
void write_csv(std::ostream& os, const CsvTable& table);

}  // namespace bql::io
