#pragma once

#include <string>
#include <vector>

#include "longclass/dataset.hpp"

namespace longclass {

/// Reads a long-format panel CSV with header
///   subject,group,time,<var1>,...,<varp>
/// one row per subject x time, groups in {0,1}, times 1..t each appearing
/// exactly once per subject. Subjects keep their first-appearance order.
LongitudinalDataset load_long_csv(const std::string& path);

/// Writes a panel back out in the same long format (used by tests and the
/// simulate --emit-data option).
void save_long_csv(const LongitudinalDataset& ds, const std::string& path);

/// Formats a double with 6 significant digits (the file contract for all
/// emitted CSVs).
std::string format_g6(double v);

/// Writes rows of preformatted cells under a fixed header.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Minimal field splitter for the library's own unquoted CSV files.
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace longclass
