#ifndef XXCHAIN_IO_HPP
#define XXCHAIN_IO_HPP

#include "xxchain/bound.hpp"
#include "xxchain/record.hpp"
#include "xxchain/transfer.hpp"

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace xxchain {

// Full-precision decimal rendering (round-trips to the same double, which
// keeps emitted files byte-stable under parse/re-emit cycles).
std::string format_double(double v);

const char* parity_name(Parity p);

// t,site,concurrence rows in site-major order (all times of one site first).
void write_timeseries_csv(const std::string& path,
                          const std::vector<const TransferRecord*>& records);

// site,concurrence rows.
void write_profile_csv(const std::string& path, const std::map<int, double>& profile);

// t,site,concurrence in site-major order.
void write_map_csv(const std::string& path, const SiteTimeMap& map);

// d,concurrence rows (defect-defect statics vs distance).
void write_inset_csv(const std::string& path,
                     const std::vector<std::pair<int, double>>& series);

// d,e21 rows (level splitting vs distance).
void write_gap_csv(const std::string& path,
                   const std::vector<std::pair<int, double>>& series);

nlohmann::ordered_json bound_states_json(double omega0, const DefectConfig& defects,
                                         const std::vector<BoundState>& states);

void write_json(const std::string& path, const nlohmann::ordered_json& j);

// Flat key=value configuration file; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Generic CSV reader returning cells as strings (used for round-trip checks).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

} // namespace xxchain

#endif
