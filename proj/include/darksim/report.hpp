#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "darksim/pdn.hpp"
#include "darksim/sim.hpp"

namespace darksim {

nlohmann::json summary_json(const SimReport& r);
nlohmann::json to_json(const SimReport& r);
nlohmann::json to_json(const ModeComparison& c);
nlohmann::json to_json(const std::vector<TrendRow>& rows);
nlohmann::json to_json(const ImpedanceProfile& z);

void write_intervals_csv(std::ostream& out, const SimReport& r);
void write_residency_csv(std::ostream& out, const SimReport& r);
void write_violations_csv(std::ostream& out, const SimReport& r);
void write_summary_csv(std::ostream& out, const SimReport& r);
void write_comparison_csv(std::ostream& out, const ModeComparison& c);
void write_trend_csv(std::ostream& out, const std::vector<TrendRow>& rows);
void write_profile_csv(std::ostream& out, const ImpedanceProfile& z);

/// Writes through a temp file in the same directory, then renames over path.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace darksim
