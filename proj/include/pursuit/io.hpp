#pragma once

// Output records: trajectory rows (CSV), boundary records, simulation
// summaries and check reports (JSON). Column and field orders are fixed and
// documented in docs/formats.md.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "pursuit/engine.hpp"
#include "pursuit/regions.hpp"
#include "pursuit/theorem_lab.hpp"

namespace pursuit {

/// %.17g: round-trips every double.
std::string format_number(double v);

inline constexpr const char* kTrajectoryHeader = "t,x_p_x,x_p_y,x_e_x,x_e_y,u_p_x,u_p_y,u_e_x,u_e_y,separation,flags";

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
/// Throws ParseError on a malformed header or row.
Trajectory read_trajectory_csv(std::istream& in);

nlohmann::ordered_json curve_to_json(const ArcCurve& curve);
nlohmann::ordered_json boundary_to_json(const BoundaryResult& boundary);
nlohmann::ordered_json sim_summary_to_json(const SimResult& result);
nlohmann::ordered_json defense_to_json(const DefenseResult& result);
nlohmann::ordered_json check_report_to_json(const CheckReport& report);
nlohmann::ordered_json check_reports_to_json(const std::string& suite, std::uint64_t seed,
                                             const std::vector<CheckReport>& reports);

/// One line per check: "PASS|FAIL|INCONCLUSIVE id margin=.. tol=.. n=..".
std::string check_report_line(const CheckReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace pursuit
