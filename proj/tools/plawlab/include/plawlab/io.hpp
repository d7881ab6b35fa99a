#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "plaw/dynamics.hpp"
#include "plaw/scatterlab.hpp"
#include "plaw/trajectory.hpp"

namespace plawlab {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// Strict parse of a whole string as a double. Throws plaw::DomainError.
double parse_double(std::string_view text);

/// "x,y" to a vector.
plaw::Vec2 parse_vec2(std::string_view text);

/// Grid description: "log:lo:hi:n", "lin:lo:hi:n" or a comma separated list.
std::vector<double> parse_grid(std::string_view text);

/// Header row plus rows of numbers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string render() const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over path.
void write_atomic(const std::filesystem::path& path, std::string_view content);

CsvTable trajectory_table(const plaw::Trajectory& traj);
CsvTable scatter_table(const std::vector<plaw::ScatterRecord>& records);
CsvTable starburst_table(const plaw::StarburstStudy& study);

/// Inverse of trajectory_table; E and J columns are checked against the
/// recomputed values of each sample.
plaw::Trajectory trajectory_from_table(const CsvTable& table, const plaw::PowerLawProblem& problem,
                                       double drift_budget);
/// Inverse of scatter_table for records of energy E.
std::vector<plaw::ScatterRecord> scatter_from_table(const CsvTable& table, double E);

}  // namespace plawlab
