#ifndef TORUS_IO_H_
#define TORUS_IO_H_

#include <string>

#include "torus/equilibrium_solver.h"
#include "torus/periodic_series.h"
#include "torus/validation.h"

namespace torus {

inline constexpr int kSolutionSchemaVersion = 1;
inline constexpr int kProfilesCsvVersion = 1;

// {"half_a0": x, "cos": [...], "sin": [...]}
std::string SeriesToJson(const PeriodicSeries& series);
PeriodicSeries SeriesFromJson(const std::string& text);

std::string SolutionToJson(const EquilibriumSolution& sol);
// Throws kIo on malformed documents or a schema mismatch.
EquilibriumSolution SolutionFromJson(const std::string& text);

// theta, r, omega, s, Omega on the given number of equispaced points.
std::string ProfilesCsv(const EquilibriumSolution& sol, int points = 0);

std::string ReportToJson(const ValidationReport& report);

// Writes to path + ".tmp" and renames; throws kIo.
void WriteFileAtomic(const std::string& path, const std::string& content);
std::string ReadFile(const std::string& path);

}  // namespace torus

#endif  // TORUS_IO_H_
