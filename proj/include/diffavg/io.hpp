#pragma once

// Line-oriented text formats.
//
//   DIFFAVG-GRID 1 <nx> <ny>        DIFFAVG-FIELD 1 <nx> <ny>
//   <i> <j> <x> <y>                 <i> <j> <v>
//   ...                             ...
//
// Nodes are listed with i outer and j inner (i = 0: j = 0..ny-1, then
// i = 1, ...). Reals use 17 significant digits so a write/read round trip is
// exact. Read errors throw ValidationError naming the offending line.

#include <filesystem>
#include <iosfwd>

#include "diffavg/grid.hpp"
#include "diffavg/reconstruct.hpp"

namespace diffavg {

void write_grid(const GridTransform& g, std::ostream& os);
void write_grid(const GridTransform& g, const std::filesystem::path& path);
GridTransform read_grid(std::istream& is);
GridTransform read_grid(const std::filesystem::path& path);

void write_field(const ScalarField& f, std::ostream& os);
void write_field(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_field(std::istream& is);
ScalarField read_field(const std::filesystem::path& path);

void write_report(const ConvergenceReport& report, const std::filesystem::path& path);

}  // namespace diffavg
