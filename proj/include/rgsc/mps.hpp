#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rgsc/linear_program.hpp"

namespace rgsc {

/// Fixed-format MPS. Integer columns are wrapped in INTORG/INTEND markers
/// and always carry an explicit upper bound; the objective offset is
/// written as the negated RHS of the objective row.
void write_mps(const LinearProgram& lp, std::ostream& out);
std::string to_mps(const LinearProgram& lp);
void write_mps(const LinearProgram& lp, const std::filesystem::path& path);

/// Reads what write_mps produces (and ordinary fixed or free MPS without
/// negative-upper-bound quirks). Throws std::runtime_error with the line
/// number on malformed input.
LinearProgram read_mps(std::istream& in);
LinearProgram read_mps(const std::filesystem::path& path);

}  // namespace rgsc
