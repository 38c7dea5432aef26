#pragma once

#include <iosfwd>
#include <string>

#include "porset/construction.hpp"

namespace porset {

/// Current version of the textual level set dump.
inline constexpr int kLevelSetFormatVersion = 1;

/// Writes schedule parameters, window, limits and every capsule. All reals
/// are printed as C99 hex floats so a load reproduces them bit for bit.
void write_levelset(std::ostream& out, const LevelSet& ls);
std::string levelset_to_string(const LevelSet& ls);

/// Parses a dump. Only the structure is validated; geometric invariants are
/// left to the verification suites so corrupted contents remain inspectable.
LevelSet read_levelset(std::istream& in);
LevelSet levelset_from_string(const std::string& text);

void save_levelset(const std::string& path, const LevelSet& ls);
LevelSet load_levelset(const std::string& path);

/// Hex-float formatting helpers shared by the text formats.
std::string hexfloat(double v);
double parse_real(const std::string& token);

}  // namespace porset
