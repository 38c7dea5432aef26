#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "porset/construction.hpp"
#include "porset/directions.hpp"

namespace porset::cli {

enum ExitCode { kOk = 0, kPropertyFailure = 1, kUsageError = 2 };

/// Everything a command needs, validated before any work starts.
struct RunConfig {
    std::string command;
    int depth = 2;
    Point center;
    double half_width = 1.0 / 32;
    double pad = kDefaultPad;
    std::vector<double> schedule_prefix;
    BuildLimits limits;
    std::string in_path;
    std::string out_path;
    int resolution = 256;
    std::string mode;
    Point point;
    std::string direction;
    std::string scales;
    std::string suite;
    std::int64_t samples = 1000;
    std::uint64_t seed = 1;

    Window window() const { return Window{center, half_width, pad}; }
    DirectionSchedule schedule() const { return DirectionSchedule(schedule_prefix); }
};

/// key=value lines, readable back through --config.
std::string manifest_text(const RunConfig& cfg);

/// "a,b,c", "lo:hi:count" (geometric) or powers written "2^-k"; mixes allowed.
std::vector<double> parse_scales(const std::string& text);

/// "x,y" as two reals.
Point parse_point(const std::string& text);

/// Runs one command line (argv[0] excluded). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SuiteResult {
    std::int64_t cases = 0;
    std::int64_t failures = 0;
};

/// Property suites behind `verify`. Rows go to `csv`; the header is written by the caller.
SuiteResult run_suite(const std::string& suite, const LevelSet& ls, const RunConfig& cfg, std::ostream& csv);

inline constexpr const char* kVerdictCsvHeader = "suite,case,level,point_x,point_y,value,bound,detail,pass";

bool known_suite(const std::string& name);

}  // namespace porset::cli
