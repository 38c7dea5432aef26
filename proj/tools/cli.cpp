#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "porset/errors.hpp"
#include "porset/levelset_io.hpp"
#include "porset/oracle.hpp"
#include "porset/porosity.hpp"
#include "porset/report_io.hpp"

namespace porset::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double real_of(const std::string& token) {
    const std::string t = trim(token);
    if (t.size() > 1 && (t[0] == '-' || t[0] == '+') && t.find("2^") == 1) {
        return (t[0] == '-' ? -1.0 : 1.0) * real_of(t.substr(1));
    }
    if (t.rfind("2^", 0) == 0) {
        const double e = real_of(t.substr(2));
        if (e != std::floor(e)) throw PreconditionError("exponent in '" + t + "' must be an integer");
        return std::ldexp(1.0, static_cast<int>(e));
    }
    try {
        return parse_real(t);
    } catch (const FormatError&) {
        throw PreconditionError("not a number: '" + t + "'");
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + fmt(values[i]);
    return s;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw PreconditionError("cannot write " + path);
    return f;
}

void write_manifest(const RunConfig& cfg, const std::string& extra) {
    if (cfg.out_path.empty()) return;
    auto f = open_out(cfg.out_path + ".manifest");
    f << manifest_text(cfg) << extra;
}

Direction parse_direction(const std::string& text) {
    const Point v = parse_point(text);
    const double len = norm(v);
    if (!(len > 0.0) || !std::isfinite(len)) throw PreconditionError("direction must be a nonzero vector");
    if (v.x == 0.0) return Direction(0.0, v.y > 0 ? 1.0 : -1.0);
    if (v.y == 0.0) return Direction(v.x > 0 ? 1.0 : -1.0, 0.0);
    return Direction(v.x / len, v.y / len);
}

void validate(const RunConfig& cfg) {
    if (cfg.command == "build") {
        if (cfg.depth < 0) throw PreconditionError("depth must be >= 0");
        if (cfg.depth > cfg.limits.max_depth) {
            throw DepthCapError("depth cap exceeded: " + std::to_string(cfg.depth) + " > " +
                                std::to_string(cfg.limits.max_depth));
        }
        cfg.window().validate();
        if (cfg.out_path.empty()) throw PreconditionError("build needs --out");
    }
    if (cfg.command != "build" && cfg.in_path.empty()) throw PreconditionError(cfg.command + " needs --in");
    if (cfg.command == "raster") {
        if (cfg.resolution < 1) throw PreconditionError("resolution must be >= 1");
        if (cfg.resolution > 16384) throw BudgetError("resolution above 16384");
        if (cfg.mode != "membership" && cfg.mode != "distance") {
            throw PreconditionError("raster mode must be membership or distance");
        }
        if (cfg.out_path.empty()) throw PreconditionError("raster needs --out");
    }
    if (cfg.command == "scan") {
        if (cfg.mode != "iso" && cfg.mode != "dir") throw PreconditionError("scan mode must be iso or dir");
        if (cfg.mode == "dir" && cfg.direction.empty()) throw PreconditionError("dir mode needs --direction");
        if (cfg.scales.empty()) throw PreconditionError("scan needs --scales");
        parse_scales(cfg.scales);
        if (!cfg.direction.empty()) parse_direction(cfg.direction);
    }
    if (cfg.command == "verify") {
        if (!known_suite(cfg.suite)) throw PreconditionError("unknown suite '" + cfg.suite + "'");
        if (cfg.samples < 1) throw PreconditionError("samples must be >= 1");
        if (cfg.resolution < 1) throw PreconditionError("resolution must be >= 1");
    }
}

void cmd_build(const RunConfig& cfg, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const LevelSet ls = build_up_to(cfg.depth, cfg.window(), cfg.schedule(), cfg.limits);
    save_levelset(cfg.out_path, ls);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string counts;
    for (int m = 1; m <= ls.depth(); ++m) {
        counts += "# level " + std::to_string(m) + " capsules " + std::to_string(ls.level(m).size()) + "\n";
    }
    write_manifest(cfg, counts);
    out << "built depth " << ls.depth() << ": " << ls.capsule_count() << " capsules in " << std::setprecision(3) << seconds << " s\n";
}

void cmd_raster(const RunConfig& cfg, std::ostream& out) {
    const LevelSet ls = load_levelset(cfg.in_path);
    const int res = cfg.resolution;
    const GridField field = engine_field(ls, res);
    const double dmax = std::ldexp(1.0, -(6 * std::max(ls.depth(), 1) + 1));

    std::string pixels(static_cast<std::size_t>(res) * static_cast<std::size_t>(res), '\0');
    for (int j = 0; j < res; ++j) {
        const std::size_t row = static_cast<std::size_t>(res - 1 - j);  // top row is the largest y
        for (int i = 0; i < res; ++i) {
            const std::size_t cell = field.index(i, j);
            unsigned char value = 0;
            if (cfg.mode == "membership") {
                switch (field.membership[cell]) {
                    case Membership::In: value = 0; break;
                    case Membership::Out: value = 255; break;
                    case Membership::Boundary: value = 128; break;
                }
            } else {
                const double d = std::clamp(field.signed_distance[cell], -dmax, dmax);
                value = static_cast<unsigned char>(std::lround(255.0 * (d + dmax) / (2.0 * dmax)));
            }
            pixels[row * static_cast<std::size_t>(res) + static_cast<std::size_t>(i)] = static_cast<char>(value);
        }
    }
    auto f = open_out(cfg.out_path, true);
    f << "P5\n" << res << ' ' << res << "\n255\n";
    f.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
    write_manifest(cfg, "");
    out << "wrote " << res << "x" << res << " " << cfg.mode << " raster\n";
}

void cmd_scan(const RunConfig& cfg, std::ostream& out) {
    const LevelSet ls = load_levelset(cfg.in_path);
    const std::vector<double> scales = parse_scales(cfg.scales);
    std::optional<Direction> dir;
    std::vector<ScanRecord> records;
    if (cfg.mode == "dir") {
        dir = parse_direction(cfg.direction);
        records = directional_scan(ls, cfg.point, *dir, scales);
    } else {
        records = porosity_scan(ls, cfg.point, scales);
    }
    if (cfg.out_path.empty()) {
        write_scan_csv(out, records, dir);
        return;
    }
    auto f = open_out(cfg.out_path);
    write_scan_csv(f, records, dir);
    write_manifest(cfg, "");
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const LevelSet ls = load_levelset(cfg.in_path);
    std::ostringstream csv;
    csv << kVerdictCsvHeader << '\n';
    const SuiteResult res = run_suite(cfg.suite, ls, cfg, csv);
    if (cfg.out_path.empty()) {
        out << csv.str();
    } else {
        auto f = open_out(cfg.out_path);
        f << csv.str();
        write_manifest(cfg, "");
    }
    out << "suite " << cfg.suite << ": " << res.cases << " cases, " << res.failures << " failures\n";
    return res.failures == 0 ? kOk : kPropertyFailure;
}

/// The [command] section of a --config file when the command line names no
/// command, so a manifest alone reruns its command.
std::string config_command(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "build" || a == "raster" || a == "scan" || a == "verify") return "";
        if (a == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (a.rfind("--config=", 0) == 0) path = a.substr(9);
    }
    if (path.empty()) return "";
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.size() > 2 && line.front() == '[' && line.back() == ']') return line.substr(1, line.size() - 2);
    }
    return "";
}

}  // namespace

std::vector<double> parse_scales(const std::string& text) {
    std::vector<double> scales;
    if (trim(text).empty()) throw PreconditionError("empty scale list");
    for (const std::string& raw : split(text, ',')) {
        const std::string item = trim(raw);
        if (item.empty()) throw PreconditionError("empty entry in scale list '" + text + "'");
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            scales.push_back(real_of(item));
        } else if (parts.size() == 3) {
            const double lo = real_of(parts[0]);
            const double hi = real_of(parts[1]);
            const double count = real_of(parts[2]);
            if (!(lo > 0.0) || !(hi >= lo) || count < 1 || count != std::floor(count) || count > 4096) {
                throw PreconditionError("scale range '" + item + "' needs 0 < lo <= hi and 1 <= count <= 4096");
            }
            const int n = static_cast<int>(count);
            for (int i = 0; i < n; ++i) {
                scales.push_back(n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
            }
        } else {
            throw PreconditionError("bad scale entry '" + item + "'");
        }
    }
    for (double r : scales) {
        if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("scales must be positive and finite");
    }
    return scales;
}

Point parse_point(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw PreconditionError("expected x,y but got '" + text + "'");
    const Point p{real_of(parts[0]), real_of(parts[1])};
    if (!is_finite(p)) throw PreconditionError("coordinates must be finite");
    return p;
}

std::string manifest_text(const RunConfig& cfg) {
    std::ostringstream m;
    m << "# porset " << cfg.command << " manifest; rerun with: porset --config <this file>\n";
    m << "[" << cfg.command << "]\n";
    if (cfg.command == "build") {
        m << "depth=" << cfg.depth << '\n';
        m << "center=\"" << fmt(cfg.center.x) << ',' << fmt(cfg.center.y) << "\"\n";
        m << "half-width=" << fmt(cfg.half_width) << '\n';
        m << "pad=" << fmt(cfg.pad) << '\n';
        m << "schedule-prefix=\"" << join(cfg.schedule_prefix) << "\"\n";
        m << "line-cap=" << cfg.limits.line_cap << '\n';
        m << "segment-cap=" << cfg.limits.segment_cap << '\n';
        m << "# angle-rule " << DirectionSchedule::kAngleRule << ", block-order " << DirectionSchedule::kBlockOrder
          << '\n';
    } else {
        m << "in=\"" << cfg.in_path << "\"\n";
    }
    if (cfg.command == "raster") {
        m << "resolution=" << cfg.resolution << '\n';
        m << "mode=" << cfg.mode << '\n';
    }
    if (cfg.command == "scan") {
        m << "point=\"" << fmt(cfg.point.x) << ',' << fmt(cfg.point.y) << "\"\n";
        m << "mode=" << cfg.mode << '\n';
        if (!cfg.direction.empty()) m << "direction=\"" << cfg.direction << "\"\n";
        m << "scales=\"" << cfg.scales << "\"\n";
    }
    if (cfg.command == "verify") {
        m << "suite=" << cfg.suite << '\n';
        m << "samples=" << cfg.samples << '\n';
        m << "seed=" << cfg.seed << '\n';
        m << "resolution=" << cfg.resolution << '\n';
    }
    m << "out=\"" << cfg.out_path << "\"\n";
    return m.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string center = "0,0";
    std::string half_width = fmt(cfg.half_width);
    std::string pad = fmt(cfg.pad);
    std::string point;
    std::string prefix;

    CLI::App app{"porset: build, render, scan and verify the porous level sets"};
    app.set_config("--config", "", "key=value configuration file (flags override it)");
    app.require_subcommand(0, 1);
    app.fallthrough();

    auto* build = app.add_subcommand("build", "Build H_1..H_depth and write the level set file");
    build->add_option("--depth", cfg.depth, "Number of levels")->capture_default_str();
    build->add_option("--center", center, "Window centre x,y")->capture_default_str();
    build->add_option("--half-width", half_width, "Half side of the square core window")->capture_default_str();
    build->add_option("--pad", pad, "Extra exact margin around the core")->capture_default_str();
    build->add_option("--schedule-prefix", prefix, "Explicit v_1,v_2,... in turns (comma separated)");
    build->add_option("--line-cap", cfg.limits.line_cap, "Lines per level budget")->capture_default_str();
    build->add_option("--segment-cap", cfg.limits.segment_cap, "Segments per level budget")->capture_default_str();
    build->add_option("--out", cfg.out_path, "Level set file to write");

    auto* raster = app.add_subcommand("raster", "Render a level set as a binary PGM");
    raster->add_option("--in", cfg.in_path, "Level set file");
    raster->add_option("--resolution", cfg.resolution, "Pixels per side")->capture_default_str();
    raster->add_option("--mode", cfg.mode, "membership or distance")->default_str("membership");
    raster->add_option("--out", cfg.out_path, "PGM file to write");

    auto* scan = app.add_subcommand("scan", "Porosity scan at one point");
    scan->add_option("--in", cfg.in_path, "Level set file");
    scan->add_option("--point", point, "Point x,y in the core window");
    scan->add_option("--mode", cfg.mode, "iso or dir")->default_str("iso");
    scan->add_option("--direction", cfg.direction, "Direction x,y for dir mode");
    scan->add_option("--scales", cfg.scales, "Scales: a,b,c or lo:hi:count or 2^-k");
    scan->add_option("--out", cfg.out_path, "CSV file (stdout when absent)");

    auto* verify = app.add_subcommand("verify", "Run a property suite");
    verify->add_option("--in", cfg.in_path, "Level set file");
    verify->add_option("--suite", cfg.suite, "lemma42, lemma43, thm44, separation, claim, oracle or all");
    verify->add_option("--samples", cfg.samples, "Sampled cases per level")->capture_default_str();
    verify->add_option("--seed", cfg.seed, "Seed of the sample stream")->capture_default_str();
    verify->add_option("--resolution", cfg.resolution, "Grid resolution of the oracle suite")->capture_default_str();
    verify->add_option("--out", cfg.out_path, "Verdict CSV (stdout when absent)");

    try {
        std::vector<std::string> full = args;
        const std::string section = config_command(args);
        if (!section.empty()) full.insert(full.begin(), section);
        std::vector<std::string> reversed(full.rbegin(), full.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "porset: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        for (auto* sub : {build, raster, scan, verify}) {
            if (sub->parsed()) cfg.command = sub->get_name();
        }
        if (cfg.command.empty()) throw PreconditionError("a command is required: build, raster, scan or verify");
        if (cfg.mode.empty()) cfg.mode = cfg.command == "raster" ? "membership" : "iso";
        cfg.center = parse_point(center);
        cfg.half_width = real_of(half_width);
        cfg.pad = real_of(pad);
        if (!point.empty()) cfg.point = parse_point(point);
        if (cfg.command == "scan" && point.empty()) throw PreconditionError("scan needs --point");
        if (!prefix.empty()) {
            for (const std::string& t : split(prefix, ',')) cfg.schedule_prefix.push_back(real_of(t));
        }
        validate(cfg);

        if (cfg.command == "build") cmd_build(cfg, out);
        if (cfg.command == "raster") cmd_raster(cfg, out);
        if (cfg.command == "scan") cmd_scan(cfg, out);
        if (cfg.command == "verify") return cmd_verify(cfg, out);
        return kOk;
    } catch (const std::exception& e) {
        err << "porset: " << e.what() << '\n';
        return kUsageError;
    }
}

}  // namespace porset::cli
