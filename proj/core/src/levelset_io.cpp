#include "porset/levelset_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "porset/errors.hpp"

namespace porset {

namespace {

constexpr const char* kMagic = "porset-levelset";

std::string next_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw FormatError(std::string("unexpected end of level set data while reading ") + what);
    return tok;
}

void expect(std::istream& in, const char* keyword) {
    const std::string tok = next_token(in, keyword);
    if (tok != keyword) throw FormatError("expected '" + std::string(keyword) + "', found '" + tok + "'");
}

double read_real(std::istream& in, const char* what) { return parse_real(next_token(in, what)); }

long long read_int(std::istream& in, const char* what) {
    const std::string tok = next_token(in, what);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (errno != 0 || end == tok.c_str() || *end != '\0') {
        throw FormatError(std::string("bad integer for ") + what + ": '" + tok + "'");
    }
    return v;
}

}  // namespace

std::string hexfloat(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_real(const std::string& token) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &end);
    if (errno == ERANGE || end == token.c_str() || *end != '\0') throw FormatError("bad real: '" + token + "'");
    return v;
}

void write_levelset(std::ostream& out, const LevelSet& ls) {
    const Window& w = ls.window();
    const DirectionSchedule& sched = ls.schedule();
    out << kMagic << ' ' << kLevelSetFormatVersion << '\n';
    out << "angle_rule " << DirectionSchedule::kAngleRule << '\n';
    out << "block_order " << DirectionSchedule::kBlockOrder << '\n';
    out << "prefix " << sched.prefix().size();
    for (double t : sched.prefix()) out << ' ' << hexfloat(t);
    out << '\n';
    out << "window " << hexfloat(w.center.x) << ' ' << hexfloat(w.center.y) << ' ' << hexfloat(w.half_width) << ' '
        << hexfloat(w.pad) << '\n';
    out << "limits " << ls.limits().max_depth << ' ' << ls.limits().line_cap << ' ' << ls.limits().segment_cap << '\n';
    out << "depth " << ls.depth() << '\n';
    for (int m = 1; m <= ls.depth(); ++m) {
        const auto caps = ls.level(m);
        out << "level " << m << ' ' << caps.size() << '\n';
        for (const LevelCapsule& c : caps) {
            const Segment& s = c.capsule.axis;
            out << c.k << ' ' << hexfloat(c.span.lo) << ' ' << hexfloat(c.span.hi) << ' ' << hexfloat(s.a.x) << ' '
                << hexfloat(s.a.y) << ' ' << hexfloat(s.b.x) << ' ' << hexfloat(s.b.y) << ' '
                << hexfloat(c.capsule.radius) << '\n';
        }
    }
    out << "end\n";
}

std::string levelset_to_string(const LevelSet& ls) {
    std::ostringstream os;
    write_levelset(os, ls);
    return os.str();
}

LevelSet read_levelset(std::istream& in) {
    expect(in, kMagic);
    const long long version = read_int(in, "version");
    if (version != kLevelSetFormatVersion) {
        throw FormatError("unsupported level set version " + std::to_string(version));
    }
    expect(in, "angle_rule");
    if (next_token(in, "angle rule") != DirectionSchedule::kAngleRule) throw FormatError("unknown angle rule");
    expect(in, "block_order");
    if (next_token(in, "block order") != DirectionSchedule::kBlockOrder) throw FormatError("unknown block order");
    expect(in, "prefix");
    const long long nprefix = read_int(in, "prefix count");
    if (nprefix < 0 || nprefix > 4096) throw FormatError("bad prefix length");
    std::vector<double> prefix;
    for (long long i = 0; i < nprefix; ++i) prefix.push_back(read_real(in, "prefix angle"));

    expect(in, "window");
    Window w;
    w.center.x = read_real(in, "window");
    w.center.y = read_real(in, "window");
    w.half_width = read_real(in, "window");
    w.pad = read_real(in, "window");

    expect(in, "limits");
    BuildLimits limits;
    limits.max_depth = static_cast<int>(read_int(in, "limits"));
    const long long line_cap = read_int(in, "limits");
    const long long segment_cap = read_int(in, "limits");
    if (line_cap <= 0 || segment_cap <= 0) throw FormatError("budget caps must be positive");
    limits.line_cap = static_cast<std::size_t>(line_cap);
    limits.segment_cap = static_cast<std::size_t>(segment_cap);

    expect(in, "depth");
    const long long depth = read_int(in, "depth");
    if (depth < 0 || depth > limits.max_depth) throw FormatError("depth outside the recorded cap");

    std::vector<std::vector<LevelCapsule>> levels;
    for (long long m = 1; m <= depth; ++m) {
        expect(in, "level");
        if (read_int(in, "level index") != m) throw FormatError("levels out of order");
        const long long count = read_int(in, "capsule count");
        if (count < 0 || static_cast<unsigned long long>(count) > limits.segment_cap) {
            throw FormatError("capsule count outside the recorded cap");
        }
        std::vector<LevelCapsule> caps;
        caps.reserve(static_cast<std::size_t>(count));
        for (long long i = 0; i < count; ++i) {
            LevelCapsule c;
            c.k = read_int(in, "line index");
            c.span.lo = read_real(in, "span");
            c.span.hi = read_real(in, "span");
            c.capsule.axis.a.x = read_real(in, "axis");
            c.capsule.axis.a.y = read_real(in, "axis");
            c.capsule.axis.b.x = read_real(in, "axis");
            c.capsule.axis.b.y = read_real(in, "axis");
            c.capsule.radius = read_real(in, "radius");
            caps.push_back(c);
        }
        levels.push_back(std::move(caps));
    }
    expect(in, "end");
    try {
        return LevelSet::from_parts(w, DirectionSchedule(std::move(prefix)), limits, std::move(levels));
    } catch (const PreconditionError& e) {
        throw FormatError(std::string("invalid level set header: ") + e.what());
    }
}

LevelSet levelset_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_levelset(is);
}

void save_levelset(const std::string& path, const LevelSet& ls) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_levelset(out, ls);
    if (!out) throw Error("failed writing '" + path + "'");
}

LevelSet load_levelset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open level set file '" + path + "'");
    return read_levelset(in);
}

}  // namespace porset
