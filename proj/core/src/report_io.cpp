#include "porset/report_io.hpp"

#include <cstdio>
#include <ostream>

namespace porset {

std::string csv_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_scan_csv(std::ostream& out, std::span<const ScanRecord> records, const std::optional<Direction>& direction,
                    bool header) {
    if (header) out << kScanCsvHeader << '\n';
    for (const ScanRecord& r : records) {
        out << csv_real(r.point.x) << ',' << csv_real(r.point.y) << ',' << (direction ? "dir" : "iso") << ','
            << (direction ? csv_real(direction->ux()) : "") << ',' << (direction ? csv_real(direction->uy()) : "")
            << ',' << csv_real(r.scale) << ',' << csv_real(r.best_hole_radius) << ',' << csv_real(r.hole_center.x)
            << ',' << csv_real(r.hole_center.y) << ',' << csv_real(r.ratio) << ',' << to_string(r.certificate) << ','
            << to_string(r.source) << '\n';
    }
}

void write_claim_csv(std::ostream& out, const ClaimReport& rep, bool header) {
    if (header) out << kClaimCsvHeader << '\n';
    out << (rep.status == ClaimStatus::Degenerate ? "DEGENERATE" : "CHECKED") << ',' << csv_real(rep.s1) << ','
        << csv_real(rep.s2) << ',' << csv_real(rep.half_height);
    for (const Point& c : rep.rectangle) out << ',' << csv_real(c.x) << ',' << csv_real(c.y);
    out << ',' << rep.samples_tested << ',' << rep.columns_tested << ',' << rep.translation_violations << ','
        << rep.separation_violations << ',' << csv_real(rep.min_separation) << '\n';
}

}  // namespace porset
