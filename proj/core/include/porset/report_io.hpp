#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "porset/porosity.hpp"

namespace porset {

/// Column header of scan CSV files.
inline constexpr const char* kScanCsvHeader =
    "point_x,point_y,mode,dir_x,dir_y,scale,hole_radius,hole_center_x,hole_center_y,ratio,certificate,source";

/// One row per record. `direction` is empty for isotropic scans.
void write_scan_csv(std::ostream& out, std::span<const ScanRecord> records, const std::optional<Direction>& direction,
                    bool header = true);

inline constexpr const char* kClaimCsvHeader =
    "status,s1,s2,half_height,r0x,r0y,r1x,r1y,r2x,r2y,r3x,r3y,samples,columns,translation_violations,"
    "separation_violations,min_separation";

void write_claim_csv(std::ostream& out, const ClaimReport& report, bool header = true);

/// %.17g formatting used by every CSV writer.
std::string csv_real(double v);

}  // namespace porset
