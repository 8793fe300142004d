#pragma once

#include <string>

#include "json.hpp"

#include "loopgeo/bounds.hpp"
#include "loopgeo/cover.hpp"
#include "loopgeo/homotopy.hpp"
#include "loopgeo/logscalar.hpp"
#include "loopgeo/surface.hpp"
#include "loopgeo/sweep.hpp"

namespace loopgeo {

/// JSON builders for the report format. All emission is deterministic: keys
/// are ordered, doubles round-trip through the shortest representation, and
/// nothing time- or machine-dependent is included (that lives in the
/// separate metadata block).
nlohmann::ordered_json report_json(const LogScalar& x);
nlohmann::ordered_json report_json(const GeometryParams& p);
nlohmann::ordered_json report_json(const BoundReport& r);
nlohmann::ordered_json report_json(const SurfaceInvariants& inv);
nlohmann::ordered_json report_json(const Cover& c);
nlohmann::ordered_json report_json(const Calibration& cal);
/// Summary only: kind, level count, lengths, measured width and continuity.
nlohmann::ordered_json report_json(const Homotopy& H);
nlohmann::ordered_json report_json(const Curve& c, int sample_points = 0);
nlohmann::ordered_json report_json(const CompressedSweepout& cs);

/// Run environment block that is *excluded* from byte-identity comparisons.
nlohmann::ordered_json metadata_block();

/// Level-index, length rows for plotting a homotopy's length profile.
std::string level_lengths_csv(const Homotopy& H);
/// t, x, y, z sample rows of a curve.
std::string curve_samples_csv(const Curve& c, int samples);

std::string render_report(const nlohmann::ordered_json& body);

}  // namespace loopgeo
