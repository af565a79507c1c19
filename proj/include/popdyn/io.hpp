#pragma once

#include <ostream>
#include <string>

#include "popdyn/analysis.hpp"
#include "popdyn/pop_maps.hpp"
#include "popdyn/types.hpp"

namespace popdyn {

/// Shortest round-trip decimal formatting (17 significant digits).
std::string format_g17(double v);

// CSV writers. Column layouts are part of the tool interface; formatting
// is deterministic so identical inputs produce identical bytes.
void write_orbit_csv(std::ostream& os, const OrbitTrace& trace);
void write_scan_csv(std::ostream& os, const ScanResult& scan);
void write_density_csv(std::ostream& os, const DensityReport& report);
void write_gamma_csv(std::ostream& os, const GammaGeometry& geometry);

/// Overlay of the planar chains of selected orbit steps: first chain
/// black, last red, up to eight intermediates gray. The view box covers
/// the reachable disc of radius l1+l2+l3 around the ground bar.
void write_orbit_svg(std::ostream& os, const Linkage& linkage, const OrbitTrace& trace);

/// Level-set polylines on the angle torus, one color per component.
void write_gamma_svg(std::ostream& os, const GammaGeometry& geometry);

/// Parse {"l1":..,"l2":..,"l3":..,"L":..} given inline or as a file path.
Linkage linkage_from_json(const std::string& json_or_path);

/// Parse {"theta1":..,"theta2":..} (radians), inline or file path.
AngleConfig angles_from_json(const std::string& json_or_path);

}  // namespace popdyn
