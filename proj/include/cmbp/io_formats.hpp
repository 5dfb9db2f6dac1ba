#pragma once

#include <iosfwd>
#include <string>

#include "cmbp/forward.hpp"
#include "cmbp/geometry.hpp"
#include "cmbp/grid_image.hpp"
#include "cmbp/phantom.hpp"

namespace cmbp {

/// GRID2: `GRID2 v1 nx ny xmin ymin dx dy` then ny rows of nx values.
/// xmin/ymin name the center of cell (0,0). Values are written with 17
/// significant digits so write-then-read is exact.
void write_grid2(const GridImage& img, const std::string& path);
GridImage read_grid2(const std::string& path);

/// BSER: `BSER v1 <means|wave> n_centers n_samples step limit`, one center
/// line per boundary node, then the value matrix row per center.
void write_bser(const BoundarySeries& s, const std::string& path);
BoundarySeries read_bser(const std::string& path);

/// Domain spec file with exactly one definition line:
///   disc cx cy r
///   ellipse cx cy a b
///   superellipse cx cy a b p
/// Blank lines and '#' comments are ignored.
ConvexDomain parse_domain_spec(std::istream& in, const std::string& name, int boundary_nodes);
ConvexDomain load_domain_spec(const std::string& path, int boundary_nodes);

/// Phantom spec file: one `bump cx cy rho amp` line per bump.
Phantom parse_phantom_spec(std::istream& in, const std::string& name);
Phantom load_phantom_spec(const std::string& path);
void save_phantom_spec(const Phantom& ph, const std::string& path);

}  // namespace cmbp
