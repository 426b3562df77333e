#pragma once

#include "diskpart/partition_graph.hpp"

namespace diskpart {

/// Exact stationary graphs built from arcs meeting the unit circle orthogonally.
/// Regions are numbered 0, 1, 2 (R1, R2, R3).

/// Regular hexagon (region 2) of area pi/3 with six radial spokes; the outer
/// components alternate between regions 0 and 1. All pressures are equal.
PartitionGraph hex_fixture();

/// Two mirror-image triple junctions (0, +y) and (0, -y) joined by a vertical
/// segment; region 0 has two boundary 3-components (top and bottom caps).
PartitionGraph conf_a_fixture(double y = 0.35);

/// Interior 4-component of region 0 with corners (+-a, +-b), top and bottom
/// sides bordering region 1 and left and right sides bordering region 2;
/// `alpha` is the half-angle of the top side (radians), b is solved for.
PartitionGraph conf_c_fixture(double a = 0.25, double alpha = 0.12);

/// Chain R2 | R1 | R2 | R1 | R2 across the middle of the disk with region 2
/// above and below; p1 = p2, so the vertical edges are segments.
PartitionGraph conf_i_fixture(double y_top = 0.2);

/// Assigns target areas (current areas) and least-squares pressures.
void annotate_regions(PartitionGraph& g);

}  // namespace diskpart
