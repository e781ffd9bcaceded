#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "isomesh/grid.hpp"
#include "isomesh/mesh.hpp"

namespace isomesh {

enum class ExtractionMethod { MC, MT5, MT6, CCL };

ExtractionMethod parse_method(const std::string& name);  // throws std::invalid_argument
const char* method_name(ExtractionMethod m);

/// Cube corners, local ids 0..7 = A..H: A..D ring the bottom face
/// counterclockwise seen from +z starting at the cell origin, E..H sit
/// directly above. Doubles as the v0..v7 order of the marching cubes tables.
inline constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

/// Marching cubes case tables; index bit i is set when corner i is below the
/// threshold. kMcEdgeTable flags the 12 cube edges carrying a crossing;
/// kMcTriTable lists -1-terminated triangles as edge-id triples.
extern const uint16_t kMcEdgeTable[256];
extern const int8_t kMcTriTable[256][16];
inline constexpr int kMcEdgeVerts[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

/// Tetra case table. Row = TetraIndex (bit 3..0 = tetra vertices A..D, bit
/// set when the value is >= threshold); entries are local tetra edge ids,
/// -1 padded, at most two triangles. Winding points triangle normals toward
/// the below-threshold side, matching the normal = -gradient convention.
extern const int8_t kTetraTriTable[16][7];
inline constexpr int kTetraEdgeVerts[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

/// 8-bit cell index, A the most significant bit, bit = 1 when the corner
/// value is >= threshold. 0 and 255 mean the cell is inactive.
uint8_t cell_index(const std::array<double, 8>& values, double threshold);

/// 4-bit analog for a tetrahedron, A the most significant bit.
uint8_t tetra_index(const std::array<double, 4>& values, double threshold);

/// Parameter t of the threshold crossing on an edge whose endpoint values
/// are v0, v1. Clamped to [0,1]; both endpoints equal to the threshold give
/// the declared tie-break t = 0.5; both strictly on one side throws
/// std::invalid_argument.
double interpolate_crossing(double v0, double v1, double threshold);

/// Negated gradient estimate at a sample: central differences in the
/// interior, one-sided on boundary samples. Unnormalized; the zero vector
/// (constant field) marks a degenerate normal.
Vec3 vertex_normal(const ScalarGrid& grid, int i, int j, int k);

/// Interpolation-edge flavor, recovered from an EdgeKey. Which flavors occur
/// is a method fingerprint: MC uses grid edges only, MT5 adds face
/// diagonals, MT6 face and interior diagonals, CCL center-corner and
/// center-center edges instead of diagonals.
enum class EdgeClass { GridEdge, FaceDiagonal, InteriorDiagonal, CenterCorner, CenterCenter };

/// Mesh vertices are deduplicated by EdgeKey: the canonical (low id, high id)
/// pair of global point ids for the edge carrying the crossing. Samples get
/// their linear index, cell centers (CCL) get sample_count + cell index, so
/// adjacent cells name shared edges identically and welding is exact.
using EdgeKey = uint64_t;

EdgeKey make_edge_key(uint32_t id0, uint32_t id1);
EdgeClass classify_edge(GridDims dims, EdgeKey key);
bool edge_class_permitted(ExtractionMethod m, EdgeClass c);
const char* edge_class_name(EdgeClass c);

/// Tetrahedral decomposition of one cell, as corner-id quadruples. Ids 0..7
/// are cube corners; for CCL, 8 is this cell's center and 9..14 the face
/// neighbors' centers (+x, -x, +y, -y, +z, -z). Every tetrahedron is listed
/// positively oriented.
struct Decomposition {
    std::vector<std::array<int, 4>> tets;
};

/// Position of a decomposition vertex id in cell-local coordinates.
Vec3 decomposition_vertex(int id);

/// The tetra list a method tiles a cell with: MT5 5 tets picked by cell
/// parity ((i+j+k) mod 2), MT6 6 parity-independent tets sharing the A-G
/// diagonal, CCL the 24 tets incident to the cell (4 per face, each spanning
/// two cell centers; total volume 2 cells). MC does not decompose and is a
/// contract violation here.
const Decomposition& decompose(ExtractionMethod method, int parity);

struct ExtractResult {
    IndexedMesh mesh;
    VolumeAccumulator volume;         // below-threshold volume; tetra methods only
    std::vector<EdgeKey> vertex_keys; // parallel to mesh.vertices
};

/// Walks all cells in scan order (z-outer, x-inner) and triangulates the
/// iso-surface at `threshold`. Crossings are emitted once per EdgeKey and
/// interpolated in canonical key order, so repeated runs produce identical
/// meshes. CCL center values are the arithmetic mean of the 8 cell corners
/// (center normals likewise); CCL faces on the volume boundary have no
/// second center and are skipped. Tetra methods accumulate the enclosed
/// (below-threshold) volume while walking; the contributions use the same
/// crossing points and quad diagonals as the emitted triangles.
ExtractResult extract(const ScalarGrid& grid, double threshold, ExtractionMethod method);

}  // namespace isomesh
