#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "isomesh/vec3.hpp"

namespace isomesh {

/// Indexed triangle soup with shared vertices. Extraction welds vertices by
/// the exact lattice-edge identity of their crossing, so index equality *is*
/// geometric identity and topology queries never hash positions. Normals are
/// empty (meshes built by hand or read from normal-less files) or run
/// parallel to vertices; a zero normal marks a degenerate estimate.
/// `provenance` is empty or parallel to triangles, tagging the source cell
/// (or cell-and-tetra slot) each triangle came from.
struct IndexedMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int64_t> provenance;
};

struct MeshStats {
    std::size_t triangle_count = 0;
    std::size_t vertex_count = 0;  // vertices referenced by at least one triangle
    std::size_t degenerate_triangle_count = 0;
    std::size_t boundary_edge_count = 0;      // edges with exactly one incident triangle
    std::size_t non_manifold_edge_count = 0;  // edges with three or more
    long long euler_characteristic = 0;       // V - E + F over the welded mesh

    bool watertight() const { return boundary_edge_count == 0 && non_manifold_edge_count == 0; }
};

/// Signed-volume sum collected while a tetra method walks its decomposition:
/// each tetrahedron contributes the volume of its below-threshold part.
/// Disabled (and meaningless) for plain marching cubes.
struct VolumeAccumulator {
    double volume = 0.0;
    bool enabled = false;
};

/// Throws std::invalid_argument if triangle indices are out of range or the
/// normal array is neither empty nor parallel to the vertices.
void validate_mesh(const IndexedMesh& mesh);

/// Sum of triangle areas, fixed left-to-right order.
double mesh_area(const IndexedMesh& mesh);

/// |sum of signed tetra volumes (origin, a, b, c)| over all triangles.
/// Requires a closed mesh; throws std::runtime_error naming the boundary
/// edge count otherwise. Orientation handedness cancels under the modulus.
double enclosed_volume_divergence(const IndexedMesh& mesh);

/// Edge-pairing census. Triangles with a repeated vertex index are counted
/// as degenerate and sit out the pairing; everything else contributes its
/// three undirected edges. Euler characteristic counts only referenced
/// vertices, paired edges, and pairing-eligible triangles.
MeshStats validate_topology(const IndexedMesh& mesh);

}  // namespace isomesh
