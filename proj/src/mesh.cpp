#include "isomesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace isomesh {

void validate_mesh(const IndexedMesh& mesh) {
    if (!mesh.normals.empty() && mesh.normals.size() != mesh.vertices.size())
        throw std::invalid_argument("mesh: normals must be empty or parallel to vertices");
    if (!mesh.provenance.empty() && mesh.provenance.size() != mesh.triangles.size())
        throw std::invalid_argument("mesh: provenance must be empty or parallel to triangles");
    auto n = int(mesh.vertices.size());
    for (const auto& t : mesh.triangles)
        for (int idx : t)
            if (idx < 0 || idx >= n)
                throw std::invalid_argument("mesh: triangle index " + std::to_string(idx) +
                                            " out of range [0," + std::to_string(n) + ")");
}

double mesh_area(const IndexedMesh& mesh) {
    validate_mesh(mesh);
    double area = 0.0;
    for (const auto& t : mesh.triangles)
        area += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    return area;
}

double enclosed_volume_divergence(const IndexedMesh& mesh) {
    MeshStats stats = validate_topology(mesh);
    if (stats.boundary_edge_count > 0)
        throw std::runtime_error("enclosed volume needs a closed mesh: " +
                                 std::to_string(stats.boundary_edge_count) + " boundary edges");
    const Vec3 origin{0.0, 0.0, 0.0};
    double volume = 0.0;
    for (const auto& t : mesh.triangles)
        volume += tet_volume_signed(origin, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                    mesh.vertices[t[2]]);
    return std::abs(volume);
}

MeshStats validate_topology(const IndexedMesh& mesh) {
    validate_mesh(mesh);
    MeshStats stats;
    stats.triangle_count = mesh.triangles.size();

    std::vector<char> used(mesh.vertices.size(), 0);
    std::unordered_map<uint64_t, uint32_t> edges;
    edges.reserve(mesh.triangles.size() * 2);
    std::size_t paired_faces = 0;

    for (const auto& t : mesh.triangles) {
        bool repeated = t[0] == t[1] || t[1] == t[2] || t[0] == t[2];
        if (repeated ||
            triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) == 0.0)
            ++stats.degenerate_triangle_count;
        if (repeated) continue;
        ++paired_faces;
        for (int e = 0; e < 3; ++e) {
            uint32_t a = uint32_t(t[e]), b = uint32_t(t[(e + 1) % 3]);
            used[a] = 1;
            ++edges[(uint64_t(std::min(a, b)) << 32) | std::max(a, b)];
        }
    }

    std::size_t referenced = 0;
    for (char u : used) referenced += std::size_t(u);
    stats.vertex_count = referenced;
    for (const auto& [_, count] : edges) {
        if (count == 1) ++stats.boundary_edge_count;
        if (count >= 3) ++stats.non_manifold_edge_count;
    }
    stats.euler_characteristic =
        (long long)(referenced) - (long long)(edges.size()) + (long long)(paired_faces);
    return stats;
}

}  // namespace isomesh
