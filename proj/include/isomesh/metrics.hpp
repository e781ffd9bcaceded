#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isomesh/field.hpp"
#include "isomesh/mesh.hpp"

namespace isomesh {

/// How a mesh surface is discretized into points. Interior samples per
/// triangle number round(area * density) and come from a per-triangle
/// low-discrepancy sequence whose i-th element depends only on (triangle,
/// i, seed) — so raising the density keeps every existing sample and only
/// adds new ones, which is what makes sampled Hausdorff monotone in density.
/// Edge samples (off by default) follow the same prefix-nested scheme along
/// each unique edge at sqrt(density) per unit length.
struct SamplingSpec {
    double density = 4.0;  // interior samples per unit area; must be > 0
    bool include_vertices = true;
    bool include_edges = false;
    uint64_t seed = 0;
};

struct DistanceResult {
    double forward = 0.0;   // max over samples of A of distance to B
    double backward = 0.0;  // max over samples of B of distance to A
    double symmetric = 0.0; // max of the two
    double rms_forward = 0.0;
    std::size_t sample_count = 0;  // points evaluated, both directions
    Vec3 max_location;             // sample realizing the symmetric value
};

/// sqrt(mean of squared distances), or the variant printed in some reports,
/// sqrt(sum of squares)/n — the latter divides once more by sqrt(n).
enum class RmsVariant { MeanSquare, SumOverN };

/// Deterministic surface point set: vertices (in index order), then interior
/// samples per triangle, then optional edge samples. Pure function of (mesh,
/// sampling). Throws std::invalid_argument unless density > 0.
std::vector<Vec3> surface_sample(const IndexedMesh& mesh, const SamplingSpec& sampling);

/// Exact squared point-triangle distance (closest point over face, edge and
/// vertex regions). Degenerate triangles fall back to their edges.
double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Nearest-distance queries against one mesh, accelerated by a uniform grid
/// over its triangles. The ring search stops only once the remaining cells
/// provably cannot beat the best distance, so distance() returns exactly the
/// value distance_brute() computes by scanning every triangle.
class MeshDistanceIndex {
public:
    explicit MeshDistanceIndex(const IndexedMesh& mesh);  // throws on empty mesh
    double distance(const Vec3& p) const;
    double distance_brute(const Vec3& p) const;
    std::size_t triangle_count() const { return tris_.size(); }

private:
    struct Tri {
        Vec3 a, b, c;
    };
    double cell_lower_bound(const Vec3& p, int r, int cx, int cy, int cz) const;
    std::vector<Tri> tris_;
    Vec3 lo_, hi_;
    double hx_ = 1.0, hy_ = 1.0, hz_ = 1.0;
    int nx_ = 1, ny_ = 1, nz_ = 1;
    std::vector<std::vector<int32_t>> cells_;
};

/// Sampled Hausdorff between two meshes. Deterministic for any thread count:
/// samples are reduced in fixed-size chunks combined in chunk order, and the
/// max location is the first sample attaining the max in sample order.
/// Throws std::runtime_error when either mesh has no triangles.
DistanceResult hausdorff(const IndexedMesh& a, const IndexedMesh& b,
                         const SamplingSpec& sampling, unsigned threads = 0);

/// Root-mean-square sampled distance from A to B (A is the mesh under test,
/// B the reference). Same sampling and determinism rules as hausdorff.
double rms_distance(const IndexedMesh& a, const IndexedMesh& b, const SamplingSpec& sampling,
                    RmsVariant variant = RmsVariant::MeanSquare, unsigned threads = 0);

/// Mean |signed distance| from triangle centroids to the analytic object.
/// Degenerate triangles keep their centroids and are included. Throws
/// std::runtime_error on an empty mesh.
double p_err(const IndexedMesh& mesh, const FieldSpec& spec);

/// Signed relative errors (measured - analytic)/analytic, where an analytic
/// value exists; disengaged otherwise.
struct RelativeErrors {
    std::optional<double> area;
    std::optional<double> volume;
};
RelativeErrors relative_errors(std::optional<double> measured_area,
                               std::optional<double> measured_volume, const FieldSpec& spec);

/// One report row per (object, method, threshold) run.
struct MetricsReport {
    std::string object;
    std::string method;
    double threshold = 0.0;
    std::size_t triangle_count = 0;
    std::size_t vertex_count = 0;
    double area = 0.0;
    std::optional<double> area_rel_error;
    std::optional<double> volume;  // tetra methods only
    std::optional<double> volume_rel_error;
    std::optional<double> p_err;  // analytic objects only
    std::optional<DistanceResult> hausdorff;  // vs the reference (MC) mesh
    std::optional<double> rms;                // same direction as hausdorff.forward
    bool watertight = false;
    std::size_t boundary_edge_count = 0;
    std::size_t non_manifold_edge_count = 0;
    long long euler_characteristic = 0;
};

}  // namespace isomesh
