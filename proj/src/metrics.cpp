#include "isomesh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "isomesh/hash.hpp"
#include "isomesh/parallel.hpp"

namespace isomesh {

namespace {

double point_segment_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm2();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm2();
}

}  // namespace

// Closest-point region walk (vertex, edge, face). The barycentric products
// go non-positive together only for degenerate triangles, which then use
// their edges.
double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm2();

    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return (p - b).norm2();

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        return (p - (a + ab * v)).norm2();
    }

    Vec3 cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return (p - c).norm2();

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        return (p - (a + ac * w)).norm2();
    }

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + (c - b) * w)).norm2();
    }

    double sum = va + vb + vc;
    if (!(sum > 0.0))  // degenerate: no face region exists
        return std::min({point_segment_distance_sq(p, a, b), point_segment_distance_sq(p, b, c),
                         point_segment_distance_sq(p, a, c)});
    double v = vb / sum, w = vc / sum;
    return (p - (a + ab * v + ac * w)).norm2();
}

std::vector<Vec3> surface_sample(const IndexedMesh& mesh, const SamplingSpec& s) {
    if (!(s.density > 0.0))
        throw std::invalid_argument("surface_sample: density must be > 0");
    validate_mesh(mesh);
    std::vector<Vec3> pts;
    if (s.include_vertices)
        pts.insert(pts.end(), mesh.vertices.begin(), mesh.vertices.end());

    // R2 low-discrepancy sequence; element i depends only on (triangle,
    // seed, i), giving the prefix-nesting the monotonicity contract needs.
    constexpr double kR2x = 0.7548776662466927;
    constexpr double kR2y = 0.5698402909980532;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec3& a = mesh.vertices[mesh.triangles[t][0]];
        const Vec3& b = mesh.vertices[mesh.triangles[t][1]];
        const Vec3& c = mesh.vertices[mesh.triangles[t][2]];
        long long n = std::llround(triangle_area(a, b, c) * s.density);
        if (n <= 0) continue;
        double ox = hash_unit(splitmix64(s.seed ^ splitmix64(2 * t)));
        double oy = hash_unit(splitmix64(s.seed ^ splitmix64(2 * t + 1)));
        for (long long i = 1; i <= n; ++i) {
            double u = std::fmod(kR2x * double(i) + ox, 1.0);
            double v = std::fmod(kR2y * double(i) + oy, 1.0);
            if (u + v > 1.0) {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            pts.push_back(a + (b - a) * u + (c - a) * v);
        }
    }

    if (s.include_edges) {
        constexpr double kGolden = 0.6180339887498949;
        double per_length = std::sqrt(s.density);
        std::unordered_set<uint64_t> seen;
        for (const auto& tr : mesh.triangles) {
            for (int e = 0; e < 3; ++e) {
                auto u = uint32_t(std::min(tr[e], tr[(e + 1) % 3]));
                auto v = uint32_t(std::max(tr[e], tr[(e + 1) % 3]));
                if (u == v || !seen.insert((uint64_t(u) << 32) | v).second) continue;
                const Vec3 &pu = mesh.vertices[u], &pv = mesh.vertices[v];
                long long n = std::llround((pv - pu).norm() * per_length);
                double off = hash_unit(splitmix64(s.seed ^ splitmix64((uint64_t(u) << 32) | v)));
                for (long long i = 1; i <= n; ++i)
                    pts.push_back(lerp(pu, pv, std::fmod(kGolden * double(i) + off, 1.0)));
            }
        }
    }
    return pts;
}

MeshDistanceIndex::MeshDistanceIndex(const IndexedMesh& mesh) {
    validate_mesh(mesh);
    if (mesh.triangles.empty())
        throw std::runtime_error("distance index: mesh has no triangles");
    tris_.reserve(mesh.triangles.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    lo_ = {inf, inf, inf};
    hi_ = {-inf, -inf, -inf};
    for (const auto& t : mesh.triangles) {
        Tri tri{mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
        for (const Vec3& v : {tri.a, tri.b, tri.c}) {
            lo_ = {std::min(lo_.x, v.x), std::min(lo_.y, v.y), std::min(lo_.z, v.z)};
            hi_ = {std::max(hi_.x, v.x), std::max(hi_.y, v.y), std::max(hi_.z, v.z)};
        }
        tris_.push_back(tri);
    }
    Vec3 ext = hi_ - lo_;
    double max_ext = std::max({ext.x, ext.y, ext.z});
    double h = std::cbrt(std::max(ext.x * ext.y * ext.z, 1e-30) / double(tris_.size()));
    if (!(h > max_ext / 256.0)) h = max_ext / 256.0;  // flat meshes: cap resolution
    if (!(h > 0.0)) h = 1.0;                          // single point
    auto res = [&](double e) { return std::clamp(int(std::ceil(e / h)), 1, 128); };
    nx_ = res(ext.x), ny_ = res(ext.y), nz_ = res(ext.z);
    hx_ = ext.x / nx_, hy_ = ext.y / ny_, hz_ = ext.z / nz_;

    auto cell_of = [&](double v, double lo, double hstep, int n) {
        if (!(hstep > 0.0)) return 0;
        return std::clamp(int((v - lo) / hstep), 0, n - 1);
    };
    cells_.assign(std::size_t(nx_) * ny_ * nz_, {});
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        const Tri& tri = tris_[t];
        double xs[3] = {tri.a.x, tri.b.x, tri.c.x};
        double ys[3] = {tri.a.y, tri.b.y, tri.c.y};
        double zs[3] = {tri.a.z, tri.b.z, tri.c.z};
        int x0 = cell_of(*std::min_element(xs, xs + 3), lo_.x, hx_, nx_);
        int x1 = cell_of(*std::max_element(xs, xs + 3), lo_.x, hx_, nx_);
        int y0 = cell_of(*std::min_element(ys, ys + 3), lo_.y, hy_, ny_);
        int y1 = cell_of(*std::max_element(ys, ys + 3), lo_.y, hy_, ny_);
        int z0 = cell_of(*std::min_element(zs, zs + 3), lo_.z, hz_, nz_);
        int z1 = cell_of(*std::max_element(zs, zs + 3), lo_.z, hz_, nz_);
        for (int z = z0; z <= z1; ++z)
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x)
                    cells_[(std::size_t(z) * ny_ + y) * nx_ + x].push_back(int32_t(t));
    }
}

double MeshDistanceIndex::distance_brute(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Tri& t : tris_)
        best = std::min(best, point_triangle_distance_sq(p, t.a, t.b, t.c));
    return std::sqrt(best);
}

// Smallest possible distance from p to any cell outside Chebyshev ring r
// around (cx,cy,cz) — i.e. to the part of the grid not yet examined.
double MeshDistanceIndex::cell_lower_bound(const Vec3& p, int r, int cx, int cy, int cz) const {
    double lb = std::numeric_limits<double>::infinity();
    auto side = [&](int lo_cell, int hi_cell, int n, double plo, double h, double v) {
        if (lo_cell > 0)  // unexamined cells below the box remain
            lb = std::min(lb, std::max(0.0, v - (plo + lo_cell * h)));
        if (hi_cell < n - 1)
            lb = std::min(lb, std::max(0.0, (plo + (hi_cell + 1) * h) - v));
    };
    side(std::max(0, cx - r), std::min(nx_ - 1, cx + r), nx_, lo_.x, hx_, p.x);
    side(std::max(0, cy - r), std::min(ny_ - 1, cy + r), ny_, lo_.y, hy_, p.y);
    side(std::max(0, cz - r), std::min(nz_ - 1, cz + r), nz_, lo_.z, hz_, p.z);
    return lb;
}

double MeshDistanceIndex::distance(const Vec3& p) const {
    auto cell_of = [&](double v, double lo, double hstep, int n) {
        if (!(hstep > 0.0)) return 0;
        return std::clamp(int((v - lo) / hstep), 0, n - 1);
    };
    int cx = cell_of(p.x, lo_.x, hx_, nx_);
    int cy = cell_of(p.y, lo_.y, hy_, ny_);
    int cz = cell_of(p.z, lo_.z, hz_, nz_);
    double best_sq = std::numeric_limits<double>::infinity();
    int max_r = std::max({nx_, ny_, nz_});

    auto visit = [&](int x, int y, int z) {
        if (x < 0 || x >= nx_ || y < 0 || y >= ny_ || z < 0 || z >= nz_) return;
        for (int32_t t : cells_[(std::size_t(z) * ny_ + y) * nx_ + x]) {
            const Tri& tri = tris_[std::size_t(t)];
            best_sq = std::min(best_sq, point_triangle_distance_sq(p, tri.a, tri.b, tri.c));
        }
    };

    for (int r = 0; r <= max_r; ++r) {
        if (r == 0) {
            visit(cx, cy, cz);
        } else {
            for (int x = cx - r; x <= cx + r; ++x) {
                bool xe = x == cx - r || x == cx + r;
                for (int y = cy - r; y <= cy + r; ++y) {
                    bool ye = y == cy - r || y == cy + r;
                    if (xe || ye) {
                        for (int z = cz - r; z <= cz + r; ++z) visit(x, y, z);
                    } else {
                        visit(x, y, cz - r);
                        visit(x, y, cz + r);
                    }
                }
            }
        }
        // Conservatively shrunk bound: expansion stops only when no
        // unexamined cell could hold a closer triangle, so the result is
        // exactly the brute-force minimum.
        double lb = cell_lower_bound(p, r, cx, cy, cz);
        if (lb == std::numeric_limits<double>::infinity()) break;  // grid exhausted
        double lb_safe = lb * (1.0 - 1e-9);
        if (best_sq <= lb_safe * lb_safe) break;
    }
    return std::sqrt(best_sq);
}

namespace {

struct DirScan {
    double max_d = 0.0;
    std::size_t argmax = std::size_t(-1);
    double sumsq = 0.0;
    std::size_t count = 0;
};

// Fixed 1024-sample chunks reduced in chunk order: identical output for any
// worker count, and the max keeps the first sample attaining it.
DirScan scan_direction(const std::vector<Vec3>& pts, const MeshDistanceIndex& target,
                       unsigned threads) {
    constexpr std::size_t kChunk = 1024;
    std::size_t nchunks = (pts.size() + kChunk - 1) / kChunk;
    std::vector<DirScan> parts(nchunks);
    parallel_chunks(pts.size(), kChunk, threads, [&](std::size_t b, std::size_t e) {
        DirScan part;
        for (std::size_t i = b; i < e; ++i) {
            double d = target.distance(pts[i]);
            if (part.argmax == std::size_t(-1) || d > part.max_d) {
                part.max_d = d;
                part.argmax = i;
            }
            part.sumsq += d * d;
        }
        part.count = e - b;
        parts[b / kChunk] = part;
    });
    DirScan total;
    for (const auto& part : parts) {
        if (part.count == 0) continue;
        if (total.argmax == std::size_t(-1) || part.max_d > total.max_d) {
            total.max_d = part.max_d;
            total.argmax = part.argmax;
        }
        total.sumsq += part.sumsq;
        total.count += part.count;
    }
    return total;
}

void require_comparable(const IndexedMesh& a, const IndexedMesh& b) {
    if (a.triangles.empty() || b.triangles.empty())
        throw std::runtime_error("mesh distance: a mesh has no triangles");
}

}  // namespace

DistanceResult hausdorff(const IndexedMesh& a, const IndexedMesh& b, const SamplingSpec& sampling,
                         unsigned threads) {
    require_comparable(a, b);
    auto pa = surface_sample(a, sampling);
    auto pb = surface_sample(b, sampling);
    if (pa.empty() || pb.empty())
        throw std::runtime_error("mesh distance: sampling produced no points");
    MeshDistanceIndex ia(a), ib(b);
    DirScan fwd = scan_direction(pa, ib, threads);
    DirScan bwd = scan_direction(pb, ia, threads);
    DistanceResult r;
    r.forward = fwd.max_d;
    r.backward = bwd.max_d;
    r.symmetric = std::max(r.forward, r.backward);
    r.rms_forward = std::sqrt(fwd.sumsq / double(fwd.count));
    r.sample_count = fwd.count + bwd.count;
    r.max_location = r.forward >= r.backward ? pa[fwd.argmax] : pb[bwd.argmax];
    return r;
}

double rms_distance(const IndexedMesh& a, const IndexedMesh& b, const SamplingSpec& sampling,
                    RmsVariant variant, unsigned threads) {
    require_comparable(a, b);
    auto pa = surface_sample(a, sampling);
    if (pa.empty()) throw std::runtime_error("mesh distance: sampling produced no points");
    MeshDistanceIndex ib(b);
    DirScan fwd = scan_direction(pa, ib, threads);
    if (variant == RmsVariant::MeanSquare) return std::sqrt(fwd.sumsq / double(fwd.count));
    return std::sqrt(fwd.sumsq) / double(fwd.count);
}

double p_err(const IndexedMesh& mesh, const FieldSpec& spec) {
    validate_mesh(mesh);
    if (mesh.triangles.empty()) throw std::runtime_error("p_err: mesh has no triangles");
    double sum = 0.0;
    for (const auto& t : mesh.triangles) {
        Vec3 centroid = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) *
                        (1.0 / 3.0);
        sum += std::abs(object_distance(spec, centroid));
    }
    return sum / double(mesh.triangles.size());
}

RelativeErrors relative_errors(std::optional<double> measured_area,
                               std::optional<double> measured_volume, const FieldSpec& spec) {
    RelativeErrors r;
    if (auto ref = analytic_area(spec); ref && measured_area) r.area = (*measured_area - *ref) / *ref;
    if (auto ref = analytic_volume(spec); ref && measured_volume)
        r.volume = (*measured_volume - *ref) / *ref;
    return r;
}

}  // namespace isomesh
