#include "isomesh/extract.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace isomesh {

// Edge ids: 0:AB 1:AC 2:AD 3:BC 4:BD 5:CD. Winding sends triangle normals
// toward the below-threshold side of each (positively oriented) tetrahedron.
const int8_t kTetraTriTable[16][7] = {
    {-1, -1, -1, -1, -1, -1, -1},  // ----
    {2, 5, 4, -1, -1, -1, -1},     // ---D
    {1, 3, 5, -1, -1, -1, -1},     // --C-
    {1, 4, 2, 1, 3, 4, -1},        // --CD
    {0, 4, 3, -1, -1, -1, -1},     // -B--
    {0, 5, 3, 0, 2, 5, -1},        // -B-D
    {0, 5, 1, 0, 4, 5, -1},        // -BC-
    {0, 2, 1, -1, -1, -1, -1},     // -BCD
    {0, 1, 2, -1, -1, -1, -1},     // A---
    {0, 1, 5, 0, 5, 4, -1},        // A--D
    {0, 3, 5, 0, 5, 2, -1},        // A-C-
    {0, 3, 4, -1, -1, -1, -1},     // A-CD
    {1, 2, 4, 1, 4, 3, -1},        // AB--
    {1, 5, 3, -1, -1, -1, -1},     // AB-D
    {2, 4, 5, -1, -1, -1, -1},     // ABC-
    {-1, -1, -1, -1, -1, -1, -1},  // ABCD
};

ExtractionMethod parse_method(const std::string& name) {
    std::string s;
    for (char c : name) s += char(std::tolower(static_cast<unsigned char>(c)));
    if (s == "mc") return ExtractionMethod::MC;
    if (s == "mt5") return ExtractionMethod::MT5;
    if (s == "mt6") return ExtractionMethod::MT6;
    if (s == "ccl") return ExtractionMethod::CCL;
    throw std::invalid_argument("unknown extraction method \"" + name +
                                "\" (expected mc, mt5, mt6 or ccl)");
}

const char* method_name(ExtractionMethod m) {
    switch (m) {
        case ExtractionMethod::MC: return "mc";
        case ExtractionMethod::MT5: return "mt5";
        case ExtractionMethod::MT6: return "mt6";
        default: return "ccl";
    }
}

uint8_t cell_index(const std::array<double, 8>& values, double threshold) {
    uint8_t idx = 0;
    for (int c = 0; c < 8; ++c)
        if (values[c] >= threshold) idx |= uint8_t(1u << (7 - c));
    return idx;
}

uint8_t tetra_index(const std::array<double, 4>& values, double threshold) {
    uint8_t idx = 0;
    for (int c = 0; c < 4; ++c)
        if (values[c] >= threshold) idx |= uint8_t(1u << (3 - c));
    return idx;
}

double interpolate_crossing(double v0, double v1, double threshold) {
    double d0 = v0 - threshold, d1 = v1 - threshold;
    if (d0 == 0.0 && d1 == 0.0) return 0.5;
    if ((d0 > 0.0 && d1 > 0.0) || (d0 < 0.0 && d1 < 0.0))
        throw std::invalid_argument("interpolate_crossing: both endpoints on the same side");
    return std::clamp((threshold - v0) / (v1 - v0), 0.0, 1.0);
}

Vec3 vertex_normal(const ScalarGrid& grid, int i, int j, int k) {
    const auto& d = grid.dims();
    auto axis = [&](int lo_ok, int hi_ok, double lo, double mid, double hi) {
        if (lo_ok && hi_ok) return (hi - lo) * 0.5;
        return lo_ok ? mid - lo : hi - mid;
    };
    double mid = grid.at(i, j, k);
    double gx = axis(i > 0, i < d.nx - 1, i > 0 ? grid.at(i - 1, j, k) : 0.0, mid,
                     i < d.nx - 1 ? grid.at(i + 1, j, k) : 0.0);
    double gy = axis(j > 0, j < d.ny - 1, j > 0 ? grid.at(i, j - 1, k) : 0.0, mid,
                     j < d.ny - 1 ? grid.at(i, j + 1, k) : 0.0);
    double gz = axis(k > 0, k < d.nz - 1, k > 0 ? grid.at(i, j, k - 1) : 0.0, mid,
                     k < d.nz - 1 ? grid.at(i, j, k + 1) : 0.0);
    return {-gx, -gy, -gz};
}

EdgeKey make_edge_key(uint32_t id0, uint32_t id1) {
    if (id0 > id1) std::swap(id0, id1);
    return (uint64_t(id0) << 32) | id1;
}

namespace {

struct PointRef {
    bool is_center;
    int i, j, k;  // sample indices, or cell indices for a center
};

PointRef decode_point(GridDims dims, uint32_t id) {
    std::size_t samples = dims.sample_count();
    if (id < samples) {
        int i = int(id % dims.nx);
        int j = int(id / dims.nx % dims.ny);
        int k = int(id / (std::size_t(dims.nx) * dims.ny));
        return {false, i, j, k};
    }
    std::size_t cid = id - samples;
    int cx = dims.nx - 1, cy = dims.ny - 1;
    return {true, int(cid % cx), int(cid / cx % cy), int(cid / (std::size_t(cx) * cy))};
}

}  // namespace

EdgeClass classify_edge(GridDims dims, EdgeKey key) {
    PointRef a = decode_point(dims, uint32_t(key >> 32));
    PointRef b = decode_point(dims, uint32_t(key & 0xffffffffu));
    int di = std::abs(a.i - b.i), dj = std::abs(a.j - b.j), dk = std::abs(a.k - b.k);
    if (!a.is_center && !b.is_center) {
        if (di > 1 || dj > 1 || dk > 1 || di + dj + dk == 0)
            throw std::invalid_argument("classify_edge: not a cell-local sample pair");
        switch (di + dj + dk) {
            case 1: return EdgeClass::GridEdge;
            case 2: return EdgeClass::FaceDiagonal;
            default: return EdgeClass::InteriorDiagonal;
        }
    }
    if (a.is_center && b.is_center) {
        if (di + dj + dk != 1)
            throw std::invalid_argument("classify_edge: centers are not face neighbors");
        return EdgeClass::CenterCenter;
    }
    const PointRef& cell = a.is_center ? a : b;
    const PointRef& corner = a.is_center ? b : a;
    if (corner.i < cell.i || corner.i > cell.i + 1 || corner.j < cell.j ||
        corner.j > cell.j + 1 || corner.k < cell.k || corner.k > cell.k + 1)
        throw std::invalid_argument("classify_edge: sample is not a corner of the center's cell");
    return EdgeClass::CenterCorner;
}

bool edge_class_permitted(ExtractionMethod m, EdgeClass c) {
    switch (m) {
        case ExtractionMethod::MC: return c == EdgeClass::GridEdge;
        case ExtractionMethod::MT5:
            return c == EdgeClass::GridEdge || c == EdgeClass::FaceDiagonal;
        case ExtractionMethod::MT6:
            return c == EdgeClass::GridEdge || c == EdgeClass::FaceDiagonal ||
                   c == EdgeClass::InteriorDiagonal;
        default:
            return c == EdgeClass::GridEdge || c == EdgeClass::CenterCorner ||
                   c == EdgeClass::CenterCenter;
    }
}

const char* edge_class_name(EdgeClass c) {
    switch (c) {
        case EdgeClass::GridEdge: return "grid-edge";
        case EdgeClass::FaceDiagonal: return "face-diagonal";
        case EdgeClass::InteriorDiagonal: return "interior-diagonal";
        case EdgeClass::CenterCorner: return "center-corner";
        default: return "center-center";
    }
}

Vec3 decomposition_vertex(int id) {
    if (id >= 0 && id < 8)
        return {double(kCornerOffset[id][0]), double(kCornerOffset[id][1]),
                double(kCornerOffset[id][2])};
    switch (id) {
        case 8: return {0.5, 0.5, 0.5};
        case 9: return {1.5, 0.5, 0.5};
        case 10: return {-0.5, 0.5, 0.5};
        case 11: return {0.5, 1.5, 0.5};
        case 12: return {0.5, -0.5, 0.5};
        case 13: return {0.5, 0.5, 1.5};
        case 14: return {0.5, 0.5, -0.5};
    }
    throw std::invalid_argument("decomposition_vertex: id out of range");
}

const Decomposition& decompose(ExtractionMethod method, int parity) {
    // MT5: four corner tets + the central one (volume 1/3); the odd variant
    // mirrors the even one so shared faces of neighbor cells use the same
    // diagonal. MT6: all six share the A-G interior diagonal. All rows are
    // positively oriented.
    static const Decomposition mt5_even{
        {{0, 1, 3, 4}, {1, 2, 3, 6}, {1, 4, 5, 6}, {3, 4, 6, 7}, {1, 3, 4, 6}}};
    static const Decomposition mt5_odd{
        {{0, 1, 2, 5}, {0, 2, 3, 7}, {0, 4, 5, 7}, {2, 5, 6, 7}, {0, 2, 7, 5}}};
    static const Decomposition mt6{
        {{0, 1, 2, 6}, {0, 5, 1, 6}, {0, 2, 3, 6}, {0, 3, 7, 6}, {0, 4, 5, 6}, {0, 7, 4, 6}}};
    // Four tets per face: a face edge plus the two centers flanking the
    // face. The center pair is ordered per face so every row comes out
    // positively oriented with the shared edge cycle kept as written.
    static const Decomposition ccl{{
        {1, 2, 8, 9},  {2, 6, 8, 9},  {6, 5, 8, 9},  {5, 1, 8, 9},   // +x face
        {0, 3, 10, 8}, {3, 7, 10, 8}, {7, 4, 10, 8}, {4, 0, 10, 8},  // -x
        {3, 2, 11, 8}, {2, 6, 11, 8}, {6, 7, 11, 8}, {7, 3, 11, 8},  // +y
        {0, 1, 8, 12}, {1, 5, 8, 12}, {5, 4, 8, 12}, {4, 0, 8, 12},  // -y
        {4, 5, 8, 13}, {5, 6, 8, 13}, {6, 7, 8, 13}, {7, 4, 8, 13},  // +z
        {0, 1, 14, 8}, {1, 2, 14, 8}, {2, 3, 14, 8}, {3, 0, 14, 8},  // -z
    }};
    switch (method) {
        case ExtractionMethod::MC:
            throw std::invalid_argument("decompose: MC has no tetrahedral decomposition");
        case ExtractionMethod::MT5: return (parity & 1) ? mt5_odd : mt5_even;
        case ExtractionMethod::MT6: return mt6;
        default: return ccl;
    }
}

namespace {

struct Point {
    uint32_t id = 0;
    Vec3 pos;
    double val = 0.0;
    Vec3 normal;
};

struct Builder {
    const ScalarGrid& grid;
    const double thr;
    ExtractResult out;
    std::unordered_map<EdgeKey, int> index_of;

    Builder(const ScalarGrid& g, double t) : grid(g), thr(t) {}

    uint32_t sample_id(int i, int j, int k) const { return uint32_t(grid.linear_index(i, j, k)); }
    std::size_t cell_linear(int i, int j, int k) const {
        const auto& d = grid.dims();
        return (std::size_t(k) * (d.ny - 1) + j) * (d.nx - 1) + i;
    }

    Point sample_point(int i, int j, int k, bool with_normal) const {
        Point p{sample_id(i, j, k), grid.position(i, j, k), grid.at(i, j, k), Vec3{}};
        if (with_normal) p.normal = vertex_normal(grid, i, j, k);
        return p;
    }

    // Cell center: value and normal are arithmetic means over the 8 corners,
    // in fixed corner order so re-derivations agree bitwise.
    Point center_point(int ci, int cj, int ck, bool with_normal) const {
        Point p;
        p.id = uint32_t(grid.dims().sample_count() + cell_linear(ci, cj, ck));
        p.pos = {ci + 0.5, cj + 0.5, ck + 0.5};
        double sum = 0.0;
        Vec3 nsum{};
        for (int c = 0; c < 8; ++c) {
            int i = ci + kCornerOffset[c][0], j = cj + kCornerOffset[c][1],
                k = ck + kCornerOffset[c][2];
            sum += grid.at(i, j, k);
            if (with_normal) nsum = nsum + vertex_normal(grid, i, j, k);
        }
        p.val = sum / 8.0;
        if (with_normal) p.normal = nsum * (1.0 / 8.0);
        return p;
    }

    int vertex_for(const Point& a, const Point& b) {
        const Point& lo = a.id < b.id ? a : b;
        const Point& hi = a.id < b.id ? b : a;
        EdgeKey key = make_edge_key(lo.id, hi.id);
        auto [it, inserted] = index_of.try_emplace(key, int(out.mesh.vertices.size()));
        if (inserted) {
            double t = interpolate_crossing(lo.val, hi.val, thr);
            out.mesh.vertices.push_back(lerp(lo.pos, hi.pos, t));
            out.mesh.normals.push_back(lerp(lo.normal, hi.normal, t).normalized());
            out.vertex_keys.push_back(key);
        }
        return it->second;
    }

    static double tet_abs(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
        return std::abs(tet_volume_signed(a, b, c, d));
    }

    // Below-threshold part of the tetrahedron. The intersected cases reuse
    // the emitted crossing vertices and, for the quad cross-section, the
    // same q11-q22 diagonal the triangles use, so this volume and the
    // surface integral describe the same polyhedron.
    void accumulate_volume(const std::array<Point, 4>& p, uint8_t ti, const int edge_vertex[6]) {
        int hot = std::popcount(unsigned(ti));
        if (hot == 4) return;
        if (hot == 0) {
            out.volume.volume += tet_abs(p[0].pos, p[1].pos, p[2].pos, p[3].pos);
            return;
        }
        static constexpr int kEdgeId[4][4] = {
            {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
        auto qpos = [&](int u, int v) -> const Vec3& {
            return out.mesh.vertices[std::size_t(edge_vertex[kEdgeId[u][v]])];
        };
        if (hot == 1 || hot == 3) {
            int lone = 0;
            for (int c = 0; c < 4; ++c)
                if (bool((ti >> (3 - c)) & 1) == (hot == 1)) lone = c;
            int other[3], n = 0;
            for (int c = 0; c < 4; ++c)
                if (c != lone) other[n++] = c;
            double small = tet_abs(p[lone].pos, qpos(lone, other[0]), qpos(lone, other[1]),
                                   qpos(lone, other[2]));
            out.volume.volume +=
                hot == 1 ? tet_abs(p[0].pos, p[1].pos, p[2].pos, p[3].pos) - small : small;
            return;
        }
        int cold[2], hotv[2], nc = 0, nh = 0;
        for (int c = 0; c < 4; ++c)
            (((ti >> (3 - c)) & 1) ? hotv[nh++] : cold[nc++]) = c;
        const Vec3& q11 = qpos(cold[0], hotv[0]);
        const Vec3& q12 = qpos(cold[0], hotv[1]);
        const Vec3& q21 = qpos(cold[1], hotv[0]);
        const Vec3& q22 = qpos(cold[1], hotv[1]);
        out.volume.volume += tet_abs(p[cold[1]].pos, q11, q21, q22) +
                             tet_abs(p[cold[0]].pos, q11, q22, q12) +
                             tet_abs(p[cold[0]].pos, p[cold[1]].pos, q11, q22);
    }

    void emit_tet(std::array<Point, 4> p, int64_t prov) {
        if (tet_volume_signed(p[0].pos, p[1].pos, p[2].pos, p[3].pos) < 0.0)
            std::swap(p[2], p[3]);
        uint8_t ti = tetra_index({p[0].val, p[1].val, p[2].val, p[3].val}, thr);
        int edge_vertex[6] = {-1, -1, -1, -1, -1, -1};
        const int8_t* row = kTetraTriTable[ti];
        for (int e = 0; row[e] != -1; e += 3) {
            int tri[3];
            for (int c = 0; c < 3; ++c) {
                int eid = row[e + c];
                if (edge_vertex[eid] < 0)
                    edge_vertex[eid] =
                        vertex_for(p[kTetraEdgeVerts[eid][0]], p[kTetraEdgeVerts[eid][1]]);
                tri[c] = edge_vertex[eid];
            }
            out.mesh.triangles.push_back({tri[0], tri[1], tri[2]});
            out.mesh.provenance.push_back(prov);
        }
        accumulate_volume(p, ti, edge_vertex);
    }

    void load_corners(int i, int j, int k, bool with_normals, Point corner[8]) const {
        for (int c = 0; c < 8; ++c)
            corner[c] = sample_point(i + kCornerOffset[c][0], j + kCornerOffset[c][1],
                                     k + kCornerOffset[c][2], with_normals);
    }

    static bool mixed(const Point* pts, int n, double thr) {
        bool hot0 = pts[0].val >= thr;
        for (int c = 1; c < n; ++c)
            if ((pts[c].val >= thr) != hot0) return true;
        return false;
    }

    void run_mc() {
        const auto& d = grid.dims();
        for (int k = 0; k + 1 < d.nz; ++k)
            for (int j = 0; j + 1 < d.ny; ++j)
                for (int i = 0; i + 1 < d.nx; ++i) {
                    unsigned bidx = 0;  // Bourke index: bit c = corner c below
                    for (int c = 0; c < 8; ++c) {
                        double v = grid.at(i + kCornerOffset[c][0], j + kCornerOffset[c][1],
                                           k + kCornerOffset[c][2]);
                        if (v < thr) bidx |= 1u << c;
                    }
                    if (kMcEdgeTable[bidx] == 0) continue;
                    Point corner[8];
                    load_corners(i, j, k, true, corner);
                    auto prov = int64_t(cell_linear(i, j, k));
                    int edge_vertex[12];
                    std::fill(edge_vertex, edge_vertex + 12, -1);
                    for (const int8_t* t = kMcTriTable[bidx]; *t != -1; t += 3) {
                        int tri[3];
                        for (int c = 0; c < 3; ++c) {
                            int e = t[c];
                            if (edge_vertex[e] < 0)
                                edge_vertex[e] = vertex_for(corner[kMcEdgeVerts[e][0]],
                                                            corner[kMcEdgeVerts[e][1]]);
                            tri[c] = edge_vertex[e];
                        }
                        out.mesh.triangles.push_back({tri[0], tri[1], tri[2]});
                        out.mesh.provenance.push_back(prov);
                    }
                }
    }

    void run_tets(ExtractionMethod method) {
        const auto& d = grid.dims();
        for (int k = 0; k + 1 < d.nz; ++k)
            for (int j = 0; j + 1 < d.ny; ++j)
                for (int i = 0; i + 1 < d.nx; ++i) {
                    Point corner[8];
                    load_corners(i, j, k, false, corner);
                    if (mixed(corner, 8, thr))  // normals only where crossings can occur
                        load_corners(i, j, k, true, corner);
                    auto prov = int64_t(cell_linear(i, j, k));
                    for (const auto& tet : decompose(method, (i + j + k) & 1).tets)
                        emit_tet({corner[tet[0]], corner[tet[1]], corner[tet[2]],
                                  corner[tet[3]]},
                                 prov);
                }
    }

    void run_ccl() {
        const auto& d = grid.dims();
        // +axis faces from each cell so every interior face is visited once;
        // boundary faces lack the second center and are skipped.
        static constexpr int kFaceCorners[3][4] = {
            {1, 2, 6, 5},  // +x: B C G F
            {3, 2, 6, 7},  // +y: D C G H
            {4, 5, 6, 7},  // +z: E F G H
        };
        for (int k = 0; k + 1 < d.nz; ++k)
            for (int j = 0; j + 1 < d.ny; ++j)
                for (int i = 0; i + 1 < d.nx; ++i) {
                    auto prov = int64_t(cell_linear(i, j, k));
                    for (int axis = 0; axis < 3; ++axis) {
                        int ni = i + (axis == 0), nj = j + (axis == 1), nk = k + (axis == 2);
                        if (ni + 1 >= d.nx || nj + 1 >= d.ny || nk + 1 >= d.nz) continue;
                        Point pts[6];  // 4 shared-face samples + 2 centers
                        for (int c = 0; c < 4; ++c) {
                            const int* off = kCornerOffset[kFaceCorners[axis][c]];
                            pts[c] = sample_point(i + off[0], j + off[1], k + off[2], false);
                        }
                        pts[4] = center_point(i, j, k, false);
                        pts[5] = center_point(ni, nj, nk, false);
                        if (mixed(pts, 6, thr)) {
                            for (int c = 0; c < 4; ++c) {
                                const int* off = kCornerOffset[kFaceCorners[axis][c]];
                                pts[c] = sample_point(i + off[0], j + off[1], k + off[2], true);
                            }
                            pts[4] = center_point(i, j, k, true);
                            pts[5] = center_point(ni, nj, nk, true);
                        }
                        for (int e = 0; e < 4; ++e)
                            emit_tet({pts[e], pts[(e + 1) % 4], pts[4], pts[5]}, prov);
                    }
                }
    }
};

}  // namespace

ExtractResult extract(const ScalarGrid& grid, double threshold, ExtractionMethod method) {
    if (!grid.dims().valid())
        throw std::invalid_argument("extract: grid needs at least one cell per axis");
    if (!std::isfinite(threshold))
        throw std::invalid_argument("extract: threshold must be finite");
    if (grid.dims().sample_count() + grid.dims().cell_count() >
        std::size_t(std::numeric_limits<uint32_t>::max()))
        throw std::invalid_argument("extract: grid too large for 32-bit point ids");
    Builder b(grid, threshold);
    b.out.volume.enabled = method != ExtractionMethod::MC;
    switch (method) {
        case ExtractionMethod::MC: b.run_mc(); break;
        case ExtractionMethod::MT5:
        case ExtractionMethod::MT6: b.run_tets(method); break;
        case ExtractionMethod::CCL: b.run_ccl(); break;
    }
    return std::move(b.out);
}

}  // namespace isomesh
