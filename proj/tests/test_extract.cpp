#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "isomesh/extract.hpp"
#include "isomesh/field.hpp"
#include "isomesh/grid.hpp"
#include "isomesh/mesh.hpp"

using namespace isomesh;

namespace {

// One cube cell with corner c (A..H order) hot exactly when bit 7-c of
// `index` is set; hot corners get +1, cold -1, threshold 0.
ScalarGrid cell_grid(int index) {
    ScalarGrid g(GridDims{2, 2, 2});
    for (int c = 0; c < 8; ++c) {
        const int* o = kCornerOffset[c];
        g.at(o[0], o[1], o[2]) = ((index >> (7 - c)) & 1) ? 1.0 : -1.0;
    }
    return g;
}

// A face is ambiguous when its four corners alternate hot/cold around the
// cycle (both diagonals uniform, opposite to each other).
bool has_ambiguous_face(int index) {
    auto hot = [&](int c) { return (index >> (7 - c)) & 1; };
    for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
            int quad[4], n = 0;
            for (int c = 0; c < 8; ++c)
                if (kCornerOffset[c][axis] == side) quad[n++] = c;
            int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
            std::sort(quad, quad + 4, [&](int p, int q) {
                return kCornerOffset[p][a1] != kCornerOffset[q][a1]
                           ? kCornerOffset[p][a1] < kCornerOffset[q][a1]
                           : kCornerOffset[p][a2] < kCornerOffset[q][a2];
            });
            std::swap(quad[2], quad[3]);  // row-major order -> cyclic order
            if (hot(quad[0]) == hot(quad[2]) && hot(quad[1]) == hot(quad[3]) &&
                hot(quad[0]) != hot(quad[1]))
                return true;
        }
    return false;
}

// Triangle soup as sorted rows of coordinates, each row rotated so its
// lexicographically smallest vertex leads; winding is preserved, so equal
// keys mean coincident geometry with matching orientation.
std::vector<std::array<double, 9>> soup_key(const IndexedMesh& m, bool flip) {
    std::vector<std::array<double, 9>> rows;
    auto less = [](const Vec3& a, const Vec3& b) {
        return a.x != b.x ? a.x < b.x : (a.y != b.y ? a.y < b.y : a.z < b.z);
    };
    for (const auto& t : m.triangles) {
        Vec3 v[3] = {m.vertices[t[0]], m.vertices[t[flip ? 2 : 1]], m.vertices[t[flip ? 1 : 2]]};
        int s = 0;
        for (int i = 1; i < 3; ++i)
            if (less(v[i], v[s])) s = i;
        rows.push_back({v[s].x, v[s].y, v[s].z, v[(s + 1) % 3].x, v[(s + 1) % 3].y,
                        v[(s + 1) % 3].z, v[(s + 2) % 3].x, v[(s + 2) % 3].y, v[(s + 2) % 3].z});
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

ScalarGrid sphere_grid(int n, double radius) {
    double c = 0.5 * (n - 1);
    return generate_field(FieldSpec{SphereSpec{{c, c, c}, radius}}, GridDims{n, n, n});
}

}  // namespace

TEST_CASE("cell_index: A is the most significant bit") {
    std::array<double, 8> v{};
    v.fill(-1.0);
    CHECK(cell_index(v, 0.0) == 0);
    v.fill(1.0);
    CHECK(cell_index(v, 0.0) == 255);
    v.fill(-1.0);
    v[0] = 1.0;  // only corner A at or above the threshold
    CHECK(cell_index(v, 0.0) == 128);
    v.fill(-1.0);
    v[7] = 0.0;  // exactly at the threshold counts as hot
    CHECK(cell_index(v, 0.0) == 1);
}

TEST_CASE("tetra_index mirrors the same convention on 4 bits") {
    std::array<double, 4> v{-1, -1, -1, -1};
    CHECK(tetra_index(v, 0.0) == 0);
    v[0] = 1.0;
    CHECK(tetra_index(v, 0.0) == 8);
    v = {1, 1, 1, 1};
    CHECK(tetra_index(v, 0.0) == 15);
    v = {-1, 2, -1, 0};
    CHECK(tetra_index(v, 0.0) == 5);  // B and D hot
}

TEST_CASE("interpolate_crossing") {
    CHECK(interpolate_crossing(-1.0, 1.0, 0.0) == 0.5);
    CHECK(interpolate_crossing(0.0, 1.0, 0.0) == 0.0);
    CHECK(interpolate_crossing(1.0, 0.0, 0.0) == 1.0);
    CHECK(interpolate_crossing(-1.0, 3.0, 0.0) == 0.25);
    CHECK(interpolate_crossing(2.0, 2.0, 2.0) == 0.5);  // declared tie-break
    CHECK_THROWS_AS(interpolate_crossing(1.0, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(interpolate_crossing(-2.0, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("tetra table: exhaustive 16-case enumeration against hand geometry") {
    // positively oriented reference tetra
    const Vec3 pos[4] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    REQUIRE(tet_volume_signed(pos[0], pos[1], pos[2], pos[3]) > 0.0);

    for (int mask = 0; mask < 16; ++mask) {
        CAPTURE(mask);
        double val[4];
        int hot_count = 0;
        for (int c = 0; c < 4; ++c) {
            bool hot = (mask >> (3 - c)) & 1;
            val[c] = hot ? 1.0 : -1.0;
            hot_count += hot;
        }

        const int8_t* row = kTetraTriTable[mask];
        int tri_count = 0;
        while (row[3 * tri_count] >= 0) ++tri_count;

        // 0 or 4 hot: empty; 1 or 3 hot: one triangle; 2 hot: two
        int expect = (hot_count == 0 || hot_count == 4) ? 0 : (hot_count == 2 ? 2 : 1);
        CHECK(tri_count == expect);

        for (int t = 0; t < tri_count; ++t) {
            Vec3 p[3];
            for (int e = 0; e < 3; ++e) {
                int edge = row[3 * t + e];
                REQUIRE(edge >= 0);
                REQUIRE(edge < 6);
                int a = kTetraEdgeVerts[edge][0], b = kTetraEdgeVerts[edge][1];
                // every listed edge must actually straddle the threshold
                REQUIRE(((val[a] >= 0.0) != (val[b] >= 0.0)));
                p[e] = lerp(pos[a], pos[b], interpolate_crossing(val[a], val[b], 0.0));
            }
            // winding points the geometric normal at the below-threshold side
            Vec3 n = (p[1] - p[0]).cross(p[2] - p[0]);
            CHECK(n.norm() > 0.0);
            Vec3 cold_centroid{};
            int cold = 0;
            for (int c = 0; c < 4; ++c)
                if (val[c] < 0.0) {
                    cold_centroid += pos[c];
                    ++cold;
                }
            REQUIRE(cold > 0);
            cold_centroid = cold_centroid / double(cold);
            Vec3 tri_centroid = (p[0] + p[1] + p[2]) / 3.0;
            CHECK(n.dot(cold_centroid - tri_centroid) > 0.0);
        }

        // complementary masks triangulate the same crossings, mirrored
        const int8_t* comp = kTetraTriTable[15 - mask];
        int comp_count = 0;
        while (comp[3 * comp_count] >= 0) ++comp_count;
        CHECK(comp_count == tri_count);
        std::multiset<int> edges_here, edges_comp;
        for (int e = 0; e < 3 * tri_count; ++e) edges_here.insert(row[e]);
        for (int e = 0; e < 3 * comp_count; ++e) edges_comp.insert(comp[e]);
        CHECK(edges_here == edges_comp);
    }
}

TEST_CASE("MC table structure") {
    for (int k = 0; k < 256; ++k) {
        CAPTURE(k);
        const int8_t* row = kMcTriTable[k];
        int count = 0;
        while (row[3 * count] >= 0) ++count;
        CHECK(count <= 5);          // longest published rows
        CHECK(row[15] == -1);       // every row leaves room for the terminator
        CHECK((count == 0) == (kMcEdgeTable[k] == 0));
        uint16_t used = 0;
        for (int e = 0; e < 3 * count; ++e) {
            REQUIRE(row[e] >= 0);
            REQUIRE(row[e] < 12);
            used |= uint16_t(1u << row[e]);
        }
        // triangles only reference flagged edges
        CHECK((used & ~kMcEdgeTable[k]) == 0);
        // crossings are complement-invariant
        CHECK(kMcEdgeTable[k] == kMcEdgeTable[255 - k]);
    }
}

TEST_CASE("MC complement symmetry holds exactly off the ambiguous cases") {
    int coincident = 0, ambiguous = 0;
    for (int k = 0; k < 256; ++k) {
        CAPTURE(k);
        auto a = extract(cell_grid(k), 0.0, ExtractionMethod::MC).mesh;
        auto b = extract(cell_grid(255 - k), 0.0, ExtractionMethod::MC).mesh;
        if (a.triangles.empty() && b.triangles.empty()) continue;
        if (has_ambiguous_face(k)) {
            // the standard table resolves ambiguous faces per case, not per
            // complement pair; these diverge by design and are counted only
            ++ambiguous;
            continue;
        }
        REQUIRE(a.triangles.size() == b.triangles.size());
        CHECK(soup_key(a, false) == soup_key(b, true));
        ++coincident;
    }
    CHECK(coincident == 134);
    CHECK(ambiguous == 120);
}

TEST_CASE("single-cell midplane") {
    // bottom samples below, top above: the surface is the z = 0.5 unit square
    ScalarGrid g(GridDims{2, 2, 2});
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            g.at(i, j, 0) = -1.0;
            g.at(i, j, 1) = 1.0;
        }

    SUBCASE("MC cuts it into exactly 2 triangles") {
        auto r = extract(g, 0.0, ExtractionMethod::MC);
        CHECK(r.mesh.triangles.size() == 2);
        CHECK(mesh_area(r.mesh) == doctest::Approx(1.0));
        for (const auto& v : r.mesh.vertices) CHECK(v.z == 0.5);
    }

    SUBCASE("MT5 and MT6 cover the same square") {
        for (auto m : {ExtractionMethod::MT5, ExtractionMethod::MT6}) {
            auto r = extract(g, 0.0, m);
            CHECK(mesh_area(r.mesh) == doctest::Approx(1.0));
            for (const auto& v : r.mesh.vertices) CHECK(v.z == 0.5);
            // half the cell is below the threshold
            CHECK(r.volume.enabled);
            CHECK(r.volume.volume == doctest::Approx(0.5));
        }
    }

    SUBCASE("CCL has no interior face neighbors here and stays empty") {
        auto r = extract(g, 0.0, ExtractionMethod::CCL);
        CHECK(r.mesh.triangles.empty());
    }
}

TEST_CASE("extract returns an empty mesh when the threshold clears the range") {
    ScalarGrid g = sphere_grid(16, 5.0);
    auto [lo, hi] = g.value_range();
    for (auto m : {ExtractionMethod::MC, ExtractionMethod::MT5, ExtractionMethod::MT6,
                   ExtractionMethod::CCL}) {
        CHECK(extract(g, lo - 1.0, m).mesh.triangles.empty());
        CHECK(extract(g, hi + 1.0, m).mesh.triangles.empty());
    }
}

TEST_CASE("decompositions tile the cell") {
    SUBCASE("MT5: five tets, both parities, volume 1") {
        for (int parity : {0, 1}) {
            const auto& d = decompose(ExtractionMethod::MT5, parity);
            REQUIRE(d.tets.size() == 5);
            double total = 0.0;
            int central = 0;
            for (const auto& t : d.tets) {
                double v = tet_volume_signed(decomposition_vertex(t[0]), decomposition_vertex(t[1]),
                                             decomposition_vertex(t[2]), decomposition_vertex(t[3]));
                CHECK(v > 0.0);  // listed positively oriented
                total += v;
                if (std::abs(v - 1.0 / 3.0) < 1e-12) ++central;
                else CHECK(v == doctest::Approx(1.0 / 6.0));
            }
            CHECK(central == 1);  // four corner tets around one central
            CHECK(total == doctest::Approx(1.0));
        }
    }

    SUBCASE("MT5: parities agree on shared-face diagonals") {
        // collect each parity's diagonal on the x=1 face and the x=0 face
        auto comp = [](const Vec3& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; };
        auto face_diagonals = [&](int parity, int axis, int side) {
            std::set<std::pair<int, int>> diags;
            for (const auto& t : decompose(ExtractionMethod::MT5, parity).tets)
                for (int a = 0; a < 4; ++a)
                    for (int b = a + 1; b < 4; ++b) {
                        Vec3 pa = decomposition_vertex(t[a]), pb = decomposition_vertex(t[b]);
                        if (comp(pa, axis) != side || comp(pb, axis) != side) continue;
                        Vec3 d = pb - pa;
                        int manhattan = int(std::abs(d.x) + std::abs(d.y) + std::abs(d.z));
                        if (manhattan == 2)  // a face diagonal, not a face edge
                            diags.insert({std::min(t[a], t[b]), std::max(t[a], t[b])});
                    }
            return diags;
        };
        for (int axis = 0; axis < 3; ++axis) {
            auto even_hi = face_diagonals(0, axis, 1);
            auto odd_lo = face_diagonals(1, axis, 0);
            REQUIRE(even_hi.size() == 1);
            REQUIRE(odd_lo.size() == 1);
            // translating the odd cell one step along `axis` must land its
            // low-face diagonal on the even cell's high-face diagonal
            auto [a0, b0] = *even_hi.begin();
            auto [a1, b1] = *odd_lo.begin();
            auto shifted = [&](int id) {
                Vec3 p = decomposition_vertex(id);
                (axis == 0 ? p.x : axis == 1 ? p.y : p.z) += 1.0;
                return p;
            };
            std::set<std::array<double, 3>> even_pts, odd_pts;
            for (int id : {a0, b0}) {
                Vec3 p = decomposition_vertex(id);
                even_pts.insert({p.x, p.y, p.z});
            }
            for (int id : {a1, b1}) {
                Vec3 p = shifted(id);
                odd_pts.insert({p.x, p.y, p.z});
            }
            CHECK(even_pts == odd_pts);
        }
    }

    SUBCASE("MT6: six tets of volume 1/6 sharing the A-G diagonal") {
        const auto& d = decompose(ExtractionMethod::MT6, 0);
        REQUIRE(d.tets.size() == 6);
        for (const auto& t : d.tets) {
            double v = tet_volume_signed(decomposition_vertex(t[0]), decomposition_vertex(t[1]),
                                         decomposition_vertex(t[2]), decomposition_vertex(t[3]));
            CHECK(v == doctest::Approx(1.0 / 6.0));
            CHECK(std::count(t.begin(), t.end(), 0) == 1);  // corner A
            CHECK(std::count(t.begin(), t.end(), 6) == 1);  // corner G
        }
        // parity must not matter
        CHECK(&decompose(ExtractionMethod::MT6, 0) == &decompose(ExtractionMethod::MT6, 1));
    }

    SUBCASE("CCL: 24 tets of volume 1/12 spanning two cell centers") {
        const auto& d = decompose(ExtractionMethod::CCL, 0);
        REQUIRE(d.tets.size() == 24);
        double total = 0.0;
        for (const auto& t : d.tets) {
            double v = tet_volume_signed(decomposition_vertex(t[0]), decomposition_vertex(t[1]),
                                         decomposition_vertex(t[2]), decomposition_vertex(t[3]));
            CHECK(v == doctest::Approx(1.0 / 12.0));
            total += v;
            int centers = 0, corners = 0;
            for (int id : t) (id >= 8 ? centers : corners)++;
            CHECK(centers == 2);
            CHECK(corners == 2);
            CHECK(std::count(t.begin(), t.end(), 8) == 1);  // this cell's center
        }
        CHECK(total == doctest::Approx(2.0));  // half of each neighbor comes along
    }

    SUBCASE("MC does not decompose") {
        CHECK_THROWS_AS(decompose(ExtractionMethod::MC, 0), std::invalid_argument);
    }

    SUBCASE("decomposition_vertex bounds") {
        CHECK(decomposition_vertex(0) == Vec3{0, 0, 0});
        CHECK(decomposition_vertex(6) == Vec3{1, 1, 1});
        CHECK(decomposition_vertex(8) == Vec3{0.5, 0.5, 0.5});
        CHECK_THROWS_AS(decomposition_vertex(15), std::invalid_argument);
        CHECK_THROWS_AS(decomposition_vertex(-1), std::invalid_argument);
    }
}

TEST_CASE("vertex_normal is the negated gradient") {
    GridDims d{6, 6, 6};
    SUBCASE("linear field: exact, interior and boundary alike") {
        ScalarGrid g(d);
        for (int k = 0; k < 6; ++k)
            for (int j = 0; j < 6; ++j)
                for (int i = 0; i < 6; ++i) g.at(i, j, k) = 1.0 * i + 2.0 * j + 3.0 * k - 10.0;
        for (auto [i, j, k] : {std::array{2, 3, 2}, std::array{0, 0, 0}, std::array{5, 5, 5},
                               std::array{0, 3, 5}}) {
            Vec3 n = vertex_normal(g, i, j, k);
            CHECK(n.x == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(n.y == doctest::Approx(-2.0).epsilon(1e-12));
            CHECK(n.z == doctest::Approx(-3.0).epsilon(1e-12));
        }
    }
    SUBCASE("constant field: degenerate zero normal") {
        ScalarGrid g(d);
        CHECK(vertex_normal(g, 2, 2, 2) == Vec3{});
    }
}

TEST_CASE("extracted sphere: orientation, normals, volume agreement") {
    ScalarGrid g = sphere_grid(32, 10.0);
    Vec3 c{15.5, 15.5, 15.5};
    for (auto m : {ExtractionMethod::MC, ExtractionMethod::MT5, ExtractionMethod::MT6,
                   ExtractionMethod::CCL}) {
        CAPTURE(std::string(method_name(m)));
        auto r = extract(g, 0.0, m);
        REQUIRE(!r.mesh.triangles.empty());

        // winding: geometric normals point at the below-threshold side (inward)
        for (const auto& t : r.mesh.triangles) {
            Vec3 a = r.mesh.vertices[t[0]], b = r.mesh.vertices[t[1]], q = r.mesh.vertices[t[2]];
            Vec3 n = (b - a).cross(q - a);
            Vec3 centroid = (a + b + q) / 3.0;
            CHECK(n.dot(c - centroid) > 0.0);
        }

        // stored normals parallel the analytic inward direction; the
        // central-difference curvature error scales like 1/r, ~5e-3 at r=10
        double worst = 0.0;
        for (std::size_t i = 0; i < r.mesh.vertices.size(); ++i) {
            Vec3 want = (c - r.mesh.vertices[i]).normalized();
            worst = std::max(worst, want.cross(r.mesh.normals[i]).norm());
        }
        CHECK(worst < 6e-3);

        // tetra methods: accumulated volume vs divergence over the same mesh
        if (m != ExtractionMethod::MC) {
            CHECK(r.volume.enabled);
            double div = enclosed_volume_divergence(r.mesh);
            CHECK(std::abs(div - r.volume.volume) / r.volume.volume < 1e-6);
        } else {
            CHECK_FALSE(r.volume.enabled);
        }

        // provenance and vertex keys stay parallel
        CHECK(r.mesh.provenance.size() == r.mesh.triangles.size());
        CHECK(r.vertex_keys.size() == r.mesh.vertices.size());

        // every vertex sits on an edge class the method is allowed to cut
        for (EdgeKey key : r.vertex_keys)
            CHECK(edge_class_permitted(m, classify_edge(g.dims(), key)));
    }
}

TEST_CASE("extract is deterministic") {
    ScalarGrid g = sphere_grid(24, 8.0);
    for (auto m : {ExtractionMethod::MC, ExtractionMethod::MT5, ExtractionMethod::MT6,
                   ExtractionMethod::CCL}) {
        auto a = extract(g, 0.0, m);
        auto b = extract(g, 0.0, m);
        CHECK(a.mesh.vertices == b.mesh.vertices);
        CHECK(a.mesh.normals == b.mesh.normals);
        CHECK(a.mesh.triangles == b.mesh.triangles);
        CHECK(a.vertex_keys == b.vertex_keys);
        CHECK(a.volume.volume == b.volume.volume);
    }
}

TEST_CASE("edge keys and classes") {
    GridDims d{4, 4, 4};
    auto sample = [&](int i, int j, int k) { return uint32_t((k * 4 + j) * 4 + i); };
    auto center = [&](int ci, int cj, int ck) {
        return uint32_t(64 + (ck * 3 + cj) * 3 + ci);
    };

    CHECK(make_edge_key(7, 3) == make_edge_key(3, 7));
    CHECK((make_edge_key(3, 7) >> 32) == 3);

    CHECK(classify_edge(d, make_edge_key(sample(1, 1, 1), sample(2, 1, 1))) ==
          EdgeClass::GridEdge);
    CHECK(classify_edge(d, make_edge_key(sample(1, 1, 1), sample(2, 2, 1))) ==
          EdgeClass::FaceDiagonal);
    CHECK(classify_edge(d, make_edge_key(sample(1, 1, 1), sample(2, 2, 2))) ==
          EdgeClass::InteriorDiagonal);
    CHECK(classify_edge(d, make_edge_key(sample(1, 1, 1), center(1, 1, 1))) ==
          EdgeClass::CenterCorner);
    CHECK(classify_edge(d, make_edge_key(center(1, 1, 1), center(2, 1, 1))) ==
          EdgeClass::CenterCenter);

    // rejected pairings
    CHECK_THROWS_AS(classify_edge(d, make_edge_key(sample(0, 0, 0), sample(2, 0, 0))),
                    std::invalid_argument);
    CHECK_THROWS_AS(classify_edge(d, make_edge_key(sample(0, 0, 0), sample(0, 0, 0))),
                    std::invalid_argument);
    CHECK_THROWS_AS(classify_edge(d, make_edge_key(center(0, 0, 0), center(2, 0, 0))),
                    std::invalid_argument);
    CHECK_THROWS_AS(classify_edge(d, make_edge_key(sample(3, 3, 3), center(0, 0, 0))),
                    std::invalid_argument);

    // permitted sets are the method fingerprint
    CHECK(edge_class_permitted(ExtractionMethod::MC, EdgeClass::GridEdge));
    CHECK_FALSE(edge_class_permitted(ExtractionMethod::MC, EdgeClass::FaceDiagonal));
    CHECK(edge_class_permitted(ExtractionMethod::MT5, EdgeClass::FaceDiagonal));
    CHECK_FALSE(edge_class_permitted(ExtractionMethod::MT5, EdgeClass::InteriorDiagonal));
    CHECK(edge_class_permitted(ExtractionMethod::MT6, EdgeClass::InteriorDiagonal));
    CHECK_FALSE(edge_class_permitted(ExtractionMethod::MT6, EdgeClass::CenterCorner));
    CHECK(edge_class_permitted(ExtractionMethod::CCL, EdgeClass::CenterCorner));
    CHECK(edge_class_permitted(ExtractionMethod::CCL, EdgeClass::CenterCenter));
    CHECK_FALSE(edge_class_permitted(ExtractionMethod::CCL, EdgeClass::FaceDiagonal));

    CHECK(std::string(edge_class_name(EdgeClass::GridEdge)) == "grid-edge");
}

TEST_CASE("method names parse both ways") {
    for (auto m : {ExtractionMethod::MC, ExtractionMethod::MT5, ExtractionMethod::MT6,
                   ExtractionMethod::CCL})
        CHECK(parse_method(method_name(m)) == m);
    CHECK_THROWS_AS(parse_method("mc33"), std::invalid_argument);
}

TEST_CASE("closed surfaces: Euler characteristic by genus") {
    // sphere: chi = 2
    ScalarGrid s = sphere_grid(32, 10.0);
    for (auto m : {ExtractionMethod::MT5, ExtractionMethod::MT6, ExtractionMethod::CCL}) {
        MeshStats st = validate_topology(extract(s, 0.0, m).mesh);
        CHECK(st.watertight());
        CHECK(st.euler_characteristic == 2);
    }

    // embedded torus: chi = 0
    double c = 31.5;
    ScalarGrid t = generate_field(FieldSpec{TorusSpec{{c, c, c}, 20, 5}}, GridDims{64, 64, 64});
    for (auto m : {ExtractionMethod::MT5, ExtractionMethod::MT6, ExtractionMethod::CCL}) {
        MeshStats st = validate_topology(extract(t, 0.0, m).mesh);
        CHECK(st.watertight());
        CHECK(st.euler_characteristic == 0);
    }

    // cube minus ball, r > half edge: the ball eats a hole through each of
    // the 6 faces. Gluing a 6-holed cube shell to a 6-capped sphere along 6
    // circles gives chi = (2-6) + (2-6) - 0 = -8, i.e. genus 5.
    ScalarGrid x = generate_field(
        FieldSpec{CubeMinusSphereSpec{CubeSpec{{c, c, c}, 42, 42, 42}, SphereSpec{{c, c, c}, 25}}},
        GridDims{64, 64, 64});
    for (auto m : {ExtractionMethod::MT5, ExtractionMethod::MT6}) {
        MeshStats st = validate_topology(extract(x, 0.0, m).mesh);
        CHECK(st.watertight());
        CHECK(st.euler_characteristic == -8);
    }
    // the lattice's mean-valued centers smooth the thin shell into extra
    // handles at this resolution; watertightness still has to hold
    MeshStats ccl = validate_topology(extract(x, 0.0, ExtractionMethod::CCL).mesh);
    CHECK(ccl.watertight());
}

TEST_CASE("MC on the cube-minus-ball matches the tetra genus") {
    double c = 31.5;
    ScalarGrid x = generate_field(
        FieldSpec{CubeMinusSphereSpec{CubeSpec{{c, c, c}, 42, 42, 42}, SphereSpec{{c, c, c}, 25}}},
        GridDims{64, 64, 64});
    MeshStats st = validate_topology(extract(x, 0.0, ExtractionMethod::MC).mesh);
    CHECK(st.watertight());
    CHECK(st.euler_characteristic == -8);
}
