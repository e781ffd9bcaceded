#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "isomesh/field.hpp"
#include "isomesh/grid.hpp"
#include "isomesh/hash.hpp"
#include "isomesh/raw_io.hpp"

using namespace isomesh;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 center64() { return {31.5, 31.5, 31.5}; }  // 0.5*(n-1) for n = 64

fs::path temp_file(const char* stem) {
    static int counter = 0;
    return fs::temp_directory_path() / (std::string("isomesh_vol_") + stem + "_" +
                                        std::to_string(++counter) + ".json");
}

void cleanup_raw(const fs::path& descriptor) {
    fs::remove(descriptor);
    fs::path payload = descriptor;
    payload.replace_extension(".raw");
    fs::remove(payload);
}

}  // namespace

TEST_CASE("grid dims and addressing") {
    GridDims d{3, 4, 5};
    CHECK(d.valid());
    CHECK(d.sample_count() == 60);
    CHECK(d.cell_count() == 2 * 3 * 4);
    CHECK_FALSE(GridDims{1, 4, 5}.valid());

    ScalarGrid g(d);
    CHECK(g.samples().size() == 60);
    g.at(2, 3, 4) = 7.5;
    CHECK(g.at(2, 3, 4) == 7.5);
    // x-fastest layout
    CHECK(g.linear_index(2, 3, 4) == (std::size_t(4) * 4 + 3) * 3 + 2);
    CHECK(g.samples()[g.linear_index(2, 3, 4)] == 7.5);
    CHECK(g.position(2, 3, 4) == Vec3{2.0, 3.0, 4.0});
    CHECK(g.in_range(0, 0, 0));
    CHECK_FALSE(g.in_range(3, 0, 0));
    CHECK_FALSE(g.in_range(0, -1, 0));

    g.at(0, 0, 0) = -2.0;
    auto [lo, hi] = g.value_range();
    CHECK(lo == -2.0);
    CHECK(hi == 7.5);

    CHECK_THROWS_AS(ScalarGrid(GridDims{1, 2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(ScalarGrid(d, std::vector<double>(59, 0.0)), std::invalid_argument);
}

TEST_CASE("sphere distance: sign and value") {
    SphereSpec s{{10.0, 10.0, 10.0}, 2.0};
    CHECK(object_distance(FieldSpec{s}, {10, 10, 10}) == doctest::Approx(-2.0));
    CHECK(object_distance(FieldSpec{s}, {12, 10, 10}) == doctest::Approx(0.0));
    CHECK(object_distance(FieldSpec{s}, {13, 10, 10}) == doctest::Approx(1.0));
    CHECK(object_distance(FieldSpec{s}, {11, 10, 10}) < 0.0);  // inside is negative
}

TEST_CASE("cube distance: faces, edges, corners") {
    CubeSpec c{{0.0, 0.0, 0.0}, 2.0, 2.0, 2.0};  // half extents 1
    FieldSpec f{c};
    CHECK(object_distance(f, {0, 0, 0}) == doctest::Approx(-1.0));
    CHECK(object_distance(f, {1, 0, 0}) == doctest::Approx(0.0));
    CHECK(object_distance(f, {1.5, 0, 0}) == doctest::Approx(0.5));
    // outside past a corner the distance is Euclidean to that corner
    CHECK(object_distance(f, {2, 2, 2}) == doctest::Approx(std::sqrt(3.0)));
    // inside, distance is to the nearest face
    CHECK(object_distance(f, {0.5, 0.25, 0.0}) == doctest::Approx(-0.5));
}

TEST_CASE("cube-minus-sphere is the CSG difference max(d_cube, -d_sphere)") {
    Vec3 c = center64();
    CubeMinusSphereSpec spec{CubeSpec{c, 42, 42, 42}, SphereSpec{c, 25}};
    FieldSpec f{spec};
    // the carved center is outside the object: -d_sphere = +25 dominates
    CHECK(object_distance(f, c) == doctest::Approx(25.0));
    // face centers (|x| = 21 < 25) are eaten by the ball: 25 - 21 = 4 outside
    CHECK(object_distance(f, c + Vec3{21, 0, 0}) == doctest::Approx(4.0));
    // cube corners survive: d_cube = 0 there, far from the ball
    CHECK(object_distance(f, c + Vec3{21, 21, 21}) == doctest::Approx(0.0));
    // a point in the retained shell, past the ball (25) but inside the cube
    // (corner at 21*sqrt(3) ~ 36.4 along the diagonal)
    Vec3 diag = Vec3{1, 1, 1} / std::sqrt(3.0);
    Vec3 p = c + diag * 30.0;
    CHECK(object_distance(f, p) < 0.0);
}

TEST_CASE("torus distance: tube-axis point sits at -minor") {
    Vec3 c{50, 50, 50};
    TorusSpec t{c, 20.0, 5.0};
    FieldSpec f{t};
    // on the circle of radius `major` in the z=0 plane through the center
    CHECK(object_distance(f, c + Vec3{20, 0, 0}) == doctest::Approx(-5.0));
    CHECK(object_distance(f, c + Vec3{25, 0, 0}) == doctest::Approx(0.0));
    CHECK(object_distance(f, c + Vec3{0, 20, 5}) == doctest::Approx(0.0));
    CHECK(object_distance(f, c) == doctest::Approx(15.0));  // hole center: 20 - 5
}

TEST_CASE("sombrero stores the raw implicit value, not a distance") {
    SombreroSpec s{{32, 32, 32}, 12.0, 0.25, 3.0};
    GridDims d{65, 65, 65};
    ScalarGrid g = generate_field(FieldSpec{s}, d);
    for (auto [i, j, k] : {std::array{32, 40, 32}, std::array{10, 32, 50}, std::array{0, 0, 0}}) {
        Vec3 rel = g.position(i, j, k) - s.center;
        double u = rel.x * rel.x + rel.z * rel.z;
        double expect = rel.y - s.a * std::cos(s.b * u) / (s.c + u);
        CHECK(g.at(i, j, k) == doctest::Approx(expect).epsilon(1e-15));
    }
    // apex of the central bump: (0, a/c, 0) relative is on the surface
    Vec3 apex = s.center + Vec3{0, s.a / s.c, 0};
    CHECK(object_distance(FieldSpec{s}, apex) == doctest::Approx(0.0).epsilon(1e-12));
    // dF/dy == 1 everywhere, so |distance| <= |F|
    Vec3 q{20, 55, 40};
    Vec3 rel = q - s.center;
    double u = rel.x * rel.x + rel.z * rel.z;
    double fval = rel.y - s.a * std::cos(s.b * u) / (s.c + u);
    CHECK(std::abs(object_distance(FieldSpec{s}, q)) <= std::abs(fval) + 1e-12);
}

TEST_CASE("generate_field equals object_distance at every lattice point") {
    Vec3 c{15.5, 15.5, 15.5};
    GridDims d{32, 32, 32};
    std::vector<FieldSpec> specs = {
        FieldSpec{SphereSpec{c, 10}},
        FieldSpec{CubeSpec{c, 16, 16, 16}},
        FieldSpec{CubeMinusSphereSpec{CubeSpec{c, 16, 16, 16}, SphereSpec{c, 9.5}}},
        FieldSpec{TorusSpec{c, 9, 3}},
    };
    for (const auto& spec : specs) {
        ScalarGrid g = generate_field(spec, d);
        for (int k = 0; k < d.nz; k += 7)
            for (int j = 0; j < d.ny; j += 5)
                for (int i = 0; i < d.nx; i += 3) {
                    double want = object_distance(spec, g.position(i, j, k));
                    CHECK(std::abs(g.at(i, j, k) - want) <= 1e-9);
                }
    }
}

TEST_CASE("generate_field is independent of thread count") {
    FieldSpec f{SphereSpec{center64(), 25}};
    GridDims d{64, 64, 64};
    ScalarGrid a = generate_field(f, d, 1);
    ScalarGrid b = generate_field(f, d, 5);
    CHECK(a.samples() == b.samples());
}

TEST_CASE("check_fit enforces the margin") {
    GridDims d{64, 64, 64};
    CHECK_NOTHROW(check_fit(FieldSpec{SphereSpec{center64(), 25}}, d));
    CHECK_THROWS_AS(check_fit(FieldSpec{CubeSpec{center64(), 200, 200, 200}}, d),
                    std::invalid_argument);
    // bounds [2, 61] leave margin exactly 2.0 on each side: still accepted
    CHECK_NOTHROW(check_fit(FieldSpec{SphereSpec{center64(), 29.5}}, d));
    CHECK_THROWS_AS(check_fit(FieldSpec{SphereSpec{center64(), 29.6}}, d),
                    std::invalid_argument);
    // open surface: exempt by design
    CHECK_NOTHROW(check_fit(FieldSpec{SombreroSpec{center64(), 12, 0.25, 3}}, d));
    // generate_field applies the same gate
    CHECK_THROWS_AS(generate_field(FieldSpec{SphereSpec{center64(), 40}}, d),
                    std::invalid_argument);
}

TEST_CASE("validate_spec rejects non-positive sizes") {
    CHECK_THROWS_AS(validate_spec(FieldSpec{SphereSpec{{0, 0, 0}, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_spec(FieldSpec{CubeSpec{{0, 0, 0}, 10, -1, 10}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_spec(FieldSpec{TorusSpec{{0, 0, 0}, 0, 5}}), std::invalid_argument);
    CHECK_NOTHROW(validate_spec(FieldSpec{SphereSpec{{0, 0, 0}, 1.0}}));
}

TEST_CASE("analytic area and volume closed forms") {
    Vec3 c = center64();

    SUBCASE("sphere and cube") {
        CHECK(*analytic_area(FieldSpec{SphereSpec{c, 25}}) ==
              doctest::Approx(4.0 * kPi * 625.0).epsilon(1e-12));
        CHECK(*analytic_volume(FieldSpec{SphereSpec{c, 25}}) ==
              doctest::Approx(4.0 / 3.0 * kPi * 15625.0).epsilon(1e-12));
        CHECK(*analytic_area(FieldSpec{CubeSpec{c, 42, 42, 42}}) == doctest::Approx(10584.0));
        CHECK(*analytic_volume(FieldSpec{CubeSpec{c, 42, 42, 42}}) == doctest::Approx(74088.0));
        CHECK(*analytic_area(FieldSpec{CubeSpec{c, 1, 2, 3}}) ==
              doctest::Approx(2.0 * (1 * 2 + 2 * 3 + 3 * 1)));
    }

    SUBCASE("embedded torus") {
        // 2*pi^2 * major * minor^2 and 4*pi^2 * major * minor
        CHECK(*analytic_volume(FieldSpec{TorusSpec{c, 20, 5}}) ==
              doctest::Approx(2.0 * kPi * kPi * 20.0 * 25.0).epsilon(1e-12));
        CHECK(*analytic_area(FieldSpec{TorusSpec{c, 20, 5}}) ==
              doctest::Approx(4.0 * kPi * kPi * 20.0 * 5.0).epsilon(1e-12));
        // spindle (minor >= major): self-intersecting, no closed form offered
        CHECK_FALSE(analytic_volume(FieldSpec{TorusSpec{c, 20, 42}}).has_value());
        CHECK_FALSE(analytic_area(FieldSpec{TorusSpec{c, 20, 42}}).has_value());
    }

    SUBCASE("sombrero has neither") {
        CHECK_FALSE(analytic_area(FieldSpec{SombreroSpec{c, 12, 0.25, 3}}).has_value());
        CHECK_FALSE(analytic_volume(FieldSpec{SombreroSpec{c, 12, 0.25, 3}}).has_value());
    }

    SUBCASE("cube-minus-sphere from spherical-cap geometry") {
        // Independent derivation. Half edge h = 21, ball radius r = 25 > h:
        // the ball pokes a cap of height t = r - h through each face.
        CubeMinusSphereSpec spec{CubeSpec{c, 42, 42, 42}, SphereSpec{c, 25}};
        double h = 21.0, r = 25.0, t = r - h;
        double cap_volume = kPi * t * t * (3.0 * r - t) / 3.0;
        double ball_inside = 4.0 / 3.0 * kPi * r * r * r - 6.0 * cap_volume;
        double volume = 42.0 * 42.0 * 42.0 - ball_inside;
        double hole_disk = kPi * (r * r - h * h);           // removed from each face
        double ball_band = 4.0 * kPi * r * r - 6.0 * 2.0 * kPi * r * t;  // interior wall
        double area = 6.0 * (42.0 * 42.0 - hole_disk) + ball_band;
        CHECK(*analytic_volume(FieldSpec{spec}) == doctest::Approx(volume).epsilon(1e-12));
        CHECK(*analytic_area(FieldSpec{spec}) == doctest::Approx(area).epsilon(1e-12));
        // second anchor: 512^3 voxel count of the same solid gave 15776.390
        CHECK(*analytic_volume(FieldSpec{spec}) == doctest::Approx(15776.390).epsilon(5e-4));
        CHECK(*analytic_area(FieldSpec{spec}) == doctest::Approx(11199.752).epsilon(1e-6));
    }
}

TEST_CASE("noise: determinism, bound, zero-amplitude identity") {
    FieldSpec f{SphereSpec{center64(), 25}};
    GridDims d{64, 64, 64};
    ScalarGrid g = generate_field(f, d);

    SUBCASE("zero amplitude is the identity") {
        ScalarGrid n = add_noise(g, NoiseSpec{0.0, 1}, 25.0);
        CHECK(n.samples() == g.samples());
    }

    SUBCASE("10% of r=25 stays within +-2.5 and is seed-deterministic") {
        ScalarGrid n1 = add_noise(g, NoiseSpec{10.0, 1}, 25.0);
        ScalarGrid n2 = add_noise(g, NoiseSpec{10.0, 1}, 25.0);
        ScalarGrid n3 = add_noise(g, NoiseSpec{10.0, 2}, 25.0);
        CHECK(n1.samples() == n2.samples());
        CHECK(n1.samples() != n3.samples());
        double max_delta = 0.0;
        for (std::size_t i = 0; i < g.samples().size(); ++i)
            max_delta = std::max(max_delta, std::abs(n1.samples()[i] - g.samples()[i]));
        CHECK(max_delta <= 2.5);
        CHECK(max_delta > 2.0);  // the bound is actually exercised
    }

    SUBCASE("offsets are a pure function of (seed, index)") {
        // same seed on a different base field perturbs by the same offsets
        ScalarGrid flat(d);
        ScalarGrid nf = add_noise(flat, NoiseSpec{10.0, 9}, 25.0);
        ScalarGrid ng = add_noise(g, NoiseSpec{10.0, 9}, 25.0);
        for (std::size_t i = 0; i < g.samples().size(); i += 9973)
            CHECK(std::abs(nf.samples()[i] - (ng.samples()[i] - g.samples()[i])) <= 1e-12);
    }

    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(add_noise(g, NoiseSpec{-1.0, 0}, 25.0), std::invalid_argument);
        CHECK_THROWS_AS(add_noise(g, NoiseSpec{10.0, 0}, 0.0), std::invalid_argument);
    }
}

TEST_CASE("raw round trip: f64 is bitwise lossless") {
    GridDims d{5, 4, 3};
    ScalarGrid g(d);
    for (std::size_t i = 0; i < g.samples().size(); ++i)
        g.samples()[i] = hash_unit(splitmix64(i)) * 2000.0 - 1000.0;
    g.samples()[7] = -0.0;
    g.samples()[8] = 1e-300;

    fs::path p = temp_file("f64");
    save_raw(g, p);  // f64 little-endian is the default
    ScalarGrid back = load_raw(p);
    REQUIRE(back.dims() == d);
    CHECK(std::memcmp(back.samples().data(), g.samples().data(),
                      g.samples().size() * sizeof(double)) == 0);
    cleanup_raw(p);
}

TEST_CASE("raw round trip: narrowing dtypes") {
    GridDims d{4, 4, 4};
    ScalarGrid g(d);
    for (std::size_t i = 0; i < g.samples().size(); ++i)
        g.samples()[i] = double(i) * 3.7 - 50.0;

    SUBCASE("f32 keeps float-representable values") {
        fs::path p = temp_file("f32");
        save_raw(g, p, RawDType::F32);
        ScalarGrid back = load_raw(p);
        for (std::size_t i = 0; i < g.samples().size(); ++i)
            CHECK(back.samples()[i] == double(float(g.samples()[i])));
        cleanup_raw(p);
    }

    SUBCASE("u8 rounds and clamps") {
        ScalarGrid h(d);
        h.samples()[0] = -5.0;
        h.samples()[1] = 0.4;
        h.samples()[2] = 0.6;
        h.samples()[3] = 300.0;
        h.samples()[4] = 255.0;
        fs::path p = temp_file("u8");
        save_raw(h, p, RawDType::U8);
        ScalarGrid back = load_raw(p);
        CHECK(back.samples()[0] == 0.0);
        CHECK(back.samples()[1] == 0.0);
        CHECK(back.samples()[2] == 1.0);
        CHECK(back.samples()[3] == 255.0);
        CHECK(back.samples()[4] == 255.0);
        cleanup_raw(p);
    }

    SUBCASE("u16 clamps to 65535") {
        ScalarGrid h(d);
        h.samples()[0] = 70000.0;
        h.samples()[1] = 12345.49;
        fs::path p = temp_file("u16");
        save_raw(h, p, RawDType::U16);
        ScalarGrid back = load_raw(p);
        CHECK(back.samples()[0] == 65535.0);
        CHECK(back.samples()[1] == 12345.0);
        cleanup_raw(p);
    }
}

TEST_CASE("raw round trip: big-endian payloads load identically") {
    GridDims d{3, 3, 3};
    ScalarGrid g(d);
    for (std::size_t i = 0; i < g.samples().size(); ++i)
        g.samples()[i] = std::sin(double(i)) * 100.0;

    fs::path pl = temp_file("le"), pb = temp_file("be");
    save_raw(g, pl, RawDType::F64, RawEndian::Little);
    save_raw(g, pb, RawDType::F64, RawEndian::Big);

    // payload bytes differ on disk, loaded values agree exactly
    fs::path rl = pl, rb = pb;
    rl.replace_extension(".raw");
    rb.replace_extension(".raw");
    std::ifstream fl(rl, std::ios::binary), fb(rb, std::ios::binary);
    std::vector<char> bl((std::istreambuf_iterator<char>(fl)), std::istreambuf_iterator<char>());
    std::vector<char> bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(bl.size() == bb.size());
    CHECK(bl != bb);
    CHECK(load_raw(pl).samples() == load_raw(pb).samples());
    cleanup_raw(pl);
    cleanup_raw(pb);
}

TEST_CASE("raw loader rejects broken inputs with distinct errors") {
    GridDims d{3, 3, 3};
    ScalarGrid g(d);
    fs::path p = temp_file("err");
    save_raw(g, p, RawDType::F32);
    fs::path payload = p;
    payload.replace_extension(".raw");

    auto message_of = [](auto&& fn) {
        try {
            fn();
        } catch (const std::runtime_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };

    SUBCASE("missing descriptor") {
        std::string m = message_of([&] { load_raw(temp_file("nonexistent")); });
        CHECK(m.find("descriptor") != std::string::npos);
    }

    SUBCASE("payload length mismatch") {
        fs::resize_file(payload, 4 * 26);  // one sample short
        std::string m = message_of([&] { load_raw(p); });
        CHECK(m.find("payload") != std::string::npos);
    }

    SUBCASE("unknown dtype") {
        std::ofstream(p) << R"({"nx":3,"ny":3,"nz":3,"dtype":"f16","endian":"le"})";
        std::string m = message_of([&] { load_raw(p); });
        CHECK(m.find("dtype") != std::string::npos);
    }

    SUBCASE("unknown endian") {
        std::ofstream(p) << R"({"nx":3,"ny":3,"nz":3,"dtype":"f32","endian":"middle"})";
        std::string m = message_of([&] { load_raw(p); });
        CHECK(m.find("endian") != std::string::npos);
    }

    SUBCASE("missing key") {
        std::ofstream(p) << R"({"nx":3,"ny":3,"dtype":"f32","endian":"le"})";
        CHECK_THROWS_AS(load_raw(p), std::runtime_error);
    }

    SUBCASE("unknown key") {
        std::ofstream(p)
            << R"({"nx":3,"ny":3,"nz":3,"dtype":"f32","endian":"le","extra":1})";
        std::string m = message_of([&] { load_raw(p); });
        CHECK(m.find("extra") != std::string::npos);
    }

    SUBCASE("invalid dims") {
        std::ofstream(p) << R"({"nx":0,"ny":3,"nz":3,"dtype":"f32","endian":"le"})";
        CHECK_THROWS_AS(load_raw(p), std::runtime_error);
    }

    SUBCASE("garbled JSON") {
        std::ofstream(p) << "{nope";
        CHECK_THROWS_AS(load_raw(p), std::runtime_error);
    }

    cleanup_raw(p);
}

TEST_CASE("dtype and endian names round trip") {
    for (auto t : {RawDType::U8, RawDType::U16, RawDType::F32, RawDType::F64})
        CHECK(parse_dtype(dtype_name(t)) == t);
    for (auto e : {RawEndian::Little, RawEndian::Big})
        CHECK(parse_endian(endian_name(e)) == e);
    CHECK(dtype_size(RawDType::U8) == 1);
    CHECK(dtype_size(RawDType::U16) == 2);
    CHECK(dtype_size(RawDType::F32) == 4);
    CHECK(dtype_size(RawDType::F64) == 8);
    CHECK_THROWS_AS(parse_dtype("i32"), std::runtime_error);
    CHECK_THROWS_AS(parse_endian("native"), std::runtime_error);
}
