#include "isomesh/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isomesh/hash.hpp"
#include "isomesh/parallel.hpp"

namespace isomesh {

namespace {

constexpr double kPi = std::numbers::pi;

double sphere_distance(const SphereSpec& s, const Vec3& p) {
    return (p - s.center).norm() - s.radius;
}

// Exact box distance: positive part from the nearest face/edge/corner,
// negative part from the deepest face when inside.
double cube_distance(const CubeSpec& c, const Vec3& p) {
    Vec3 d = p - c.center;
    double qx = std::abs(d.x) - 0.5 * c.ax;
    double qy = std::abs(d.y) - 0.5 * c.ay;
    double qz = std::abs(d.z) - 0.5 * c.az;
    double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0), oz = std::max(qz, 0.0);
    double outside = std::sqrt(ox * ox + oy * oy + oz * oz);
    double inside = std::min(std::max({qx, qy, qz}), 0.0);
    return outside + inside;
}

double torus_distance(const TorusSpec& t, const Vec3& p) {
    Vec3 d = p - t.center;
    double ring = t.major - std::sqrt(d.x * d.x + d.y * d.y);
    return std::sqrt(ring * ring + d.z * d.z) - t.minor;
}

double sombrero_value(const SombreroSpec& s, const Vec3& p) {
    Vec3 d = p - s.center;
    double u = d.x * d.x + d.z * d.z;
    return d.y - s.a * std::cos(s.b * u) / (s.c + u);
}

double sombrero_distance(const SombreroSpec& s, const Vec3& p) {
    Vec3 d = p - s.center;
    double u = d.x * d.x + d.z * d.z;
    double denom = s.c + u;
    double f = d.y - s.a * std::cos(s.b * u) / denom;
    // dh/du for h(u) = a*cos(b*u)/(c+u); grad F = (-h'*2x, 1, -h'*2z).
    double hprime =
        (-s.a * s.b * std::sin(s.b * u) * denom - s.a * std::cos(s.b * u)) / (denom * denom);
    double gx = -hprime * 2.0 * d.x;
    double gz = -hprime * 2.0 * d.z;
    double gnorm = std::sqrt(gx * gx + 1.0 + gz * gz);
    if (gnorm == 0.0)
        throw std::domain_error("sombrero distance undefined: vanishing gradient");
    return f / gnorm;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0))
        throw std::invalid_argument(std::string("field spec: ") + what + " must be > 0");
}

}  // namespace

void validate_spec(const FieldSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereSpec>) {
                require_positive(s.radius, "sphere radius");
            } else if constexpr (std::is_same_v<T, CubeSpec>) {
                require_positive(s.ax, "cube edge");
                require_positive(s.ay, "cube edge");
                require_positive(s.az, "cube edge");
            } else if constexpr (std::is_same_v<T, CubeMinusSphereSpec>) {
                validate_spec(FieldSpec{s.cube});
                validate_spec(FieldSpec{s.sphere});
            } else if constexpr (std::is_same_v<T, TorusSpec>) {
                require_positive(s.major, "torus major radius");
                require_positive(s.minor, "torus minor radius");
            } else if constexpr (std::is_same_v<T, SombreroSpec>) {
                require_positive(s.a, "sombrero a");
                require_positive(s.b, "sombrero b");
                require_positive(s.c, "sombrero c");
            }
        },
        spec);
}

std::optional<std::pair<Vec3, Vec3>> object_bounds(const FieldSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::optional<std::pair<Vec3, Vec3>> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereSpec>) {
                Vec3 r{s.radius, s.radius, s.radius};
                return std::pair{s.center - r, s.center + r};
            } else if constexpr (std::is_same_v<T, CubeSpec>) {
                Vec3 h{0.5 * s.ax, 0.5 * s.ay, 0.5 * s.az};
                return std::pair{s.center - h, s.center + h};
            } else if constexpr (std::is_same_v<T, CubeMinusSphereSpec>) {
                // Carving only removes material; the solid stays inside the cube.
                return object_bounds(FieldSpec{s.cube});
            } else if constexpr (std::is_same_v<T, TorusSpec>) {
                double ring = s.major + s.minor;
                Vec3 r{ring, ring, s.minor};
                return std::pair{s.center - r, s.center + r};
            } else {
                return std::nullopt;  // sombrero: open surface
            }
        },
        spec);
}

void check_fit(const FieldSpec& spec, GridDims dims, double margin_cells) {
    if (!dims.valid())
        throw std::invalid_argument("grid dims: each axis needs at least 2 samples");
    auto bounds = object_bounds(spec);
    if (!bounds) return;
    const auto& [lo, hi] = *bounds;
    double max_x = double(dims.nx - 1) - margin_cells;
    double max_y = double(dims.ny - 1) - margin_cells;
    double max_z = double(dims.nz - 1) - margin_cells;
    if (lo.x < margin_cells || lo.y < margin_cells || lo.z < margin_cells ||
        hi.x > max_x || hi.y > max_y || hi.z > max_z) {
        throw std::invalid_argument(
            "object does not fit: surface bounds [" + std::to_string(lo.x) + "," +
            std::to_string(lo.y) + "," + std::to_string(lo.z) + "]..[" + std::to_string(hi.x) +
            "," + std::to_string(hi.y) + "," + std::to_string(hi.z) + "] need a margin of " +
            std::to_string(margin_cells) + " cells inside a " + std::to_string(dims.nx) + "x" +
            std::to_string(dims.ny) + "x" + std::to_string(dims.nz) + " grid");
    }
}

double object_distance(const FieldSpec& spec, const Vec3& p) {
    return std::visit(
        [&p](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereSpec>) {
                return sphere_distance(s, p);
            } else if constexpr (std::is_same_v<T, CubeSpec>) {
                return cube_distance(s, p);
            } else if constexpr (std::is_same_v<T, CubeMinusSphereSpec>) {
                return std::max(cube_distance(s.cube, p), -sphere_distance(s.sphere, p));
            } else if constexpr (std::is_same_v<T, TorusSpec>) {
                return torus_distance(s, p);
            } else {
                return sombrero_distance(s, p);
            }
        },
        spec);
}

ScalarGrid generate_field(const FieldSpec& spec, GridDims dims, unsigned threads) {
    validate_spec(spec);
    check_fit(spec, dims);
    ScalarGrid grid(dims);
    const bool raw_value = std::holds_alternative<SombreroSpec>(spec);
    auto* data = grid.samples().data();
    std::size_t slab = std::size_t(dims.nx) * dims.ny;
    parallel_chunks(std::size_t(dims.nz), 1, threads, [&](std::size_t k0, std::size_t k1) {
        for (std::size_t k = k0; k < k1; ++k) {
            std::size_t base = k * slab;
            for (int j = 0; j < dims.ny; ++j) {
                for (int i = 0; i < dims.nx; ++i) {
                    Vec3 p{double(i), double(j), double(k)};
                    data[base + std::size_t(j) * dims.nx + i] =
                        raw_value ? sombrero_value(std::get<SombreroSpec>(spec), p)
                                  : object_distance(spec, p);
                }
            }
        }
    });
    return grid;
}

ScalarGrid add_noise(const ScalarGrid& grid, const NoiseSpec& noise, double reference_length) {
    if (noise.amplitude_percent < 0.0)
        throw std::invalid_argument("noise amplitude must be >= 0");
    if (!(reference_length > 0.0))
        throw std::invalid_argument("noise reference length must be > 0");
    double amp = noise.amplitude_percent / 100.0 * reference_length;
    ScalarGrid out = grid;
    auto& samples = out.samples();
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        double u = hash_unit(splitmix64(noise.seed ^ splitmix64(idx)));
        samples[idx] += amp * (2.0 * u - 1.0);
    }
    return out;
}

namespace {

// Concentric cube-minus-sphere measurements. Valid while any spherical cap
// poking through a face keeps its base disk inside that face and caps on
// adjacent faces stay disjoint (the ball must not reach any cube edge).
struct CsphGeometry {
    double area = 0.0;
    double volume = 0.0;
    bool valid = false;
};

CsphGeometry csph_geometry(const CubeMinusSphereSpec& s) {
    CsphGeometry out;
    if (!(s.sphere.center == s.cube.center)) return out;
    double r = s.sphere.radius;
    double h[3] = {0.5 * s.cube.ax, 0.5 * s.cube.ay, 0.5 * s.cube.az};
    // Ball through an edge (or corner) breaks the cap decomposition.
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if (r * r > h[a] * h[a] + h[b] * h[b]) return out;

    double face_pairs[3][2] = {{h[1], h[2]}, {h[0], h[2]}, {h[0], h[1]}};
    double cap_lateral = 0.0, cap_volume = 0.0, face_area = 0.0;
    for (int a = 0; a < 3; ++a) {
        double full = 4.0 * face_pairs[a][0] * face_pairs[a][1];
        if (r > h[a]) {
            double hc = r - h[a];              // cap height
            double rho2 = r * r - h[a] * h[a];  // cap base disk radius^2
            if (std::sqrt(rho2) > std::min(face_pairs[a][0], face_pairs[a][1])) return out;
            cap_lateral += 2.0 * (2.0 * kPi * r * hc);
            cap_volume += 2.0 * (kPi * hc * hc * (3.0 * r - hc) / 3.0);
            face_area += 2.0 * (full - kPi * rho2);
        } else {
            face_area += 2.0 * full;
        }
    }
    double ball_area = 4.0 * kPi * r * r;
    double ball_volume = 4.0 / 3.0 * kPi * r * r * r;
    out.area = face_area + (ball_area - cap_lateral);
    out.volume = 8.0 * h[0] * h[1] * h[2] - (ball_volume - cap_volume);
    out.valid = true;
    return out;
}

}  // namespace

std::optional<double> analytic_area(const FieldSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::optional<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereSpec>) {
                return 4.0 * kPi * s.radius * s.radius;
            } else if constexpr (std::is_same_v<T, CubeSpec>) {
                return 2.0 * (s.ax * s.ay + s.ay * s.az + s.az * s.ax);
            } else if constexpr (std::is_same_v<T, CubeMinusSphereSpec>) {
                auto g = csph_geometry(s);
                return g.valid ? std::optional<double>(g.area) : std::nullopt;
            } else if constexpr (std::is_same_v<T, TorusSpec>) {
                if (s.minor >= s.major) return std::nullopt;  // spindle
                return 4.0 * kPi * kPi * s.major * s.minor;
            } else {
                return std::nullopt;
            }
        },
        spec);
}

std::optional<double> analytic_volume(const FieldSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::optional<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereSpec>) {
                return 4.0 / 3.0 * kPi * s.radius * s.radius * s.radius;
            } else if constexpr (std::is_same_v<T, CubeSpec>) {
                return s.ax * s.ay * s.az;
            } else if constexpr (std::is_same_v<T, CubeMinusSphereSpec>) {
                auto g = csph_geometry(s);
                return g.valid ? std::optional<double>(g.volume) : std::nullopt;
            } else if constexpr (std::is_same_v<T, TorusSpec>) {
                if (s.minor >= s.major) return std::nullopt;
                return 2.0 * kPi * kPi * s.major * s.minor * s.minor;
            } else {
                return std::nullopt;
            }
        },
        spec);
}

std::string spec_kind_name(const FieldSpec& spec) {
    switch (spec.index()) {
        case 0: return "sphere";
        case 1: return "cube";
        case 2: return "csph";
        case 3: return "torus";
        default: return "sombrero";
    }
}

}  // namespace isomesh
