#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "isomesh/grid.hpp"
#include "isomesh/vec3.hpp"

namespace isomesh {

// Analytic object descriptions. Fields generated from them hold the signed
// distance to the object surface at each lattice sample: negative inside,
// zero on the surface, positive outside. The sombrero is the exception; it
// is an open graph surface and its field stores the raw implicit value.

struct SphereSpec {
    Vec3 center;
    double radius = 0.0;
};

struct CubeSpec {
    Vec3 center;
    double ax = 0.0, ay = 0.0, az = 0.0;  // full edge lengths
};

/// Cube with a sphere carved out of it. The field is the CSG difference
/// max(d_cube, -d_sphere): the cube field everywhere the sphere is not the
/// nearer influence, the negated sphere field where it is.
struct CubeMinusSphereSpec {
    CubeSpec cube;
    SphereSpec sphere;
};

/// Offset surface at distance `minor` from the circle of radius `major` in
/// the z=0 plane through the center. Embedded (ring) torus for minor < major;
/// minor >= major gives the self-intersecting spindle case, which is accepted
/// but has no analytic area/volume here.
struct TorusSpec {
    Vec3 center;
    double major = 0.0;  // distance from center axis to tube axis
    double minor = 0.0;  // tube radius
};

/// Open graph surface y = a*cos(b*(x^2+z^2)) / (c + x^2+z^2), coordinates
/// relative to the center. Not a distance field.
struct SombreroSpec {
    Vec3 center;
    double a = 0.0, b = 0.0, c = 0.0;
};

using FieldSpec =
    std::variant<SphereSpec, CubeSpec, CubeMinusSphereSpec, TorusSpec, SombreroSpec>;

struct NoiseSpec {
    double amplitude_percent = 0.0;  // of a caller-supplied reference length
    uint64_t seed = 0;
};

/// Throws std::invalid_argument when size parameters are not positive.
void validate_spec(const FieldSpec& spec);

/// Axis-aligned bounds of the object surface, when the object is closed.
/// The sombrero has no closed bound (it exits the grid by design).
std::optional<std::pair<Vec3, Vec3>> object_bounds(const FieldSpec& spec);

/// Throws std::invalid_argument unless the object surface fits inside the
/// grid with at least `margin_cells` cells to spare on every side. Open
/// surfaces (sombrero) are exempt.
void check_fit(const FieldSpec& spec, GridDims dims, double margin_cells = 2.0);

/// Signed distance from p to the object surface, negative inside.
/// Closed form for sphere, cube, cube-minus-sphere and torus. The sombrero
/// has no closed form; it gets the first-order estimate F/|grad F|, which is
/// exact to first order near the surface. Throws std::domain_error if the
/// gradient vanishes at p (cannot happen for the sombrero itself, whose
/// y-derivative is identically 1, but the guard keeps the contract explicit).
double object_distance(const FieldSpec& spec, const Vec3& p);

/// Samples the field of `spec` on the lattice. For the closed objects every
/// sample equals object_distance at that lattice point; for the sombrero the
/// raw implicit value is stored. Rejects objects that do not fit (check_fit).
ScalarGrid generate_field(const FieldSpec& spec, GridDims dims, unsigned threads = 0);

/// Perturbs every sample by a uniform random offset in
/// +-(amplitude_percent/100)*reference_length. Each sample's offset is a pure
/// function of (seed, sample index), so the result is independent of call
/// order and thread count.
ScalarGrid add_noise(const ScalarGrid& grid, const NoiseSpec& noise, double reference_length);

/// Closed-form surface area, for objects that have one (sphere, cube,
/// cube-minus-sphere, embedded torus).
std::optional<double> analytic_area(const FieldSpec& spec);

/// Closed-form enclosed volume, same coverage as analytic_area.
std::optional<double> analytic_volume(const FieldSpec& spec);

std::string spec_kind_name(const FieldSpec& spec);

}  // namespace isomesh
