#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "isomesh/vec3.hpp"

namespace isomesh {

/// Sample counts per axis. A grid with nx samples has nx-1 cells along x;
/// every axis needs at least one cell.
struct GridDims {
    int nx = 0, ny = 0, nz = 0;

    bool valid() const { return nx >= 2 && ny >= 2 && nz >= 2; }
    std::size_t sample_count() const {
        return std::size_t(nx) * std::size_t(ny) * std::size_t(nz);
    }
    std::size_t cell_count() const {
        return std::size_t(nx - 1) * std::size_t(ny - 1) * std::size_t(nz - 1);
    }
    bool operator==(const GridDims& o) const {
        return nx == o.nx && ny == o.ny && nz == o.nz;
    }
};

/// Dense scalar samples on a regular Cartesian lattice, x-fastest layout.
/// The cell edge length is 1, so world coordinates coincide with sample
/// indices. Immutable in spirit: build it, then share it read-only.
class ScalarGrid {
public:
    ScalarGrid() = default;
    ScalarGrid(GridDims dims, std::vector<double> samples)
        : dims_(dims), samples_(std::move(samples)) {
        if (!dims_.valid())
            throw std::invalid_argument("ScalarGrid: each axis needs at least 2 samples");
        if (samples_.size() != dims_.sample_count())
            throw std::invalid_argument("ScalarGrid: sample count does not match dims");
    }
    explicit ScalarGrid(GridDims dims) : ScalarGrid(dims, std::vector<double>(dims.sample_count(), 0.0)) {}

    const GridDims& dims() const { return dims_; }
    std::size_t linear_index(int i, int j, int k) const {
        return (std::size_t(k) * dims_.ny + j) * dims_.nx + i;
    }
    double at(int i, int j, int k) const { return samples_[linear_index(i, j, k)]; }
    double& at(int i, int j, int k) { return samples_[linear_index(i, j, k)]; }
    Vec3 position(int i, int j, int k) const { return {double(i), double(j), double(k)}; }

    const std::vector<double>& samples() const { return samples_; }
    std::vector<double>& samples() { return samples_; }

    bool in_range(int i, int j, int k) const {
        return i >= 0 && i < dims_.nx && j >= 0 && j < dims_.ny && k >= 0 && k < dims_.nz;
    }

    std::pair<double, double> value_range() const {
        double lo = samples_.empty() ? 0.0 : samples_[0], hi = lo;
        for (double v : samples_) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        return {lo, hi};
    }

private:
    GridDims dims_;
    std::vector<double> samples_;
};

}  // namespace isomesh
