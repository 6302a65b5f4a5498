#pragma once

#include <span>
#include <vector>

namespace egd {

/// Uniform cell partition of the action domain: the unit interval (rank 1)
/// or the unit square (rank 2). Cell i covers [(i-1)*dx, i*dx) with center
/// (i - 1/2)*dx; the last cell is closed. Two-dimensional fields are
/// flattened row-major with the x index fastest: flat = j*nx + i.
class Grid {
public:
    /// 1D grid with n cells of width 1/n.
    static Grid line(int n_cells);
    /// 2D grid with nx*nz cells of area (1/nx)*(1/nz).
    static Grid box(int nx, int nz);

    int rank() const { return rank_; }
    bool is_2d() const { return rank_ == 2; }

    int nx() const { return nx_; }
    int nz() const { return nz_; }
    int cell_count() const { return nx_ * nz_; }

    double dx() const { return dx_; }
    double dz() const { return dz_; }
    double cell_area() const { return cell_area_; }

    std::span<const double> centers_x() const { return centers_x_; }
    std::span<const double> centers_z() const { return centers_z_; }

    int flat_index(int ix, int iz) const { return iz * nx_ + ix; }
    int x_index(int flat) const { return flat % nx_; }
    int z_index(int flat) const { return flat / nx_; }
    double center_x(int flat) const { return centers_x_[x_index(flat)]; }
    double center_z(int flat) const { return centers_z_[z_index(flat)]; }

    bool same_shape(const Grid& other) const {
        return rank_ == other.rank_ && nx_ == other.nx_ && nz_ == other.nz_;
    }

private:
    Grid(int rank, int nx, int nz);

    int rank_;
    int nx_;
    int nz_;
    double dx_;
    double dz_;
    double cell_area_;
    std::vector<double> centers_x_;
    std::vector<double> centers_z_;
};

}  // namespace egd
