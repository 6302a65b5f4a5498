#include "egd/grid.hpp"

#include "egd/errors.hpp"

namespace egd {

namespace {

std::vector<double> cell_centers(int n, double width) {
    std::vector<double> centers(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        centers[static_cast<size_t>(i)] = (i + 0.5) * width;
    }
    return centers;
}

}  // namespace

Grid::Grid(int rank, int nx, int nz)
    : rank_(rank),
      nx_(nx),
      nz_(nz),
      dx_(1.0 / nx),
      dz_(rank == 2 ? 1.0 / nz : 1.0),
      cell_area_(dx_ * dz_),
      centers_x_(cell_centers(nx, dx_)),
      centers_z_(rank == 2 ? cell_centers(nz, dz_) : std::vector<double>{}) {}

Grid Grid::line(int n_cells) {
    if (n_cells < 2) {
        throw InvalidParams("grid needs at least 2 cells, got " +
                            std::to_string(n_cells));
    }
    return Grid(1, n_cells, 1);
}

Grid Grid::box(int nx, int nz) {
    if (nx < 2 || nz < 2) {
        throw InvalidParams("2D grid needs at least 2 cells per axis, got " +
                            std::to_string(nx) + "x" + std::to_string(nz));
    }
    return Grid(2, nx, nz);
}

}  // namespace egd
