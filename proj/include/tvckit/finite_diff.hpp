#pragma once

#include <span>
#include <vector>

namespace tvckit {

// Finite-difference weights for the `deriv`-th derivative at 0 from samples at
// the given offsets (in units of the grid step). Fornberg's recursion.
std::vector<double> fd_weights(int deriv, std::span<const double> offsets);

// Integer stencil offsets used by time_derivative for grid point `index`
// out of `points`: centered when it fits, shifted to stay on the grid otherwise.
std::vector<int> stencil_offsets(int deriv, int index, int points);

}  // namespace tvckit
