#pragma once

#include "fracnls/grid.hpp"

namespace fracnls::detail {

// Unnormalized multidimensional DFTs over a grid. in and out may alias.
void dft_forward(const Grid& grid, const Complex* in, Complex* out);
void dft_backward(const Grid& grid, const Complex* in, Complex* out);

}  // namespace fracnls::detail
