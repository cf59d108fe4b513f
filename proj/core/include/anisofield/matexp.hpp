#pragma once

#include <Eigen/Dense>

namespace anisofield {

// Small dense matrices only (d <= 4 everywhere in this library); fixed
// maximum size keeps them off the heap.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

// exp(A) by Higham-style scaling and squaring with Pade approximants.
// Robust for defective matrices (Jordan blocks), unlike eigendecomposition.
Mat matrix_exp(const Mat& A);

}  // namespace anisofield
