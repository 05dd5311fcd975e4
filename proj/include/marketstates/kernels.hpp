#pragma once

#include <cstdint>
#include <vector>

#include "marketstates/core.hpp"

// Hot inner loops shared by the correlation, similarity and clustering
// stages. The functions in marketstates::kernels parallelize with OpenMP
// when it is enabled; every output element is produced by exactly one
// thread with a fixed accumulation order, so results are bitwise identical
// to the serial reference twins in marketstates::kernels::serial. The
// reference implementations are kept for the parity tests and the
// benchmark target.

namespace marketstates::kernels {

using MatrixRefs = std::vector<const Matrix*>;

// z holds K rows of length L, each centered and scaled by 1/(sigma*sqrt(L)).
// Returns z z^T with the diagonal pinned to 1 and the lower triangle
// mirrored from the upper. Off-diagonal entries are clamped into [-1, 1]
// (they can exceed it only by rounding).
Matrix gram_correlation(const Matrix& z);

// Mean absolute elementwise difference, averaged over all entries.
double l1_mean(const Matrix& a, const Matrix& b);

// W x W symmetric matrix of l1_mean distances with zero diagonal.
Matrix pairwise_l1_mean(const MatrixRefs& mats);

// Elementwise arithmetic mean of equal-shaped matrices.
Matrix elementwise_mean(const MatrixRefs& mats);

// Labels each matrix 0 or 1 by the nearer of the two centers under l1_mean;
// exact ties keep the incoming label.
void assign_nearest(const MatrixRefs& mats, const Matrix& center0, const Matrix& center1,
                    std::vector<std::uint8_t>& labels);

namespace serial {

Matrix gram_correlation(const Matrix& z);
double l1_mean(const Matrix& a, const Matrix& b);
Matrix pairwise_l1_mean(const MatrixRefs& mats);
Matrix elementwise_mean(const MatrixRefs& mats);
void assign_nearest(const MatrixRefs& mats, const Matrix& center0, const Matrix& center1,
                    std::vector<std::uint8_t>& labels);

}  // namespace serial

}  // namespace marketstates::kernels
