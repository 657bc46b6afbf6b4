#pragma once

#include "convlab/conv_direct.hpp"
#include "convlab/gemm.hpp"
#include "convlab/tensor.hpp"

namespace convlab {

enum class PatchOrientation { Columns, Rows };

/// The replicated patch matrix of im2col/im2row together with the shape it
/// was built from. Columns orientation is (k*k*C) x (H*W); Rows is its
/// transpose. Either way the element count is k^2 * C*H*W, a k^2-fold
/// blow-up of the input.
struct PatchMatrix {
    Matrix matrix;
    std::size_t k = 0;
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    PatchOrientation orientation = PatchOrientation::Columns;
};

/// Copies every k x k x C input patch into one column. Column p = x*W + y
/// holds the patch centered on output pixel (x,y); row (i*k + j)*C + c holds
/// input(c, x - k/2 + i, y - k/2 + j), zero when out of range. The row order
/// (taps outer, channel inner) matches the MKKC kernel unrolling so GEMM
/// needs no kernel rearrangement. Input must be CHW; k must be odd.
PatchMatrix im2col_patch_matrix(const Tensor3& input, std::size_t k);

/// Transpose-dual of im2col_patch_matrix, built directly (row per output
/// pixel) so consecutive patch elements are consecutive in memory. Accepts
/// either input layout.
PatchMatrix im2row_patch_matrix(const Tensor3& input, std::size_t k);

/// M x (k*k*C) matrix whose row m is the flat slice of kernel m. Given MKKC
/// storage this is a pure reshape; other layouts are rejected.
Matrix kernel_patch_matrix_rows(const KernelSet& kernels);

/// (k*k*C) x M transpose of kernel_patch_matrix_rows, for the im2row GEMM.
Matrix kernel_patch_matrix_cols(const KernelSet& kernels);

/// Convolution as gemm(kernel rows, im2col patch matrix), reshaped to
/// (M,H,W) CHW.
Tensor3 conv_im2col(const ConvProblem& p, const GemmBackend& backend);

/// Convolution as gemm(im2row patch matrix, kernel columns); the (H*W) x M
/// product is converted to (M,H,W) CHW.
Tensor3 conv_im2row(const ConvProblem& p, const GemmBackend& backend);

}  // namespace convlab
