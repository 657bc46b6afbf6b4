#pragma once

#include "convlab/conv_direct.hpp"
#include "convlab/gemm.hpp"
#include "convlab/tensor.hpp"

namespace convlab {

/// Row orientation is the kn2row shape family ((k*k*M) x C kernel matrix,
/// (k*k*M) x (H*W) intermediate); Col is the transposed kn2col family.
enum class Kn2Orientation { Row, Col };

/// Reordered kernel matrix for the single-GEMM formulation. In row
/// orientation, row (i*k + j)*M + m holds the C channel values of kernel m
/// at spatial tap (i,j).
struct Kn2KernelMatrix {
    Matrix matrix;
    Kn2Orientation orientation = Kn2Orientation::Row;
    std::size_t k = 0;
    std::size_t kernel_count = 0;
    std::size_t channels = 0;
};

/// The k^2-fold enlarged GEMM product awaiting shift-add. In row orientation
/// the tap (i,j) sub-block is the M x (H*W) slice at row offset (i*k + j)*M;
/// each sub-block is the 1x1 convolution of the input with that tap's M x C
/// kernel slice.
struct Kn2Intermediate {
    Matrix matrix;
    Kn2Orientation orientation = Kn2Orientation::Row;
    std::size_t k = 0;
    std::size_t kernel_count = 0;
    std::size_t height = 0;
    std::size_t width = 0;
};

/// Permutes kernels into the (k*k*M) x C matrix; channel data stays
/// contiguous per row. Pure permutation, accepts either kernel layout, and
/// can be computed once ahead of time and reused across invocations.
Kn2KernelMatrix kn2row_reorder_kernel(const KernelSet& kernels);

/// Transpose of kn2row_reorder_kernel: C x (k*k*M).
Kn2KernelMatrix kn2col_reorder_kernel(const KernelSet& kernels);

/// 1x1 MCMK as one GEMM of the M x C kernel matrix with the C x (H*W) input
/// reshape; no intermediate larger than the output and no input replication.
/// Requires k == 1.
Tensor3 conv_1x1(const Tensor3& input, const KernelSet& kernels, const GemmBackend& backend);

/// Accumulates the k^2 tap sub-blocks into the final matrix. The tap (i,j)
/// contribution to output pixel (x,y) is read from intermediate pixel
/// (x + i - k/2, y + j - k/2); reads falling outside [0,H) x [0,W) are
/// discarded, which is exactly the zero-padding convention of conv2d_scsk.
/// Implemented as a gather over output pixels with tap-row-major
/// accumulation order. Returns M x (H*W) for row orientation, (H*W) x M for
/// col orientation.
Matrix shift_add(const Kn2Intermediate& intermediate);

/// k x k MCMK with one GEMM on the unreplicated input: reorder kernels,
/// multiply against the C x (H*W) input reshape, then shift-add the k^2
/// sub-blocks. Exactly one GEMM invocation per call.
Tensor3 conv_kn2row(const ConvProblem& p, const GemmBackend& backend);

/// Transposed variant: (H*W) x C input (HWC layout; converted if needed)
/// times C x (k*k*M) kernels, followed by the column-oriented shift-add.
Tensor3 conv_kn2col(const ConvProblem& p, const GemmBackend& backend);

}  // namespace convlab
