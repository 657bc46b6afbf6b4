#pragma once

#include "convlab/tensor.hpp"

namespace convlab {

/// One unstrided, same-padded convolution instance: a (C,H,W) input and
/// (M,k,k,C) kernels producing an (M,H,W) output. Construction validates
/// channel agreement and rejects kernels larger than the padded image
/// (k must satisfy k <= min(H,W) + k/2).
class ConvProblem {
public:
    ConvProblem(Tensor3 input, KernelSet kernels);

    const Tensor3& input() const noexcept { return input_; }
    const KernelSet& kernels() const noexcept { return kernels_; }

    std::size_t channels() const noexcept { return input_.channels(); }
    std::size_t height() const noexcept { return input_.height(); }
    std::size_t width() const noexcept { return input_.width(); }
    std::size_t kernel_count() const noexcept { return kernels_.count(); }
    std::size_t kernel_size() const noexcept { return kernels_.size(); }

private:
    Tensor3 input_;
    KernelSet kernels_;
};

/// Single-channel single-kernel 2D convolution (CNN convention, no kernel
/// flip) with implicit centered zero padding:
///   out(x,y) = sum_{i,j} image(x - k/2 + i, y - k/2 + j) * kernel(i,j)
/// where out-of-range image reads contribute 0. kernel must be square with
/// odd side length.
Matrix conv2d_scsk(MatrixView image, MatrixView kernel);

/// Multi-channel single-kernel: sum over channels of per-channel 2D
/// convolutions of `input` against kernel `kernel_index` of `kernels`.
Matrix conv_mcsk(const Tensor3& input, const KernelSet& kernels, std::size_t kernel_index);

/// Multi-channel multi-kernel by summation: output channel m is
/// conv_mcsk(input, kernels, m). This is the correctness oracle every other
/// method in the library is verified against.
Tensor3 conv_mcmk_sum(const ConvProblem& p);

/// The fused six-deep loop nest (h, w, kernel, tap row, tap col, channel)
/// with the same centered zero-padding convention as conv2d_scsk; computes
/// the identical function as conv_mcmk_sum. Kernels must be in MKKC layout.
Tensor3 conv_mcmk_loopnest(const ConvProblem& p);

}  // namespace convlab
