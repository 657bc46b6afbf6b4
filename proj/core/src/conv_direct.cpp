#include "convlab/conv_direct.hpp"

#include <stdexcept>
#include <string>

namespace convlab {

ConvProblem::ConvProblem(Tensor3 input, KernelSet kernels)
    : input_(std::move(input)), kernels_(std::move(kernels)) {
    if (input_.channels() != kernels_.channels()) {
        throw std::invalid_argument("ConvProblem: input has " +
                                    std::to_string(input_.channels()) + " channels, kernels have " +
                                    std::to_string(kernels_.channels()));
    }
    const std::size_t k = kernels_.size();
    const std::size_t bound = std::min(input_.height(), input_.width()) + k / 2;
    if (k > bound) {
        throw std::invalid_argument("ConvProblem: kernel size " + std::to_string(k) +
                                    " exceeds padded image bound " + std::to_string(bound));
    }
}

Matrix conv2d_scsk(MatrixView image, MatrixView kernel) {
    if (kernel.rows != kernel.cols)
        throw std::invalid_argument("conv2d_scsk: kernel must be square");
    const std::size_t k = kernel.rows;
    if (k % 2 == 0)
        throw std::invalid_argument("conv2d_scsk: kernel size must be odd, got " +
                                    std::to_string(k));

    const std::size_t height = image.rows;
    const std::size_t width = image.cols;
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);

    Matrix out(height, width);
    for (std::size_t x = 0; x < height; ++x) {
        for (std::size_t y = 0; y < width; ++y) {
            float acc = 0.0f;
            for (std::size_t i = 0; i < k; ++i) {
                const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x) - half +
                                          static_cast<std::ptrdiff_t>(i);
                if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(height)) continue;
                for (std::size_t j = 0; j < k; ++j) {
                    const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) - half +
                                              static_cast<std::ptrdiff_t>(j);
                    if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(width)) continue;
                    acc += image(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy)) *
                           kernel(i, j);
                }
            }
            out(x, y) = acc;
        }
    }
    return out;
}

Matrix conv_mcsk(const Tensor3& input, const KernelSet& kernels, std::size_t kernel_index) {
    if (input.channels() != kernels.channels())
        throw std::invalid_argument("conv_mcsk: channel count mismatch");
    if (kernel_index >= kernels.count())
        throw std::invalid_argument("conv_mcsk: kernel index out of range");

    const std::size_t k = kernels.size();
    const std::size_t height = input.height();
    const std::size_t width = input.width();
    const bool chw = input.layout() == Layout::CHW;

    Matrix out(height, width);
    Matrix gathered(height, width);
    Matrix plane(k, k);
    for (std::size_t c = 0; c < input.channels(); ++c) {
        MatrixView image;
        if (chw) {
            image = MatrixView(input.data().subspan(c * height * width, height * width), height,
                               width);
        } else {
            for (std::size_t h = 0; h < height; ++h)
                for (std::size_t w = 0; w < width; ++w)
                    gathered(h, w) = input.at(c, h, w);
            image = gathered;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                plane(i, j) = kernels.at(kernel_index, i, j, c);

        const Matrix channel = conv2d_scsk(image, plane);
        for (std::size_t e = 0; e < out.size(); ++e)
            out.data()[e] += channel.data()[e];
    }
    return out;
}

Tensor3 conv_mcmk_sum(const ConvProblem& p) {
    Tensor3 out(p.kernel_count(), p.height(), p.width(), Layout::CHW);
    const std::size_t plane = p.height() * p.width();
    for (std::size_t m = 0; m < p.kernel_count(); ++m) {
        const Matrix channel = conv_mcsk(p.input(), p.kernels(), m);
        std::copy(channel.data().begin(), channel.data().end(),
                  out.data().begin() + static_cast<std::ptrdiff_t>(m * plane));
    }
    return out;
}

Tensor3 conv_mcmk_loopnest(const ConvProblem& p) {
    if (p.kernels().layout() != KernelLayout::MKKC)
        throw std::invalid_argument("conv_mcmk_loopnest requires MKKC kernel layout, got " +
                                    std::string(to_string(p.kernels().layout())));

    const Tensor3& in = p.input();
    const KernelSet& ks = p.kernels();
    const std::size_t height = p.height();
    const std::size_t width = p.width();
    const std::size_t kernel_count = p.kernel_count();
    const std::size_t channels = p.channels();
    const std::size_t k = p.kernel_size();
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);

    Tensor3 out(kernel_count, height, width, Layout::CHW);
    for (std::size_t h = 0; h < height; ++h) {
        for (std::size_t w = 0; w < width; ++w) {
            for (std::size_t o = 0; o < kernel_count; ++o) {
                float sum = 0.0f;
                for (std::size_t x = 0; x < k; ++x) {
                    const std::ptrdiff_t sh = static_cast<std::ptrdiff_t>(h) - half +
                                              static_cast<std::ptrdiff_t>(x);
                    if (sh < 0 || sh >= static_cast<std::ptrdiff_t>(height)) continue;
                    for (std::size_t y = 0; y < k; ++y) {
                        const std::ptrdiff_t sw = static_cast<std::ptrdiff_t>(w) - half +
                                                  static_cast<std::ptrdiff_t>(y);
                        if (sw < 0 || sw >= static_cast<std::ptrdiff_t>(width)) continue;
                        for (std::size_t i = 0; i < channels; ++i) {
                            sum += in.at(i, static_cast<std::size_t>(sh),
                                         static_cast<std::size_t>(sw)) *
                                   ks.at(o, x, y, i);
                        }
                    }
                }
                out.at(o, h, w) = sum;
            }
        }
    }
    return out;
}

}  // namespace convlab
