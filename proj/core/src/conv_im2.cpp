#include "convlab/conv_im2.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace convlab {

namespace {

void require_odd(std::size_t k) {
    if (k % 2 == 0)
        throw std::invalid_argument("patch matrix: kernel size must be odd, got " +
                                    std::to_string(k));
}

}  // namespace

PatchMatrix im2col_patch_matrix(const Tensor3& input, std::size_t k) {
    require_odd(k);
    if (input.layout() != Layout::CHW)
        throw std::invalid_argument("im2col_patch_matrix requires CHW input");

    const std::size_t channels = input.channels();
    const std::size_t height = input.height();
    const std::size_t width = input.width();
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);
    const float* in = input.data().data();

    Matrix m(k * k * channels, height * width);  // zero-filled: padding taps stay 0
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t c = 0; c < channels; ++c) {
                const std::size_t r = (i * k + j) * channels + c;
                float* out_row = &m(r, 0);
                const float* in_plane = in + c * height * width;
                for (std::size_t x = 0; x < height; ++x) {
                    const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x) - half +
                                              static_cast<std::ptrdiff_t>(i);
                    if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(height)) continue;
                    for (std::size_t y = 0; y < width; ++y) {
                        const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) - half +
                                                  static_cast<std::ptrdiff_t>(j);
                        if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(width)) continue;
                        out_row[x * width + y] =
                            in_plane[static_cast<std::size_t>(sx) * width +
                                     static_cast<std::size_t>(sy)];
                    }
                }
            }
        }
    }
    return PatchMatrix{std::move(m), k, channels, height, width, PatchOrientation::Columns};
}

PatchMatrix im2row_patch_matrix(const Tensor3& input, std::size_t k) {
    require_odd(k);

    const std::size_t channels = input.channels();
    const std::size_t height = input.height();
    const std::size_t width = input.width();
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);

    Matrix m(height * width, k * k * channels);
    for (std::size_t x = 0; x < height; ++x) {
        for (std::size_t y = 0; y < width; ++y) {
            float* row = &m(x * width + y, 0);
            for (std::size_t i = 0; i < k; ++i) {
                const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x) - half +
                                          static_cast<std::ptrdiff_t>(i);
                if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(height)) continue;
                for (std::size_t j = 0; j < k; ++j) {
                    const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) - half +
                                              static_cast<std::ptrdiff_t>(j);
                    if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(width)) continue;
                    float* taps = row + (i * k + j) * channels;
                    for (std::size_t c = 0; c < channels; ++c)
                        taps[c] = input.at(c, static_cast<std::size_t>(sx),
                                           static_cast<std::size_t>(sy));
                }
            }
        }
    }
    return PatchMatrix{std::move(m), k, channels, height, width, PatchOrientation::Rows};
}

Matrix kernel_patch_matrix_rows(const KernelSet& kernels) {
    if (kernels.layout() != KernelLayout::MKKC)
        throw std::invalid_argument("kernel_patch_matrix_rows requires MKKC layout, got " +
                                    std::string(to_string(kernels.layout())));
    // MKKC data is already M rows of k*k*C values; reshape without movement.
    return Matrix(kernels.count(), kernels.size() * kernels.size() * kernels.channels(),
                  std::vector<float>(kernels.data().begin(), kernels.data().end()));
}

Matrix kernel_patch_matrix_cols(const KernelSet& kernels) {
    const std::size_t k = kernels.size();
    const std::size_t channels = kernels.channels();
    Matrix out(k * k * channels, kernels.count());
    for (std::size_t m = 0; m < kernels.count(); ++m)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t c = 0; c < channels; ++c)
                    out((i * k + j) * channels + c, m) = kernels.at(m, i, j, c);
    return out;
}

Tensor3 conv_im2col(const ConvProblem& p, const GemmBackend& backend) {
    const Tensor3* input = &p.input();
    std::optional<Tensor3> converted;
    if (input->layout() != Layout::CHW) {
        converted = convert_layout(*input, Layout::CHW);
        input = &*converted;
    }

    PatchMatrix patches = im2col_patch_matrix(*input, p.kernel_size());

    // With MKKC kernels the kernel matrix is the kernel storage itself.
    Matrix kernel_copy;
    MatrixView kernel_rows;
    if (p.kernels().layout() == KernelLayout::MKKC) {
        kernel_rows = MatrixView(p.kernels().data(), p.kernel_count(),
                                 p.kernel_size() * p.kernel_size() * p.channels());
    } else {
        kernel_copy = kernel_patch_matrix_rows(convert_layout(p.kernels(), KernelLayout::MKKC));
        kernel_rows = kernel_copy;
    }

    Matrix result = gemm(kernel_rows, patches.matrix, backend);
    return Tensor3(p.kernel_count(), p.height(), p.width(), Layout::CHW,
                   std::move(result).take_data());
}

Tensor3 conv_im2row(const ConvProblem& p, const GemmBackend& backend) {
    PatchMatrix patches = im2row_patch_matrix(p.input(), p.kernel_size());
    Matrix kernel_cols = kernel_patch_matrix_cols(p.kernels());
    Matrix result = gemm(patches.matrix, kernel_cols, backend);
    // (H*W) x M row-major is exactly HWC data with M channels.
    Tensor3 hwc(p.kernel_count(), p.height(), p.width(), Layout::HWC,
                std::move(result).take_data());
    return convert_layout(hwc, Layout::CHW);
}

}  // namespace convlab
