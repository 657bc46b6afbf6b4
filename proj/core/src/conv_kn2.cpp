#include "convlab/conv_kn2.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace convlab {

namespace {

void check_intermediate(const Kn2Intermediate& inter) {
    const std::size_t taps = inter.k * inter.k;
    const std::size_t long_dim = taps * inter.kernel_count;
    const std::size_t pixels = inter.height * inter.width;
    const std::size_t want_rows = inter.orientation == Kn2Orientation::Row ? long_dim : pixels;
    const std::size_t want_cols = inter.orientation == Kn2Orientation::Row ? pixels : long_dim;
    if (inter.k == 0 || inter.k % 2 == 0)
        throw std::invalid_argument("shift_add: kernel size must be odd and positive");
    if (inter.matrix.rows() != want_rows || inter.matrix.cols() != want_cols)
        throw std::invalid_argument(
            "shift_add: intermediate is " + std::to_string(inter.matrix.rows()) + "x" +
            std::to_string(inter.matrix.cols()) + ", metadata requires " +
            std::to_string(want_rows) + "x" + std::to_string(want_cols));
}

}  // namespace

Kn2KernelMatrix kn2row_reorder_kernel(const KernelSet& kernels) {
    const std::size_t k = kernels.size();
    const std::size_t count = kernels.count();
    const std::size_t channels = kernels.channels();
    Matrix m(k * k * count, channels);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t mm = 0; mm < count; ++mm)
                for (std::size_t c = 0; c < channels; ++c)
                    m((i * k + j) * count + mm, c) = kernels.at(mm, i, j, c);
    return Kn2KernelMatrix{std::move(m), Kn2Orientation::Row, k, count, channels};
}

Kn2KernelMatrix kn2col_reorder_kernel(const KernelSet& kernels) {
    const std::size_t k = kernels.size();
    const std::size_t count = kernels.count();
    const std::size_t channels = kernels.channels();
    Matrix m(channels, k * k * count);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t mm = 0; mm < count; ++mm)
                for (std::size_t c = 0; c < channels; ++c)
                    m(c, (i * k + j) * count + mm) = kernels.at(mm, i, j, c);
    return Kn2KernelMatrix{std::move(m), Kn2Orientation::Col, k, count, channels};
}

Tensor3 conv_1x1(const Tensor3& input, const KernelSet& kernels, const GemmBackend& backend) {
    if (kernels.size() != 1)
        throw std::invalid_argument("conv_1x1 requires k == 1, got k = " +
                                    std::to_string(kernels.size()));
    if (input.channels() != kernels.channels())
        throw std::invalid_argument("conv_1x1: channel count mismatch");

    const Tensor3* in = &input;
    std::optional<Tensor3> converted;
    if (in->layout() != Layout::CHW) {
        converted = convert_layout(input, Layout::CHW);
        in = &*converted;
    }

    // For k == 1 both kernel layouts store an M x C row-major matrix, and the
    // CHW input is a C x (H*W) matrix: one GEMM, zero data replication.
    const std::size_t pixels = in->height() * in->width();
    MatrixView kernel_matrix(kernels.data(), kernels.count(), kernels.channels());
    MatrixView input_matrix(in->data(), in->channels(), pixels);
    Matrix result = gemm(kernel_matrix, input_matrix, backend);
    return Tensor3(kernels.count(), in->height(), in->width(), Layout::CHW,
                   std::move(result).take_data());
}

Matrix shift_add(const Kn2Intermediate& inter) {
    check_intermediate(inter);

    const std::size_t k = inter.k;
    const std::size_t count = inter.kernel_count;
    const std::size_t height = inter.height;
    const std::size_t width = inter.width;
    const std::size_t pixels = height * width;
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);
    const Matrix& src = inter.matrix;

    if (k == 1) {
        // Single centered tap, perfectly aligned with the output.
        return src;
    }

    if (inter.orientation == Kn2Orientation::Row) {
        Matrix out(count, pixels);
        for (std::size_t m = 0; m < count; ++m) {
            for (std::size_t x = 0; x < height; ++x) {
                for (std::size_t y = 0; y < width; ++y) {
                    float acc = 0.0f;
                    for (std::size_t i = 0; i < k; ++i) {
                        const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x) +
                                                  static_cast<std::ptrdiff_t>(i) - half;
                        if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(height)) continue;
                        for (std::size_t j = 0; j < k; ++j) {
                            const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) +
                                                      static_cast<std::ptrdiff_t>(j) - half;
                            if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(width)) continue;
                            acc += src((i * k + j) * count + m,
                                       static_cast<std::size_t>(sx) * width +
                                           static_cast<std::size_t>(sy));
                        }
                    }
                    out(m, x * width + y) = acc;
                }
            }
        }
        return out;
    }

    Matrix out(pixels, count);
    for (std::size_t x = 0; x < height; ++x) {
        for (std::size_t y = 0; y < width; ++y) {
            for (std::size_t m = 0; m < count; ++m) {
                float acc = 0.0f;
                for (std::size_t i = 0; i < k; ++i) {
                    const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x) +
                                              static_cast<std::ptrdiff_t>(i) - half;
                    if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(height)) continue;
                    for (std::size_t j = 0; j < k; ++j) {
                        const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) +
                                                  static_cast<std::ptrdiff_t>(j) - half;
                        if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(width)) continue;
                        acc += src(static_cast<std::size_t>(sx) * width +
                                       static_cast<std::size_t>(sy),
                                   (i * k + j) * count + m);
                    }
                }
                out(x * width + y, m) = acc;
            }
        }
    }
    return out;
}

Tensor3 conv_kn2row(const ConvProblem& p, const GemmBackend& backend) {
    const Tensor3* in = &p.input();
    std::optional<Tensor3> converted;
    if (in->layout() != Layout::CHW) {
        converted = convert_layout(*in, Layout::CHW);
        in = &*converted;
    }

    const std::size_t pixels = p.height() * p.width();
    Kn2KernelMatrix kernel = kn2row_reorder_kernel(p.kernels());
    MatrixView input_matrix(in->data(), p.channels(), pixels);

    Kn2Intermediate inter{gemm(kernel.matrix, input_matrix, backend), Kn2Orientation::Row,
                          p.kernel_size(), p.kernel_count(), p.height(), p.width()};
    Matrix result = shift_add(inter);
    return Tensor3(p.kernel_count(), p.height(), p.width(), Layout::CHW,
                   std::move(result).take_data());
}

Tensor3 conv_kn2col(const ConvProblem& p, const GemmBackend& backend) {
    const Tensor3* in = &p.input();
    std::optional<Tensor3> converted;
    if (in->layout() != Layout::HWC) {
        converted = convert_layout(*in, Layout::HWC);
        in = &*converted;
    }

    const std::size_t pixels = p.height() * p.width();
    Kn2KernelMatrix kernel = kn2col_reorder_kernel(p.kernels());
    MatrixView input_matrix(in->data(), pixels, p.channels());

    Kn2Intermediate inter{gemm(input_matrix, kernel.matrix, backend), Kn2Orientation::Col,
                          p.kernel_size(), p.kernel_count(), p.height(), p.width()};
    Matrix result = shift_add(inter);
    // (H*W) x M row-major is HWC data with M channels.
    Tensor3 hwc(p.kernel_count(), p.height(), p.width(), Layout::HWC,
                std::move(result).take_data());
    return convert_layout(hwc, Layout::CHW);
}

}  // namespace convlab
