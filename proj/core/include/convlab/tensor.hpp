#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace convlab {

/// Memory layout of a Tensor3: which dimension varies fastest.
enum class Layout { CHW, HWC };

/// Storage order of a KernelSet. MKKC keeps the channel values of one
/// spatial tap contiguous; MCKK keeps one channel's k*k plane contiguous.
enum class KernelLayout { MKKC, MCKK };

const char* to_string(Layout layout);
const char* to_string(KernelLayout layout);

/// Dense row-major float matrix, the GEMM operand/result type.
/// Element (r, c) lives at flat offset r*cols + c.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    float operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    float& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }

    /// Moves the underlying storage out; the matrix is left empty.
    std::vector<float> take_data() && noexcept { rows_ = cols_ = 0; return std::move(data_); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<float> data_;
};

/// Non-owning row-major view over float storage. Lets GEMM run directly on
/// tensor data (a CHW tensor is a C x (H*W) matrix) without copying.
struct MatrixView {
    const float* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    MatrixView() = default;
    MatrixView(const Matrix& m) : data(m.data().data()), rows(m.rows()), cols(m.cols()) {}
    MatrixView(std::span<const float> storage, std::size_t r, std::size_t c);

    float operator()(std::size_t r, std::size_t c) const {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }
};

/// Dense 3D tensor (channels x height x width) with explicit layout.
/// CHW flat offset of (c,h,w) is c*H*W + h*W + w; HWC is h*W*C + w*C + c.
class Tensor3 {
public:
    Tensor3(std::size_t channels, std::size_t height, std::size_t width,
            Layout layout = Layout::CHW);  // zero-filled
    Tensor3(std::size_t channels, std::size_t height, std::size_t width,
            Layout layout, std::vector<float> data);

    std::size_t channels() const noexcept { return channels_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    Layout layout() const noexcept { return layout_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::size_t offset(std::size_t c, std::size_t h, std::size_t w) const {
        assert(c < channels_ && h < height_ && w < width_);
        return layout_ == Layout::CHW ? (c * height_ + h) * width_ + w
                                      : (h * width_ + w) * channels_ + c;
    }
    float at(std::size_t c, std::size_t h, std::size_t w) const { return data_[offset(c, h, w)]; }
    float& at(std::size_t c, std::size_t h, std::size_t w) { return data_[offset(c, h, w)]; }

    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }
    std::vector<float> take_data() && noexcept { return std::move(data_); }

private:
    std::size_t channels_, height_, width_;
    Layout layout_;
    std::vector<float> data_;
};

/// Dense 4D kernel tensor: M kernels of spatial size k x k over C channels.
/// k must be odd (centered taps). MKKC flat offset of (m,i,j,c) is
/// ((m*k + i)*k + j)*C + c; MCKK is ((m*C + c)*k + i)*k + j.
class KernelSet {
public:
    KernelSet(std::size_t count, std::size_t size, std::size_t channels,
              KernelLayout layout = KernelLayout::MKKC);  // zero-filled
    KernelSet(std::size_t count, std::size_t size, std::size_t channels,
              KernelLayout layout, std::vector<float> data);

    std::size_t count() const noexcept { return count_; }          // M
    std::size_t size() const noexcept { return size_; }            // k
    std::size_t channels() const noexcept { return channels_; }    // C
    KernelLayout layout() const noexcept { return layout_; }
    std::size_t elements() const noexcept { return data_.size(); }

    std::size_t offset(std::size_t m, std::size_t i, std::size_t j, std::size_t c) const {
        assert(m < count_ && i < size_ && j < size_ && c < channels_);
        return layout_ == KernelLayout::MKKC
                   ? ((m * size_ + i) * size_ + j) * channels_ + c
                   : ((m * channels_ + c) * size_ + i) * size_ + j;
    }
    float at(std::size_t m, std::size_t i, std::size_t j, std::size_t c) const {
        return data_[offset(m, i, j, c)];
    }
    float& at(std::size_t m, std::size_t i, std::size_t j, std::size_t c) {
        return data_[offset(m, i, j, c)];
    }

    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }

private:
    std::size_t count_, size_, channels_;
    KernelLayout layout_;
    std::vector<float> data_;
};

/// Value-preserving layout conversion: result(c,h,w) == t(c,h,w) for all
/// coordinates. Converting to the current layout copies the data unchanged.
Tensor3 convert_layout(const Tensor3& t, Layout target);
KernelSet convert_layout(const KernelSet& k, KernelLayout target);

namespace rng {

/// splitmix64 finalizer; the core of the counter-based generator.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Value index `index` of the stream identified by `seed`, in [-1, 1).
/// Pure function of (seed, index): every platform produces identical bits.
float unit_value(std::uint64_t seed, std::uint64_t index) noexcept;

/// Derives an independent stream seed for lane `lane` of a parent seed.
std::uint64_t split(std::uint64_t seed, std::uint64_t lane) noexcept;

}  // namespace rng

/// Fills storage with the deterministic counter-based stream for `seed`.
void fill_deterministic(std::span<float> out, std::uint64_t seed) noexcept;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);
Tensor3 random_tensor3(std::size_t channels, std::size_t height, std::size_t width,
                       Layout layout, std::uint64_t seed);
KernelSet random_kernels(std::size_t count, std::size_t size, std::size_t channels,
                         KernelLayout layout, std::uint64_t seed);

/// Element tolerances for approximate comparison:
/// |a - b| <= abs + rel * |b|.
struct Tolerance {
    float rel = 1e-5f;
    float abs = 1e-6f;
};

/// True iff every element pair satisfies the tolerance. Shape mismatch is a
/// contract violation and throws std::invalid_argument.
bool allclose(const Matrix& a, const Matrix& b, Tolerance tol = {});
bool allclose(const Tensor3& a, const Tensor3& b, Tolerance tol = {});

/// Largest elementwise |a - b|; shapes must match.
float max_abs_diff(const Matrix& a, const Matrix& b);
float max_abs_diff(const Tensor3& a, const Tensor3& b);

float max_abs(const Matrix& m);
float max_abs(const Tensor3& t);

/// Anchors a tolerance to the magnitude of the reference data:
/// abs' = abs + rel * magnitude. f32 accumulation error in a long reduction
/// grows with the partial-sum scale, not with the final element value, so
/// comparisons between differently-ordered reductions of the same sum must
/// budget the absolute term at the result's scale. At magnitude <= 1 this
/// is within rel of the base tolerance.
Tolerance scaled_tolerance(Tolerance base, float magnitude);

}  // namespace convlab
