#include "convlab/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace convlab {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const char* to_string(Layout layout) {
    return layout == Layout::CHW ? "CHW" : "HWC";
}

const char* to_string(KernelLayout layout) {
    return layout == KernelLayout::MKKC ? "MKKC" : "MCKK";
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {
    require(rows > 0 && cols > 0, "Matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    require(rows > 0 && cols > 0, "Matrix dimensions must be positive");
    require(data_.size() == rows * cols,
            "Matrix data length " + std::to_string(data_.size()) + " != rows*cols " +
                std::to_string(rows * cols));
}

MatrixView::MatrixView(std::span<const float> storage, std::size_t r, std::size_t c)
    : data(storage.data()), rows(r), cols(c) {
    require(storage.size() == r * c, "MatrixView storage length != rows*cols");
}

Tensor3::Tensor3(std::size_t channels, std::size_t height, std::size_t width, Layout layout)
    : channels_(channels), height_(height), width_(width), layout_(layout),
      data_(channels * height * width, 0.0f) {
    require(channels > 0 && height > 0 && width > 0, "Tensor3 dimensions must be positive");
}

Tensor3::Tensor3(std::size_t channels, std::size_t height, std::size_t width, Layout layout,
                 std::vector<float> data)
    : channels_(channels), height_(height), width_(width), layout_(layout),
      data_(std::move(data)) {
    require(channels > 0 && height > 0 && width > 0, "Tensor3 dimensions must be positive");
    require(data_.size() == channels * height * width,
            "Tensor3 data length " + std::to_string(data_.size()) + " != C*H*W " +
                std::to_string(channels * height * width));
}

KernelSet::KernelSet(std::size_t count, std::size_t size, std::size_t channels,
                     KernelLayout layout)
    : count_(count), size_(size), channels_(channels), layout_(layout),
      data_(count * size * size * channels, 0.0f) {
    require(count > 0 && size > 0 && channels > 0, "KernelSet dimensions must be positive");
    require(size % 2 == 1, "kernel size must be odd, got " + std::to_string(size));
}

KernelSet::KernelSet(std::size_t count, std::size_t size, std::size_t channels,
                     KernelLayout layout, std::vector<float> data)
    : count_(count), size_(size), channels_(channels), layout_(layout), data_(std::move(data)) {
    require(count > 0 && size > 0 && channels > 0, "KernelSet dimensions must be positive");
    require(size % 2 == 1, "kernel size must be odd, got " + std::to_string(size));
    require(data_.size() == count * size * size * channels,
            "KernelSet data length " + std::to_string(data_.size()) + " != M*k*k*C " +
                std::to_string(count * size * size * channels));
}

Tensor3 convert_layout(const Tensor3& t, Layout target) {
    if (target == t.layout()) {
        return Tensor3(t.channels(), t.height(), t.width(), target,
                       std::vector<float>(t.data().begin(), t.data().end()));
    }
    Tensor3 out(t.channels(), t.height(), t.width(), target);
    for (std::size_t c = 0; c < t.channels(); ++c)
        for (std::size_t h = 0; h < t.height(); ++h)
            for (std::size_t w = 0; w < t.width(); ++w)
                out.at(c, h, w) = t.at(c, h, w);
    return out;
}

KernelSet convert_layout(const KernelSet& k, KernelLayout target) {
    if (target == k.layout()) {
        return KernelSet(k.count(), k.size(), k.channels(), target,
                         std::vector<float>(k.data().begin(), k.data().end()));
    }
    KernelSet out(k.count(), k.size(), k.channels(), target);
    for (std::size_t m = 0; m < k.count(); ++m)
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = 0; j < k.size(); ++j)
                for (std::size_t c = 0; c < k.channels(); ++c)
                    out.at(m, i, j, c) = k.at(m, i, j, c);
    return out;
}

namespace rng {

// Weyl increments; mix64 is the splitmix64 output function. See README
// "Deterministic data generation" for the full generator definition.
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kSplitGamma = 0xD1B54A32D192ED03ull;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

float unit_value(std::uint64_t seed, std::uint64_t index) noexcept {
    const std::uint64_t bits = mix64(seed + (index + 1) * kGamma);
    // Top 24 bits -> [0, 2^24); scaling by 2^-23 and shifting is exact in
    // float, so the result is bit-identical on any IEEE-754 platform.
    const auto top = static_cast<std::uint32_t>(bits >> 40);
    return static_cast<float>(top) * 0x1p-23f - 1.0f;
}

std::uint64_t split(std::uint64_t seed, std::uint64_t lane) noexcept {
    return mix64(seed + (lane + 1) * kSplitGamma);
}

}  // namespace rng

void fill_deterministic(std::span<float> out, std::uint64_t seed) noexcept {
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = rng::unit_value(seed, static_cast<std::uint64_t>(i));
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Matrix m(rows, cols);
    fill_deterministic(m.data(), seed);
    return m;
}

Tensor3 random_tensor3(std::size_t channels, std::size_t height, std::size_t width,
                       Layout layout, std::uint64_t seed) {
    Tensor3 t(channels, height, width, layout);
    fill_deterministic(t.data(), seed);
    return t;
}

KernelSet random_kernels(std::size_t count, std::size_t size, std::size_t channels,
                         KernelLayout layout, std::uint64_t seed) {
    KernelSet k(count, size, channels, layout);
    fill_deterministic(k.data(), seed);
    return k;
}

namespace {

bool span_allclose(std::span<const float> a, std::span<const float> b, Tolerance tol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(std::fabs(a[i] - b[i]) <= tol.abs + tol.rel * std::fabs(b[i]))) return false;
    }
    return true;
}

float span_max_diff(std::span<const float> a, std::span<const float> b) {
    float worst = 0.0f;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::fabs(a[i] - b[i]));
    return worst;
}

}  // namespace

bool allclose(const Matrix& a, const Matrix& b, Tolerance tol) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "allclose: matrix shape mismatch");
    return span_allclose(a.data(), b.data(), tol);
}

bool allclose(const Tensor3& a, const Tensor3& b, Tolerance tol) {
    require(a.channels() == b.channels() && a.height() == b.height() && a.width() == b.width(),
            "allclose: tensor shape mismatch");
    if (a.layout() == b.layout()) return span_allclose(a.data(), b.data(), tol);
    return span_allclose(a.data(), convert_layout(b, a.layout()).data(), tol);
}

float max_abs_diff(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: matrix shape mismatch");
    return span_max_diff(a.data(), b.data());
}

float max_abs_diff(const Tensor3& a, const Tensor3& b) {
    require(a.channels() == b.channels() && a.height() == b.height() && a.width() == b.width(),
            "max_abs_diff: tensor shape mismatch");
    if (a.layout() == b.layout()) return span_max_diff(a.data(), b.data());
    return span_max_diff(a.data(), convert_layout(b, a.layout()).data());
}

namespace {

float span_max_abs(std::span<const float> s) {
    float worst = 0.0f;
    for (const float v : s) worst = std::max(worst, std::fabs(v));
    return worst;
}

}  // namespace

float max_abs(const Matrix& m) { return span_max_abs(m.data()); }
float max_abs(const Tensor3& t) { return span_max_abs(t.data()); }

Tolerance scaled_tolerance(Tolerance base, float magnitude) {
    return Tolerance{base.rel, base.abs + base.rel * std::max(magnitude, 0.0f)};
}

}  // namespace convlab
