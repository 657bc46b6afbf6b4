#include <doctest.h>

#include <cstring>
#include <stdexcept>
#include <vector>

#include "convlab/tensor.hpp"

using namespace convlab;

namespace {

std::uint32_t float_bits(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    return bits;
}

}  // namespace

TEST_CASE("matrix construction and indexing") {
    Matrix m(2, 3);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.size() == 6);
    m(1, 2) = 5.0f;
    CHECK(m(1, 2) == 5.0f);
    CHECK(m.data()[1 * 3 + 2] == 5.0f);

    CHECK_THROWS_AS(Matrix(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(Matrix(2, 2, std::vector<float>(3)), std::invalid_argument);
}

TEST_CASE("tensor3 offsets follow the layout formulas") {
    Tensor3 chw(2, 3, 4, Layout::CHW);
    CHECK(chw.offset(1, 2, 3) == 1 * 3 * 4 + 2 * 4 + 3);
    Tensor3 hwc(2, 3, 4, Layout::HWC);
    CHECK(hwc.offset(1, 2, 3) == 2 * 4 * 2 + 3 * 2 + 1);

    CHECK_THROWS_AS(Tensor3(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Tensor3(1, 1, 2, Layout::CHW, std::vector<float>(3)), std::invalid_argument);
}

TEST_CASE("kernel set rejects even k and validates storage") {
    CHECK_THROWS_AS(KernelSet(1, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(KernelSet(1, 4, 3), std::invalid_argument);
    KernelSet ks(2, 3, 4, KernelLayout::MKKC);
    CHECK(ks.offset(1, 2, 0, 3) == ((1 * 3 + 2) * 3 + 0) * 4 + 3);
    KernelSet mckk(2, 3, 4, KernelLayout::MCKK);
    CHECK(mckk.offset(1, 2, 0, 3) == ((1 * 4 + 3) * 3 + 2) * 3 + 0);
}

TEST_CASE("layout conversion to the same layout copies values") {
    Tensor3 t = random_tensor3(3, 4, 5, Layout::CHW, 11);
    Tensor3 same = convert_layout(t, Layout::CHW);
    REQUIRE(same.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(same.data()[i] == t.data()[i]);
}

TEST_CASE("single-channel tensors have coinciding layouts") {
    Tensor3 t = random_tensor3(1, 4, 6, Layout::CHW, 3);
    Tensor3 hwc = convert_layout(t, Layout::HWC);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(hwc.data()[i] == t.data()[i]);
}

TEST_CASE("chw to hwc interleaves channels") {
    // C=2, H=1, W=2: CHW data [a,b,c,d] becomes HWC [a,c,b,d].
    Tensor3 t(2, 1, 2, Layout::CHW, {1.0f, 2.0f, 3.0f, 4.0f});
    Tensor3 hwc = convert_layout(t, Layout::HWC);
    CHECK(hwc.data()[0] == 1.0f);
    CHECK(hwc.data()[1] == 3.0f);
    CHECK(hwc.data()[2] == 2.0f);
    CHECK(hwc.data()[3] == 4.0f);
}

TEST_CASE("layout round-trip is the identity on data") {
    const std::size_t shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {16, 4, 9}, {2, 13, 3}};
    for (const auto& s : shapes) {
        Tensor3 t = random_tensor3(s[0], s[1], s[2], Layout::CHW, 1000 + s[0] * s[1] * s[2]);
        Tensor3 back = convert_layout(convert_layout(t, Layout::HWC), Layout::CHW);
        REQUIRE(back.size() == t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK(float_bits(back.data()[i]) == float_bits(t.data()[i]));
    }
}

TEST_CASE("write then read round-trips at random coordinates in both layouts") {
    for (const Layout layout : {Layout::CHW, Layout::HWC}) {
        Tensor3 t(5, 7, 3, layout);
        std::uint64_t stream = 77;
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t c = rng::mix64(stream + 3 * trial) % 5;
            const std::size_t h = rng::mix64(stream + 3 * trial + 1) % 7;
            const std::size_t w = rng::mix64(stream + 3 * trial + 2) % 3;
            const float v = rng::unit_value(stream, trial);
            t.at(c, h, w) = v;
            CHECK(t.at(c, h, w) == v);
        }
    }
}

TEST_CASE("kernel layout conversion preserves values and round-trips") {
    KernelSet ks = random_kernels(3, 3, 4, KernelLayout::MKKC, 21);
    KernelSet mckk = convert_layout(ks, KernelLayout::MCKK);
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t c = 0; c < 4; ++c)
                    CHECK(mckk.at(m, i, j, c) == ks.at(m, i, j, c));
    KernelSet back = convert_layout(mckk, KernelLayout::MKKC);
    for (std::size_t i = 0; i < ks.elements(); ++i)
        CHECK(float_bits(back.data()[i]) == float_bits(ks.data()[i]));
}

TEST_CASE("fill_deterministic repeats bitwise for equal seeds") {
    Matrix a = random_matrix(8, 16, 42);
    Matrix b = random_matrix(8, 16, 42);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(float_bits(a.data()[i]) == float_bits(b.data()[i]));
}

TEST_CASE("different seeds produce different streams") {
    Matrix a = random_matrix(8, 8, 1);
    Matrix b = random_matrix(8, 8, 2);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) any_diff |= a.data()[i] != b.data()[i];
    CHECK(any_diff);
}

TEST_CASE("seed-0 2x2 fixture is pinned") {
    // Golden values of the counter-based generator; must match on every
    // platform. Bit patterns pin the exact float results.
    Matrix m = random_matrix(2, 2, 0);
    CHECK(float_bits(m.data()[0]) == 0x3f444150u);  //  0.76662159
    CHECK(float_bits(m.data()[1]) == 0xbe0c3b10u);  // -0.136944056
    CHECK(float_bits(m.data()[2]) == 0xbf727746u);  // -0.947132468
    CHECK(float_bits(m.data()[3]) == 0x3f711770u);  //  0.941763878
}

TEST_CASE("generated values stay in the unit interval") {
    Tensor3 t = random_tensor3(4, 9, 11, Layout::CHW, 5);
    for (const float v : t.data()) {
        CHECK(v >= -1.0f);
        CHECK(v < 1.0f);
    }
}

TEST_CASE("allclose follows the tolerance formula") {
    Matrix a = random_matrix(4, 4, 9);
    Matrix b = random_matrix(4, 4, 9);
    CHECK(allclose(a, b));

    Matrix shifted = a;
    for (auto& v : shifted.data()) v += 1.0f;
    CHECK_FALSE(allclose(shifted, a, {0.0f, 1e-6f}));

    Matrix scaled = a;
    for (auto& v : scaled.data()) v *= 1.0f + 5e-7f;
    CHECK(allclose(scaled, a, {1e-6f, 0.0f}));

    Matrix wrong_shape(4, 5);
    CHECK_THROWS_AS(allclose(a, wrong_shape), std::invalid_argument);
}

TEST_CASE("allclose on tensors compares across layouts by value") {
    Tensor3 t = random_tensor3(3, 4, 4, Layout::CHW, 31);
    Tensor3 hwc = convert_layout(t, Layout::HWC);
    CHECK(allclose(t, hwc));
    hwc.at(1, 2, 3) += 0.5f;
    CHECK_FALSE(allclose(t, hwc));
}
