#include <doctest.h>

#include <stdexcept>

#include "convlab/methods.hpp"

using namespace convlab;

TEST_CASE("method names round-trip") {
    for (const ConvMethod method : default_methods()) {
        const auto back = method_from_name(to_string(method));
        REQUIRE(back.has_value());
        CHECK(*back == method);
    }
    CHECK(*method_from_name("conv1x1") == ConvMethod::Conv1x1);
    CHECK_FALSE(method_from_name("winograd").has_value());
}

TEST_CASE("parse_method_list splits on commas and validates names") {
    const auto methods = parse_method_list("im2col,kn2row,direct-sum");
    REQUIRE(methods.size() == 3);
    CHECK(methods[0] == ConvMethod::Im2col);
    CHECK(methods[1] == ConvMethod::Kn2row);
    CHECK(methods[2] == ConvMethod::DirectSum);

    CHECK_THROWS_AS(parse_method_list("im2col,nope"), std::invalid_argument);
    CHECK_THROWS_AS(parse_method_list(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_method_list(",,"), std::invalid_argument);
}

TEST_CASE("kn2 methods auto-select the 1x1 path on k=1 problems") {
    ConvProblem p(random_tensor3(4, 5, 5, Layout::CHW, 300),
                  random_kernels(3, 1, 4, KernelLayout::MKKC, 301));
    const GemmBackend backend = GemmBackend::blocked();
    const Tensor3 direct = run_method(ConvMethod::Conv1x1, p, backend);
    for (const ConvMethod method : {ConvMethod::Kn2row, ConvMethod::Kn2col}) {
        const Tensor3 out = run_method(method, p, backend);
        CHECK(allclose(out, direct, {0.0f, 0.0f}));
    }
}

TEST_CASE("conv1x1 rejects k != 1 problems") {
    ConvProblem p(random_tensor3(2, 5, 5, Layout::CHW, 302),
                  random_kernels(2, 3, 2, KernelLayout::MKKC, 303));
    CHECK_THROWS_AS(run_method(ConvMethod::Conv1x1, p, GemmBackend::blocked()),
                    std::invalid_argument);
}

TEST_CASE("every method accepts HWC input and agrees with the CHW result") {
    const GemmBackend backend = GemmBackend::blocked();
    Tensor3 chw = random_tensor3(3, 6, 5, Layout::CHW, 304);
    Tensor3 hwc = convert_layout(chw, Layout::HWC);
    KernelSet ks = random_kernels(2, 3, 3, KernelLayout::MKKC, 305);

    ConvProblem p_chw(chw, ks);
    ConvProblem p_hwc(hwc, ks);
    for (const ConvMethod method : default_methods()) {
        const Tensor3 a = run_method(method, p_chw, backend);
        const Tensor3 b = run_method(method, p_hwc, backend);
        CHECK_MESSAGE(allclose(a, b, {1e-6f, 1e-7f}), to_string(method));
    }
}

TEST_CASE("methods accept MCKK kernels where the contract allows them") {
    const GemmBackend backend = GemmBackend::blocked();
    Tensor3 input = random_tensor3(3, 6, 6, Layout::CHW, 306);
    KernelSet mkkc = random_kernels(2, 3, 3, KernelLayout::MKKC, 307);
    KernelSet mckk = convert_layout(mkkc, KernelLayout::MCKK);

    ConvProblem p(input, mkkc);
    ConvProblem p_mckk(input, mckk);
    const Tensor3 expected = conv_mcmk_sum(p);
    for (const ConvMethod method :
         {ConvMethod::DirectSum, ConvMethod::Im2col, ConvMethod::Im2row, ConvMethod::Kn2row,
          ConvMethod::Kn2col}) {
        CHECK_MESSAGE(allclose(run_method(method, p_mckk, backend), expected, {1e-5f, 1e-6f}),
                      to_string(method));
    }
    // the loop nest is pinned to MKKC storage
    CHECK_THROWS_AS(run_method(ConvMethod::DirectLoopnest, p_mckk, backend),
                    std::invalid_argument);
}
