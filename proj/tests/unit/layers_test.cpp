#include <doctest.h>

#include <stdexcept>
#include <string>

#include "convlab/layers.hpp"

using namespace convlab;

namespace {

std::string error_of(const char* text) {
    try {
        parse_network_text(text, "test.net");
    } catch (const std::runtime_error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("a plain layer line maps fields directly") {
    const auto layers = parse_network_text("conv1_1 3 224 224 64 3\n", "test.net");
    REQUIRE(layers.size() == 1);
    CHECK(layers[0].name == "conv1_1");
    CHECK(layers[0].channels == 3);
    CHECK(layers[0].height == 224);
    CHECK(layers[0].width == 224);
    CHECK(layers[0].kernel_count == 64);
    CHECK(layers[0].kernel_size == 3);
    CHECK(layers[0].stride == 1);
}

TEST_CASE("empty input gives an empty list") {
    CHECK(parse_network_text("", "test.net").empty());
    CHECK(parse_network_text("\n\n# only comments\n", "test.net").empty());
}

TEST_CASE("order is preserved and comments are stripped") {
    const auto layers = parse_network_text(
        "# header comment\n"
        "a 1 4 4 1 1\n"
        "b 2 4 4 2 3  # trailing comment\n"
        "\n"
        "c 3 4 4 1 5\n",
        "test.net");
    REQUIRE(layers.size() == 3);
    CHECK(layers[0].name == "a");
    CHECK(layers[1].name == "b");
    CHECK(layers[2].name == "c");
    CHECK(layers[1].kernel_size == 3);
}

TEST_CASE("stride column is optional and parsed") {
    const auto layers = parse_network_text("conv1 3 227 227 96 11 4\n", "test.net");
    REQUIRE(layers.size() == 1);
    CHECK(layers[0].stride == 4);
}

TEST_CASE("even kernel size is a parse error naming the line") {
    const std::string err = error_of("ok 1 4 4 1 1\nbad 1 4 4 1 2\n");
    CHECK(err.find("test.net:2") != std::string::npos);
    CHECK(err.find("even kernel size") != std::string::npos);
}

TEST_CASE("missing fields are a parse error") {
    const std::string err = error_of("short 1 4 4\n");
    CHECK(err.find("test.net:1") != std::string::npos);
    CHECK(err.find("expected") != std::string::npos);
}

TEST_CASE("non-integer fields are a parse error") {
    const std::string err = error_of("bad 1 4 four 1 3\n");
    CHECK(err.find("test.net:1") != std::string::npos);
    CHECK(err.find("not an integer") != std::string::npos);
}

TEST_CASE("zero dimensions are rejected") {
    const std::string err = error_of("bad 0 4 4 1 3\n");
    CHECK(err.find("must be positive") != std::string::npos);
}

TEST_CASE("duplicate layer names are a parse error") {
    const std::string err = error_of("dup 1 4 4 1 3\ndup 2 4 4 1 3\n");
    CHECK(err.find("test.net:2") != std::string::npos);
    CHECK(err.find("duplicate layer name") != std::string::npos);
}

TEST_CASE("too many fields are rejected") {
    const std::string err = error_of("bad 1 4 4 1 3 1 9\n");
    CHECK(err.find("too many fields") != std::string::npos);
}

TEST_CASE("missing files raise an error") {
    CHECK_THROWS_AS(parse_network_file("/nonexistent/nowhere.net"), std::runtime_error);
}

#ifdef CONVLAB_DATA_DIR
TEST_CASE("shipped network files parse") {
    const std::filesystem::path dir = CONVLAB_DATA_DIR;
    const auto alexnet = parse_network_file(dir / "alexnet.net");
    CHECK(alexnet.size() == 5);
    CHECK(alexnet.front().stride == 4);  // conv1 is strided and will be skipped

    const auto vgg = parse_network_file(dir / "vgg16.net");
    CHECK(vgg.size() == 13);
    for (const auto& layer : vgg) CHECK(layer.kernel_size == 3);

    const auto googlenet = parse_network_file(dir / "googlenet.net");
    CHECK(googlenet.size() >= 20);
    CHECK(googlenet.front().name == "conv1/7x7_s2");
}
#endif
