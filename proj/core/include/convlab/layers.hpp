#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace convlab {

/// One named convolution layer shape drawn from a network description file.
struct LayerConfig {
    std::string name;
    std::size_t channels = 0;      // C
    std::size_t height = 0;        // H
    std::size_t width = 0;         // W
    std::size_t kernel_count = 0;  // M
    std::size_t kernel_size = 0;   // k, odd
    std::size_t stride = 1;        // != 1 layers are skipped by the harness

    bool operator==(const LayerConfig&) const = default;
};

/// Parses the network description format: UTF-8 text, `#` starts a comment,
/// one layer per line as whitespace-separated `name C H W M k [stride]`.
/// Malformed lines (missing field, non-integer, zero dimension, even k,
/// duplicate layer name) raise std::runtime_error naming the line number.
std::vector<LayerConfig> parse_network_file(const std::filesystem::path& path);

/// Same grammar over an in-memory buffer; `origin` labels error messages.
std::vector<LayerConfig> parse_network_text(std::string_view text, std::string_view origin);

}  // namespace convlab
