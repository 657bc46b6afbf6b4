#include "convlab/layers.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace convlab {

namespace {

[[noreturn]] void parse_fail(std::string_view origin, std::size_t line, const std::string& what) {
    throw std::runtime_error(std::string(origin) + ":" + std::to_string(line) + ": " + what);
}

std::size_t parse_count(std::string_view token, std::string_view field, std::string_view origin,
                        std::size_t line) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        parse_fail(origin, line, "field '" + std::string(field) + "' is not an integer: '" +
                                     std::string(token) + "'");
    if (value == 0)
        parse_fail(origin, line, "field '" + std::string(field) + "' must be positive");
    return value;
}

}  // namespace

std::vector<LayerConfig> parse_network_text(std::string_view text, std::string_view origin) {
    std::vector<LayerConfig> layers;
    std::unordered_set<std::string> seen;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        std::istringstream fields{std::string(line)};
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(std::move(tok));

        if (!tokens.empty()) {
            if (tokens.size() < 6)
                parse_fail(origin, line_no,
                           "expected 'name C H W M k [stride]', got " +
                               std::to_string(tokens.size()) + " fields");
            if (tokens.size() > 7)
                parse_fail(origin, line_no, "too many fields");

            LayerConfig layer;
            layer.name = tokens[0];
            layer.channels = parse_count(tokens[1], "C", origin, line_no);
            layer.height = parse_count(tokens[2], "H", origin, line_no);
            layer.width = parse_count(tokens[3], "W", origin, line_no);
            layer.kernel_count = parse_count(tokens[4], "M", origin, line_no);
            layer.kernel_size = parse_count(tokens[5], "k", origin, line_no);
            if (layer.kernel_size % 2 == 0)
                parse_fail(origin, line_no,
                           "even kernel size " + std::to_string(layer.kernel_size));
            if (tokens.size() == 7) layer.stride = parse_count(tokens[6], "stride", origin, line_no);

            if (!seen.insert(layer.name).second)
                parse_fail(origin, line_no, "duplicate layer name '" + layer.name + "'");
            layers.push_back(std::move(layer));
        }

        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return layers;
}

std::vector<LayerConfig> parse_network_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open network file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_network_text(buffer.str(), path.string());
}

}  // namespace convlab
