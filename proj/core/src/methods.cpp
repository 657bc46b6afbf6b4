#include "convlab/methods.hpp"

#include <stdexcept>
#include <string>

#include "convlab/conv_im2.hpp"
#include "convlab/conv_kn2.hpp"

namespace convlab {

std::string_view to_string(ConvMethod method) {
    switch (method) {
        case ConvMethod::DirectSum: return "direct-sum";
        case ConvMethod::DirectLoopnest: return "direct-loopnest";
        case ConvMethod::Im2col: return "im2col";
        case ConvMethod::Im2row: return "im2row";
        case ConvMethod::Kn2row: return "kn2row";
        case ConvMethod::Kn2col: return "kn2col";
        case ConvMethod::Conv1x1: return "conv1x1";
    }
    return "unknown";
}

std::optional<ConvMethod> method_from_name(std::string_view name) {
    if (name == "direct-sum") return ConvMethod::DirectSum;
    if (name == "direct-loopnest") return ConvMethod::DirectLoopnest;
    if (name == "im2col") return ConvMethod::Im2col;
    if (name == "im2row") return ConvMethod::Im2row;
    if (name == "kn2row") return ConvMethod::Kn2row;
    if (name == "kn2col") return ConvMethod::Kn2col;
    if (name == "conv1x1") return ConvMethod::Conv1x1;
    return std::nullopt;
}

const std::vector<ConvMethod>& default_methods() {
    static const std::vector<ConvMethod> all = {
        ConvMethod::DirectSum, ConvMethod::DirectLoopnest, ConvMethod::Im2col,
        ConvMethod::Im2row,    ConvMethod::Kn2row,         ConvMethod::Kn2col,
    };
    return all;
}

std::vector<ConvMethod> parse_method_list(std::string_view csv) {
    std::vector<ConvMethod> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string_view item =
            csv.substr(pos, comma == std::string_view::npos ? csv.size() - pos : comma - pos);
        if (!item.empty()) {
            const auto method = method_from_name(item);
            if (!method)
                throw std::invalid_argument("unknown method '" + std::string(item) + "'");
            out.push_back(*method);
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty method list");
    return out;
}

bool method_requires_1x1(ConvMethod method) { return method == ConvMethod::Conv1x1; }

Tensor3 run_method(ConvMethod method, const ConvProblem& p, const GemmBackend& backend) {
    switch (method) {
        case ConvMethod::DirectSum:
            return conv_mcmk_sum(p);
        case ConvMethod::DirectLoopnest:
            return conv_mcmk_loopnest(p);
        case ConvMethod::Im2col:
            return conv_im2col(p, backend);
        case ConvMethod::Im2row:
            return conv_im2row(p, backend);
        case ConvMethod::Kn2row:
            if (p.kernel_size() == 1) return conv_1x1(p.input(), p.kernels(), backend);
            return conv_kn2row(p, backend);
        case ConvMethod::Kn2col:
            if (p.kernel_size() == 1) return conv_1x1(p.input(), p.kernels(), backend);
            return conv_kn2col(p, backend);
        case ConvMethod::Conv1x1:
            if (p.kernel_size() != 1)
                throw std::invalid_argument("conv1x1 requires a 1x1 kernel, got k = " +
                                            std::to_string(p.kernel_size()));
            return conv_1x1(p.input(), p.kernels(), backend);
    }
    throw std::logic_error("unreachable method");
}

}  // namespace convlab
