#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "convlab/conv_direct.hpp"
#include "convlab/gemm.hpp"

namespace convlab {

/// The convolution strategies the library implements. DirectSum is the
/// summation-of-planes oracle; Conv1x1 applies only to k == 1 problems and
/// is what Kn2row/Kn2col dispatch to when k == 1.
enum class ConvMethod {
    DirectSum,
    DirectLoopnest,
    Im2col,
    Im2row,
    Kn2row,
    Kn2col,
    Conv1x1,
};

std::string_view to_string(ConvMethod method);
std::optional<ConvMethod> method_from_name(std::string_view name);

/// The six always-applicable methods, in canonical order.
const std::vector<ConvMethod>& default_methods();

/// Parses a comma-separated method list ("im2col,kn2row"); throws
/// std::invalid_argument naming the first unknown entry.
std::vector<ConvMethod> parse_method_list(std::string_view csv);

/// True when the method only applies to 1x1 kernels.
bool method_requires_1x1(ConvMethod method);

/// Runs one method end to end. Kn2row/Kn2col on k == 1 problems take the
/// replication-free conv_1x1 path; Conv1x1 on k != 1 problems throws.
Tensor3 run_method(ConvMethod method, const ConvProblem& p, const GemmBackend& backend);

}  // namespace convlab
