#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convlab/tensor.hpp"

namespace convlab {

/// GEMM implementation selector plus the tile/thread parameters the built-in
/// variants honor. External backends only have to satisfy the C = A*B
/// contract within allclose tolerances; the bitwise guarantees below apply
/// to the built-in kinds only.
struct GemmBackend {
    enum class Kind { Reference, Blocked, Parallel, External };

    Kind kind = Kind::Blocked;
    std::string name = "blocked";
    std::size_t block_mr = 64;
    std::size_t block_nr = 64;
    std::size_t block_kc = 256;
    std::size_t thread_count = 1;
    std::function<Matrix(MatrixView, MatrixView)> external;

    static GemmBackend reference();
    static GemmBackend blocked(std::size_t mr = 64, std::size_t nr = 64, std::size_t kc = 256);
    static GemmBackend parallel(std::size_t threads, std::size_t mr = 64, std::size_t nr = 64,
                                std::size_t kc = 256);
};

/// Plain triple loop, result(r,c) = sum_t a(r,t)*b(t,c) with t ascending.
/// This is the bit-reproducible oracle the other variants are held to.
Matrix gemm_reference(MatrixView a, MatrixView b);

/// Cache-blocked variant. k-blocks are processed in ascending order and t
/// ascends within each block, so per-element accumulation order matches the
/// reference loop and the result is bitwise-equal to gemm_reference.
Matrix gemm_blocked(MatrixView a, MatrixView b, const GemmBackend& backend = GemmBackend::blocked());

/// Row-partitioned parallel variant: output rows are split into disjoint
/// contiguous bands, one worker per band, each running the blocked inner
/// procedure. Results are bitwise-equal to gemm_blocked with the same tile
/// sizes for any thread_count.
Matrix gemm_parallel(MatrixView a, MatrixView b, const GemmBackend& backend);

/// Dispatches on backend.kind.
Matrix gemm(MatrixView a, MatrixView b, const GemmBackend& backend);

/// Registers an externally provided GEMM under `name` so make_backend can
/// select it from the CLI. Replaces any previous registration of that name.
void register_gemm_backend(std::string name, std::function<Matrix(MatrixView, MatrixView)> fn);

/// Resolves "reference", "blocked", "parallel" or a registered external
/// backend name. Returns nullopt for unknown names.
std::optional<GemmBackend> make_backend(std::string_view name, std::size_t threads = 1);

std::vector<std::string> builtin_backend_names();

}  // namespace convlab
