#include "convlab/gemm.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace convlab {

namespace {

void check_dims(MatrixView a, MatrixView b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("gemm: inner dimensions differ, a is " +
                                    std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                                    ", b is " + std::to_string(b.rows) + "x" +
                                    std::to_string(b.cols));
    }
}

// Computes output rows [row_begin, row_end) of dst = a*b with the blocked
// schedule. k-blocks ascend in the outermost loop and t ascends within each
// block, so the per-element accumulation order is t-ascending no matter how
// rows are partitioned; any row band produces bits identical to a full run.
void blocked_rows(float* dst, MatrixView a, MatrixView b, std::size_t row_begin,
                  std::size_t row_end, std::size_t mr, std::size_t nr, std::size_t kc) {
    const std::size_t p = a.cols;
    const std::size_t n = b.cols;
    for (std::size_t kb = 0; kb < p; kb += kc) {
        const std::size_t kend = std::min(kb + kc, p);
        for (std::size_t rb = row_begin; rb < row_end; rb += mr) {
            const std::size_t rend = std::min(rb + mr, row_end);
            for (std::size_t cb = 0; cb < n; cb += nr) {
                const std::size_t cend = std::min(cb + nr, n);
                for (std::size_t r = rb; r < rend; ++r) {
                    float* out_row = dst + r * n;
                    const float* a_row = a.data + r * p;
                    for (std::size_t t = kb; t < kend; ++t) {
                        const float a_rt = a_row[t];
                        const float* b_row = b.data + t * n;
                        for (std::size_t c = cb; c < cend; ++c)
                            out_row[c] += a_rt * b_row[c];
                    }
                }
            }
        }
    }
}

}  // namespace

GemmBackend GemmBackend::reference() {
    GemmBackend be;
    be.kind = Kind::Reference;
    be.name = "reference";
    return be;
}

GemmBackend GemmBackend::blocked(std::size_t mr, std::size_t nr, std::size_t kc) {
    if (mr == 0 || nr == 0 || kc == 0)
        throw std::invalid_argument("gemm tile sizes must be positive");
    GemmBackend be;
    be.kind = Kind::Blocked;
    be.name = "blocked";
    be.block_mr = mr;
    be.block_nr = nr;
    be.block_kc = kc;
    return be;
}

GemmBackend GemmBackend::parallel(std::size_t threads, std::size_t mr, std::size_t nr,
                                  std::size_t kc) {
    if (threads == 0) throw std::invalid_argument("thread_count must be positive");
    GemmBackend be = blocked(mr, nr, kc);
    be.kind = Kind::Parallel;
    be.name = "parallel";
    be.thread_count = threads;
    return be;
}

Matrix gemm_reference(MatrixView a, MatrixView b) {
    check_dims(a, b);
    Matrix out(a.rows, b.cols);
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t c = 0; c < b.cols; ++c) {
            float acc = 0.0f;
            for (std::size_t t = 0; t < a.cols; ++t)
                acc += a.data[r * a.cols + t] * b.data[t * b.cols + c];
            out(r, c) = acc;
        }
    }
    return out;
}

Matrix gemm_blocked(MatrixView a, MatrixView b, const GemmBackend& backend) {
    check_dims(a, b);
    Matrix out(a.rows, b.cols);
    blocked_rows(out.data().data(), a, b, 0, a.rows, backend.block_mr, backend.block_nr,
                 backend.block_kc);
    return out;
}

Matrix gemm_parallel(MatrixView a, MatrixView b, const GemmBackend& backend) {
    check_dims(a, b);
    Matrix out(a.rows, b.cols);
    const std::size_t m = a.rows;
    const std::size_t workers = std::min(std::max<std::size_t>(backend.thread_count, 1), m);
    const std::size_t band = (m + workers - 1) / workers;

    if (workers == 1) {
        blocked_rows(out.data().data(), a, b, 0, m, backend.block_mr, backend.block_nr,
                     backend.block_kc);
        return out;
    }

    float* dst = out.data().data();
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * band;
        const std::size_t end = std::min(begin + band, m);
        if (begin >= end) break;
        pool.emplace_back([=] {
            blocked_rows(dst, a, b, begin, end, backend.block_mr, backend.block_nr,
                         backend.block_kc);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

Matrix gemm(MatrixView a, MatrixView b, const GemmBackend& backend) {
    switch (backend.kind) {
        case GemmBackend::Kind::Reference:
            return gemm_reference(a, b);
        case GemmBackend::Kind::Blocked:
            return gemm_blocked(a, b, backend);
        case GemmBackend::Kind::Parallel:
            return gemm_parallel(a, b, backend);
        case GemmBackend::Kind::External: {
            if (!backend.external)
                throw std::invalid_argument("external backend '" + backend.name +
                                            "' has no implementation");
            check_dims(a, b);
            Matrix out = backend.external(a, b);
            if (out.rows() != a.rows || out.cols() != b.cols)
                throw std::runtime_error("external backend '" + backend.name +
                                         "' returned a wrongly shaped result");
            return out;
        }
    }
    throw std::logic_error("unreachable backend kind");
}

namespace {

std::mutex g_registry_mutex;
std::map<std::string, std::function<Matrix(MatrixView, MatrixView)>, std::less<>>& registry() {
    static std::map<std::string, std::function<Matrix(MatrixView, MatrixView)>, std::less<>> r;
    return r;
}

}  // namespace

void register_gemm_backend(std::string name, std::function<Matrix(MatrixView, MatrixView)> fn) {
    std::lock_guard lock(g_registry_mutex);
    registry()[std::move(name)] = std::move(fn);
}

std::optional<GemmBackend> make_backend(std::string_view name, std::size_t threads) {
    if (name == "reference") return GemmBackend::reference();
    if (name == "blocked") return GemmBackend::blocked();
    if (name == "parallel") return GemmBackend::parallel(std::max<std::size_t>(threads, 1));
    std::lock_guard lock(g_registry_mutex);
    if (auto it = registry().find(name); it != registry().end()) {
        GemmBackend be;
        be.kind = GemmBackend::Kind::External;
        be.name = std::string(name);
        be.external = it->second;
        return be;
    }
    return std::nullopt;
}

std::vector<std::string> builtin_backend_names() {
    return {"reference", "blocked", "parallel"};
}

}  // namespace convlab
