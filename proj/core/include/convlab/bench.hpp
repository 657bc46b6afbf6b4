#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "convlab/gemm.hpp"
#include "convlab/layers.hpp"
#include "convlab/methods.hpp"
#include "convlab/tensor.hpp"

namespace convlab {

/// Closed-form per-method operand sizes; bytes = 4 * elements throughout
/// (f32). `intermediate` is the method's extra working set: the k^2*C*H*W
/// patch matrix for im2col/im2row, the k^2*M*H*W pre-shift-add product for
/// kn2row/kn2col, zero for the direct methods and conv1x1.
struct FootprintBytes {
    std::uint64_t input_bytes = 0;         // 4 * C*H*W
    std::uint64_t kernel_bytes = 0;        // 4 * M*k*k*C
    std::uint64_t intermediate_bytes = 0;  // method-dependent
    std::uint64_t output_bytes = 0;        // 4 * M*H*W

    bool operator==(const FootprintBytes&) const = default;
};

/// Pure arithmetic, no allocation.
FootprintBytes footprint(const LayerConfig& layer, ConvMethod method);

/// Timing statistics and footprint figures for one (layer, method) pair.
/// `samples` holds the raw per-run seconds the statistics were computed
/// from and `output_checksum` fingerprints the method output; neither is
/// serialized to CSV, and equality covers the CSV-visible fields only.
struct BenchResult {
    std::string layer;
    std::string method;
    std::uint32_t runs = 0;
    double mean_s = 0.0;
    double min_s = 0.0;
    double stddev_s = 0.0;
    std::uint64_t input_bytes = 0;
    std::uint64_t kernel_bytes = 0;
    std::uint64_t intermediate_bytes = 0;
    std::uint64_t output_bytes = 0;

    std::vector<double> samples;
    std::uint64_t output_checksum = 0;

    friend bool operator==(const BenchResult& a, const BenchResult& b) {
        return a.layer == b.layer && a.method == b.method && a.runs == b.runs &&
               a.mean_s == b.mean_s && a.min_s == b.min_s && a.stddev_s == b.stddev_s &&
               a.input_bytes == b.input_bytes && a.kernel_bytes == b.kernel_bytes &&
               a.intermediate_bytes == b.intermediate_bytes && a.output_bytes == b.output_bytes;
    }
};

/// Runs one untimed warm-up, then `runs` timed end-to-end executions of the
/// method (patch/reorder construction and post-passes included; input
/// generation excluded) and reports mean/min/stddev over the monotonic
/// clock. stddev is the population deviation, so runs == 1 gives 0.
/// Allocation failure raises std::runtime_error naming the computed byte
/// requirement. Strided layers are rejected.
BenchResult benchmark(const LayerConfig& layer, ConvMethod method, std::uint32_t runs,
                      const GemmBackend& backend, std::uint64_t seed);

struct VerifyEntry {
    std::string layer;
    std::string method;
    bool pass = false;
    float max_abs_err = 0.0f;
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    std::vector<std::string> skipped;  // human-readable skip notes

    bool all_pass() const;
};

struct VerifyOptions {
    std::vector<ConvMethod> methods = default_methods();
    std::uint64_t seed = 0;
    std::size_t max_hw = 0;  // 0 = no cap; otherwise H and W are clamped
    Tolerance tol{1e-5f, 1e-6f};
    /// Test hook: applied to each method output before comparison. Lets the
    /// tests corrupt results deliberately and check that failures surface.
    std::function<void(Tensor3&)> perturb_output;
};

/// Generates deterministic data per layer, runs conv_mcmk_sum as the oracle
/// and records a pass/fail entry per (layer, method). Comparison runs at
/// scaled_tolerance(opt.tol, max|oracle|): the abs term is anchored to the
/// layer's output magnitude so deep layers are held to the same relative
/// standard as unit-scale ones. Strided layers and conv1x1 on k != 1 layers
/// are skipped, not failed.
VerifyReport verify(const std::vector<LayerConfig>& layers, const GemmBackend& backend,
                    const VerifyOptions& opt = {});

/// CSV schema (header byte-exact):
/// layer,method,runs,mean_s,min_s,stddev_s,input_bytes,kernel_bytes,intermediate_bytes,output_bytes
/// Timing fields are written in shortest round-trip form, so
/// parse_csv(emit_csv(x)) == x.
void emit_csv(const std::vector<BenchResult>& results, std::ostream& out);
void emit_csv(const std::vector<BenchResult>& results, const std::filesystem::path& path);
std::vector<BenchResult> parse_csv(std::istream& in);
std::vector<BenchResult> parse_csv(const std::filesystem::path& path);

extern const char* const kCsvHeader;

}  // namespace convlab
