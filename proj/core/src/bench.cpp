#include "convlab/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace convlab {

const char* const kCsvHeader =
    "layer,method,runs,mean_s,min_s,stddev_s,input_bytes,kernel_bytes,intermediate_bytes,"
    "output_bytes";

namespace {

constexpr std::uint64_t kBytesPerElement = 4;

std::uint64_t fnv1a(std::span<const float> data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const float v : data) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int shift = 0; shift < 32; shift += 8) {
            h ^= (bits >> shift) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

[[noreturn]] void throw_allocation_failure(const LayerConfig& layer, const std::string& method,
                                           const FootprintBytes& fp) {
    const std::uint64_t total =
        fp.input_bytes + fp.kernel_bytes + fp.intermediate_bytes + fp.output_bytes;
    throw std::runtime_error("benchmark: allocation failure for layer '" + layer.name +
                             "', method " + method + ": requires " + std::to_string(total) +
                             " bytes (input " + std::to_string(fp.input_bytes) + " + kernels " +
                             std::to_string(fp.kernel_bytes) + " + intermediate " +
                             std::to_string(fp.intermediate_bytes) + " + output " +
                             std::to_string(fp.output_bytes) + ")");
}

}  // namespace

FootprintBytes footprint(const LayerConfig& layer, ConvMethod method) {
    const std::uint64_t c = layer.channels;
    const std::uint64_t h = layer.height;
    const std::uint64_t w = layer.width;
    const std::uint64_t m = layer.kernel_count;
    const std::uint64_t k = layer.kernel_size;

    FootprintBytes fp;
    fp.input_bytes = kBytesPerElement * c * h * w;
    fp.kernel_bytes = kBytesPerElement * m * k * k * c;
    fp.output_bytes = kBytesPerElement * m * h * w;
    switch (method) {
        case ConvMethod::Im2col:
        case ConvMethod::Im2row:
            fp.intermediate_bytes = kBytesPerElement * k * k * c * h * w;
            break;
        case ConvMethod::Kn2row:
        case ConvMethod::Kn2col:
            fp.intermediate_bytes = kBytesPerElement * k * k * m * h * w;
            break;
        case ConvMethod::DirectSum:
        case ConvMethod::DirectLoopnest:
        case ConvMethod::Conv1x1:
            fp.intermediate_bytes = 0;
            break;
    }
    return fp;
}

BenchResult benchmark(const LayerConfig& layer, ConvMethod method, std::uint32_t runs,
                      const GemmBackend& backend, std::uint64_t seed) {
    if (runs < 1) throw std::invalid_argument("benchmark: runs must be >= 1");
    if (layer.stride != 1)
        throw std::invalid_argument("benchmark: strided layer '" + layer.name +
                                    "' is not supported");
    if (method_requires_1x1(method) && layer.kernel_size != 1)
        throw std::invalid_argument("benchmark: conv1x1 requires k == 1 (layer '" + layer.name +
                                    "')");

    const FootprintBytes fp = footprint(layer, method);

    BenchResult result;
    result.layer = layer.name;
    result.method = std::string(to_string(method));
    result.runs = runs;
    result.input_bytes = fp.input_bytes;
    result.kernel_bytes = fp.kernel_bytes;
    result.intermediate_bytes = fp.intermediate_bytes;
    result.output_bytes = fp.output_bytes;

    try {
        Tensor3 input = random_tensor3(layer.channels, layer.height, layer.width, Layout::CHW,
                                       rng::split(seed, 0));
        KernelSet kernels = random_kernels(layer.kernel_count, layer.kernel_size, layer.channels,
                                           KernelLayout::MKKC, rng::split(seed, 1));
        ConvProblem problem(std::move(input), std::move(kernels));

        {
            const Tensor3 warmup = run_method(method, problem, backend);
            result.output_checksum = fnv1a(warmup.data());
        }

        result.samples.reserve(runs);
        for (std::uint32_t r = 0; r < runs; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const Tensor3 out = run_method(method, problem, backend);
            const auto t1 = std::chrono::steady_clock::now();
            result.samples.push_back(std::chrono::duration<double>(t1 - t0).count());
            if (r == 0 && fnv1a(out.data()) != result.output_checksum)
                throw std::runtime_error("benchmark: nondeterministic output for layer '" +
                                         layer.name + "', method " + result.method);
        }
    } catch (const std::bad_alloc&) {
        throw_allocation_failure(layer, result.method, fp);
    } catch (const std::length_error&) {
        throw_allocation_failure(layer, result.method, fp);
    }

    double sum = 0.0;
    double min = result.samples.front();
    for (const double s : result.samples) {
        sum += s;
        min = std::min(min, s);
    }
    const double mean = sum / static_cast<double>(runs);
    double var = 0.0;
    for (const double s : result.samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(runs);

    result.mean_s = mean;
    result.min_s = min;
    result.stddev_s = std::sqrt(var);
    return result;
}

bool VerifyReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const VerifyEntry& e) { return e.pass; });
}

VerifyReport verify(const std::vector<LayerConfig>& layers, const GemmBackend& backend,
                    const VerifyOptions& opt) {
    VerifyReport report;
    for (std::size_t idx = 0; idx < layers.size(); ++idx) {
        const LayerConfig& layer = layers[idx];
        if (layer.stride != 1) {
            report.skipped.push_back(layer.name + ": stride " + std::to_string(layer.stride) +
                                     " (strided convolution is out of scope)");
            continue;
        }

        const std::size_t height =
            opt.max_hw > 0 ? std::min(layer.height, opt.max_hw) : layer.height;
        const std::size_t width = opt.max_hw > 0 ? std::min(layer.width, opt.max_hw) : layer.width;

        Tensor3 input = random_tensor3(layer.channels, height, width, Layout::CHW,
                                       rng::split(opt.seed, 2 * idx));
        KernelSet kernels = random_kernels(layer.kernel_count, layer.kernel_size, layer.channels,
                                           KernelLayout::MKKC, rng::split(opt.seed, 2 * idx + 1));

        std::optional<ConvProblem> problem;
        try {
            problem.emplace(std::move(input), std::move(kernels));
        } catch (const std::invalid_argument& err) {
            report.skipped.push_back(layer.name + ": " + err.what());
            continue;
        }

        const Tensor3 oracle = conv_mcmk_sum(*problem);
        // Anchor the absolute term to the oracle's magnitude: rounding in the
        // k^2*C-long reductions scales with the partial sums, not with the
        // final value, so a unit-scale abs_tol would misreport healthy
        // cancellation cells on deep layers.
        const Tolerance tol = scaled_tolerance(opt.tol, max_abs(oracle));
        for (const ConvMethod method : opt.methods) {
            if (method_requires_1x1(method) && layer.kernel_size != 1) {
                report.skipped.push_back(layer.name + ": conv1x1 needs k == 1, layer has k = " +
                                         std::to_string(layer.kernel_size));
                continue;
            }
            Tensor3 out = run_method(method, *problem, backend);
            if (opt.perturb_output) opt.perturb_output(out);
            VerifyEntry entry;
            entry.layer = layer.name;
            entry.method = std::string(to_string(method));
            entry.max_abs_err = max_abs_diff(out, oracle);
            entry.pass = allclose(out, oracle, tol);
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

void emit_csv(const std::vector<BenchResult>& results, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const BenchResult& r : results) {
        out << r.layer << ',' << r.method << ',' << r.runs << ',' << format_double(r.mean_s)
            << ',' << format_double(r.min_s) << ',' << format_double(r.stddev_s) << ','
            << r.input_bytes << ',' << r.kernel_bytes << ',' << r.intermediate_bytes << ','
            << r.output_bytes << '\n';
    }
}

void emit_csv(const std::vector<BenchResult>& results, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    emit_csv(results, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(const std::string& field, std::size_t line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad numeric field '" +
                                 field + "'");
    return value;
}

}  // namespace

std::vector<BenchResult> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header: " + line);

    std::vector<BenchResult> results;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 10)
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 10 " +
                                     "fields, got " + std::to_string(fields.size()));
        BenchResult r;
        r.layer = fields[0];
        r.method = fields[1];
        r.runs = parse_number<std::uint32_t>(fields[2], line_no);
        r.mean_s = parse_number<double>(fields[3], line_no);
        r.min_s = parse_number<double>(fields[4], line_no);
        r.stddev_s = parse_number<double>(fields[5], line_no);
        r.input_bytes = parse_number<std::uint64_t>(fields[6], line_no);
        r.kernel_bytes = parse_number<std::uint64_t>(fields[7], line_no);
        r.intermediate_bytes = parse_number<std::uint64_t>(fields[8], line_no);
        r.output_bytes = parse_number<std::uint64_t>(fields[9], line_no);
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<BenchResult> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv: " + path.string());
    return parse_csv(in);
}

}  // namespace convlab
