// convlab command-line harness: verification, benchmarking and footprint
// accounting for the convolution methods over network layer-shape files.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convlab/bench.hpp"
#include "convlab/gemm.hpp"
#include "convlab/layers.hpp"
#include "convlab/methods.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
    std::string net_path;
    std::string methods_csv;
    std::string backend_name = "blocked";
    std::size_t threads = 1;
    std::uint64_t seed = 0;
};

std::vector<convlab::ConvMethod> resolve_methods(const std::string& csv) {
    if (csv.empty()) return convlab::default_methods();
    return convlab::parse_method_list(csv);
}

convlab::GemmBackend resolve_backend(const CommonArgs& args) {
    auto backend = convlab::make_backend(args.backend_name, args.threads);
    if (!backend) throw std::invalid_argument("unknown backend '" + args.backend_name + "'");
    if (backend->kind == convlab::GemmBackend::Kind::Parallel ||
        backend->kind == convlab::GemmBackend::Kind::Blocked) {
        backend->thread_count = std::max<std::size_t>(args.threads, 1);
    }
    return *backend;
}

int run_verify(const CommonArgs& args, std::size_t max_hw, bool corrupt) {
    const auto layers = convlab::parse_network_file(args.net_path);
    convlab::VerifyOptions opt;
    opt.methods = resolve_methods(args.methods_csv);
    opt.seed = args.seed;
    opt.max_hw = max_hw;
    if (corrupt) {
        opt.perturb_output = [](convlab::Tensor3& t) { t.data()[0] += 1.0f; };
    }

    const convlab::VerifyReport report = convlab::verify(layers, resolve_backend(args), opt);

    for (const auto& note : report.skipped) std::cerr << "skip: " << note << '\n';
    std::size_t failures = 0;
    for (const auto& entry : report.entries) {
        const bool ok = entry.pass;
        failures += ok ? 0 : 1;
        std::cout << (ok ? "pass" : "FAIL") << "  " << entry.layer << "  " << entry.method
                  << "  max|err| = " << entry.max_abs_err << '\n';
    }
    std::cout << report.entries.size() << " checks, " << failures << " failures, "
              << report.skipped.size() << " skipped\n";
    return report.all_pass() ? kExitOk : kExitVerifyFailure;
}

int run_bench(const CommonArgs& args, std::uint32_t runs, const std::string& out_path) {
    const auto layers = convlab::parse_network_file(args.net_path);
    const auto methods = resolve_methods(args.methods_csv);
    const auto backend = resolve_backend(args);

    std::vector<convlab::BenchResult> results;
    for (const auto& layer : layers) {
        if (layer.stride != 1) {
            std::cerr << "skip: " << layer.name << ": stride " << layer.stride
                      << " (strided convolution is out of scope)\n";
            continue;
        }
        for (const auto method : methods) {
            if (convlab::method_requires_1x1(method) && layer.kernel_size != 1) {
                std::cerr << "skip: " << layer.name << ": conv1x1 needs k == 1\n";
                continue;
            }
            convlab::BenchResult r = convlab::benchmark(layer, method, runs, backend, args.seed);
            std::cout << r.layer << "  " << r.method << "  mean " << r.mean_s << " s  min "
                      << r.min_s << " s  stddev " << r.stddev_s << " s\n";
            results.push_back(std::move(r));
        }
    }

    if (!out_path.empty()) {
        convlab::emit_csv(results, std::filesystem::path(out_path));
        std::cout << "wrote " << results.size() << " rows to " << out_path << '\n';
    }
    return kExitOk;
}

int run_footprint(const CommonArgs& args, const std::string& out_path) {
    const auto layers = convlab::parse_network_file(args.net_path);
    const auto methods = resolve_methods(args.methods_csv);

    std::vector<convlab::BenchResult> rows;
    for (const auto& layer : layers) {
        if (layer.stride != 1) {
            std::cerr << "skip: " << layer.name << ": stride " << layer.stride
                      << " (strided convolution is out of scope)\n";
            continue;
        }
        for (const auto method : methods) {
            if (convlab::method_requires_1x1(method) && layer.kernel_size != 1) continue;
            const convlab::FootprintBytes fp = convlab::footprint(layer, method);
            convlab::BenchResult row;
            row.layer = layer.name;
            row.method = std::string(convlab::to_string(method));
            row.runs = 0;  // footprint rows carry no timing
            row.input_bytes = fp.input_bytes;
            row.kernel_bytes = fp.kernel_bytes;
            row.intermediate_bytes = fp.intermediate_bytes;
            row.output_bytes = fp.output_bytes;
            std::cout << row.layer << "  " << row.method << "  input " << fp.input_bytes
                      << "  kernels " << fp.kernel_bytes << "  intermediate "
                      << fp.intermediate_bytes << "  output " << fp.output_bytes << " bytes\n";
            rows.push_back(std::move(row));
        }
    }

    if (!out_path.empty()) {
        convlab::emit_csv(rows, std::filesystem::path(out_path));
        std::cout << "wrote " << rows.size() << " rows to " << out_path << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convolution method laboratory: verify, bench, footprint"};
    app.require_subcommand(1);

    CommonArgs args;
    std::size_t max_hw = 0;
    std::uint32_t runs = 25;
    std::string out_path;
    bool corrupt = false;

    CLI::App* verify_cmd = app.add_subcommand("verify", "check every method against the oracle");
    verify_cmd->add_option("--net", args.net_path, "network description file")->required();
    verify_cmd->add_option("--methods", args.methods_csv, "comma-separated method list");
    verify_cmd->add_option("--seed", args.seed, "data generation seed");
    verify_cmd->add_option("--max-hw", max_hw, "cap layer H and W at this value");
    verify_cmd->add_option("--backend", args.backend_name, "gemm backend name");
    verify_cmd->add_option("--threads", args.threads, "backend thread count");
    verify_cmd->add_flag("--corrupt", corrupt, "perturb outputs (negative-control hook)")
        ->group("");

    CLI::App* bench_cmd = app.add_subcommand("bench", "time methods on each layer");
    bench_cmd->add_option("--net", args.net_path, "network description file")->required();
    bench_cmd->add_option("--methods", args.methods_csv, "comma-separated method list");
    bench_cmd->add_option("--runs", runs, "timed runs per (layer, method)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--backend", args.backend_name, "gemm backend name")
        ->capture_default_str();
    bench_cmd->add_option("--threads", args.threads, "backend thread count")
        ->capture_default_str();
    bench_cmd->add_option("--out", out_path, "write results CSV here");
    bench_cmd->add_option("--seed", args.seed, "data generation seed");

    CLI::App* fp_cmd = app.add_subcommand("footprint", "closed-form memory accounting");
    fp_cmd->add_option("--net", args.net_path, "network description file")->required();
    fp_cmd->add_option("--methods", args.methods_csv, "comma-separated method list");
    fp_cmd->add_option("--out", out_path, "write footprint CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify_cmd->parsed()) return run_verify(args, max_hw, corrupt);
        if (bench_cmd->parsed()) return run_bench(args, runs, out_path);
        if (fp_cmd->parsed()) return run_footprint(args, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
