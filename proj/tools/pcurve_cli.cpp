// pcurve: analyze periodic planar curves, fuzz the theorem battery, run the
// Schur chord comparison and perturb specs into general position.
//
// Exit codes: 0 all checks pass, 2 a theorem check failed, 3 input or
// validation error.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pcurve/generators.hpp"
#include "pcurve/io.hpp"
#include "pcurve/pcurve.hpp"
#include "pcurve/svg.hpp"

namespace {

using namespace pcurve;

constexpr int kExitOk = 0;
constexpr int kExitTheorem = 2;
constexpr int kExitInput = 3;

int exit_for(const CurveError& e) {
    return e.code() == ErrorCode::PipelineMismatch ? kExitTheorem : kExitInput;
}

Tolerances tolerances_with(std::optional<double> closure) {
    Tolerances tol = default_tolerances();
    if (closure) tol.closure = *closure;
    return tol;
}

void emit(const json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") std::cout << text;
    else write_text_file(path, text);
}

struct AnalyzeArgs {
    std::string spec;
    int samples = kDefaultSamples;
    std::optional<double> tol;
    std::string report;
    std::string svg;
};

int cmd_analyze(const AnalyzeArgs& args) {
    const CurveSpec spec = load_curve_spec(args.spec);
    const ArcCurve curve = reparametrize_arclength(spec, args.samples, tolerances_with(args.tol));
    const AnalysisReport report = analyze(curve);
    emit(to_json(report), args.report);
    if (!args.svg.empty()) write_text_file(args.svg, render_svg(curve, report));
    if (!report.ok()) {
        std::cerr << "theorem check failed for '" << report.label << "'\n";
        return kExitTheorem;
    }
    return kExitOk;
}

struct FuzzArgs {
    std::string seeds;
    int harmonics = 6;
    double amplitude = 2.0;
    int samples = kDefaultSamples;
    unsigned jobs = 0;
    double perturbation = 1e-4;
    std::string summary;
    std::string failures_dir;
};

enum class Outcome { CrossingFree, Passed, IllConditioned, Failed, Error };

struct SeedResult {
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::Error;
    CurveSpec spec;
    std::string detail;
    std::optional<json> report;
};

SeedResult run_seed(std::uint64_t seed, const FuzzArgs& args, const Tolerances& tol) {
    SeedResult r;
    r.seed = seed;
    try {
        r.spec = random_curve(seed, args.harmonics, args.amplitude);
        std::optional<ArcCurve> curve;
        curve.emplace(reparametrize_arclength(r.spec, args.samples, tol));
        if (!all_simple(find_crossings(*curve))) {
            r.spec = perturb_to_general_position(r.spec, args.perturbation, seed, args.samples, tol).spec;
            curve.emplace(reparametrize_arclength(r.spec, args.samples, tol));
        }
        const AnalysisReport rep = analyze(*curve);
        r.report = to_json(rep);
        if (!rep.ok()) r.outcome = Outcome::Failed;
        else if (rep.crossings.empty()) r.outcome = Outcome::CrossingFree;
        else if (rep.prop_b_status == "ill-conditioned") r.outcome = Outcome::IllConditioned;
        else r.outcome = Outcome::Passed;
    } catch (const CurveError& e) {
        r.outcome = e.code() == ErrorCode::PipelineMismatch ? Outcome::Failed : Outcome::Error;
        r.detail = e.what();
    }
    return r;
}

int cmd_fuzz(const FuzzArgs& args) {
    static const std::regex range(R"(^\s*(\d+)\s*\.\.\s*(\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(args.seeds, m, range)) {
        throw CurveError(ErrorCode::InvalidInput, "--seeds must look like A..B");
    }
    const std::uint64_t lo = std::stoull(m[1]), hi = std::stoull(m[2]);
    if (hi < lo) throw CurveError(ErrorCode::InvalidInput, "empty seed range " + args.seeds);
    if (args.harmonics < 1 || !(args.amplitude > 0.0)) {
        throw CurveError(ErrorCode::InvalidInput, "need harmonics >= 1 and amplitude > 0");
    }
    if (!args.failures_dir.empty()) std::filesystem::create_directories(args.failures_dir);
    const Tolerances tol = default_tolerances();

    const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    std::vector<SeedResult> results(count);
    unsigned jobs = args.jobs ? args.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) results[i] = run_seed(lo + i, args, tol);
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // single writer, seed order
    int free = 0, passed = 0, ill = 0, failed = 0, errors = 0;
    json failures = json::array();
    for (const SeedResult& r : results) {
        switch (r.outcome) {
        case Outcome::CrossingFree: ++free; break;
        case Outcome::Passed: ++passed; break;
        case Outcome::IllConditioned: ++ill; break;
        case Outcome::Failed: ++failed; break;
        case Outcome::Error: ++errors; break;
        }
        if (r.outcome != Outcome::Failed && r.outcome != Outcome::Error) continue;
        json entry{{"seed", r.seed}, {"spec", to_json(r.spec)}, {"detail", r.detail}};
        if (r.report) entry["report"] = *r.report;
        failures.push_back(entry);
        if (!args.failures_dir.empty()) {
            const auto path = std::filesystem::path(args.failures_dir) / ("seed-" + std::to_string(r.seed) + ".json");
            write_text_file(path.string(), to_json(r.spec).dump(2) + "\n");
        }
        std::cerr << "seed " << r.seed << ": " << (r.detail.empty() ? "theorem check failed" : r.detail) << "\n";
    }
    const json summary{{"total", count},   {"crossing-free", free}, {"passed", passed},
                       {"ill-conditioned", ill}, {"failed", failed}, {"errors", errors},
                       {"failures", failures}};
    emit(summary, args.summary);
    return failed || errors ? kExitTheorem : kExitOk;
}

struct SchurArgs {
    std::string profile;
    std::string report;
};

int cmd_schur(const SchurArgs& args) {
    const json j = read_json_file(args.profile);
    if (!j.is_object() || !j.contains("length") || !j.contains("kappa1") || !j.contains("kappa2")) {
        throw CurveError(ErrorCode::InvalidInput, "profile needs length, kappa1, kappa2");
    }
    const double length = j["length"].get<double>();
    const int grid = j.value("grid", 64);
    const SchurReport rep =
        schur_chord_compare(profile_from_json(j["kappa1"]), profile_from_json(j["kappa2"]), length, grid);
    emit(to_json(rep), args.report);
    if (!rep.ok) {
        std::cerr << "chord inequality failed, min margin " << rep.min_margin << "\n";
        return kExitTheorem;
    }
    return kExitOk;
}

struct PerturbArgs {
    std::string spec;
    double magnitude = 0.0;
    std::uint64_t seed = 0;
    int samples = kDefaultSamples;
    std::string out;
};

int cmd_perturb(const PerturbArgs& args) {
    const CurveSpec spec = load_curve_spec(args.spec);
    const PerturbResult r = perturb_to_general_position(spec, args.magnitude, args.seed, args.samples);
    json crossings = json::array();
    for (const Crossing& c : r.crossings) crossings.push_back(to_json(c));
    emit(json{{"spec", to_json(r.spec)},
              {"magnitude", r.magnitude},
              {"attempts", r.attempts},
              {"crossings", crossings}},
         args.out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic planar curves: crossings, short loops and curvature bounds"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "analyze one curve spec");
    analyze_cmd->add_option("spec", analyze_args.spec, "curve spec JSON")->required();
    analyze_cmd->add_option("--samples", analyze_args.samples, "arc-length samples")->check(CLI::Range(kMinSamples, 1 << 22));
    analyze_cmd->add_option("--tol", analyze_args.tol, "closure tolerance")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--report", analyze_args.report, "report JSON path (default stdout)");
    analyze_cmd->add_option("--svg", analyze_args.svg, "SVG path");

    FuzzArgs fuzz_args;
    auto* fuzz_cmd = app.add_subcommand("fuzz", "run the theorem battery over random curves");
    fuzz_cmd->add_option("--seeds", fuzz_args.seeds, "seed range A..B")->required();
    fuzz_cmd->add_option("--harmonics", fuzz_args.harmonics, "Fourier harmonics");
    fuzz_cmd->add_option("--amplitude", fuzz_args.amplitude, "coefficient amplitude");
    fuzz_cmd->add_option("--samples", fuzz_args.samples, "arc-length samples")->check(CLI::Range(kMinSamples, 1 << 22));
    fuzz_cmd->add_option("--jobs", fuzz_args.jobs, "worker threads (0 = hardware)");
    fuzz_cmd->add_option("--perturbation", fuzz_args.perturbation, "jitter for non-simple curves")->check(CLI::PositiveNumber);
    fuzz_cmd->add_option("--summary", fuzz_args.summary, "summary JSON path (default stdout)");
    fuzz_cmd->add_option("--failures-dir", fuzz_args.failures_dir, "directory for failing specs");

    SchurArgs schur_args;
    auto* schur_cmd = app.add_subcommand("schur", "chord comparison for two curvature profiles");
    schur_cmd->add_option("--profile", schur_args.profile, "profile JSON {length, kappa1, kappa2}")->required();
    schur_cmd->add_option("--report", schur_args.report, "report JSON path (default stdout)");

    PerturbArgs perturb_args;
    auto* perturb_cmd = app.add_subcommand("perturb", "jitter a spec into general position");
    perturb_cmd->add_option("spec", perturb_args.spec, "curve spec JSON")->required();
    perturb_cmd->add_option("--magnitude", perturb_args.magnitude, "jitter bound")->required()->check(CLI::NonNegativeNumber);
    perturb_cmd->add_option("--seed", perturb_args.seed, "jitter seed")->required();
    perturb_cmd->add_option("--samples", perturb_args.samples, "arc-length samples")->check(CLI::Range(kMinSamples, 1 << 22));
    perturb_cmd->add_option("--out", perturb_args.out, "output JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(analyze_args);
        if (*fuzz_cmd) return cmd_fuzz(fuzz_args);
        if (*schur_cmd) return cmd_schur(schur_args);
        if (*perturb_cmd) return cmd_perturb(perturb_args);
    } catch (const CurveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
