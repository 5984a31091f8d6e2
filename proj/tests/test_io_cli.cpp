#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "pcurve/svg.hpp"
#include "test_support.hpp"

using namespace pcurve;
using namespace testing_support;
namespace fs = std::filesystem;

#ifndef PCURVE_CLI
#define PCURVE_CLI "pcurve"
#endif

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pcurve-test-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(PCURVE_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Tag balance check: every opened element is closed in order.
bool well_formed(const std::string& xml) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = xml.find('<', pos)) != std::string::npos) {
        const std::size_t close = xml.find('>', pos);
        if (close == std::string::npos) return false;
        const std::string tag = xml.substr(pos + 1, close - pos - 1);
        pos = close + 1;
        if (tag.empty() || tag.front() == '?' || tag.front() == '!') continue;
        if (tag.back() == '/') continue;
        if (tag.front() == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
    }
    return stack.empty();
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
    return n;
}

} // namespace

TEST(Json, SpecRoundTrip) {
    const CurveSpec s = random_curve(3, 6, 2.0);
    EXPECT_TRUE(curve_spec_from_json(json::parse(to_json(s).dump())) == s);
}

TEST(Json, RejectsBadSpecs) {
    for (const char* text : {R"([1, 2])", R"({"x_sin": "no"})", R"({"y_cos": [1, "a"]})", R"({"y_const": []})"}) {
        try {
            curve_spec_from_json(json::parse(text));
            FAIL() << text;
        } catch (const CurveError& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
        }
    }
}

TEST(Json, ReportRoundTripIsExact) {
    for (const char* name : {"prolate15.json", "remark3.json", "remark2.json", "straight.json"}) {
        const AnalysisReport r = analyze(reparametrize_arclength(fixture(name)));
        const json j = to_json(r);
        const AnalysisReport back = report_from_json(json::parse(j.dump()));
        EXPECT_EQ(to_json(back).dump(), j.dump()) << name;
        ASSERT_EQ(back.crossings.size(), r.crossings.size());
        for (std::size_t i = 0; i < r.crossings.size(); ++i) EXPECT_TRUE(back.crossings[i] == r.crossings[i]);
        EXPECT_EQ(back.ell, r.ell);
    }
}

TEST(Json, ReportsAreDeterministic) {
    const CurveSpec s = fixture("remark3.json");
    EXPECT_EQ(to_json(analyze(reparametrize_arclength(s))).dump(), to_json(analyze(reparametrize_arclength(s))).dump());
}

TEST(Svg, WellFormedWithOneMarkerPerCrossing) {
    for (const char* name : {"prolate15.json", "remark3.json", "remark2.json", "straight.json", "wind2.json"}) {
        const ArcCurve c = reparametrize_arclength(fixture(name));
        const AnalysisReport r = analyze(c);
        const std::string svg = render_svg(c, r);
        EXPECT_TRUE(well_formed(svg)) << name;
        EXPECT_EQ(count_of(svg, "class=\"crossing\""), r.crossings.size()) << name;
        EXPECT_EQ(count_of(svg, "class=\"winding\""), r.crossings.size()) << name;
    }
}

TEST(Svg, BalanceCheckCatchesBrokenXml) {
    EXPECT_FALSE(well_formed("<svg><g></svg>"));
    EXPECT_TRUE(well_formed("<svg><g><circle/></g></svg>"));
}

TEST(Cli, AnalyzeWritesReportAndSvg) {
    TempDir tmp;
    ASSERT_EQ(run("analyze " + fixture_path("prolate15.json") + " --report " + (tmp / "r.json") + " --svg " +
                  (tmp / "r.svg")),
              0);
    const json j = json::parse(slurp(tmp / "r.json"));
    EXPECT_EQ(j["crossings"].size(), 1u);
    EXPECT_EQ(j["short_loop_route"], "winding-1-translate");
    EXPECT_TRUE(j["ok"].get<bool>());
    const std::string svg = slurp(tmp / "r.svg");
    EXPECT_TRUE(well_formed(svg));
    EXPECT_EQ(count_of(svg, "class=\"crossing\""), 1u);

    // re-analysis from the CLI matches the library
    const AnalysisReport lib = analyze(reparametrize_arclength(fixture("prolate15.json")));
    EXPECT_EQ(j.dump(), to_json(lib).dump());
}

TEST(Cli, PerturbedSpecReproducesCrossings) {
    TempDir tmp;
    ASSERT_EQ(run("perturb " + fixture_path("tangent.json") + " --magnitude 1e-4 --seed 7 --out " + (tmp / "p.json")),
              0);
    const json p = json::parse(slurp(tmp / "p.json"));
    EXPECT_LE(p["magnitude"].get<double>(), 1e-4 * (1 + 1e-9));
    write_text_file(tmp / "spec.json", p["spec"].dump());
    ASSERT_EQ(run("analyze " + (tmp / "spec.json") + " --report " + (tmp / "r.json")), 0);
    const json r = json::parse(slurp(tmp / "r.json"));
    EXPECT_EQ(r["crossings"].dump(), p["crossings"].dump());
}

TEST(Cli, FuzzSummary) {
    TempDir tmp;
    ASSERT_EQ(run("fuzz --seeds 1..10 --harmonics 6 --amplitude 0.01 --summary " + (tmp / "s.json")), 0);
    const json s = json::parse(slurp(tmp / "s.json"));
    EXPECT_EQ(s["total"], 10);
    EXPECT_EQ(s["crossing-free"], 10);
    EXPECT_EQ(s["failed"], 0);

    ASSERT_EQ(run("fuzz --seeds 1..12 --jobs 3 --summary " + (tmp / "a.json")), 0);
    ASSERT_EQ(run("fuzz --seeds 1..12 --jobs 1 --summary " + (tmp / "b.json")), 0);
    EXPECT_EQ(slurp(tmp / "a.json"), slurp(tmp / "b.json"));
}

TEST(Cli, SchurProfiles) {
    TempDir tmp;
    write_text_file(tmp / "eq.json", R"({"length": 3.141592653589793, "kappa1": 1, "kappa2": 1})");
    write_text_file(tmp / "bad.json", R"({"length": 3.141592653589793, "kappa1": 1, "kappa2": {"sin": [1.5]}})");
    ASSERT_EQ(run("schur --profile " + (tmp / "eq.json") + " --report " + (tmp / "r.json")), 0);
    const json r = json::parse(slurp(tmp / "r.json"));
    EXPECT_NEAR(r["min_margin"].get<double>(), 0.0, 1e-12);
    EXPECT_EQ(run("schur --profile " + (tmp / "bad.json")), 3);
}

TEST(Cli, ExitCodeMatrix) {
    TempDir tmp;
    write_text_file(tmp / "broken.json", "{ not json");
    write_text_file(tmp / "cusp.json", R"({"x_sin": [-1.0], "y_cos": [1.0]})");
    struct Case {
        std::string args;
        int code;
    };
    const std::vector<Case> cases = {
        {"analyze " + fixture_path("straight.json"), 0},
        {"analyze " + fixture_path("prolate15.json"), 0},
        {"analyze " + fixture_path("remark2.json"), 0},
        {"analyze " + fixture_path("remark3.json"), 0},
        {"analyze " + fixture_path("tangent.json"), 3},
        {"analyze " + (tmp / "missing.json"), 3},
        {"analyze " + (tmp / "broken.json"), 3},
        {"analyze " + (tmp / "cusp.json"), 3},
        {"analyze " + fixture_path("prolate15.json") + " --samples 100", 3},
        {"analyze " + fixture_path("prolate15.json") + " --tol -1", 3},
        {"fuzz --seeds 5..1", 3},
        {"fuzz --seeds nonsense", 3},
        {"perturb " + fixture_path("tangent.json") + " --magnitude 0 --seed 1", 3},
        {"perturb " + fixture_path("prolate15.json") + " --magnitude 0 --seed 1", 0},
        {"", 3},
    };
    for (const Case& c : cases) EXPECT_EQ(run(c.args), c.code) << c.args;
}

TEST(Cli, ToleranceFromEnvironment) {
    TempDir tmp;
    ::setenv("PCURVE_TOL", "1e-8", 1);
    const int code = run("analyze " + fixture_path("prolate15.json") + " --report " + (tmp / "r.json"));
    ::unsetenv("PCURVE_TOL");
    ASSERT_EQ(code, 0);
    EXPECT_EQ(json::parse(slurp(tmp / "r.json"))["crossings"].size(), 1u);
}
