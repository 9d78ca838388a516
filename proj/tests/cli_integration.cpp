// Drives the installed CLI end to end: config in, report/sweep/fit files out,
// exit codes, and byte-level determinism of repeated sweeps.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef MORREY_CLI_PATH
#error "MORREY_CLI_PATH must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int checks = 0;
int failures = 0;

void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
        ++failures;
        std::cerr << "[FAIL] " << what << "\n";
    }
}

int run(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd =
        std::string(MORREY_CLI_PATH) + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "morrey_cli_it";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";

    const fs::path config = dir / "config.json";
    {
        std::ofstream f(config);
        f << R"({
  "tuples": [
    {"d": 1, "sigma1": "0.4", "sigma2": 0, "u1": 2, "p1": 1, "q1": 2, "u2": 2, "p2": 2, "q2": 2},
    {"d": 1, "sigma1": "0.6", "sigma2": 0, "u1": 2, "p1": 1, "q1": 2, "u2": 2, "p2": 2, "q2": 2}
  ],
  "levels": {"min": 1, "max": 2},
  "k": {"start": 1, "stop": 8},
  "methods": ["volume", "packing", "covering", "schuett", "step3"],
  "seed": 4242,
  "samples": 800,
  "sequence": {"d": 1, "levels": [[0.0], [1.0, 1.0]]}
})";
    }

    // classify: report.json with the alpha example
    {
        const int rc = run("classify --config " + config.string() + " --out " +
                               (dir / "run1").string(),
                           out);
        expect(rc == 0, "classify exit code");
        const auto report = json::parse(slurp(dir / "run1" / "report.json"));
        expect(report.at("results").size() == 2, "classify records");
        expect(report["results"][0]["kind"] == "AlphaGap", "classify kind[0]");
        expect(std::abs(report["results"][0]["exponent"].get<double>() - 0.3) < 1e-12,
               "classify alpha exponent");
        expect(report["results"][1]["kind"] == "Classical", "classify kind[1]");
    }

    // norm: the worked example  sigma = 1 = 1/2 + d/u, q = inf would give 2;
    // with q1 = 2 here, check the level-1 morrey norm instead
    {
        const int rc = run("norm --config " + config.string(), out);
        expect(rc == 0, "norm exit code");
        const auto norms = json::parse(slurp(out));
        const double m1 = norms["results"][0]["levels"][1]["morrey"].get<double>();
        expect(std::abs(m1 - std::sqrt(2.0)) < 1e-12, "norm level-1 value");
    }

    // opnorm: TWO_SIDED bracket with oracle inside
    {
        const int rc = run("opnorm --config " + config.string() + " --budget 30000", out);
        expect(rc == 0, "opnorm exit code");
        const auto res = json::parse(slurp(out));
        for (const auto& rec : res.at("results")) {
            expect(rec["case"] == "TWO_SIDED", "opnorm case tag");
            const double bf = rec["bruteforce"].get<double>();
            expect(bf <= rec["upper"].get<double>() * (1 + 1e-9), "opnorm bracket upper");
            expect(bf >= rec["lower"].get<double>() * (1 - 1e-12), "opnorm bracket lower");
        }
    }

    // sweep twice with the same seed: byte-identical files; --threads too
    {
        const int rc1 = run("sweep --config " + config.string() + " --out " +
                                (dir / "s1").string(),
                            out);
        const int rc2 = run("sweep --config " + config.string() + " --out " +
                                (dir / "s2").string() + " --threads 4",
                            out);
        expect(rc1 == 0 && rc2 == 0, "sweep exit codes");
        const std::string a = slurp(dir / "s1" / "sweep.csv");
        const std::string b = slurp(dir / "s2" / "sweep.csv");
        expect(!a.empty() && a == b, "sweep byte-identical across runs and threads");
        expect(a.find("# morrey-entropy sweep schema v1") == 0, "sweep schema header");
    }

    // sweep --format json echoes the rows
    {
        const int rc = run("sweep --config " + config.string() + " --out " +
                               (dir / "s3").string() + " --format json",
                           out);
        expect(rc == 0, "sweep json exit code");
        const auto rows = json::parse(slurp(out));
        expect(rows.is_array() && rows.size() == 16, "sweep json rows");
        expect(rows[0].contains("lower") && rows[0].contains("upper"), "sweep json fields");
    }

    // fit on the sweep: volumetric column is exactly geometric at fixed j
    {
        const int rc = run("fit --csv " + (dir / "s1" / "sweep.csv").string() +
                               " --column lower --kmin 4 --kmax 8 --mode geometric --j 2" +
                               " --out " + (dir / "f1").string(),
                           out);
        expect(rc == 0, "fit exit code");
        const auto fit = json::parse(slurp(dir / "f1" / "fit.json"));
        expect(std::abs(fit["slope"].get<double>() + std::log(2.0) / 4.0) < 1e-6,
               "fit slope -ln2/D");
    }

    // entropy subcommand emits series with k_j annotation
    {
        const int rc = run("entropy --config " + config.string(), out);
        expect(rc == 0, "entropy exit code");
        const auto series = json::parse(slurp(out));
        expect(series.at("series").size() == 2, "entropy series count");
        expect(series["series"][1]["k_j"].get<long long>() == 2, "entropy k_j");
    }

    // selftest passes
    {
        const int rc = run("selftest --seed 7", out);
        expect(rc == 0, "selftest exit code");
        expect(slurp(out).find("all checks passed") != std::string::npos, "selftest table");
    }

    // resource limit: exit code 2
    {
        const fs::path big = dir / "big.json";
        std::ofstream f(big);
        f << R"({"tuples": [{"d": 2, "sigma1": 1, "sigma2": 0, "u1": 1, "p1": 1, "u2": 2, "p2": 2}],
                 "levels": {"min": 6, "max": 6}, "k": [1], "methods": ["volume"]})";
        f.close();
        const int rc = run("entropy --config " + big.string() + " --eps 0.01", out);
        expect(rc == 2, "resource limit exit code");
    }

    // invalid config: exit code 1
    {
        const fs::path bad = dir / "bad.json";
        std::ofstream f(bad);
        f << R"({"tuples": [{"d": 1, "sigma1": 1, "sigma2": 0, "u1": 1, "p1": 2, "u2": 2, "p2": 2}],
                 "k": [1, 2]})";
        f.close();
        const int rc = run("sweep --config " + bad.string(), out);
        expect(rc == 1, "invalid config exit code");
    }

    fs::remove_all(dir);
    if (failures == 0) {
        std::printf("cli integration: %d checks passed\n", checks);
        return 0;
    }
    std::printf("cli integration: %d/%d checks failed\n", failures, checks);
    return 1;
}
