// Command-line harness for the Morrey sequence-space entropy toolkit.
//
// Subcommands: classify, norm, opnorm, entropy, sweep, fit, selftest.
// Exit codes: 0 success, 1 invalid config, 2 resource limit, 3 selftest failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "morrey/experiment.hpp"
#include "morrey/selftest.hpp"

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<std::string> format;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

morrey::ExperimentConfig load_config(const GlobalOptions& opts) {
    if (opts.config_path.empty())
        throw std::invalid_argument("this subcommand requires --config <path>");
    auto config = morrey::parse_config(load_json(opts.config_path));
    if (opts.seed) config.seed = *opts.seed;
    if (opts.out_dir) config.out_dir = *opts.out_dir;
    if (opts.threads) config.threads = *opts.threads;
    if (opts.format) config.format = *opts.format;
    return config;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_classify(const GlobalOptions& opts) {
    const auto config = load_config(opts);
    if (config.tuples.empty()) throw std::invalid_argument("config: no tuples");
    const auto report = morrey::run_classify(config);
    const auto path = std::filesystem::path(config.out_dir) / "report.json";
    morrey::write_file_atomic(path, report.dump(2) + "\n");
    emit(report);
    std::cerr << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_norm(const GlobalOptions& opts) {
    const auto config = load_config(opts);
    const auto raw = load_json(opts.config_path);
    if (!raw.contains("sequence"))
        throw std::invalid_argument("norm: config needs a \"sequence\" object");
    const auto lam = morrey::parse_multilevel(raw.at("sequence"));
    json out;
    out["results"] = json::array();
    for (size_t i = 0; i < config.tuples.size(); ++i) {
        const auto& t = config.tuples[i];
        morrey::validate(t);
        if (t.d != lam.dim())
            throw std::invalid_argument("norm: tuple dimension != sequence dimension");
        const morrey::SeqSpaceParams sp(t.sigma1, t.u1, t.p1, t.q1);
        json rec;
        rec["tuple_index"] = i;
        rec["seq_norm"] = morrey::seq_space_norm(lam, sp);
        rec["levels"] = json::array();
        for (int j = 0; j <= lam.max_level(); ++j) {
            const auto& level = lam.level(j);
            json lv;
            lv["j"] = j;
            lv["morrey"] = morrey::morrey_level_norm(level, sp.level_params());
            lv["lp"] = morrey::lp_norm(level.coeffs(), sp.p);
            rec["levels"].push_back(std::move(lv));
        }
        out["results"].push_back(std::move(rec));
    }
    emit(out);
    return 0;
}

int cmd_opnorm(const GlobalOptions& opts, long long budget) {
    const auto config = load_config(opts);
    json out;
    out["results"] = json::array();
    for (size_t i = 0; i < config.tuples.size(); ++i) {
        const auto& t = config.tuples[i];
        morrey::validate(t);
        for (int j = config.j_min; j <= config.j_max; ++j) {
            const auto spec = morrey::seq_embedding(t, j).level_embedding(j);
            const auto cf = morrey::opnorm_closed_form(spec);
            const auto bf = morrey::opnorm_bruteforce(spec, budget, config.seed);
            json rec;
            rec["tuple_index"] = i;
            rec["j"] = j;
            rec["case"] = morrey::to_string(cf.case_tag);
            rec["upper"] = cf.value;
            rec["lower"] = cf.lower;
            rec["exact"] = cf.exact;
            rec["bruteforce"] = bf.value;
            rec["evaluations"] = bf.evaluations;
            rec["budget_exhausted"] = bf.budget_exhausted;
            out["results"].push_back(std::move(rec));
        }
    }
    emit(out);
    return 0;
}

int cmd_entropy(const GlobalOptions& opts, std::optional<double> eps) {
    const auto config = load_config(opts);
    config.validate();
    const auto& t = config.tuples.front();
    json out;
    out["series"] = json::array();
    for (int j = config.j_min; j <= config.j_max; ++j) {
        json series;
        series["j"] = j;
        if (t.p1 < t.u1)
            series["k_j"] = morrey::sparse_spread_count(t.d, j, t.u1, t.p1);
        if (eps) {
            const auto spec = morrey::seq_embedding(t, j).level_embedding(j);
            series["covering_k_for_eps"] = morrey::covering_upper_bound(spec, *eps);
            series["eps"] = *eps;
        }
        series["entries"] = json::array();
        for (const long long k : config.ks) {
            const auto row = morrey::detail::sweep_cell(t, j, k, config.methods,
                                                        config.samples, config.seed);
            json e;
            e["k"] = k;
            if (row.lower) e["lower"] = *row.lower;
            if (row.upper) e["upper"] = *row.upper;
            if (row.schuett) e["schuett_ref"] = *row.schuett;
            e["methods"] = row.methods;
            series["entries"].push_back(std::move(e));
        }
        out["series"].push_back(std::move(series));
    }
    emit(out);
    return 0;
}

int cmd_sweep(const GlobalOptions& opts) {
    const auto config = load_config(opts);
    const auto table = morrey::run_sweep(config);
    const auto path = std::filesystem::path(config.out_dir) / "sweep.csv";
    morrey::write_file_atomic(path, morrey::sweep_csv_string(table));
    if (config.format == "json") {
        json rows = json::array();
        for (const auto& r : table.rows) {
            json row;
            row["j"] = r.j;
            row["k"] = r.k;
            if (r.lower) row["lower"] = *r.lower;
            if (r.upper) row["upper"] = *r.upper;
            if (r.schuett) row["schuett_ref"] = *r.schuett;
            row["methods"] = r.methods;
            rows.push_back(std::move(row));
        }
        emit(rows);
    }
    std::cerr << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_fit(const GlobalOptions& opts, const std::string& csv_path, const std::string& column,
            long long kmin, long long kmax, const std::string& mode,
            std::optional<int> j_filter) {
    std::ifstream in(csv_path);
    if (!in) throw std::invalid_argument("cannot open csv: " + csv_path);
    const auto sweep = morrey::read_sweep_csv(in);
    if (mode != "geometric" && mode != "power")
        throw std::invalid_argument("fit: mode must be power or geometric");
    const auto fit_mode =
        mode == "geometric" ? morrey::FitMode::Geometric : morrey::FitMode::PowerLaw;
    const auto fit = morrey::run_fit(sweep, column, kmin, kmax, fit_mode, j_filter);
    auto out = morrey::fit_to_json(fit, column, fit_mode);
    if (j_filter) out["j"] = *j_filter;
    const std::string out_dir = opts.out_dir.value_or(".");
    const auto path = std::filesystem::path(out_dir) / "fit.json";
    morrey::write_file_atomic(path, out.dump(2) + "\n");
    emit(out);
    std::cerr << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_selftest(const GlobalOptions& opts) {
    const std::uint64_t seed = opts.seed.value_or(20240801ULL);
    const auto results = morrey::run_selftest(seed);
    std::cout << morrey::selftest_table(results);
    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    std::cout << (failures == 0 ? "all checks passed\n"
                                : std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional Morrey sequence spaces: norms, operator norms, "
                 "entropy-number bounds, and decay-regime classification"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "JSON experiment configuration");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the config RNG seed");
    std::string out_value;
    auto* out_opt = app.add_option("--out", out_value, "output directory");
    int threads_value = 1;
    auto* threads_opt = app.add_option("--threads", threads_value, "worker threads for sweeps");
    std::string format_value;
    auto* format_opt =
        app.add_option("--format", format_value, "csv|json stdout format for sweep");

    auto* classify = app.add_subcommand("classify", "regime classification report");
    auto* norm = app.add_subcommand("norm", "norms of a coefficient sequence");
    auto* opnorm = app.add_subcommand("opnorm", "closed-form and oracle operator norms");
    long long budget = 60000;
    opnorm->add_option("--budget", budget, "oracle evaluation budget per spec");
    auto* entropy = app.add_subcommand("entropy", "entropy bound series per level");
    double eps_value = 0.0;
    auto* eps_opt = entropy->add_option(
        "--eps", eps_value, "also report the certified covering k with e_k <= eps");
    auto* sweep = app.add_subcommand("sweep", "write the (j,k) sweep CSV");
    auto* fit = app.add_subcommand("fit", "fit a decay law to a sweep column");
    std::string csv_path, column = "lower", mode = "power";
    long long kmin = 1, kmax = 1000000;
    int j_filter_value = -1;
    fit->add_option("--csv", csv_path, "sweep CSV to read")->required();
    fit->add_option("--column", column, "lower|upper|schuett_ref");
    fit->add_option("--kmin", kmin, "window lower end");
    fit->add_option("--kmax", kmax, "window upper end");
    fit->add_option("--mode", mode, "power|geometric");
    auto* j_opt = fit->add_option("--j", j_filter_value, "restrict to one level");
    auto* selftest = app.add_subcommand("selftest", "run the property suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*seed_opt) opts.seed = seed_value;
    if (*out_opt) opts.out_dir = out_value;
    if (*threads_opt) opts.threads = threads_value;
    if (*format_opt) opts.format = format_value;

    try {
        if (*classify) return cmd_classify(opts);
        if (*norm) return cmd_norm(opts);
        if (*opnorm) return cmd_opnorm(opts, budget);
        if (*entropy)
            return cmd_entropy(opts,
                               *eps_opt ? std::optional<double>(eps_value) : std::nullopt);
        if (*sweep) return cmd_sweep(opts);
        if (*fit)
            return cmd_fit(opts, csv_path, column, kmin, kmax, mode,
                           *j_opt ? std::optional<int>(j_filter_value) : std::nullopt);
        if (*selftest) return cmd_selftest(opts);
    } catch (const morrey::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
