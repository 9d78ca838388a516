#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "morrey/entropy.hpp"
#include "morrey/fit.hpp"
#include "morrey/operators.hpp"
#include "morrey/regimes.hpp"
#include "morrey/rng.hpp"

namespace morrey {

inline const std::set<std::string>& known_methods() {
    static const std::set<std::string> m = {"volume", "packing", "covering", "schuett",
                                            "step3"};
    return m;
}

/// Numeric config values: integers and strings ("3/4", "0.4") convert
/// exactly; bare JSON floats are snapped to a small-denominator rational
/// within 1e-12 relative, matching the classifier's boundary tolerance.
inline Rational parse_scalar(const nlohmann::json& v) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) {
        const auto snapped = Rational::from_double(v.get<double>());
        if (!snapped)
            throw std::invalid_argument(
                "config: float has no small-denominator rational within 1e-12; "
                "write it as a string like \"3/4\"");
        return *snapped;
    }
    throw std::invalid_argument("config: expected a number or a rational string");
}

inline RationalParamTuple parse_tuple(const nlohmann::json& j) {
    RationalParamTuple t;
    t.d = j.at("d").get<int>();
    t.sigma1 = parse_scalar(j.at("sigma1"));
    t.sigma2 = parse_scalar(j.at("sigma2"));
    t.u1 = parse_scalar(j.at("u1"));
    t.p1 = parse_scalar(j.at("p1"));
    t.q1 = j.contains("q1") ? parse_scalar(j.at("q1")) : Rational(2);
    t.u2 = parse_scalar(j.at("u2"));
    t.p2 = parse_scalar(j.at("p2"));
    t.q2 = j.contains("q2") ? parse_scalar(j.at("q2")) : Rational(2);
    return t;
}

struct ExperimentConfig {
    std::vector<RationalParamTuple> tuples;
    int j_min = 1;
    int j_max = 3;
    std::vector<long long> ks;
    std::set<std::string> methods = {"volume"};
    std::uint64_t seed = 1;
    int samples = 2000;
    int threads = 1;
    std::string out_dir = ".";
    std::string format = "csv";

    void validate() const {
        if (tuples.empty()) throw std::invalid_argument("config: no tuples");
        if (j_min < 0 || j_max < j_min) throw std::invalid_argument("config: bad level range");
        for (const auto& t : tuples)
            if (j_max * t.d > 12)
                throw std::invalid_argument("config: j_max * d must be <= 12");
        if (ks.empty()) throw std::invalid_argument("config: empty k schedule");
        long long prev = 0;
        for (const long long k : ks) {
            if (k <= prev) throw std::invalid_argument("config: k values must be positive and increasing");
            prev = k;
        }
        for (const auto& m : methods)
            if (!known_methods().count(m))
                throw std::invalid_argument("config: unknown method " + m);
        if (threads < 1) throw std::invalid_argument("config: threads >= 1");
        if (samples < 1) throw std::invalid_argument("config: samples >= 1");
        if (format != "csv" && format != "json")
            throw std::invalid_argument("config: format must be csv or json");
    }
};

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("tuples"))
        for (const auto& t : j.at("tuples")) c.tuples.push_back(parse_tuple(t));
    if (j.contains("levels")) {
        c.j_min = j.at("levels").at("min").get<int>();
        c.j_max = j.at("levels").at("max").get<int>();
    }
    if (j.contains("k")) {
        const auto& kj = j.at("k");
        if (kj.is_array()) {
            for (const auto& v : kj) c.ks.push_back(v.get<long long>());
        } else {
            const long long start = kj.at("start").get<long long>();
            const long long stop = kj.at("stop").get<long long>();
            const long long step = kj.contains("step") ? kj.at("step").get<long long>() : 1;
            if (step < 1) throw std::invalid_argument("config: k.step >= 1");
            for (long long k = start; k <= stop; k += step) c.ks.push_back(k);
        }
    } else {
        for (long long k = 1; k <= 16; ++k) c.ks.push_back(k);
    }
    if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : j.at("methods")) c.methods.insert(m.get<std::string>());
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    return c;
}

inline MultiLevelSequence parse_multilevel(const nlohmann::json& j) {
    const int d = j.at("d").get<int>();
    std::vector<LevelSequence> levels;
    int lev = 0;
    for (const auto& arr : j.at("levels")) {
        std::vector<double> coeffs;
        for (const auto& v : arr) coeffs.push_back(v.get<double>());
        levels.emplace_back(d, lev++, std::move(coeffs));
    }
    return MultiLevelSequence(std::move(levels));
}

namespace detail {

inline nlohmann::json regime_record(const RationalParamTuple& t) {
    nlohmann::json rec;
    const auto b = compactness_breakdown(t);
    const auto r = classify(t);
    rec["kind"] = to_string(r.kind);
    rec["exponent"] = r.exponent;
    if (r.gap) rec["gap"] = *r.gap;
    rec["delta"] = b.delta.to_double();
    rec["terms"] = {{"zero", 0.0},
                    {"u_term", b.u_term.to_double()},
                    {"p_term", b.p_term.to_double()},
                    {"threshold", b.threshold.to_double()},
                    {"boundary", b.boundary.to_double()}};
    rec["terms_exact"] = {{"u_term", b.u_term.str()},
                          {"p_term", b.p_term.str()},
                          {"delta", b.delta.str()},
                          {"boundary", b.boundary.str()}};
    std::vector<std::string> conditions;
    if (b.threshold < b.delta) conditions.push_back("cond-comp");
    if (std::max(Rational(0), b.u_term) < b.p_term) conditions.push_back("bd3acompn");
    if (r.kind == RegimeKind::AlphaGap) conditions.push_back("alpha-window");
    if (r.kind == RegimeKind::Boundary) conditions.push_back("delta=1/p1-1/p2");
    rec["conditions"] = conditions;
    return rec;
}

}  // namespace detail

/// Classification report: one record per tuple, order preserved; invalid
/// tuples become structured error records instead of aborting the batch.
inline nlohmann::json run_classify(const ExperimentConfig& config) {
    nlohmann::json out;
    out["results"] = nlohmann::json::array();
    for (size_t i = 0; i < config.tuples.size(); ++i) {
        nlohmann::json rec;
        rec["index"] = i;
        try {
            rec.update(detail::regime_record(config.tuples[i]));
            rec["valid"] = true;
        } catch (const std::exception& e) {
            rec["valid"] = false;
            rec["error"] = e.what();
        }
        out["results"].push_back(std::move(rec));
    }
    return out;
}

struct SweepRow {
    int j = 0;
    long long k = 0;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> schuett;
    std::string methods;
};

/// The full embedding a sweep studies; its per-level blocks id_j are the
/// sweep cells.
inline SeqEmbedding seq_embedding(const RationalParamTuple& t, int max_level) {
    validate(t);
    return SeqEmbedding{t.d, max_level, SeqSpaceParams(t.sigma1, t.u1, t.p1, t.q1),
                        SeqSpaceParams(t.sigma2, t.u2, t.p2, t.q2)};
}

struct SweepTable {
    std::vector<SweepRow> rows;
};

namespace detail {

inline SweepRow sweep_cell(const RationalParamTuple& t, int j, long long k,
                           const std::set<std::string>& methods, int samples,
                           std::uint64_t seed) {
    SweepRow row;
    row.j = j;
    row.k = k;
    const LevelEmbedding spec = seq_embedding(t, j).level_embedding(j);
    std::string lower_tag = "none";
    double lower = -1.0;
    if (methods.count("volume")) {
        lower = volume_lower_bound(spec, k);
        lower_tag = "volume";
    }
    if (methods.count("packing")) {
        const double v = packing_lower_bound(spec, k, samples, mix_seed(seed, j, k));
        if (v > lower) {
            lower = v;
            lower_tag = "packing";
        }
    }
    if (methods.count("step3") && t.p1 < t.p2 && t.p2 / t.u2 > t.p1 / t.u1 && t.p1 < t.u1 &&
        k == sparse_spread_count(t.d, j, t.u1, t.p1)) {
        const double v = step3_lower_diagram(t.d, j, t);
        if (v > lower) {
            lower = v;
            lower_tag = "step3";
        }
    }
    if (lower >= 0.0) row.lower = lower;

    std::string upper_tag = "none";
    if (methods.count("covering")) {
        const auto cover = covering_eps_for_k(spec, k);
        row.upper = cover.eps;
        upper_tag = cover.limited ? "covering:limit" : "covering";
    }
    if (methods.count("schuett"))
        row.schuett = schuett_reference(t.p1, t.p2, spec.coefficients(), k);
    row.methods = "lower:" + lower_tag + "|upper:" + upper_tag;
    return row;
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

/// The (j, k) sweep for the first tuple. Cells are independent and may be
/// computed on several threads; assembly is ordered by (j, k), so output is
/// deterministic for a fixed seed regardless of scheduling.
inline SweepTable run_sweep(const ExperimentConfig& config) {
    config.validate();
    const auto& t = config.tuples.front();
    validate(t);
    std::vector<std::pair<int, long long>> cells;
    for (int j = config.j_min; j <= config.j_max; ++j)
        for (const long long k : config.ks) cells.emplace_back(j, k);
    SweepTable table;
    table.rows.resize(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
            table.rows[i] = detail::sweep_cell(t, cells[i].first, cells[i].second,
                                               config.methods, config.samples, config.seed);
    };
    if (config.threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < config.threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return table;
}

inline constexpr const char* kSweepSchema = "# morrey-entropy sweep schema v1";

inline std::string sweep_csv_string(const SweepTable& table) {
    std::string out;
    out += kSweepSchema;
    out += "\nj,k,lower,upper,schuett_ref,methods\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.j);
        out += ',';
        out += std::to_string(r.k);
        out += ',';
        if (r.lower) out += detail::fmt_double(*r.lower);
        out += ',';
        if (r.upper) out += detail::fmt_double(*r.upper);
        out += ',';
        if (r.schuett) out += detail::fmt_double(*r.schuett);
        out += ',';
        out += r.methods;
        out += '\n';
    }
    return out;
}

/// Atomic write: temp file in the same directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "."
                                                                   : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

struct CsvSweep {
    std::vector<SweepRow> rows;
};

inline CsvSweep read_sweep_csv(std::istream& in) {
    CsvSweep out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header row
            continue;
        }
        SweepRow row;
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        row.j = std::stoi(field);
        std::getline(ss, field, ',');
        row.k = std::stoll(field);
        std::getline(ss, field, ',');
        if (!field.empty()) row.lower = std::stod(field);
        std::getline(ss, field, ',');
        if (!field.empty()) row.upper = std::stod(field);
        std::getline(ss, field, ',');
        if (!field.empty()) row.schuett = std::stod(field);
        std::getline(ss, field);
        row.methods = field;
        out.rows.push_back(std::move(row));
    }
    return out;
}

/// Least-squares fit on a sweep column restricted to a k window (and
/// optionally one level j). Columns: lower | upper | schuett_ref.
inline FitResult run_fit(const CsvSweep& sweep, const std::string& column, long long k_min,
                         long long k_max, FitMode mode, std::optional<int> j_filter) {
    std::vector<long long> ks;
    std::vector<double> vals;
    for (const auto& row : sweep.rows) {
        if (row.k < k_min || row.k > k_max) continue;
        if (j_filter && row.j != *j_filter) continue;
        std::optional<double> v;
        if (column == "lower")
            v = row.lower;
        else if (column == "upper")
            v = row.upper;
        else if (column == "schuett_ref")
            v = row.schuett;
        else
            throw std::invalid_argument("run_fit: unknown column " + column);
        if (v && *v > 0.0 && std::isfinite(*v)) {
            ks.push_back(row.k);
            vals.push_back(*v);
        }
    }
    if (ks.size() < 3) throw std::invalid_argument("run_fit: fewer than 3 usable rows in window");
    return fit_decay(ks, vals, mode);
}

inline nlohmann::json fit_to_json(const FitResult& fit, const std::string& column,
                                  FitMode mode) {
    nlohmann::json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["k_min"] = fit.k_min;
    j["k_max"] = fit.k_max;
    j["degenerate"] = fit.degenerate;
    j["column"] = column;
    j["mode"] = mode == FitMode::PowerLaw ? "power" : "geometric";
    return j;
}

}  // namespace morrey
