// geovar: command-line front end for the geodesic variance experiments.
//
// All radii are hyperbolic. Results go to stdout (JSON or CSV); every run
// also appends one line with its wall time to <results-dir>/ledger.jsonl.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "geovar/geovar.hpp"

using nlohmann::json;
using namespace geovar;

namespace {

struct Options {
    std::string command;
    std::int64_t D = 0;
    double r = 0.0;
    double R = 0.01;
    double L = 50.0;
    double A = 10.0;
    std::size_t n = 10000;
    std::uint64_t seed = 42;
    unsigned workers = 1;
    double step = kDefaultStep;
    double t = 0.0;
    double dist = -1.0;
    double zx = 0.0, zy = 1.0, wx = 0.1, wy = 1.5, vx = 0.1, vy = 1.5;
    double mixing_constant = 1.0;
    int grid = 101;
    std::string out;
    std::string format = "json";
    std::string cache_dir = "cache";
    std::string results_dir = "results";
    bool assert_bounds = false;
};

// Everything that determines the output; worker count and paths excluded.
json config_echo(const Options& o) {
    return {{"D", o.D},       {"r", o.r},       {"R", o.R},         {"L", o.L},
            {"A", o.A},       {"n", o.n},       {"seed", o.seed},   {"step", o.step},
            {"t", o.t},       {"dist", o.dist}, {"zx", o.zx},       {"zy", o.zy},
            {"wx", o.wx},     {"wy", o.wy},     {"vx", o.vx},       {"vy", o.vy},
            {"grid", o.grid}, {"mixing_constant", o.mixing_constant}};
}

std::string git_blob_sha1(const std::string& content) {
    const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) {
        throw std::runtime_error("sha1 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

json estimate_json(const Estimate& e) {
    return {{"mean", e.mean},           {"stderr", e.std_error}, {"n", e.n},
            {"seed", e.seed},           {"prediction", e.prediction},
            {"z_score", e.z_score},     {"warnings", e.warnings}};
}

struct Outcome {
    json result;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    bool assertion_failed = false;
    std::string assertion_message;
};

std::string cell(double v) { return format_real(v); }

void table_from_result(Outcome& out) {
    if (!out.csv_header.empty()) return;
    for (auto& [k, v] : out.result.items()) {
        if (v.is_primitive()) out.csv_header.push_back(k);
    }
    std::vector<std::string> row;
    for (const auto& k : out.csv_header) {
        const json& v = out.result[k];
        row.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
    out.csv_rows.push_back(row);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

ExperimentConfig experiment(const Options& o) {
    ExperimentConfig c;
    c.ann = AnnulusSpec(o.r, o.R);
    c.L = o.L;
    c.D = o.D;
    c.A = o.A;
    c.n_samples = o.n;
    c.seed = o.seed;
    c.workers = o.workers;
    c.step = o.step;
    return c;
}

Outcome cmd_gfun(const Options& o) {
    if (o.grid < 2) throw std::invalid_argument("--grid must be at least 2");
    Outcome out;
    out.csv_header = {"w", "G", "G_prime", "asymptotic_ratio"};
    json rows = json::array();
    for (int i = 0; i < o.grid; ++i) {
        const double w = static_cast<double>(i) / o.grid;
        const double g = G_value(w), gp = G_prime(w), ratio = g / G_leading_term(w);
        rows.push_back({{"w", w}, {"G", g}, {"G_prime", gp}, {"asymptotic_ratio", ratio}});
        out.csv_rows.push_back({cell(w), cell(g), cell(gp), cell(ratio)});
    }
    out.result = {{"rows", rows}};
    return out;
}

Outcome cmd_forms(const Options& o) {
    const Discriminant disc(o.D);
    FormCache cache(o.cache_dir.empty() ? std::filesystem::path() : std::filesystem::path(o.cache_dir));
    const auto rec = cache.get(disc);
    const double L1 = dirichlet_L1(disc);
    const double lhs = static_cast<double>(rec->h_plus) * rec->geodesic_length;
    const double rhs = 2.0 * disc.sqrt() * L1;
    const double residual = std::abs(lhs - rhs) / rhs;
    json cycles = json::array();
    for (const auto& f : rec->cycle_representatives) cycles.push_back({f.a, f.b, f.c});
    Outcome out;
    out.result = {{"D", rec->D},
                  {"h_plus", rec->h_plus},
                  {"t", rec->t.str()},
                  {"u", rec->u.str()},
                  {"geodesic_length", rec->geodesic_length},
                  {"L1_chi", L1},
                  {"class_number_residual", residual},
                  {"squarefree", rec->squarefree},
                  {"cycles", cycles}};
    if (o.assert_bounds && !(residual < 1e-9)) {
        out.assertion_failed = true;
        out.assertion_message = "class number formula residual " + std::to_string(residual) + " >= 1e-9";
    }
    return out;
}

Outcome cmd_plot(const Options& o) {
    if (!is_fundamental_discriminant(o.D)) {
        throw std::invalid_argument("plot: " + std::to_string(o.D) + " is not a fundamental discriminant");
    }
    const Discriminant disc(o.D);
    const auto cycles = form_cycles(disc);
    const std::string svg = render_geodesics_svg(cycles, o.D);
    const std::string path = o.out.empty() ? "geodesics_D" + std::to_string(o.D) + ".svg" : o.out;
    std::ofstream(path) << svg;
    Outcome out;
    out.result = {{"D", o.D}, {"h_plus", cycles.size()}, {"svg", path}};
    return out;
}

Outcome cmd_var_random(const Options& o) {
    const ExperimentConfig cfg = experiment(o);
    const Estimate e = var_random(cfg);
    Outcome out;
    out.result = estimate_json(e);
    out.result["centering"] = random_segment_centering(cfg.ann, cfg.L);
    out.result["regime_parameter"] = truncation_regime_parameter(cfg.ann, cfg.A);
    if (cfg.ann.r > 0.0) {
        out.result["thin_annulus_prediction"] = thin_annulus_prediction(cfg.ann, cfg.L);
    }
    if (o.assert_bounds && !(std::abs(e.z_score) <= 3.0)) {
        out.assertion_failed = true;
        out.assertion_message = "|z| = " + std::to_string(std::abs(e.z_score)) + " > 3";
    }
    return out;
}

Outcome cmd_var_closed(const Options& o) {
    ExperimentConfig cfg = experiment(o);
    const Discriminant disc(o.D);
    const ClosedGeodesicSet set = build_closed_geodesics(disc, cfg.step);
    const Estimate e = var_closed(cfg, set);
    Outcome out;
    out.result = estimate_json(e);
    out.result["h_plus"] = set.h_plus();
    out.result["total_length"] = set.total_length();
    out.result["L1_chi"] = dirichlet_L1(disc);
    out.result["squarefree"] = disc.squarefree();
    out.result["conjecture_asserted"] = false;
    out.result["note"] = "prediction is the D -> infinity conjecture; reported, never asserted";
    return out;
}

Outcome cmd_expect(const Options& o) {
    const Discriminant disc(o.D);
    const Estimate e = expectation_check(disc, AnnulusSpec(o.r, o.R), o.n, o.seed, o.workers);
    Outcome out;
    out.result = estimate_json(e);
    if (o.assert_bounds && !(std::abs(e.z_score) <= 4.0)) {
        out.assertion_failed = true;
        out.assertion_message = "|z| = " + std::to_string(std::abs(e.z_score)) + " > 4";
    }
    return out;
}

Outcome cmd_mixing(const Options& o) {
    const BallObservable phi{{o.wx, o.wy}, o.R}, psi{{o.vx, o.vy}, o.R};
    const MixingEstimate m = mixing_correlation(phi, psi, o.t, o.n, o.seed, o.workers);
    Outcome out;
    out.result = estimate_json(m.correlation);
    out.result["norm_phi"] = m.norm_phi;
    out.result["norm_psi"] = m.norm_psi;
    out.result["envelope"] = m.envelope;
    const double bound = o.mixing_constant * m.envelope + 4.5 * m.correlation.std_error;
    out.result["bound"] = bound;
    if (o.assert_bounds && !(std::abs(m.correlation.mean) <= bound)) {
        out.assertion_failed = true;
        out.assertion_message = "|correlation| exceeds C * envelope + 4.5 stderr";
    }
    return out;
}

Outcome cmd_shc(const Options& o) {
    const AnnulusSpec ann(o.r, o.R);
    Outcome out;
    out.result = {{"t", o.t}, {"numeric", shc_numeric(ann, o.t)}, {"volume", ann.volume()},
                  {"weight_H", weight_H(o.t)}};
    if (ann.R - ann.r >= 0.5 * ann.R) out.result["asymptotic"] = shc_asymptotic(ann, o.t);
    return out;
}

Outcome cmd_theta(const Options& o) {
    const AnnulusSpec ann(o.r, o.R);
    PointH z{o.zx, o.zy}, w{o.wx, o.wy};
    if (o.dist >= 0.0) {
        z = {0.0, 1.0};
        w = {0.0, std::exp(o.dist)};
    }
    Outcome out;
    out.result = {{"theta", theta_average(z, w, ann)}, {"distance", dist(z, w)}};
    return out;
}

void append_ledger(const Options& o, const json& record, double wall) {
    if (o.results_dir.empty()) return;
    std::filesystem::create_directories(o.results_dir);
    json line = record;
    line["workers"] = o.workers;
    line["wall_time_s"] = wall;
    std::ofstream(std::filesystem::path(o.results_dir) / "ledger.jsonl", std::ios::app) << line.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geodesic variance laboratory on the modular surface (all radii hyperbolic)"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_config("--config", "", "Flat key = value file supplying defaults; flags override");

    Options o;
    app.add_option("--D", o.D, "Fundamental discriminant");
    app.add_option("--r", o.r, "Inner hyperbolic radius")->check(CLI::NonNegativeNumber);
    app.add_option("--R", o.R, "Outer hyperbolic radius (ball radius for mixing)")->check(CLI::PositiveNumber);
    app.add_option("--L", o.L, "Segment length");
    app.add_option("--A", o.A, "Cusp truncation height");
    app.add_option("--n", o.n, "Number of samples");
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--workers", o.workers, "Worker threads (does not change results)")->check(CLI::PositiveNumber);
    app.add_option("--step", o.step, "Walker window length");
    app.add_option("--t", o.t, "Spectral parameter (shc) or flow time (mixing)");
    app.add_option("--dist", o.dist, "theta: distance between z = i and w = i e^dist");
    app.add_option("--zx", o.zx);
    app.add_option("--zy", o.zy);
    app.add_option("--wx", o.wx, "Centre w (theta) or centre of phi (mixing)");
    app.add_option("--wy", o.wy);
    app.add_option("--vx", o.vx, "Centre of psi (mixing)");
    app.add_option("--vy", o.vy);
    app.add_option("--mixing-constant", o.mixing_constant, "Constant in front of the mixing envelope");
    app.add_option("--grid", o.grid, "Number of grid points for gfun");
    app.add_option("--out", o.out, "Output path (plot)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--cache-dir", o.cache_dir, "Directory of per-discriminant cache files");
    app.add_option("--results-dir", o.results_dir, "Directory of the run ledger (empty disables)");
    app.add_flag("--assert", o.assert_bounds, "Turn statistical bounds into the exit code");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"gfun", "Table of G, G' and the asymptotic ratio"},
        {"forms", "Reduced forms, class number, unit and class number formula for --D"},
        {"plot", "SVG of the closed geodesics of discriminant --D"},
        {"var-random", "Variance for random segments of length --L"},
        {"var-closed", "Variance for the closed geodesics of discriminant --D"},
        {"expect", "Mean length of the closed geodesics in a random annulus"},
        {"mixing", "Correlation of two ball indicators under the geodesic flow"},
        {"shc", "Selberg/Harish-Chandra transform of the annulus at --t"},
        {"theta", "Angular average of the time spent in an annulus"}};
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->callback([&o, name = name] { o.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 1;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        if (o.command == "gfun") out = cmd_gfun(o);
        else if (o.command == "forms") out = cmd_forms(o);
        else if (o.command == "plot") out = cmd_plot(o);
        else if (o.command == "var-random") out = cmd_var_random(o);
        else if (o.command == "var-closed") out = cmd_var_closed(o);
        else if (o.command == "expect") out = cmd_expect(o);
        else if (o.command == "mixing") out = cmd_mixing(o);
        else if (o.command == "shc") out = cmd_shc(o);
        else if (o.command == "theta") out = cmd_theta(o);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const json config = config_echo(o);
        json record = {{"command", o.command},
                       {"config", config},
                       {"input_hash", git_blob_sha1(o.command + "\n" + config.dump())},
                       {"result", out.result}};
        if (o.format == "csv") {
            table_from_result(out);
            std::ostringstream os;
            for (std::size_t i = 0; i < out.csv_header.size(); ++i) os << (i ? "," : "") << csv_escape(out.csv_header[i]);
            os << "\r\n";
            for (const auto& row : out.csv_rows) {
                for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
                os << "\r\n";
            }
            std::cout << os.str();
        } else {
            std::cout << record.dump(2) << "\n";
        }
        append_ledger(o, record, wall);
        if (out.assertion_failed) {
            std::cerr << "assertion failed: " << out.assertion_message << "\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
