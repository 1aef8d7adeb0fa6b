// Command-line front end. Five subcommands share one artifact convention:
// each run writes a directory containing manifest.json plus its reports, and
// every artifact except the manifest is byte-identical under a fixed config
// and seed.
//
// Exit codes: 0 success, 2 usage or validation error, 3 numerical failure
// (solver divergence, a failed verification, a failed sweep).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bolab/counterexamples/prop51.hpp"
#include "bolab/counterexamples/prop52.hpp"
#include "bolab/harness/field_io.hpp"
#include "bolab/harness/manifest.hpp"
#include "bolab/harness/svg.hpp"
#include "bolab/harness/test_family.hpp"
#include "bolab/harness/verify.hpp"
#include "bolab/harness/workers.hpp"
#include "bolab/norms/b0.hpp"
#include "bolab/norms/fsigma.hpp"
#include "bolab/norms/hsigma.hpp"
#include "bolab/norms/xk.hpp"
#include "bolab/norms/yk.hpp"
#include "bolab/norms/zk.hpp"
#include "bolab/solver/picard.hpp"
#include "bolab/solver/reference.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string out_root() {
    const char* env = std::getenv("BO_LAB_OUT");
    return (env && *env) ? std::string(env) : std::string("runs");
}

// --out names the run directory itself; otherwise a fresh directory under
// the output root, named by the run id.
fs::path make_run_dir(const std::string& explicit_out, const std::string& run_id) {
    fs::path dir = explicit_out.empty() ? fs::path(out_root()) / run_id : fs::path(explicit_out);
    fs::create_directories(dir);
    return dir;
}

void add_artifact(bolab::RunManifest& man, const fs::path& dir, const std::string& name,
                  const std::string& content) {
    bolab::write_text_file((dir / name).string(), content);
    man.artifacts.push_back(name);
}

void finish_manifest(bolab::RunManifest& man, const fs::path& dir,
                     std::chrono::steady_clock::time_point t0) {
    man.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bolab::write_text_file((dir / "manifest.json").string(), man.to_json().dump(2) + "\n");
}

std::string decay_svg(const bolab::IterationTrace& tr) {
    bolab::PlotSeries s;
    s.label = "log10 d_f0";
    for (const auto& st : tr.steps)
        if (st.n >= 1 && st.d_f0 > 0.0) {
            s.x.push_back(st.n);
            s.y.push_back(std::log10(st.d_f0));
        }
    if (s.x.empty()) {
        s.x = {1.0};
        s.y = {0.0};
    }
    return bolab::svg_line_plot("iterate difference decay", "iteration",
                                "log10 difference norm", {s});
}

std::string mcurve_svg(const bolab::IterationTrace& tr) {
    bolab::PlotSeries s;
    s.label = "M";
    s.x = tr.m_times;
    s.y = tr.m_values;
    return bolab::svg_line_plot("windowed norm against the window half width", "window half width",
                                "M", {s});
}

// ---------------------------------------------------------------- solve ----

struct SolveArgs {
    std::string config_path;
    std::string data = "gaussian";
    std::string out;
    double sigma = 0.0;
    double eps_bar = 0.0;
    double dt = 0.0;
    std::uint64_t seed = 1;
    bool oracle = false;
    // which flags were given on the command line
    bool has_data = false, has_sigma = false, has_eps = false, has_dt = false, has_seed = false;
};

// Defaults, then the config file, then command-line flags.
ordered_json resolve_solve_config(const SolveArgs& a, bolab::SolverConfig& cfg,
                                  std::string& data, double& sigma, std::uint64_t& seed,
                                  bool& oracle) {
    data = "gaussian";
    sigma = 0.0;
    seed = 1;
    oracle = false;
    double dt_request = 0.0;

    if (!a.config_path.empty()) {
        ordered_json j;
        try {
            j = ordered_json::parse(bolab::detail::slurp(a.config_path));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(a.config_path + ": " + e.what());
        }
        for (const auto& [key, val] : j.items()) {
            if (key == "data") data = val.get<std::string>();
            else if (key == "sigma") sigma = val.get<double>();
            else if (key == "epsilon_bar") cfg.eps_bar = val.get<double>();
            else if (key == "dt") dt_request = val.get<double>();
            else if (key == "seed") seed = val.get<std::uint64_t>();
            else if (key == "oracle") oracle = val.get<bool>();
            else if (key == "period") cfg.period = val.get<double>();
            else if (key == "nx") cfg.nx = val.get<int>();
            else if (key == "half_width") cfg.half_width = val.get<double>();
            else if (key == "nt") cfg.nt = val.get<int>();
            else if (key == "max_iter") cfg.max_iter = val.get<int>();
            else if (key == "tol") cfg.tol = val.get<double>();
            else if (key == "dealias") cfg.dealias = val.get<bool>();
            else if (key == "nonlinear") cfg.nonlinear = val.get<bool>();
            else if (key == "substeps") cfg.substeps = val.get<int>();
            else if (key == "trace_norms") cfg.trace_norms = val.get<bool>();
            else throw std::domain_error(a.config_path + ": unknown config key '" + key + "'");
        }
    }
    if (a.has_data) data = a.data;
    if (a.has_sigma) sigma = a.sigma;
    if (a.has_eps) cfg.eps_bar = a.eps_bar;
    if (a.has_dt) dt_request = a.dt;
    if (a.has_seed) seed = a.seed;
    if (a.oracle) oracle = true;

    if (dt_request != 0.0) {
        if (!(dt_request > 0.0) || dt_request > cfg.half_width)
            throw std::domain_error("solve: dt must lie in (0, half_width]");
        cfg.nt = 2 * static_cast<int>(std::llround(cfg.half_width / dt_request)) + 1;
    }
    bolab::validate(cfg);

    ordered_json resolved;
    resolved["data"] = data;
    resolved["sigma"] = sigma;
    resolved["seed"] = seed;
    resolved["oracle"] = oracle;
    resolved["period"] = cfg.period;
    resolved["nx"] = cfg.nx;
    resolved["half_width"] = cfg.half_width;
    resolved["nt"] = cfg.nt;
    resolved["epsilon_bar"] = cfg.eps_bar;
    resolved["max_iter"] = cfg.max_iter;
    resolved["tol"] = cfg.tol;
    resolved["dealias"] = cfg.dealias;
    resolved["nonlinear"] = cfg.nonlinear;
    resolved["substeps"] = cfg.substeps;
    resolved["trace_norms"] = cfg.trace_norms;
    return resolved;
}

// "zero", a named deterministic datum, or a stored field file.
bolab::SpectralField resolve_data(const std::string& data, const bolab::FrequencyGrid& g,
                                  std::uint64_t seed) {
    if (data == "zero") return bolab::SpectralField(g);
    for (const std::string& n : bolab::test_family_names())
        if (n == data) return bolab::test_family_datum(data, g, seed);

    bolab::LoadedField lf = bolab::read_field(data);
    if (lf.kind != "data")
        throw std::domain_error("solve: " + data + " holds a spacetime field, not data");
    if (!(lf.data.grid == g))
        throw std::domain_error("solve: " + data + " was stored on period " +
                                std::to_string(lf.data.grid.period) + ", nx " +
                                std::to_string(lf.data.grid.n) + "; the config wants period " +
                                std::to_string(g.period) + ", nx " + std::to_string(g.n));
    return lf.data;
}

int run_solve(const SolveArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    bolab::SolverConfig cfg;
    std::string data;
    double sigma = 0.0;
    std::uint64_t seed = 1;
    bool oracle = false;
    ordered_json resolved = resolve_solve_config(args, cfg, data, sigma, seed, oracle);

    bolab::RunManifest man;
    man.subcommand = "solve";
    man.config = resolved;
    man.id = bolab::make_run_id(resolved);
    fs::path dir = make_run_dir(args.out, man.id);

    bolab::SpectralField phi = resolve_data(data, cfg.xgrid(), seed);
    bolab::write_field((dir / "data.bof").string(), phi, "solve:" + data);
    man.artifacts.push_back("data.bof");

    ordered_json rep;
    rep["data"] = data;
    rep["sigma"] = sigma;

    bolab::PicardResult res;
    try {
        res = bolab::picard_solve(phi, cfg);
    } catch (const bolab::DivergenceError& e) {
        rep["error"] = e.what();
        rep["phi_h0"] = e.trace.phi_h0;
        rep["data_admissible"] = e.trace.data_admissible;
        rep["converged"] = false;
        rep["iterations"] = e.trace.iterations;
        add_artifact(man, dir, "trace.csv", e.trace.to_csv());
        add_artifact(man, dir, "report.json", rep.dump(2) + "\n");
        add_artifact(man, dir, "decay.svg", decay_svg(e.trace));
        finish_manifest(man, dir, t0);
        std::fprintf(stderr, "error: %s\n", e.what());
        std::printf("run: %s\n", dir.string().c_str());
        return 3;
    }

    const bolab::IterationTrace& tr = res.trace;
    rep["phi_h0"] = tr.phi_h0;
    rep["data_admissible"] = tr.data_admissible;
    rep["converged"] = tr.converged;
    rep["iterations"] = tr.iterations;
    rep["final_residual"] = tr.final_residual;
    rep["sup_hsigma"] = bolab::sup_hsigma(res.solution, sigma);
    try {
        bolab::ContractionVerdict v = bolab::contraction_monitor(tr);
        rep["contraction"] = {{"pass", v.pass},
                              {"fitted_ratio", v.fitted_ratio},
                              {"monotone", v.monotone},
                              {"note", v.note}};
    } catch (const std::domain_error& e) {
        rep["contraction"] = {{"note", e.what()}};
    }

    if (oracle) {
        bolab::SpaceTimeField ref = bolab::reference_solve(phi, cfg);
        auto slice_gap = [&](int it) {
            double num = 0.0, den = 0.0;
            for (int ix = 0; ix < cfg.nx; ++ix) {
                num += std::norm(res.solution.at(ix, it) - ref.at(ix, it));
                den += std::norm(ref.at(ix, it));
            }
            return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        };
        double worst = 0.0;
        for (int it = 0; it < cfg.nt; ++it) worst = std::max(worst, slice_gap(it));
        rep["oracle_rel_l2_final"] = slice_gap(cfg.nt - 1);
        rep["oracle_rel_l2_max"] = worst;
    }

    bolab::write_field((dir / "solution.bof").string(), res.solution, "solve:" + data);
    man.artifacts.push_back("solution.bof");
    add_artifact(man, dir, "trace.csv", tr.to_csv());
    add_artifact(man, dir, "report.json", rep.dump(2) + "\n");
    add_artifact(man, dir, "decay.svg", decay_svg(tr));
    if (!tr.m_times.empty()) add_artifact(man, dir, "mcurve.svg", mcurve_svg(tr));
    finish_manifest(man, dir, t0);

    std::printf("run: %s\n", dir.string().c_str());
    std::printf("converged: %s after %d iterations, residual %.3e\n",
                tr.converged ? "yes" : "no", tr.iterations, tr.final_residual);
    if (oracle)
        std::printf("oracle gap at the final time: %.3e\n",
                    rep["oracle_rel_l2_final"].get<double>());
    return tr.converged ? 0 : 3;
}

// ---------------------------------------------------------------- norms ----

struct NormsArgs {
    std::string file;
    std::string norm;
    std::string out;
    int k = std::numeric_limits<int>::min();
    double sigma = 0.0;
};

int run_norms(const NormsArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    std::string token = args.norm;
    int k = args.k;
    const bool has_k = k != std::numeric_limits<int>::min();

    // x0 / y0 / z0 pin the shell index to 0.
    if (token == "x0" || token == "y0" || token == "z0") {
        if (has_k && k != 0)
            throw std::domain_error("norms: --norm " + token + " fixes k = 0, but --k says " +
                                    std::to_string(k));
        token = token[0] == 'x' ? "xk" : token[0] == 'y' ? "yk" : "zk";
        k = 0;
    }
    const bool is_data_norm = token == "hsigma" || token == "b0";
    const bool is_shell_norm = token == "xk" || token == "yk" || token == "zk";
    const bool is_spacetime_norm = is_shell_norm || token == "fsigma" || token == "nsigma";
    if (!is_data_norm && !is_spacetime_norm)
        throw std::domain_error("norms: unknown norm '" + args.norm +
                                "' (hsigma, b0, xk, yk, zk, x0, y0, z0, fsigma, nsigma)");
    if (is_shell_norm && k == std::numeric_limits<int>::min())
        throw std::domain_error("norms: --norm " + token + " needs --k");

    bolab::LoadedField lf = bolab::read_field(args.file);
    if (is_data_norm && lf.kind != "data")
        throw std::domain_error("norms: " + token + " applies to data fields, and " + args.file +
                                " holds a spacetime field");
    if (is_spacetime_norm && lf.kind != "spacetime")
        throw std::domain_error("norms: " + token + " applies to spacetime fields, and " +
                                args.file + " holds data");

    bolab::NormReport rep;
    if (token == "hsigma") {
        rep = bolab::hsigma_tilde_norm(lf.data, args.sigma);
    } else if (token == "b0") {
        rep = bolab::b0_norm(lf.data);
    } else {
        bolab::SpaceTimeField F = lf.field;
        if (is_shell_norm && F.rep == bolab::Rep::physical) F = bolab::to_frequency(F);
        if (!is_shell_norm && F.rep == bolab::Rep::frequency) F = bolab::to_physical(F);
        if (token == "xk") rep = bolab::xk_norm(F, k);
        else if (token == "yk") rep = bolab::yk_norm(F, k);
        else if (token == "zk") rep = bolab::zk_norm(F, k);
        else if (token == "fsigma") rep = bolab::fsigma_norm(F, args.sigma);
        else rep = bolab::nsigma_norm(F, args.sigma);
    }

    ordered_json meta;
    meta["input"] = args.file;
    meta["norm"] = args.norm;
    if (is_shell_norm) meta["k"] = k;
    if (token == "hsigma" || token == "fsigma" || token == "nsigma") meta["sigma"] = args.sigma;
    meta["report"] = rep.to_json();

    std::string csv = "label,weight,mass,value\n";
    char buf[128];
    for (const auto& t : rep.terms) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", t.label.c_str(), t.weight,
                      t.mass, t.value);
        csv += buf;
    }

    bolab::RunManifest man;
    man.subcommand = "norms";
    man.config = {{"input", args.file}, {"norm", args.norm}, {"k", is_shell_norm ? k : 0},
                  {"sigma", args.sigma}};
    man.id = bolab::make_run_id(man.config);
    fs::path dir = make_run_dir(args.out, man.id);
    add_artifact(man, dir, "report.json", meta.dump(2) + "\n");
    add_artifact(man, dir, "breakdown.csv", csv);
    finish_manifest(man, dir, t0);

    std::printf("run: %s\n", dir.string().c_str());
    std::printf("%s = %.17g (%zu terms, aggregation %s)\n", rep.name.c_str(), rep.value,
                rep.terms.size(), rep.aggregation.c_str());
    return 0;
}

// --------------------------------------------------------------- verify ----

struct VerifyArgs {
    std::string suite = "all";
    std::string out;
    std::uint64_t seed = 1;
};

int run_verify(const VerifyArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    bolab::VerifyReport rep = bolab::run_verify_suite(args.suite, args.seed);

    bolab::RunManifest man;
    man.subcommand = "verify";
    man.config = {{"suite", args.suite}, {"seed", args.seed}};
    man.id = bolab::make_run_id(man.config);
    fs::path dir = make_run_dir(args.out, man.id);
    add_artifact(man, dir, "report.csv", rep.to_csv());
    add_artifact(man, dir, "report.txt", rep.to_text());
    finish_manifest(man, dir, t0);

    std::fputs(rep.to_text().c_str(), stdout);
    std::printf("run: %s\n", dir.string().c_str());
    return rep.all_pass() ? 0 : 3;
}

// ------------------------------------------------------- counterexample ----

struct CexArgs {
    int which = 0;
    std::string k_range = "8:12";
    std::string out;
};

std::vector<int> parse_k_range(const std::string& s) {
    size_t colon = s.find(':');
    int a = 0, b = 0;
    try {
        if (colon == std::string::npos) {
            a = b = std::stoi(s);
        } else {
            a = std::stoi(s.substr(0, colon));
            b = std::stoi(s.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw std::domain_error("counterexample: bad k range '" + s + "' (want a:b)");
    }
    if (a > b) throw std::domain_error("counterexample: empty k range '" + s + "'");
    std::vector<int> ks;
    for (int k = a; k <= b; ++k) ks.push_back(k);
    return ks;
}

int run_counterexample(const CexArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    if (args.which != 51 && args.which != 52)
        throw std::domain_error("counterexample: --which must be 51 or 52");
    std::vector<int> ks = parse_k_range(args.k_range);

    // Shells are independent; sweep them across the worker budget.
    const int threads = bolab::thread_budget();
    bolab::CounterexampleReport rep;
    if (args.which == 51) {
        std::vector<bolab::Prop51Result> rows(ks.size());
        bolab::parallel_for_n(ks.size(), threads,
                              [&](size_t i) { rows[i] = bolab::prop51_ratio(ks[i]); });
        rep = bolab::prop51_report_rows(rows);
    } else {
        std::vector<bolab::Prop52Result> rows(ks.size());
        bolab::parallel_for_n(ks.size(), threads,
                              [&](size_t i) { rows[i] = bolab::prop52_measure(ks[i]); });
        rep = bolab::prop52_report_rows(rows);
    }

    bolab::PlotSeries s;
    s.label = "ratio";
    for (size_t i = 0; i < rep.k.size(); ++i) {
        s.x.push_back(rep.k[i]);
        s.y.push_back(rep.ratio[i]);
    }
    std::string svg = bolab::svg_line_plot(rep.name + " ratio against the shell index", "k",
                                           "ratio", {s});

    bolab::RunManifest man;
    man.subcommand = "counterexample";
    man.config = {{"which", args.which}, {"k_range", args.k_range}};
    man.id = bolab::make_run_id(man.config);
    fs::path dir = make_run_dir(args.out, man.id);
    add_artifact(man, dir, "report.json", rep.to_json().dump(2) + "\n");
    add_artifact(man, dir, "sweep.csv", rep.to_csv());
    add_artifact(man, dir, "ratio_vs_k.svg", svg);
    finish_manifest(man, dir, t0);

    std::printf("run: %s\n", dir.string().c_str());
    for (size_t i = 0; i < rep.k.size(); ++i)
        std::printf("  k=%d  ratio %.6e\n", rep.k[i], rep.ratio[i]);
    std::printf("%s: %s (slope %.6e)\n", rep.name.c_str(), rep.pass ? "PASS" : "FAIL", rep.slope);
    return rep.pass ? 0 : 3;
}

// --------------------------------------------------------------- report ----

// Header line plus rows of doubles; non-numeric cells parse as NaN.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int column(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        size_t c = 0;
        while (true) {
            size_t comma = line.find(',', c);
            cells.push_back(line.substr(c, comma == std::string::npos ? comma : comma - c));
            if (comma == std::string::npos) break;
            c = comma + 1;
        }
        if (first) {
            t.header = cells;
            first = false;
        } else {
            std::vector<double> row;
            for (const std::string& cell : cells) {
                char* end = nullptr;
                double v = std::strtod(cell.c_str(), &end);
                row.push_back(end != cell.c_str() ? v : std::nan(""));
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

int run_report(const std::string& run_dir) {
    fs::path dir(run_dir);
    fs::path man_path = dir / "manifest.json";
    if (!fs::exists(man_path))
        throw std::runtime_error("report: no manifest.json under " + run_dir);
    ordered_json man;
    try {
        man = ordered_json::parse(bolab::detail::slurp(man_path.string()));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(man_path.string() + ": " + e.what());
    }

    std::printf("run %s\n", man.value("id", std::string("?")).c_str());
    std::printf("subcommand: %s  version: %s  duration: %.3f s\n",
                man.value("subcommand", std::string("?")).c_str(),
                man.value("version", std::string("?")).c_str(),
                man.value("duration_seconds", 0.0));
    std::printf("artifacts:\n");
    for (const auto& a : man.value("artifacts", std::vector<std::string>{})) {
        fs::path p = dir / a;
        if (fs::exists(p))
            std::printf("  %-20s %8ju bytes\n", a.c_str(),
                        static_cast<std::uintmax_t>(fs::file_size(p)));
        else
            std::printf("  %-20s missing\n", a.c_str());
    }

    if (fs::exists(dir / "report.txt")) {
        std::printf("\n%s", bolab::detail::slurp((dir / "report.txt").string()).c_str());
    } else if (fs::exists(dir / "report.json")) {
        std::printf("\n%s\n",
                    ordered_json::parse(bolab::detail::slurp((dir / "report.json").string()))
                        .dump(2)
                        .c_str());
    }

    // Regenerate the plots the run would have drawn from its tables.
    if (fs::exists(dir / "trace.csv")) {
        CsvTable t = parse_csv(bolab::detail::slurp((dir / "trace.csv").string()));
        int cn = t.column("n"), cd = t.column("d_f0");
        if (cn >= 0 && cd >= 0) {
            bolab::PlotSeries s;
            s.label = "log10 d_f0";
            for (const auto& row : t.rows)
                if (row[cn] >= 1.0 && row[cd] > 0.0) {
                    s.x.push_back(row[cn]);
                    s.y.push_back(std::log10(row[cd]));
                }
            if (!s.x.empty()) {
                bolab::write_text_file((dir / "decay.svg").string(),
                                       bolab::svg_line_plot("iterate difference decay",
                                                            "iteration", "log10 difference norm",
                                                            {s}));
                std::printf("regenerated decay.svg\n");
            }
        }
    }
    if (fs::exists(dir / "sweep.csv")) {
        CsvTable t = parse_csv(bolab::detail::slurp((dir / "sweep.csv").string()));
        int ck = t.column("k"), cr = t.column("ratio");
        if (ck >= 0 && cr >= 0 && !t.rows.empty()) {
            bolab::PlotSeries s;
            s.label = "ratio";
            for (const auto& row : t.rows) {
                s.x.push_back(row[ck]);
                s.y.push_back(row[cr]);
            }
            bolab::write_text_file(
                (dir / "ratio_vs_k.svg").string(),
                bolab::svg_line_plot("ratio against the shell index", "k", "ratio", {s}));
            std::printf("regenerated ratio_vs_k.svg\n");
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spacetime-norm laboratory for a dispersive quadratic flow"};
    app.require_subcommand(1);

    SolveArgs solve;
    CLI::App* cs = app.add_subcommand("solve", "run the fixed-point solver on a data field");
    cs->add_option("--config", solve.config_path, "JSON config file; flags override its keys");
    auto* od = cs->add_option("--data", solve.data,
                              "named datum (gaussian, mode_pair, single_mode, shell_random, "
                              "low_band, zero) or a stored field file");
    auto* os = cs->add_option("--sigma", solve.sigma, "regularity index for the reported norms");
    auto* oe = cs->add_option("--epsilon-bar", solve.eps_bar, "admissible-data ceiling");
    auto* ot = cs->add_option("--dt", solve.dt, "time step; sets the odd lattice size");
    auto* on = cs->add_option("--seed", solve.seed, "seed for the seeded data families");
    cs->add_flag("--oracle", solve.oracle, "also run the reference integrator and compare");
    cs->add_option("--out", solve.out, "run directory (default: new directory under BO_LAB_OUT)");

    NormsArgs norms;
    CLI::App* cn = app.add_subcommand("norms", "evaluate a norm on a stored field");
    cn->add_option("file", norms.file, "field file")->required();
    cn->add_option("--norm", norms.norm,
                   "hsigma, b0, xk, yk, zk, x0, y0, z0, fsigma, nsigma")
        ->required();
    cn->add_option("--k", norms.k, "shell index for xk / yk / zk");
    cn->add_option("--sigma", norms.sigma, "regularity index for hsigma / fsigma / nsigma");
    cn->add_option("--out", norms.out, "run directory");

    VerifyArgs verify;
    CLI::App* cv = app.add_subcommand("verify", "run a property suite and report each row");
    cv->add_option("--suite", verify.suite, "lemma21, bilinear, identities, conservation, all");
    cv->add_option("--seed", verify.seed, "suite seed");
    cv->add_option("--out", verify.out, "run directory");

    CexArgs cex;
    CLI::App* cc = app.add_subcommand("counterexample", "sweep a worst-case construction over shells");
    cc->add_option("--which", cex.which, "51 or 52")->required();
    cc->add_option("--k-range", cex.k_range, "inclusive shell range a:b (default 8:12)");
    cc->add_option("--out", cex.out, "run directory");

    std::string report_dir;
    CLI::App* cr = app.add_subcommand("report", "summarize a stored run directory");
    cr->add_option("dir", report_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    solve.has_data = od->count() > 0;
    solve.has_sigma = os->count() > 0;
    solve.has_eps = oe->count() > 0;
    solve.has_dt = ot->count() > 0;
    solve.has_seed = on->count() > 0;

    try {
        if (cs->parsed()) return run_solve(solve);
        if (cn->parsed()) return run_norms(norms);
        if (cv->parsed()) return run_verify(verify);
        if (cc->parsed()) return run_counterexample(cex);
        if (cr->parsed()) return run_report(report_dir);
    } catch (const bolab::DivergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const bolab::StabilityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::logic_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
