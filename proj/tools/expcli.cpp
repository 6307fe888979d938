// Command-line driver for the random-dynamics experiments: the kicked
// heteroclinic flow, the impulsed box-chain map, the QR exponent pair of the
// flow's unit map, and two stand-alone diagnostics.  Each run writes CSV
// series, an SVG plot where it makes sense, and a flat key=value manifest
// into the output directory.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rds/core.hpp"
#include "rds/ensemble.hpp"
#include "rds/figure8.hpp"
#include "rds/io.hpp"
#include "rds/ottyorke.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::uint64_t parse_seed(const std::string& text) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &pos, 0); // base 0: decimal, 0x..., 0...
    } catch (const std::exception&) {
        throw UsageError("--seed: '" + text + "' is not an unsigned 64-bit integer");
    }
    if (pos != text.size())
        throw UsageError("--seed: trailing characters in '" + text + "'");
    return v;
}

fs::path resolve_out_dir(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        const char* env = std::getenv("RDS_OUT_DIR");
        dir = (env != nullptr && *env != '\0') ? env : ".";
    }
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (!fs::is_directory(p))
        throw std::runtime_error("cannot create output directory '" + p.string() + "'");
    return p;
}

struct CommonOpts {
    std::string seed_text = "1";
    std::uint64_t stream_id = 0;
    std::string out;
    std::string config;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--seed", c.seed_text, "RNG seed, decimal or 0x-prefixed hex")
        ->capture_default_str();
    cmd->add_option("--stream-id", c.stream_id, "noise stream id under the seed")
        ->capture_default_str();
    cmd->add_option("--out", c.out, "output directory (default: $RDS_OUT_DIR, else '.')");
    cmd->add_option("--config", c.config,
                    "flat key=value config file, '#' comments; command-line flags override");
}

// Expands a flat key=value config file into command-line tokens for `sub`.
// Keys must name long options of the subcommand; keys the user already passed
// on the command line are skipped, so explicit flags always win.
std::vector<std::string> config_tokens(const std::string& path, const CLI::App* sub,
                                       const std::vector<std::string>& given) {
    std::ifstream in(path);
    if (!in) throw UsageError("--config: cannot open '" + path + "'");
    const auto trim = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::vector<std::string> tokens;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("--config: " + path + " line " + std::to_string(lineno) +
                             " is not key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr)
            throw UsageError("--config: unknown key '" + key + "' for subcommand '" +
                             sub->get_name() + "'");
        bool overridden = false;
        for (const std::string& g : given)
            if (g == flag || g.rfind(flag + "=", 0) == 0) {
                overridden = true;
                break;
            }
        if (overridden) continue;
        if (opt->get_expected_min() == 0) { // boolean flag
            if (value == "1" || value == "true" || value == "yes" || value == "on")
                tokens.push_back(flag);
            else if (!(value == "0" || value == "false" || value == "no" || value == "off"))
                throw UsageError("--config: key '" + key + "' expects a boolean value");
        } else {
            tokens.push_back(flag);
            tokens.push_back(value);
        }
    }
    return tokens;
}

std::string fmt(double v) { return rds::io::format_double(v); }

constexpr const char* kArtifactVersion = "1.0.0";

std::string wall_time_now() {
    const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Every run writes the same manifest preamble -- artifact version, wall-time
// span, and the list of files the run produced -- followed by the full
// parameter echo, so a manifest alone is enough to reproduce the run.
void write_run_manifest(const fs::path& dir, const std::string& started,
                        const std::vector<std::string>& files, rds::io::Manifest entries) {
    rds::io::Manifest m{{"artifact_version", kArtifactVersion},
                        {"started", started},
                        {"finished", wall_time_now()}};
    std::string joined;
    for (const std::string& f : files) {
        if (!joined.empty()) joined += ';';
        joined += f;
    }
    m.emplace_back("files", joined);
    m.insert(m.end(), entries.begin(), entries.end());
    rds::io::write_manifest((dir / "manifest.txt").string(), m);
}

// ---------------------------------------------------------------- oy-ftle --

struct OyOpts {
    CommonOpts c;
    rds::oy::FlowParams p;
    bool full = false;
    int ensemble = 0;
    bool serial = false;
};

void run_oy(const OyOpts& o) {
    const std::string started = wall_time_now();
    const std::uint64_t seed = parse_seed(o.c.seed_text);
    const fs::path dir = resolve_out_dir(o.c.out);
    o.p.validate();

    const auto policy =
        o.full ? rds::DecimationPolicy::none() : rds::DecimationPolicy::auto_for(o.p.T);
    rds::RngStream stream = rds::spawn_stream(seed, o.c.stream_id);
    const rds::oy::OyRunResult r = rds::oy::run_oy_experiment(o.p, stream, policy);

    std::vector<std::string> files{"oy_ftle.csv", "oy_ftle.svg", "manifest.txt"};
    const fs::path csv = dir / "oy_ftle.csv";
    rds::io::write_series_csv(csv.string(), r.series, "t", "lambda");
    rds::io::emit_svg((dir / "oy_ftle.svg").string(), r.series,
                      "finite-time exponent of the kicked flow");

    rds::io::Manifest m{
        {"experiment", "oy-ftle"},
        {"seed", std::to_string(seed)},
        {"stream_id", std::to_string(o.c.stream_id)},
        {"a", fmt(o.p.a)},
        {"epsilon", fmt(o.p.epsilon)},
        {"h", fmt(o.p.h)},
        {"T", std::to_string(o.p.T)},
        {"x0_x", fmt(o.p.x0.x)},
        {"x0_y", fmt(o.p.x0.y)},
        {"decimation", o.full ? "none" : "auto"},
        {"points", std::to_string(r.series.size())},
        {"boundary_nudges", std::to_string(r.fold.boundary_nudges)},
    };
    if (!r.series.empty()) m.emplace_back("final_lambda", fmt(r.series.back().value));

    if (o.ensemble > 0) {
        const auto mode = o.serial ? rds::ExecMode::serial : rds::ExecMode::parallel;
        const std::vector<double> finals = rds::oy_final_ftle(o.p, seed, o.ensemble, mode);
        rds::Series s;
        double sum = 0.0;
        for (std::size_t i = 0; i < finals.size(); ++i) {
            s.push_back({static_cast<std::int64_t>(i), finals[i]});
            sum += finals[i];
        }
        rds::io::write_series_csv((dir / "oy_ensemble.csv").string(), s, "id", "lambda");
        files.insert(files.begin() + 2, "oy_ensemble.csv");
        m.emplace_back("ensemble", std::to_string(o.ensemble));
        m.emplace_back("ensemble_mode", o.serial ? "serial" : "parallel");
        m.emplace_back("ensemble_mean", fmt(sum / static_cast<double>(finals.size())));
    }

    write_run_manifest(dir, started, files, std::move(m));
    std::cout << "wrote " << csv.string() << " (" << r.series.size() << " points)";
    if (!r.series.empty()) std::cout << ", final lambda = " << fmt(r.series.back().value);
    std::cout << "\n";
}

// ------------------------------------------------------------------- fig8 --

struct Fig8Opts {
    CommonOpts c;
    rds::fig8::Fig8Params p;
    double q = 0.5;
    int n1 = 3;
    std::int64_t steps = 100000;
    double vx = 1.0, vy = 1.0;
    bool deterministic = false;
};

void run_fig8(const Fig8Opts& o) {
    const std::string started = wall_time_now();
    const std::uint64_t seed = parse_seed(o.c.seed_text);
    const fs::path dir = resolve_out_dir(o.c.out);
    o.p.validate();
    if (o.vx == 0.0 && o.vy == 0.0) throw UsageError("--vx/--vy: direction must be nonzero");

    rds::RngStream stream = rds::spawn_stream(seed, o.c.stream_id);
    rds::fig8::TargetLaw law =
        o.deterministic ? rds::fig8::TargetLaw::deterministic()
                        : rds::fig8::TargetLaw::iid(rds::BoxIndexDist::geometric(o.p.n0, o.q));
    const rds::fig8::Fig8RunResult r = rds::fig8::fig8_lyapunov_run(
        o.p, std::move(law), rds::Vec2{o.vx, o.vy}, o.n1, o.steps, stream);

    const fs::path csv = dir / "fig8_lambda.csv";
    rds::io::write_series_csv(csv.string(), r.series, "t", "lambda");
    rds::io::emit_svg((dir / "fig8_lambda.svg").string(), r.series,
                      "finite-time exponent of the impulsed box-chain map");

    {
        std::ofstream ret((dir / "fig8_returns.csv").string(), std::ios::binary);
        if (!ret) throw std::runtime_error("cannot open fig8_returns.csv for writing");
        ret << "k,n,N\n";
        for (std::size_t k = 0; k < r.returns.size(); ++k)
            ret << (k + 1) << ',' << r.indices[k] << ',' << r.returns[k] << '\n';
    }

    rds::io::Manifest m{
        {"experiment", "fig8"},
        {"seed", std::to_string(seed)},
        {"stream_id", std::to_string(o.c.stream_id)},
        {"kappa", fmt(o.p.kappa)},
        {"a", fmt(o.p.a)},
        {"b", fmt(o.p.b)},
        {"n0", std::to_string(o.p.n0)},
        {"k0", std::to_string(o.p.k0)},
        {"law", o.deterministic ? "deterministic" : "geometric"},
        {"q", fmt(o.q)},
        {"n1", std::to_string(o.n1)},
        {"steps", std::to_string(o.steps)},
        {"v_x", fmt(o.vx)},
        {"v_y", fmt(o.vy)},
        {"blocks_completed", std::to_string(r.returns.size())},
    };
    if (!r.series.empty()) m.emplace_back("final_lambda", fmt(r.series.back().value));
    write_run_manifest(dir, started,
                       {"fig8_lambda.csv", "fig8_lambda.svg", "fig8_returns.csv", "manifest.txt"},
                       std::move(m));
    std::cout << "wrote " << csv.string() << " (" << r.series.size() << " points, "
              << r.returns.size() << " blocks)";
    if (!r.series.empty()) std::cout << ", final lambda = " << fmt(r.series.back().value);
    std::cout << "\n";
}

// --------------------------------------------------------------- spectrum --

struct SpectrumOpts {
    CommonOpts c;
    double a = 0.03;
    double epsilon = 1e-4;
    double h = 0.01;
    std::int64_t T = 2000;
};

void run_spectrum(const SpectrumOpts& o) {
    const std::string started = wall_time_now();
    const std::uint64_t seed = parse_seed(o.c.seed_text);
    const fs::path dir = resolve_out_dir(o.c.out);
    if (o.T < 1) throw UsageError("--T: the spectrum run needs at least one step");
    rds::oy::FlowParams p;
    p.a = o.a;
    p.epsilon = o.epsilon;
    p.h = o.h;
    p.T = o.T;
    p.validate();

    rds::RngStream stream = rds::spawn_stream(seed, o.c.stream_id);
    const rds::NoiseWord word =
        rds::NoiseWord::draw(stream, static_cast<std::size_t>(o.T), 2);
    const rds::oy::OyUnitMap sys(o.a, o.epsilon, o.h);
    const rds::oy::TanPoint q0 = rds::oy::tan_transform(p.x0);
    const rds::Vec2 x0{q0.z, q0.w};

    const rds::SpectrumSeries s = rds::qr_spectrum_series(
        sys, word, x0, static_cast<std::size_t>(o.T), rds::DecimationPolicy::auto_for(o.T));

    // Mean log |det DF| along the same orbit, for the trace-vs-sum cross-check.
    double logdet_sum = 0.0;
    {
        rds::Vec2 x = x0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(o.T); ++i) {
            logdet_sum += std::log(std::abs(sys.jacobian(word.at(i), x).det()));
            x = sys.step(word.at(i), x);
        }
    }
    const double l1 = s.lambda1.back().value;
    const double l2 = s.lambda2.back().value;
    const double logdet_mean = logdet_sum / static_cast<double>(o.T);

    rds::io::write_series_csv((dir / "spectrum_lambda1.csv").string(), s.lambda1, "t", "lambda");
    rds::io::write_series_csv((dir / "spectrum_lambda2.csv").string(), s.lambda2, "t", "lambda");
    rds::io::emit_svg((dir / "spectrum_lambda1.svg").string(), s.lambda1,
                      "leading exponent of the unit map (QR)");

    write_run_manifest(dir, started,
                       {"spectrum_lambda1.csv", "spectrum_lambda2.csv", "spectrum_lambda1.svg",
                        "manifest.txt"},
                       {{"experiment", "spectrum"},
                        {"seed", std::to_string(seed)},
                        {"stream_id", std::to_string(o.c.stream_id)},
                        {"a", fmt(o.a)},
                        {"epsilon", fmt(o.epsilon)},
                        {"h", fmt(o.h)},
                        {"T", std::to_string(o.T)},
                        {"lambda1_final", fmt(l1)},
                        {"lambda2_final", fmt(l2)},
                        {"logdet_mean", fmt(logdet_mean)},
                        {"sum_rule_residual", fmt(l1 + l2 - logdet_mean)}});
    std::cout << "wrote spectrum series; lambda = (" << fmt(l1) << ", " << fmt(l2)
              << "), sum-rule residual = " << fmt(l1 + l2 - logdet_mean) << "\n";
}

// --------------------------------------------------------------- diagnose --

struct DiagnoseOpts {
    CommonOpts c;
    std::string kind;
    std::string in; // amplitude: input series CSV
    int n0 = 2;
    double q = 0.5;
    std::int64_t N = 100000;
};

void run_diagnose(const DiagnoseOpts& o) {
    const std::string started = wall_time_now();
    const fs::path dir = resolve_out_dir(o.c.out);

    if (o.kind == "amplitude") {
        if (o.in.empty()) throw UsageError("--in: amplitude diagnosis needs an input series CSV");
        const rds::io::CsvSeries cs = rds::io::read_series_csv(o.in);
        if (cs.points.empty()) throw std::runtime_error(o.in + ": series is empty");
        std::int64_t t_max = 1;
        for (const auto& pt : cs.points) t_max = std::max(t_max, pt.t);
        const int d_hi = static_cast<int>(std::floor(std::log10(static_cast<double>(t_max))));
        const auto windows = rds::io::decade_windows(cs.points, 0, std::min(d_hi, 17));

        const fs::path csv = dir / "amplitude_windows.csv";
        std::ofstream out(csv.string(), std::ios::binary);
        if (!out) throw std::runtime_error("cannot open amplitude_windows.csv for writing");
        out << "window_lo,window_hi,sup,inf,amplitude\n";
        std::int64_t excluded = 0;
        for (const auto& w : windows) {
            out << w.t_lo << ',' << w.t_hi << ',' << fmt(w.sup) << ',' << fmt(w.inf) << ','
                << fmt(w.amplitude()) << '\n';
            excluded += w.excluded;
        }
        out.close();
        write_run_manifest(dir, started, {"amplitude_windows.csv", "manifest.txt"},
                           {{"experiment", "diagnose-amplitude"},
                            {"input", o.in},
                            {"windows", std::to_string(windows.size())},
                            {"excluded_points", std::to_string(excluded)}});
        std::cout << "wrote " << csv.string() << " (" << windows.size() << " windows)\n";
        return;
    }

    if (o.kind == "slln") {
        const std::uint64_t seed = parse_seed(o.c.seed_text);
        rds::RngStream stream = rds::spawn_stream(seed, o.c.stream_id);
        const auto dist = rds::BoxIndexDist::geometric(o.n0, o.q);
        const rds::Series s = rds::fig8::slln_diagnostic(dist, stream, o.N);
        double worst = 0.0;
        for (const auto& pt : s)
            if (pt.t >= o.N / 2 && pt.value > worst) worst = pt.value;

        const fs::path csv = dir / "slln.csv";
        rds::io::write_series_csv(csv.string(), s, "n", "ratio");
        write_run_manifest(dir, started, {"slln.csv", "manifest.txt"},
                           {{"experiment", "diagnose-slln"},
                            {"seed", std::to_string(seed)},
                            {"stream_id", std::to_string(o.c.stream_id)},
                            {"n0", std::to_string(o.n0)},
                            {"q", fmt(o.q)},
                            {"N", std::to_string(o.N)},
                            {"max_tail_ratio", fmt(worst)},
                            {"mean_index", fmt(dist.mean())}});
        std::cout << "wrote " << csv.string() << ", max tail ratio = " << fmt(worst) << "\n";
        return;
    }

    throw UsageError("--kind: expected 'amplitude' or 'slln', got '" + o.kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-dynamics experiment driver"};
    app.require_subcommand(1);

    OyOpts oy;
    CLI::App* c_oy = app.add_subcommand(
        "oy-ftle", "kicked heteroclinic flow: finite-time exponent series");
    add_common(c_oy, oy.c);
    c_oy->add_option("--a", oy.p.a, "dissipation parameter in (0,1)")->capture_default_str();
    c_oy->add_option("--epsilon", oy.p.epsilon, "kick amplitude (>= 0)")->capture_default_str();
    c_oy->add_option("--dt", oy.p.h, "integrator step; 1/dt must be an integer")
        ->capture_default_str();
    c_oy->add_option("--T", oy.p.T, "unit-time steps")->capture_default_str();
    c_oy->add_option("--x0x", oy.p.x0.x, "initial x in (0,pi)")->capture_default_str();
    c_oy->add_option("--x0y", oy.p.x0.y, "initial y in (0,pi)")->capture_default_str();
    c_oy->add_flag("--full", oy.full, "record every step (default decimates past 10^5)");
    c_oy->add_option("--ensemble", oy.ensemble, "also run this many trajectories (ids 0..N-1)")
        ->capture_default_str();
    c_oy->add_flag("--serial", oy.serial, "force the serial reference path for --ensemble");
    c_oy->callback([&oy] { run_oy(oy); });

    Fig8Opts f8;
    CLI::App* c_f8 = app.add_subcommand(
        "fig8", "impulsed box-chain map: exponent series and return times");
    add_common(c_f8, f8.c);
    c_f8->add_option("--kappa", f8.p.kappa, "expansion factor (> 1)")->capture_default_str();
    c_f8->add_option("--a", f8.p.a, "box lower edge (1 < a)")->capture_default_str();
    c_f8->add_option("--b", f8.p.b, "box upper edge (a < b < kappa)")->capture_default_str();
    c_f8->add_option("--n0", f8.p.n0, "smallest admissible box index")->capture_default_str();
    c_f8->add_option("--k0", f8.p.k0, "per-block padding steps")->capture_default_str();
    c_f8->add_option("--q", f8.q, "geometric law ratio in (0,1)")->capture_default_str();
    c_f8->add_option("--n1", f8.n1, "starting box index")->capture_default_str();
    c_f8->add_option("--steps", f8.steps, "total steps")->capture_default_str();
    c_f8->add_option("--vx", f8.vx, "direction vector x")->capture_default_str();
    c_f8->add_option("--vy", f8.vy, "direction vector y")->capture_default_str();
    c_f8->add_flag("--deterministic", f8.deterministic,
                   "replace the random law by target = current box (indices double forever)");
    c_f8->callback([&f8] { run_fig8(f8); });

    SpectrumOpts sp;
    CLI::App* c_sp = app.add_subcommand(
        "spectrum", "QR exponent pair of the flow's unit map");
    add_common(c_sp, sp.c);
    c_sp->add_option("--a", sp.a, "dissipation parameter in (0,1)")->capture_default_str();
    c_sp->add_option("--epsilon", sp.epsilon, "kick amplitude (>= 0)")->capture_default_str();
    c_sp->add_option("--dt", sp.h, "integrator step; 1/dt must be an integer")
        ->capture_default_str();
    c_sp->add_option("--T", sp.T, "unit-time steps")->capture_default_str();
    c_sp->callback([&sp] { run_spectrum(sp); });

    DiagnoseOpts dg;
    CLI::App* c_dg = app.add_subcommand("diagnose", "stand-alone diagnostics");
    add_common(c_dg, dg.c);
    c_dg->add_option("--kind", dg.kind, "'amplitude' (decade windows of a series CSV) or 'slln'")
        ->required();
    c_dg->add_option("--in", dg.in, "input series CSV for --kind amplitude");
    c_dg->add_option("--n0", dg.n0, "smallest index of the geometric law")->capture_default_str();
    c_dg->add_option("--q", dg.q, "geometric law ratio in (0,1)")->capture_default_str();
    c_dg->add_option("--N", dg.N, "number of draws")->capture_default_str();
    c_dg->callback([&dg] { run_diagnose(dg); });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        // Usage is `expcli <subcommand> [options]`.  When --config is present
        // its keys are spliced in as options right after the subcommand; keys
        // the user passed explicitly are skipped inside config_tokens, so
        // command-line flags keep precedence.
        if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
            const CLI::App* sub = app.get_subcommand_no_throw(args[0]);
            std::string cfg;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
                else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
            }
            if (sub != nullptr && !cfg.empty()) {
                const std::vector<std::string> extra =
                    config_tokens(cfg, sub, {args.begin() + 1, args.end()});
                args.insert(args.begin() + 1, extra.begin(), extra.end());
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // configuration / usage error
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1; // configuration / usage error
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2; // runtime failure
    }
    return 0;
}
