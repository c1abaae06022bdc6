// Command-line front end: check / scan / simulate / reconstruct / gramian.
// Exit codes: 0 success (strategic for check), 3 not strategic (check),
// 64 usage or config error, 65 data mismatch, 70 numerical failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "gradsense/config.hpp"
#include "gradsense/report.hpp"
#include "gradsense/simulate.hpp"
#include "gradsense/strategic.hpp"
#include "gradsense/version.hpp"

namespace {

constexpr int kExitNotStrategic = 3;
constexpr int kExitUsage = 64;
constexpr int kExitDataMismatch = 65;
constexpr int kExitNumerical = 70;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool json_to_stdout = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to the JSON run configuration")
        ->required();
    cmd->add_option("--out", args.out_dir, "Directory for output files (created if missing)");
    cmd->add_option("--seed", args.seed, "Override the config noise seed");
    cmd->add_flag("--json", args.json_to_stdout, "Print the primary JSON artifact to stdout");
}

gradsense::RunConfig load_config(const CommonArgs& args) {
    gradsense::RunConfig cfg = gradsense::parse_config_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    return cfg;
}

std::filesystem::path ensure_out_dir(const CommonArgs& args) {
    std::filesystem::path dir = args.out_dir.empty() ? "." : args.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw gradsense::Error("cannot write " + p.string());
    out << text;
}

int scan_thread_cap() {
    const char* env = std::getenv("GRADSENSE_THREADS");
    if (!env) {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw ? static_cast<int>(hw) : 1;
    }
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(env, &end, 10);
    if (errno || end == env || *end != '\0' || v < 1)
        throw gradsense::ValidationError("GRADSENSE_THREADS must be an integer >= 1");
    return static_cast<int>(v);
}

gradsense::VerdictReport build_verdict_report(const gradsense::RunConfig& cfg,
                                              const gradsense::ModeSet& ms) {
    using namespace gradsense;
    VerdictReport rep;
    rep.tool_version = kVersion;
    rep.config_echo = cfg.echo;
    for (const EigenGroup& g : ms.groups) {
        rep.group_eigenvalues.push_back(g.lambda);
        rep.group_multiplicities.push_back(g.multiplicity());
    }
    rep.verdict = rank_test(cfg.domain, cfg.suite, ms, cfg.gamma, cfg.quad, cfg.rank_tol);
    for (const Sensor& s : cfg.suite.sensors) rep.locus.push_back(locus_check(cfg.domain, s, cfg.J));
    const ObservabilityGramian g = gramian(cfg.domain, cfg.suite, ms, cfg.T, cfg.quad);
    rep.gramian.computed = true;
    rep.gramian.horizon = g.horizon;
    rep.gramian.min_eigenvalue = g.eigenvalues(0);
    rep.gramian.max_eigenvalue = g.eigenvalues(g.eigenvalues.size() - 1);
    rep.gramian.min_group_eigenvalue = min_group_eigenvalue(g);
    rep.gramian.positive_definite = positive_definite_test(g, cfg.pd_tol);
    rep.completeness = completeness_surrogate(cfg.domain, ms, cfg.gamma, cfg.quad, cfg.rank_tol);
    return rep;
}

int cmd_check(const CommonArgs& args) {
    using namespace gradsense;
    const RunConfig cfg = load_config(args);
    const ModeSet ms = build_mode_set(cfg.domain, cfg.J, cfg.grouping_tol);
    const VerdictReport rep = build_verdict_report(cfg, ms);
    const std::string text = to_json(rep).dump(2) + "\n";
    write_text_file(ensure_out_dir(args) / "report.json", text);
    if (args.json_to_stdout) std::cout << text;
    return rep.verdict.strategic ? 0 : kExitNotStrategic;
}

int cmd_scan(const CommonArgs& args) {
    using namespace gradsense;
    const RunConfig cfg = load_config(args);
    if (!cfg.scan) throw ValidationError("scan: config has no scan section");
    const ModeSet ms = build_mode_set(cfg.domain, cfg.J, cfg.grouping_tol);
    const Sensor& tpl = cfg.suite.sensors.front(); // first sensor is the template
    const bool boundary = tpl.kind == SensorKind::BoundaryPointwise ||
                          tpl.kind == SensorKind::BoundaryZone;
    if (!boundary && cfg.scan->y.values.empty())
        throw ValidationError("scan.y: required for internal sensor templates");
    const ScanResult scan =
        scan_locations(cfg.domain, tpl, ms, cfg.gamma, cfg.scan->x.values, cfg.scan->y.values,
                       cfg.quad, cfg.rank_tol, scan_thread_cap());
    std::ostringstream csv;
    write_scan_csv(csv, scan, boundary);
    write_text_file(ensure_out_dir(args) / "scan.csv", csv.str());
    if (args.json_to_stdout) std::cout << csv.str();
    bool any = false;
    for (const ScanRecord& r : scan.records) any = any || r.valid;
    return any ? 0 : kExitNumerical;
}

int cmd_simulate(const CommonArgs& args) {
    using namespace gradsense;
    const RunConfig cfg = load_config(args);
    const ModeSet ms = build_mode_set(cfg.domain, cfg.J, cfg.grouping_tol);
    StateCoeffs c0;
    c0.values = initial_state_coeffs(cfg, ms);
    OutputRecord rec = simulate_outputs(cfg.domain, cfg.suite, ms, c0, cfg.T, cfg.dt, cfg.quad);
    if (cfg.noise_sigma > 0.0) rec = add_noise(rec, cfg.noise_sigma, cfg.seed);
    std::ostringstream csv;
    write_outputs_csv(csv, rec);
    write_text_file(ensure_out_dir(args) / "outputs.csv", csv.str());
    if (args.json_to_stdout) std::cout << csv.str();
    return 0;
}

int cmd_reconstruct(const CommonArgs& args, const std::string& data_path) {
    using namespace gradsense;
    const RunConfig cfg = load_config(args);
    const ModeSet ms = build_mode_set(cfg.domain, cfg.J, cfg.grouping_tol);

    std::ifstream in(data_path, std::ios::binary);
    if (!in) throw ParseError("cannot open outputs CSV: " + data_path);
    const OutputRecord rec = read_outputs_csv(in);

    // The record must match the configured suite and time grid.
    if (rec.samples.cols() != static_cast<Eigen::Index>(cfg.suite.q()))
        throw HorizonMismatch("outputs CSV has " + std::to_string(rec.samples.cols()) +
                              " sensor columns, config has " + std::to_string(cfg.suite.q()));
    const long K = std::max<long>(1, std::lround(cfg.T / cfg.dt));
    if (rec.times.size() != static_cast<std::size_t>(K) + 1)
        throw HorizonMismatch("outputs CSV has " + std::to_string(rec.times.size()) +
                              " rows, config time grid has " + std::to_string(K + 1));
    if (std::abs(rec.times.back() - cfg.T) > 1e-9 * cfg.T)
        throw HorizonMismatch("outputs CSV final time differs from configured T");

    OutputRecord used = rec;
    used.noise_sigma = cfg.noise_sigma;

    ReconstructOptions opts;
    opts.reg_lambda = cfg.reg_lambda ? *cfg.reg_lambda : -1.0; // <0: automatic
    StateCoeffs truth;
    truth.values = initial_state_coeffs(cfg, ms);
    opts.true_coeffs = truth;

    const ReconstructionResult res =
        reconstruct_gradient(cfg.domain, cfg.suite, ms, used, cfg.gamma, cfg.quad, opts);

    const GradientTrace truth_trace =
        trace_state_gradient(cfg.domain, ms, truth, cfg.gamma, opts.trace_samples);
    std::ostringstream csv;
    write_trace_csv(csv, res.trace_on_gamma, &truth_trace);

    json rep{{"tool_version", kVersion},
             {"config", cfg.echo},
             {"residual", res.residual},
             {"regularization", opts.reg_lambda < 0.0
                                    ? used.noise_sigma * used.noise_sigma *
                                          static_cast<double>(rec.samples.size())
                                    : opts.reg_lambda},
             {"estimated_coeffs", std::vector<double>(res.estimated.values.data(),
                                                      res.estimated.values.data() +
                                                          res.estimated.values.size())},
             {"err_gamma", res.err_gamma ? json(*res.err_gamma) : json(nullptr)},
             {"err_boundary", res.err_boundary ? json(*res.err_boundary) : json(nullptr)}};
    const std::string text = rep.dump(2) + "\n";
    const auto dir = ensure_out_dir(args);
    write_text_file(dir / "reconstruction.json", text);
    write_text_file(dir / "trace.csv", csv.str());
    if (args.json_to_stdout) std::cout << text;
    return 0;
}

int cmd_gramian(const CommonArgs& args) {
    using namespace gradsense;
    const RunConfig cfg = load_config(args);
    const ModeSet ms = build_mode_set(cfg.domain, cfg.J, cfg.grouping_tol);
    const ObservabilityGramian g = gramian(cfg.domain, cfg.suite, ms, cfg.T, cfg.quad);
    const bool pd = positive_definite_test(g, cfg.pd_tol);
    const double mn = g.eigenvalues(0), mx = g.eigenvalues(g.eigenvalues.size() - 1);
    json rep{{"tool_version", kVersion},
             {"horizon", g.horizon},
             {"mode_count", static_cast<int>(g.eigenvalues.size())},
             {"min_eigenvalue", mn},
             {"max_eigenvalue", mx},
             {"condition", mn > 0.0 ? json(mx / mn) : json(nullptr)},
             {"positive_definite", pd}};
    const std::string text = rep.dump(2) + "\n";
    write_text_file(ensure_out_dir(args) / "gramian.json", text);
    std::cout << "gramian horizon=" << format_double(g.horizon)
              << " min_eigenvalue=" << format_double(mn) << " max_eigenvalue=" << format_double(mx)
              << " positive_definite=" << (pd ? "true" : "false") << '\n';
    if (args.json_to_stdout) std::cout << text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strategic-sensor analysis for boundary gradient sensing on a rectangle"};
    app.set_version_flag("--version", gradsense::kVersion);
    app.require_subcommand(1);

    CommonArgs check_args, scan_args, sim_args, rec_args, gram_args;
    std::string data_path;

    CLI::App* check = app.add_subcommand("check", "Strategic verdict for the configured suite");
    add_common(check, check_args);
    CLI::App* scan = app.add_subcommand("scan", "Rank-test scan of sensor locations");
    add_common(scan, scan_args);
    CLI::App* simulate = app.add_subcommand("simulate", "Forward-simulate sensor outputs");
    add_common(simulate, sim_args);
    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "Reconstruct the initial gradient trace from outputs");
    add_common(reconstruct, rec_args);
    reconstruct->add_option("--data", data_path, "Outputs CSV produced by simulate")->required();
    CLI::App* gram = app.add_subcommand("gramian", "Observability Gramian spectrum summary");
    add_common(gram, gram_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(check_args);
        if (scan->parsed()) return cmd_scan(scan_args);
        if (simulate->parsed()) return cmd_simulate(sim_args);
        if (reconstruct->parsed()) return cmd_reconstruct(rec_args, data_path);
        if (gram->parsed()) return cmd_gramian(gram_args);
    } catch (const gradsense::HorizonMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataMismatch;
    } catch (const gradsense::ModeSetMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataMismatch;
    } catch (const gradsense::SingularSystem& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const gradsense::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
