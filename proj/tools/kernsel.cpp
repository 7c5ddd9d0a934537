// kernsel: penalized least-squares kernel selection for density estimation.
//
// Subcommands:
//   select    run the penalized criterion over a kernel family on a sample
//   sweep     seeded kappa-sweep replication experiments (CSV output)
//   diagnose  oracle-mode diagnostics against a known density (JSON output)
//   sample    draw a seeded sample from a known density
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kernsel/kernsel.hpp"

namespace {

using nlohmann::json;

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kernsel::DataError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

json make_manifest(const std::string& command, const json& config,
                   std::uint64_t master_seed, const std::vector<std::string>& outputs) {
    return json{{"command", command},
                {"tool_version", kernsel::kVersion},
                {"master_seed", master_seed},
                {"timestamp", timestamp_utc()},
                {"config", config},
                {"outputs", outputs}};
}

// Master seed: --seed flag wins, then the KERNSEL_SEED environment variable,
// then 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("KERNSEL_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw kernsel::ConfigError("KERNSEL_SEED is not an unsigned integer");
        }
    }
    return 1;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw kernsel::ConfigError("malformed number '" + cell + "' in list");
        }
    }
    if (out.empty()) throw kernsel::ConfigError("empty numeric list");
    return out;
}

// Grid syntax: "paper", a comma list, or "lo:hi:count" (equispaced).
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
    if (text == "paper" || text == "default") {
        if (what == "h") return kernsel::reference_bandwidth_grid();
        return kernsel::default_kappa_grid();
    }
    const auto c1 = text.find(':');
    if (c1 != std::string::npos) {
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw kernsel::ConfigError("grid '" + text + "' needs lo:hi:count");
        }
        const double lo = std::stod(text.substr(0, c1));
        const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        const int count = std::stoi(text.substr(c2 + 1));
        if (count < 1 || !(hi >= lo)) throw kernsel::ConfigError("bad grid '" + text + "'");
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        }
        return out;
    }
    return parse_double_list(text);
}

struct FamilyOptions {
    std::string family = "parzen";
    double a = 0.0;
    std::string h_grid = "paper";
    int d_max = 100;
    int fourier_p = 3;
    double w0 = 1.0;
    std::string tau = "1";
};

void add_family_flags(CLI::App* cmd, FamilyOptions& opt) {
    cmd->add_option("--family", opt.family, "Kernel family: parzen, histogram or fourier");
    cmd->add_option("--a", opt.a, "Two-bump parameter a of the base kernel (parzen)");
    cmd->add_option("--h-grid", opt.h_grid, "Bandwidths: 'paper', comma list or lo:hi:count");
    cmd->add_option("--d-max", opt.d_max, "Histogram dimensions run over {1..d-max}");
    cmd->add_option("--p", opt.fourier_p, "Fourier basis size (odd)");
    cmd->add_option("--w0", opt.w0, "Fourier weight of the constant function");
    cmd->add_option("--tau", opt.tau, "Fourier pair weights, comma list of length p/2");
}

struct BuiltFamily {
    std::vector<kernsel::KernelModel> kernels;
    json config;
};

BuiltFamily build_family(const FamilyOptions& opt) {
    BuiltFamily out;
    out.config = {{"family", opt.family}};
    if (opt.family == "parzen") {
        const kernsel::BaseKernel base(opt.a);
        const auto grid = parse_grid(opt.h_grid, "h");
        for (double h : grid) out.kernels.push_back(kernsel::KernelModel::parzen(base, h));
        out.config["a"] = opt.a;
        out.config["h_grid"] = grid;
        return out;
    }
    if (opt.family == "histogram") {
        if (opt.d_max < 1) throw kernsel::ConfigError("--d-max must be >= 1");
        for (int d = 1; d <= opt.d_max; ++d) {
            out.kernels.push_back(kernsel::KernelModel::projection(kernsel::RegularHistogram{d}));
        }
        out.config["d_max"] = opt.d_max;
        return out;
    }
    if (opt.family == "fourier") {
        kernsel::FourierPaired f{opt.fourier_p, opt.w0, parse_double_list(opt.tau)};
        out.kernels.push_back(kernsel::KernelModel::weighted_projection(f));
        out.config["p"] = opt.fourier_p;
        out.config["w0"] = opt.w0;
        out.config["tau"] = f.tau;
        return out;
    }
    throw kernsel::ConfigError("unknown family '" + opt.family + "'");
}

kernsel::PenaltyRule parse_penalty(const std::string& text, std::size_t family_size) {
    using kernsel::PenaltyRule;
    if (text == "optimal") return PenaltyRule::optimal_theoretical();
    if (text == "empirical") return PenaltyRule::optimal_empirical();
    if (text == "minimal") return PenaltyRule::minimal();
    if (text == "none" || text == "zero") return PenaltyRule::zero_table(family_size);
    if (text.rfind("kappa:", 0) == 0) {
        try {
            return PenaltyRule::minimal_plus_kappa(std::stod(text.substr(6)));
        } catch (const std::exception&) {
            throw kernsel::ConfigError("malformed kappa penalty '" + text + "'");
        }
    }
    if (text.rfind("table:", 0) == 0) {
        const auto values = kernsel::read_sample_file(text.substr(6));
        return PenaltyRule::explicit_table(values);
    }
    throw kernsel::ConfigError(
        "unknown penalty '" + text +
        "' (expected optimal, empirical, minimal, kappa:<v>, none or table:<file>)");
}

// Flags override values from a JSON config file. Only keys for flags the user
// did not pass on the command line are applied.
void apply_config_file(const CLI::App& cmd, const std::string& path, json& cfg) {
    std::ifstream in(path);
    if (!in) throw kernsel::DataError("cannot open config file '" + path + "'");
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw kernsel::DataError("config file '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw kernsel::ConfigError("config file must hold a JSON object");
}

template <typename T>
void config_override(const CLI::App& cmd, const json& cfg, const std::string& flag,
                     const std::string& key, T& value) {
    const auto* opt = cmd.get_option_no_throw("--" + flag);
    if (opt != nullptr && opt->count() > 0) return;  // explicit flag wins
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

int run_select(const FamilyOptions& fam, const std::string& input, int column,
               const std::string& penalty_text, const std::string& out_dir) {
    const BuiltFamily family = build_family(fam);
    kernsel::Sample sample(kernsel::read_sample_file(input, column));
    const auto rule = parse_penalty(penalty_text, family.kernels.size());
    const auto result = kernsel::select(family.kernels, sample, rule);

    json config = family.config;
    config["input"] = input;
    config["penalty"] = penalty_text;
    config["n"] = sample.n();
    const std::string manifest_name = "selection.manifest.json";
    kernsel::write_selection_csv(join_path(out_dir, "selection.csv"), family.kernels,
                                 result, manifest_name);
    write_json_file(join_path(out_dir, manifest_name),
                    make_manifest("select", config, 0, {"selection.csv"}));

    const auto& row = result.rows[static_cast<std::size_t>(result.selected_index)];
    std::cout << "selected kernel " << result.selected_index << " ("
              << family.kernels[static_cast<std::size_t>(result.selected_index)].describe()
              << "): criterion " << kernsel::format_g17(row.criterion) << ", complexity "
              << kernsel::format_g17(row.complexity_ptheta) << "\n";
    return 0;
}

int run_sweep(const CLI::App& cmd, const std::string& scenario, FamilyOptions& fam,
              std::string& density_name, int& n, int& reps,
              std::optional<std::uint64_t>& seed_flag, std::string& kappa_text,
              double& beta, const std::string& config_path, const std::string& out_dir) {
    json file_cfg = json::object();
    if (!config_path.empty()) {
        apply_config_file(cmd, config_path, file_cfg);
        config_override(cmd, file_cfg, "a", "a", fam.a);
        config_override(cmd, file_cfg, "n", "n", n);
        config_override(cmd, file_cfg, "reps", "replications", reps);
        config_override(cmd, file_cfg, "density", "density", density_name);
        config_override(cmd, file_cfg, "kappa-grid", "kappa_grid", kappa_text);
        config_override(cmd, file_cfg, "beta", "beta", beta);
        config_override(cmd, file_cfg, "d-max", "d_max", fam.d_max);
        if (!seed_flag && file_cfg.contains("master_seed")) {
            seed_flag = file_cfg.at("master_seed").get<std::uint64_t>();
        }
    }

    kernsel::ExperimentConfig cfg;
    cfg.n = n;
    cfg.replications = reps;
    cfg.master_seed = resolve_seed(seed_flag);
    cfg.kappa_grid = parse_grid(kappa_text, "kappa");
    cfg.parzen_a = fam.a;
    cfg.bandwidth_grid = parse_grid(fam.h_grid, "h");
    cfg.dimension_max = fam.d_max;
    cfg.beta = beta;

    kernsel::SweepResult result;
    if (scenario == "parzen") {
        cfg.scenario = kernsel::Scenario::parzen_kappa_sweep;
        cfg.density = density_name.empty() ? kernsel::KnownDensity::std_gaussian()
                                           : kernsel::KnownDensity::from_name(density_name);
        result = kernsel::run_parzen_sweep(cfg);
    } else if (scenario == "histogram") {
        cfg.scenario = kernsel::Scenario::histogram_kappa_sweep;
        cfg.density = density_name.empty() ? kernsel::KnownDensity::triangular2x()
                                           : kernsel::KnownDensity::from_name(density_name);
        result = kernsel::run_histogram_sweep(cfg);
    } else if (scenario == "bias-dominant") {
        cfg.scenario = kernsel::Scenario::bias_dominant;
        cfg.density = density_name.empty() ? kernsel::KnownDensity::triangular2x()
                                           : kernsel::KnownDensity::from_name(density_name);
        result = kernsel::run_bias_dominant(cfg);
    } else {
        throw kernsel::ConfigError("unknown scenario '" + scenario +
                                   "' (parzen, histogram or bias-dominant)");
    }

    json config = {{"scenario", scenario},
                   {"n", cfg.n},
                   {"replications", cfg.replications},
                   {"density", cfg.density.name()},
                   {"kappa_grid", result.kappa_grid},
                   {"defaults_note", "grid and replication defaults are artifact choices"}};
    if (scenario == "parzen") {
        config["a"] = cfg.parzen_a;
        config["h_grid"] = cfg.bandwidth_grid;
    } else if (scenario == "histogram") {
        config["d_max"] = cfg.dimension_max;
    } else {
        config["beta"] = cfg.beta;
    }

    const std::string manifest_name = "sweep.manifest.json";
    kernsel::write_sweep_csv(join_path(out_dir, "sweep.csv"), result, manifest_name);
    kernsel::write_sweep_summary_csv(join_path(out_dir, "sweep_summary.csv"), result,
                                     manifest_name);
    write_json_file(join_path(out_dir, manifest_name),
                    make_manifest("sweep", config, cfg.master_seed,
                                  {"sweep.csv", "sweep_summary.csv"}));

    const auto pt = kernsel::detect_phase_transition(result);
    std::cout << "sweep: " << result.rows.size() << " rows";
    if (pt.detected) {
        std::cout << "; phase transition between kappa " << pt.kappa_left << " and "
                  << pt.kappa_right;
    }
    std::cout << "\n";
    return 0;
}

int run_diagnose(const FamilyOptions& fam, const std::string& input, int column,
                 const std::string& density_name, const std::string& out_dir) {
    if (density_name.empty()) {
        throw kernsel::ConfigError("diagnose runs in oracle mode and requires --density");
    }
    const auto density = kernsel::KnownDensity::from_name(density_name);
    const BuiltFamily family = build_family(fam);
    if (family.kernels.front().unit_domain() && !density.unit_domain()) {
        throw kernsel::ConfigError("density on the real line cannot drive a [0,1] family");
    }
    kernsel::Sample sample(kernsel::read_sample_file(input, column));

    const auto gamma = kernsel::gamma_bound(family.kernels, sample.n());
    const auto upsilon = kernsel::upsilon_bound(family.kernels, density, sample.n());

    json kernels = json::array();
    const double x_dev = std::log(std::max<double>(sample.n(), family.kernels.size()));
    for (std::size_t i = 0; i < family.kernels.size(); ++i) {
        const auto& k = family.kernels[i];
        const auto rep = kernsel::oracle_report(k, sample, density);
        const double ptheta = rep.variance_term * sample.n();
        // Deviation scale of (P_n - P) zeta_k from the explicit Bernstein
        // bound with the admissible variance/sup envelopes 4 Upsilon n PTheta
        // and 4 Upsilon n.
        const double zeta_scale =
            kernsel::bernstein_bound(4.0 * upsilon.upsilon_lower * sample.n() * ptheta,
                                     4.0 * upsilon.upsilon_lower * sample.n(), sample.n(),
                                     x_dev) /
            sample.n();
        kernels.push_back({{"index", i},
                           {"params", k.describe()},
                           {"bias", rep.bias},
                           {"variance_term", rep.variance_term},
                           {"true_risk", rep.true_risk},
                           {"ideal_penalty", rep.ideal_penalty},
                           {"ustat_residual", rep.ustat_residual},
                           {"cross_term", rep.cross_term},
                           {"bernstein_zeta_scale", zeta_scale},
                           {"ustat_tail_certificate", "not certified"}});
    }

    json config = family.config;
    config["input"] = input;
    config["density"] = density.name();
    config["n"] = sample.n();
    const std::string manifest_name = "diagnostics.manifest.json";
    json doc = {{"manifest", manifest_name},
                {"density", density.name()},
                {"n", sample.n()},
                {"gamma_report",
                 {{"gamma", gamma.gamma},
                  {"condition_holds", gamma.condition_holds},
                  {"sup_kernel_bound", gamma.sup_kernel_bound},
                  {"sup_theta_bound", gamma.sup_theta_bound}}},
                {"upsilon_report",
                 {{"upsilon_lower", upsilon.upsilon_lower},
                  {"components", json(upsilon.components)}}},
                {"kernels", kernels}};
    write_json_file(join_path(out_dir, "diagnostics.json"), doc);
    write_json_file(join_path(out_dir, manifest_name),
                    make_manifest("diagnose", config, 0, {"diagnostics.json"}));
    std::cout << "diagnostics for " << family.kernels.size() << " kernel(s) written\n";
    return 0;
}

int run_sample(const std::string& density_name, int n,
               const std::optional<std::uint64_t>& seed_flag, const std::string& output,
               const std::string& out_dir) {
    const auto density = kernsel::KnownDensity::from_name(density_name);
    if (n < 1) throw kernsel::ConfigError("--n must be >= 1");
    const std::uint64_t seed = resolve_seed(seed_flag);
    const auto values = density.sample_n(seed, n);

    const std::string manifest_name = "sample.manifest.json";
    kernsel::write_sample_file(join_path(out_dir, output), values, manifest_name);
    const json config = {{"density", density.name()}, {"n", n}, {"output", output}};
    write_json_file(join_path(out_dir, manifest_name),
                    make_manifest("sample", config, seed, {output}));
    std::cout << "wrote " << n << " values to " << output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized least-squares kernel selection for density estimation"};
    app.require_subcommand(1);

    FamilyOptions fam;
    std::string input;
    int column = -1;
    std::string penalty_text = "optimal";
    std::string out_dir = ".";
    std::string density_name;
    std::string scenario = "parzen";
    std::string kappa_text = "default";
    std::string config_path;
    std::string sample_output = "sample.txt";
    int n = 100;
    int reps = 50;
    double beta = 0.3;
    std::optional<std::uint64_t> seed_flag;

    auto* sel = app.add_subcommand("select", "Select a kernel by penalized least squares");
    add_family_flags(sel, fam);
    sel->add_option("--input", input, "Sample file (one float per line)")->required();
    sel->add_option("--column", column, "Read this 0-based column of a CSV input");
    sel->add_option("--penalty", penalty_text,
                    "optimal | empirical | minimal | kappa:<v> | none | table:<file>");
    sel->add_option("--out-dir", out_dir, "Output directory");

    auto* sw = app.add_subcommand("sweep", "Seeded kappa-sweep replication experiment");
    sw->add_option("--scenario", scenario, "parzen | histogram | bias-dominant");
    add_family_flags(sw, fam);
    sw->add_option("--n", n, "Sample size per replication");
    sw->add_option("--reps", reps, "Number of replications");
    sw->add_option("--seed", seed_flag, "Master seed (fallback: KERNSEL_SEED, then 1)");
    sw->add_option("--density", density_name, "std-gaussian | uniform | triangular");
    sw->add_option("--kappa-grid", kappa_text, "'default', comma list or lo:hi:count");
    sw->add_option("--beta", beta, "Dimension exponent for bias-dominant (< 1/3)");
    sw->add_option("--config", config_path, "JSON config file; flags override it");
    sw->add_option("--out-dir", out_dir, "Output directory");

    auto* diag = app.add_subcommand("diagnose", "Oracle diagnostics against a known density");
    add_family_flags(diag, fam);
    diag->add_option("--input", input, "Sample file")->required();
    diag->add_option("--column", column, "Read this 0-based column of a CSV input");
    diag->add_option("--density", density_name, "True density (required)");
    diag->add_option("--out-dir", out_dir, "Output directory");

    auto* smp = app.add_subcommand("sample", "Draw a seeded sample from a known density");
    smp->add_option("--density", density_name, "std-gaussian | uniform | triangular")
        ->required();
    smp->add_option("--n", n, "Sample size");
    smp->add_option("--seed", seed_flag, "Master seed (fallback: KERNSEL_SEED, then 1)");
    smp->add_option("--output", sample_output, "Output file name");
    smp->add_option("--out-dir", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
        if (sel->parsed()) return run_select(fam, input, column, penalty_text, out_dir);
        if (sw->parsed()) {
            return run_sweep(*sw, scenario, fam, density_name, n, reps, seed_flag,
                             kappa_text, beta, config_path, out_dir);
        }
        if (diag->parsed()) return run_diagnose(fam, input, column, density_name, out_dir);
        if (smp->parsed()) return run_sample(density_name, n, seed_flag, sample_output, out_dir);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        app.exit(e);
        return 2;
    } catch (const kernsel::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const kernsel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
