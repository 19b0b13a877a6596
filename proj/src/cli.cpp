#include "mrw/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mrw/empirical.hpp"
#include "mrw/error.hpp"
#include "mrw/exact.hpp"
#include "mrw/model_io.hpp"
#include "mrw/monte_carlo.hpp"
#include "mrw/report_io.hpp"
#include "mrw/rho.hpp"

namespace mrw {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct ExperimentConfig {
    std::string model_path;
    std::string experiment;
    std::string state_label;
    std::size_t n = 0;
    std::vector<std::size_t> n_grid;
    std::size_t paths = 1000;
    std::uint64_t seed = 1;
    std::string out_dir;
    unsigned threads = 0;
    double theta = 0.5;
    std::map<std::string, double> tolerances;
};

// Defaults for --tolerance keys.
const std::map<std::string, double>& tolerance_defaults() {
    static const std::map<std::string, double> defaults = {
        {"identity", 1e-10},       {"dual", 1e-12},          {"rho", 0.03},
        {"capped_budget", 0.001},  {"step_cap_factor", 1000}, {"exact_cap", 2000},
        {"support_cap", 1e7},      {"occupation_cap", 300},   {"enumeration_cap", 12},
    };
    return defaults;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read model file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string join_numbers(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_number(v[k]);
    return s + "]";
}

ojson estimator_json(const EstimatorResult& r) {
    ojson j;
    j["estimate"] = r.estimate;
    j["stderr"] = r.standard_error;
    j["paths"] = r.paths;
    j["seed"] = r.seed;
    j["exact"] = r.exact;
    if (r.capped) j["capped"] = r.capped;
    return j;
}

void write_samples(const fs::path& path, const std::vector<double>& values, std::size_t n) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(values.size());
    const std::string ns = std::to_string(n);
    for (std::size_t p = 0; p < values.size(); ++p) rows.push_back({std::to_string(p), ns, format_number(values[p])});
    write_csv(path, {"path_index", "n", "value"}, rows);
}

void write_cdf_compare(const fs::path& path, const EmpiricalDistribution& e, const ReferenceLaw& law,
                       std::vector<double> grid) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : cdf_comparison(e, law, grid)) {
        rows.push_back({format_number(r[0]), format_number(r[1]), format_number(r[2])});
    }
    write_csv(path, {"x", "F_empirical", "F_reference"}, rows);
}

std::vector<double> unit_grid(std::size_t points) {
    std::vector<double> g(points + 1);
    for (std::size_t k = 0; k <= points; ++k) g[k] = static_cast<double>(k) / static_cast<double>(points);
    return g;
}

class Runner {
public:
    Runner(const ExperimentConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {
        model_bytes_ = read_file(cfg.model_path);
        model_ = std::make_unique<MrwModel>(parse_model(model_bytes_));
        require_valid(*model_);
        if (cfg.state_label.empty()) {
            state_ = 0;
        } else {
            const auto idx = model_->index_of(cfg.state_label);
            if (!idx) throw InputError("unknown state label '" + cfg.state_label + "'");
            state_ = *idx;
        }
        for (const auto& [key, value] : tolerance_defaults()) tol_[key] = value;
        for (const auto& [key, value] : cfg.tolerances) {
            if (!tol_.count(key)) throw InputError("unknown tolerance key '" + key + "'");
            tol_[key] = value;
        }
        opts_.threads = cfg.threads;
        opts_.capped_budget = tol_["capped_budget"];
        opts_.step_cap_factor = tol_["step_cap_factor"];
        opts_.exact_cap = static_cast<std::size_t>(tol_["exact_cap"]);
        opts_.limits.support_cap = static_cast<std::size_t>(tol_["support_cap"]);
        opts_.limits.occupation_cap = static_cast<std::size_t>(tol_["occupation_cap"]);
        opts_.limits.enumeration_cap = static_cast<std::size_t>(tol_["enumeration_cap"]);
        dir_ = cfg.out_dir;
        fs::create_directories(dir_);
    }

    int run() {
        const auto start = std::chrono::steady_clock::now();
        int code = kExitOk;
        const auto& e = cfg_.experiment;
        if (e == "exact-law") code = exact_law_cmd();
        else if (e == "occupation") code = occupation_cmd();
        else if (e == "spitzer") code = spitzer_cmd();
        else if (e == "embedded-spitzer") code = embedded_cmd();
        else if (e == "strong-spitzer") code = strong_cmd();
        else if (e == "spitzer-identity") code = identity_cmd();
        else if (e == "arcsine-ks") code = arcsine_cmd();
        else if (e == "boundary") code = boundary_cmd();
        else if (e == "clt") code = clt_cmd();
        else if (e == "dual-check") code = dual_cmd();
        else if (e == "rho-report") code = rho_cmd();
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(wall, code);
        return code;
    }

private:
    std::size_t n_or(std::size_t fallback) {
        effective_n_ = cfg_.n ? cfg_.n : fallback;
        return effective_n_;
    }

    void emit(const std::string& name, const ojson& doc) {
        write_text(dir_ / name, dump_json(doc));
        outputs_.push_back(name);
    }
    void note_output(const std::string& name) { outputs_.push_back(name); }

    int exact_law_cmd() {
        const std::size_t n = n_or(10);
        const auto law = exact_law(*model_, state_, n, opts_.limits);
        write_law_csv(law, *model_, dir_ / "exact_law.csv");
        note_output("exact_law.csv");
        ojson j;
        j["n"] = n;
        j["state"] = model_->label(state_);
        j["total_mass"] = law.total();
        j["prob_positive"] = law.prob_positive();
        j["prob_zero"] = law.prob_zero();
        j["prob_negative"] = law.prob_negative();
        emit("exact_law.json", j);
        out_ << "exact law at n = " << n << ": P(S_n > 0) = " << format_number(law.prob_positive()) << "\n";
        return kExitOk;
    }

    int occupation_cmd() {
        const std::size_t n = n_or(100);
        ojson j;
        j["n"] = n;
        j["state"] = model_->label(state_);
        if (lattice_grid(*model_) && n <= opts_.limits.occupation_cap) {
            const auto counts = occupation_law(*model_, state_, n, opts_.limits).count_law();
            std::vector<std::vector<std::string>> rows;
            double mean = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                const double frac = static_cast<double>(k) / static_cast<double>(n);
                rows.push_back({std::to_string(k), format_number(frac), format_number(counts[k])});
                mean += frac * counts[k];
            }
            write_csv(dir_ / "occupation_law.csv", {"count", "fraction", "probability"}, rows);
            note_output("occupation_law.csv");
            j["exact_mean_fraction"] = mean;
        }
        const auto samples = occupation_fraction_samples(*model_, state_, n, cfg_.paths, cfg_.seed, opts_);
        write_samples(dir_ / "occupation_samples.csv", samples, n);
        note_output("occupation_samples.csv");
        j["mean_fraction"] = estimator_json(summarize(samples, cfg_.seed));
        emit("occupation.json", j);
        return kExitOk;
    }

    int spitzer_cmd() {
        const auto r = spitzer_average(*model_, state_, n_or(1000), cfg_.paths, cfg_.seed, opts_);
        emit("spitzer.json", estimator_json(r));
        out_ << "spitzer average = " << format_number(r.estimate) << "\n";
        return kExitOk;
    }

    int embedded_cmd() {
        const auto r = embedded_spitzer_average(*model_, state_, n_or(1000), cfg_.paths, cfg_.seed, opts_);
        emit("embedded_spitzer.json", estimator_json(r));
        out_ << "embedded spitzer average = " << format_number(r.estimate) << "\n";
        return kExitOk;
    }

    int strong_cmd() {
        std::vector<std::size_t> grid = cfg_.n_grid;
        if (grid.empty()) grid.push_back(n_or(1000));
        const auto curve = strong_spitzer_curve(*model_, state_, grid, cfg_.paths, cfg_.seed, opts_);
        std::vector<std::vector<std::string>> rows;
        ojson list = ojson::array();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            rows.push_back({std::to_string(grid[k]), format_number(curve[k].estimate),
                            format_number(curve[k].standard_error), std::to_string(curve[k].paths),
                            curve[k].exact ? "true" : "false"});
            auto e = estimator_json(curve[k]);
            e["n"] = grid[k];
            list.push_back(e);
        }
        write_csv(dir_ / "strong_spitzer.csv", {"n", "estimate", "stderr", "paths", "exact"}, rows);
        note_output("strong_spitzer.csv");
        emit("strong_spitzer.json", list);
        return kExitOk;
    }

    int identity_cmd() {
        std::vector<std::size_t> grid = cfg_.n_grid;
        if (grid.empty()) {
            for (std::size_t n = 1; n <= n_or(8); ++n) grid.push_back(n);
        }
        std::vector<std::vector<std::string>> rows;
        double worst = 0.0;
        for (const std::size_t n : grid) {
            const auto r = spitzer_identity(*model_, state_, n, opts_.limits);
            rows.push_back({std::to_string(n), format_number(r.lhs), format_number(r.rhs), format_number(r.abs_diff),
                            std::to_string(r.paths)});
            worst = std::max(worst, r.abs_diff);
        }
        write_csv(dir_ / "spitzer_identity.csv", {"n", "lhs", "rhs", "abs_diff", "paths"}, rows);
        note_output("spitzer_identity.csv");
        ojson j;
        j["state"] = model_->label(state_);
        j["max_abs_diff"] = worst;
        j["tolerance"] = tol_["identity"];
        j["pass"] = worst <= tol_["identity"];
        emit("spitzer_identity.json", j);
        out_ << "max |lhs - rhs| = " << format_number(worst) << "\n";
        return worst <= tol_["identity"] ? kExitOk : kExitBudget;
    }

    int arcsine_cmd() {
        const std::size_t n = n_or(10'000);
        const ArcsineLaw law(cfg_.theta);
        const auto samples = occupation_fraction_samples(*model_, state_, n, cfg_.paths, cfg_.seed, opts_);
        const auto emp = EmpiricalDistribution::from_samples(samples);
        const double ks = ks_distance(emp, law);
        write_samples(dir_ / "occupation_samples.csv", samples, n);
        note_output("occupation_samples.csv");
        write_cdf_compare(dir_ / "cdf_compare.csv", emp, law, unit_grid(1000));
        note_output("cdf_compare.csv");
        ojson j;
        j["n"] = n;
        j["paths"] = cfg_.paths;
        j["seed"] = cfg_.seed;
        j["theta"] = cfg_.theta;
        j["ks"] = ks;
        j["mean_fraction"] = emp.mean();
        if (lattice_grid(*model_) && n <= opts_.limits.occupation_cap) {
            const auto counts = occupation_law(*model_, state_, n, opts_.limits).count_law();
            j["exact_ks"] = ks_distance(EmpiricalDistribution::from_count_law(counts), law);
        }
        emit("arcsine_ks.json", j);
        out_ << "KS(N_n/n, AS(" << format_number(cfg_.theta) << ")) = " << format_number(ks) << "\n";
        return kExitOk;
    }

    int boundary_cmd() {
        const auto r = boundary_occupation(*model_, state_, n_or(1000), cfg_.paths, cfg_.seed, opts_);
        ojson j;
        j["total"] = estimator_json(r.total);
        j["above"] = estimator_json(r.above);
        j["below"] = estimator_json(r.below);
        j["null_homologous"] = r.null_homologous;
        emit("boundary.json", j);
        out_ << "E L_n = " << format_number(r.total.estimate) << (r.null_homologous ? " (null-homologous model)" : "")
             << "\n";
        return kExitOk;
    }

    int clt_cmd() {
        const std::size_t n = n_or(10'000);
        const auto r = clt_check(*model_, state_, n, cfg_.paths, cfg_.seed, opts_);
        write_samples(dir_ / "clt_samples.csv", r.samples, n);
        note_output("clt_samples.csv");
        ojson j;
        j["n"] = n;
        j["paths"] = cfg_.paths;
        j["seed"] = cfg_.seed;
        j["theta2"] = r.theta2;
        j["cycles"] = r.cycles;
        if (!r.samples.empty()) {
            j["ks"] = ks_distance(EmpiricalDistribution::from_samples(r.samples), NormalLaw{0.0, r.theta2});
        }
        emit("clt.json", j);
        return kExitOk;
    }

    int dual_cmd() {
        const std::size_t horizon = n_or(12);
        const auto d = dual(*model_);
        const auto dd = dual(d);
        const std::size_t s = model_->size();
        double involution = 0.0;
        bool kernels_match = true;
        for (std::size_t k = 0; k < s * s; ++k) {
            involution = std::max(involution, std::abs(model_->transition()[k] - dd.transition()[k]));
            const auto& a = model_->kernels()[k];
            const auto& b = dd.kernels()[k];
            if (model_->transition()[k] > 0.0 && !(a && b && kernels_close(*a, *b, tol_["dual"]))) kernels_match = false;
        }
        const auto pi = stationary_distribution(*model_).pi;
        const auto dpi = stationary_distribution(d).pi;
        double pi_gap = 0.0;
        for (std::size_t k = 0; k < s; ++k) pi_gap = std::max(pi_gap, std::abs(pi[k] - dpi[k]));
        ojson j;
        j["involution_error"] = involution;
        j["involution_kernels_match"] = kernels_match;
        j["pi_gap"] = pi_gap;
        j["dual_valid"] = validate_model(d).passed();
        bool pass = involution <= tol_["dual"] && kernels_match && pi_gap <= 1e-10;
        if (lattice_grid(*model_)) {
            double worst = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                worst = std::max(worst, max_abs_difference(embedded_return_law(*model_, i, horizon, opts_.limits),
                                                           embedded_return_law(d, i, horizon, opts_.limits)));
            }
            j["return_law_horizon"] = horizon;
            j["return_law_max_diff"] = worst;
            pass = pass && worst <= tol_["dual"];
        }
        j["pass"] = pass;
        write_text(dir_ / "dual_model.json", model_to_json(d));
        note_output("dual_model.json");
        emit("dual_check.json", j);
        out_ << "dual check: " << (pass ? "PASS" : "FAIL") << "\n";
        return pass ? kExitOk : kExitBudget;
    }

    int rho_cmd() {
        RhoConfig rc;
        rc.n = n_or(2000);
        rc.paths = cfg_.paths;
        rc.seed = cfg_.seed;
        rc.tolerance = tol_["rho"];
        rc.options = opts_;
        const auto r = rho_report(*model_, state_, rc);
        ojson j;
        j["state"] = model_->label(state_);
        j["n"] = rc.n;
        ojson lines = ojson::object();
        for (const auto& l : r.lines) lines[l.name] = estimator_json(l.result);
        j["estimates"] = lines;
        j["max_gap"] = r.max_gap;
        j["tolerance"] = rc.tolerance;
        j["verdict"] = r.pass ? "PASS" : "FAIL";
        emit("rho_report.json", j);
        for (const auto& l : r.lines) out_ << l.name << ": " << format_number(l.result.estimate) << "\n";
        out_ << "verdict: " << (r.pass ? "PASS" : "FAIL") << "\n";
        return r.pass ? kExitOk : kExitBudget;
    }

    void write_manifest(double wall, int code) {
        ojson j;
        j["version"] = kVersion;
        j["experiment"] = cfg_.experiment;
        j["model"] = cfg_.model_path;
        j["model_hash"] = fnv1a_hex(model_bytes_);
        j["state"] = model_->label(state_);
        j["n"] = effective_n_;
        j["n_grid"] = cfg_.n_grid;
        j["paths"] = cfg_.paths;
        j["seed"] = cfg_.seed;
        j["theta"] = cfg_.theta;
        ojson tol = ojson::object();
        for (const auto& [k, v] : tol_) tol[k] = v;
        j["tolerances"] = tol;
        j["outputs"] = outputs_;
        j["exit_code"] = code;
        j["wall_time_seconds"] = wall;
        write_text(dir_ / "run_manifest.json", dump_json(j));
    }

    const ExperimentConfig& cfg_;
    std::ostream& out_;
    std::string model_bytes_;
    std::unique_ptr<MrwModel> model_;
    std::size_t state_ = 0;
    std::size_t effective_n_ = 0;
    std::map<std::string, double> tol_;
    McOptions opts_;
    fs::path dir_;
    std::vector<std::string> outputs_;
};

int validate_cmd(const std::string& path, std::ostream& out) {
    const auto model = load_model(path);
    const auto report = validate_model(model);
    if (!report.passed()) {
        out << "status: FAIL\n";
        for (const auto& f : report.failures) out << "  " << f << "\n";
        return kExitInput;
    }
    const auto pi = stationary_distribution(model).pi;
    const auto per = period(model);
    const auto nh = is_null_homologous(model);
    out << "status: PASS\n";
    out << "states: " << model.size() << "\n";
    out << "pi = " << join_numbers(pi) << ", d = " << per.period << ", null-homologous: ";
    if (nh.null_homologous) {
        out << "yes, g = " << join_numbers(nh.potential) << "\n";
    } else {
        out << "no (" << nh.reason << ")\n";
    }
    out << "cyclic classes:";
    for (const auto& cls : per.classes) {
        out << " {";
        for (std::size_t k = 0; k < cls.size(); ++k) out << (k ? ", " : "") << model.label(cls[k]);
        out << "}";
    }
    out << "\n";
    out << "lattice-exact: " << (report.lattice_exact ? "yes" : "no (" + report.lattice_reason + ")") << "\n";
    return kExitOk;
}

std::string usage() {
    std::string s = "usage: mrw_fluct validate --model PATH\n"
                    "       mrw_fluct run --model PATH --experiment NAME [options]\n"
                    "experiments:";
    for (const auto& e : experiment_names()) s += " " + e;
    return s + "\n";
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "exact-law", "occupation", "spitzer",  "embedded-spitzer", "strong-spitzer", "spitzer-identity",
        "arcsine-ks", "boundary",  "clt",      "dual-check",       "rho-report"};
    return names;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Markov random walk fluctuation toolkit"};
    app.require_subcommand(1);
    ExperimentConfig cfg;
    std::vector<std::string> tolerances;
    std::string grid_text;

    auto* validate = app.add_subcommand("validate", "validate a model file");
    std::string validate_path;
    validate->add_option("--model", validate_path, "model JSON file")->required();

    auto* run = app.add_subcommand("run", "run one experiment");
    run->add_option("--model", cfg.model_path, "model JSON file")->required();
    run->add_option("--experiment", cfg.experiment, "experiment name")->required();
    run->add_option("--state", cfg.state_label, "reference state label (default: first state)");
    auto* n_opt = run->add_option("--n", cfg.n, "steps or cycles")->check(CLI::PositiveNumber);
    run->add_option("--n-grid", grid_text, "comma-separated n values")->excludes(n_opt);
    run->add_option("--paths", cfg.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
    run->add_option("--seed", cfg.seed, "64-bit seed");
    run->add_option("--out", cfg.out_dir, "output directory");
    run->add_option("--threads", cfg.threads, "worker cap (0 = all cores)");
    run->add_option("--theta", cfg.theta, "reference arcsine parameter for arcsine-ks")->check(CLI::Range(0.0, 1.0));
    run->add_option("--tolerance", tolerances, "KEY=VAL override");

    std::vector<const char*> argv{"mrw_fluct"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << usage();
        return kExitInput;
    }

    try {
        if (validate->parsed()) return validate_cmd(validate_path, out);

        const auto& names = experiment_names();
        if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
            err << "error: unknown experiment '" << cfg.experiment << "'\n" << usage();
            return kExitInput;
        }
        if (!grid_text.empty()) {
            std::stringstream ss(grid_text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::size_t used = 0;
                long long v = 0;
                try {
                    v = std::stoll(item, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != item.size() || v < 0) throw InputError("bad --n-grid entry '" + item + "'");
                cfg.n_grid.push_back(static_cast<std::size_t>(v));
            }
        }
        for (const auto& t : tolerances) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw InputError("--tolerance expects KEY=VAL, got '" + t + "'");
            std::size_t used = 0;
            double v = 0.0;
            const std::string val = t.substr(eq + 1);
            try {
                v = std::stod(val, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != val.size() || !std::isfinite(v)) throw InputError("bad tolerance value in '" + t + "'");
            cfg.tolerances[t.substr(0, eq)] = v;
        }
        if (cfg.out_dir.empty()) {
            const char* env = std::getenv("MRW_FLUCT_OUT");
            cfg.out_dir = env && *env ? env : "mrw_out";
        }
        Runner runner(cfg, out);
        return runner.run();
    } catch (const ResourceError& e) {
        err << "resource cap '" << e.cap() << "' exceeded: " << e.what() << "\n";
        return kExitResource;
    } catch (const BudgetError& e) {
        err << "statistical budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace mrw
