// Command-line front end. Thin shell over the library: every command parses
// the experiment config, calls the corresponding library operations and
// serializes their output unchanged, so CLI results are byte-identical to
// direct library calls with the same inputs.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "erwg/errors.hpp"
#include "erwg/gaussian.hpp"
#include "erwg/graph.hpp"
#include "erwg/limits.hpp"
#include "erwg/moments.hpp"
#include "erwg/simulate.hpp"
#include "erwg/spectral.hpp"
#include "erwg/verify.hpp"

namespace {

constexpr int kSchemaVersion = 1;

struct Experiment {
    explicit Experiment(erwg::WalkConfig w) : walk(std::move(w)) {}

    erwg::WalkConfig walk;
    long horizon = 10000;
    long replicas = 1000;
    std::uint64_t master_seed = 20260814ULL;
    std::vector<long> explicit_checkpoints; // empty: geometric grid
    long checkpoint_start = 10;
    double checkpoint_ratio = 1.25;
    std::string suite = "all";
    std::string out_dir;
    std::string mechanism = "conditional";
    std::map<std::string, double> tolerances;
};

Experiment load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw erwg::InvalidConfig("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw erwg::InvalidConfig("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw erwg::InvalidConfig("config must carry an integer schema_version");
    if (j["schema_version"].get<int>() != kSchemaVersion)
        throw erwg::InvalidConfig("unsupported schema_version (expected 1)");
    if (!j.contains("walk")) throw erwg::InvalidConfig("config must contain a walk object");

    Experiment exp{erwg::config_from_json(j["walk"].dump())};
    if (j.contains("horizon")) exp.horizon = j["horizon"].get<long>();
    if (j.contains("replicas")) exp.replicas = j["replicas"].get<long>();
    if (j.contains("master_seed")) exp.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("suite")) exp.suite = j["suite"].get<std::string>();
    if (j.contains("out_dir")) exp.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("mechanism")) exp.mechanism = j["mechanism"].get<std::string>();
    if (j.contains("checkpoints")) {
        const auto& c = j["checkpoints"];
        if (c.is_array()) {
            exp.explicit_checkpoints = c.get<std::vector<long>>();
        } else if (c.is_object()) {
            if (c.contains("start")) exp.checkpoint_start = c["start"].get<long>();
            if (c.contains("ratio")) exp.checkpoint_ratio = c["ratio"].get<double>();
        } else {
            throw erwg::InvalidConfig("checkpoints must be a list or {start, ratio}");
        }
    }
    if (j.contains("tolerances")) {
        for (const auto& [key, value] : j["tolerances"].items())
            exp.tolerances[key] = value.get<double>();
    }
    if (exp.horizon < 1) throw erwg::InvalidConfig("horizon must be >= 1");
    if (exp.replicas < 1) throw erwg::InvalidConfig("replicas must be >= 1");
    if (exp.mechanism != "literal" && exp.mechanism != "conditional")
        throw erwg::InvalidConfig("mechanism must be literal or conditional");
    return exp;
}

erwg::Mechanism parse_mechanism(const std::string& name) {
    return name == "literal" ? erwg::Mechanism::Literal : erwg::Mechanism::Conditional;
}

std::vector<long> resolve_checkpoints(const Experiment& exp) {
    if (!exp.explicit_checkpoints.empty()) return exp.explicit_checkpoints;
    return erwg::checkpoint_times(exp.horizon, exp.checkpoint_start, exp.checkpoint_ratio);
}

void apply_tol_flags(const std::vector<std::string>& kvs, std::map<std::string, double>& out) {
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw erwg::InvalidConfig("--tol expects KEY=VAL, got: " + kv);
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw erwg::InvalidConfig("cannot write " + path.string());
    out << text;
}

int cmd_analyze(const Experiment& exp, const std::string& out_dir) {
    const Eigen::MatrixXd B = erwg::memory_matrix(exp.walk);
    const erwg::Spectrum spectrum = erwg::analyze(B);
    const erwg::RegimeLabel label = erwg::classify(spectrum);

    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config_hash"] = hex64(erwg::config_hash(exp.walk));
    doc["walk"] = nlohmann::json::parse(erwg::config_to_json(exp.walk));
    doc["spectrum"] = nlohmann::json::parse(erwg::spectrum_to_json(spectrum));
    doc["regime"] = erwg::regime_name(label.global);
    auto& per = doc["regime_per_projection"] = nlohmann::json::array();
    for (erwg::Regime r : label.per_projection) per.push_back(erwg::regime_name(r));
    doc["limits"] = erwg::limit_report(exp.walk);

    std::cout << doc.dump(2) << "\n";
    std::printf("eta = %.12g  regime = %s\n", spectrum.eta,
                erwg::regime_name(label.global).c_str());
    for (int j = 0; j < spectrum.k(); ++j)
        std::printf("  lambda_%d = %.12g %+.12gi  (%s)\n", j,
                    spectrum.eigenvalues(j).real(), spectrum.eigenvalues(j).imag(),
                    erwg::regime_name(label.per_projection[static_cast<size_t>(j)]).c_str());
    if (!out_dir.empty())
        write_text(std::filesystem::path(out_dir) / "analyze.json", doc.dump(2) + "\n");
    return 0;
}

int cmd_limits(const Experiment& exp, const std::string& out_dir) {
    const nlohmann::json doc = erwg::limit_report(exp.walk);
    std::cout << doc.dump(2) << "\n";
    if (!out_dir.empty()) {
        write_text(std::filesystem::path(out_dir) / "limits.json", doc.dump(2) + "\n");
        erwg::write_moment_csv((std::filesystem::path(out_dir) / "moments.csv").string(),
                               exp.walk, std::min(exp.horizon, 1000L));
    }
    return 0;
}

int cmd_simulate(const Experiment& exp, const std::string& out_dir, int workers) {
    const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "ensemble.csv").string();
    erwg::write_ensemble_csv(csv, exp.walk, parse_mechanism(exp.mechanism), exp.master_seed,
                             static_cast<std::uint64_t>(exp.replicas), resolve_checkpoints(exp),
                             workers);
    std::printf("wrote %s (%ld replicas, %zu checkpoints, seed %s)\n", csv.c_str(),
                exp.replicas, resolve_checkpoints(exp).size(), hex64(exp.master_seed).c_str());
    return 0;
}

int cmd_verify(const Experiment& exp, const std::string& suite, const std::string& out_dir,
               int workers) {
    const erwg::VerificationReport report =
        erwg::run_suite(exp.walk, suite, exp.master_seed, workers, exp.tolerances);
    std::cout << report.table();
    if (!out_dir.empty()) {
        nlohmann::json doc = report.to_json();
        doc["schema_version"] = kSchemaVersion;
        doc["walk"] = nlohmann::json::parse(erwg::config_to_json(exp.walk));
        write_text(std::filesystem::path(out_dir) / (suite + ".report.json"),
                   doc.dump(2) + "\n");
        if (!report.bound_fits.fits.empty())
            erwg::write_bound_csv((std::filesystem::path(out_dir) / "bounds.csv").string(),
                                  report.bound_fits);
    }
    return report.all_passed() ? 0 : 1;
}

int cmd_report(const std::string& out_dir) {
    if (out_dir.empty()) throw erwg::InvalidConfig("report requires --out DIR");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 12 && name.substr(name.size() - 12) == ".report.json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::printf("no *.report.json files in %s\n", out_dir.c_str());
        return 1;
    }
    bool all_ok = true;
    for (const auto& path : files) {
        std::ifstream in(path);
        nlohmann::json doc = nlohmann::json::parse(in);
        std::printf("%s  suite=%s  seed=%s  %.1fs\n", path.filename().string().c_str(),
                    doc["suite"].get<std::string>().c_str(),
                    doc["master_seed"].get<std::string>().c_str(),
                    doc["runtime_seconds"].get<double>());
        for (const auto& r : doc["records"]) {
            const bool pass = r["pass"].get<bool>();
            all_ok = all_ok && pass;
            std::printf("  [%s] %-28s statistic=%-12.5g threshold=%-10.5g %s\n",
                        pass ? "PASS" : "FAIL", r["name"].get<std::string>().c_str(),
                        r["statistic"].get<double>(), r["threshold"].get<double>(),
                        r["scaling"].get<std::string>().c_str());
        }
    }
    std::printf("%s\n", all_ok ? "ALL PASSED" : "FAILURES PRESENT");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"elephant random walks with graph-based shared memory: "
                 "simulation, exact moments, limit analysis and verification"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite, mechanism;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long replicas = 0, horizon = 0;
    int workers = 1;
    std::vector<std::string> tol_flags;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "experiment config JSON");
        if (needs_config) opt->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; },
               "master seed override");
        cmd->add_option("--workers", workers, "replica worker threads")
            ->check(CLI::PositiveNumber);
        return cmd;
    };

    auto* analyze = add_common(app.add_subcommand("analyze", "spectrum, regime and limits"),
                               true);
    auto* limits = add_common(app.add_subcommand("limits", "limit covariances and profile"),
                              true);
    auto* simulate = add_common(
        app.add_subcommand("simulate", "run an ensemble and write checkpoint CSV"), true);
    simulate->add_option("--replicas", replicas, "replica count override")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--horizon", horizon, "horizon override")->check(CLI::PositiveNumber);
    simulate->add_option("--mechanism", mechanism, "literal|conditional")
        ->check(CLI::IsMember({"literal", "conditional"}));
    auto* verify = add_common(
        app.add_subcommand("verify", "run a verification suite, nonzero exit on failure"),
        true);
    verify->add_option("--suite", suite, "suite name")
        ->check(CLI::IsMember(erwg::suite_names()));
    verify->add_option("--tol", tol_flags, "KEY=VAL tolerance override (repeatable)");
    auto* report = app.add_subcommand("report", "render saved verification reports");
    report->add_option("--out", out_dir, "directory holding *.report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints message or help text
        return code == 0 ? 0 : 2;
    }

    try {
        if (report->parsed()) return cmd_report(out_dir);

        Experiment exp = load_experiment(config_path);
        if (seed_set) exp.master_seed = seed;
        if (replicas > 0) exp.replicas = replicas;
        if (horizon > 0) exp.horizon = horizon;
        if (!mechanism.empty()) exp.mechanism = mechanism;
        if (!suite.empty()) exp.suite = suite;
        apply_tol_flags(tol_flags, exp.tolerances);
        const std::string dir = !out_dir.empty() ? out_dir : exp.out_dir;

        if (analyze->parsed()) return cmd_analyze(exp, dir);
        if (limits->parsed()) return cmd_limits(exp, dir);
        if (simulate->parsed()) return cmd_simulate(exp, dir, workers);
        if (verify->parsed()) return cmd_verify(exp, exp.suite, dir, workers);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
