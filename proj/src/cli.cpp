#include "bdr/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdr/sim.hpp"

namespace bdr {

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct Options {
    std::vector<double> omega1_db;
    double omega2_db = 0.0;
    double p1_db = 10.0;
    double p2_db = 10.0;
    std::vector<double> pr_db;
    std::size_t n_slots = 1000000;
    std::size_t calib_samples = 100000;
    std::uint64_t seed = 1;
    std::size_t warmup = 0;
    std::string protocol = "proposed";
    std::string out;
    std::string manifest;
    std::string format = "csv";
    std::string preset;
    std::string calib_cache;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App& app, Options& o, bool simulate) {
    app.add_option("--omega1-db", o.omega1_db, "mean gain user 1 <-> relay [dB], scalar or comma list")
        ->delimiter(',');
    app.add_option("--omega2-db", o.omega2_db, "mean gain user 2 <-> relay [dB]");
    app.add_option("--p1-db", o.p1_db, "user 1 transmit power [dB]");
    app.add_option("--p2-db", o.p2_db, "user 2 transmit power [dB]");
    app.add_option("--pr-db", o.pr_db, "relay transmit power [dB], scalar or comma list")->delimiter(',');
    app.add_option("--calib-samples", o.calib_samples, "calibration sample size")->check(CLI::Range(10000, 100000000));
    app.add_option("--seed", o.seed, "base seed");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--preset", o.preset, "scenario preset")->check(CLI::IsMember({"fig3"}));
    app.add_option("--calib-cache", o.calib_cache, "JSON file of cached calibrations");
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    if (simulate) {
        app.add_option("--protocol", o.protocol, "protocol")
            ->check(CLI::IsMember({"proposed", "twoway", "tdbc", "mabc", "threemode", "all"}));
        app.add_option("--n-slots", o.n_slots, "slots per run")->check(CLI::Range(std::size_t{1000}, SIZE_MAX));
        app.add_option("--warmup", o.warmup, "slots excluded from averages");
        app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
        app.add_option("--manifest", o.manifest, "run manifest path (default <out>.manifest.json)");
    } else {
        app.add_option("--protocol", o.protocol, "policy to calibrate")
            ->check(CLI::IsMember({"proposed", "threemode"}));
    }
}

SweepSpec build_spec(const Options& o) {
    SweepSpec s;
    s.omega1_db = o.omega1_db;
    s.pr_db = o.pr_db;
    if (o.preset == "fig3") {
        if (s.omega1_db.empty())
            for (int x = -10; x <= 10; x += 2) s.omega1_db.push_back(x);
        if (s.pr_db.empty()) s.pr_db = {5.0, 10.0, 15.0};
    }
    if (s.omega1_db.empty()) throw CLI::RequiredError("--omega1-db");
    if (s.pr_db.empty()) throw CLI::RequiredError("--pr-db");
    s.p1_db = o.p1_db;
    s.p2_db = o.p2_db;
    s.omega2_db = o.omega2_db;
    s.n_slots = o.n_slots;
    s.calibration_samples = o.calib_samples;
    s.warmup_discard = o.warmup;
    s.seed = o.seed;
    if (o.protocol == "all")
        s.protocols = {Protocol::Proposed, Protocol::TwoWay, Protocol::TDBC, Protocol::MABC, Protocol::MABCOptimized,
                       Protocol::ThreeMode};
    else if (o.protocol == "mabc")
        s.protocols = {Protocol::MABC, Protocol::MABCOptimized};
    else
        s.protocols = {protocol_from_string(o.protocol)};
    return s;
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void load_cache(const std::string& path, CalibrationCache& cache) {
    std::ifstream in(path);
    if (!in) return;
    const auto j = nlohmann::json::parse(in);
    std::map<std::string, PolicyParams> entries;
    for (const auto& [k, v] : j.at("entries").items()) entries.emplace(k, v.get<PolicyParams>());
    cache.load(entries);
}

void save_cache(const std::string& path, const CalibrationCache& cache) {
    nlohmann::json j;
    j["entries"] = nlohmann::json::object();
    for (const auto& [k, v] : cache.entries()) j["entries"][k] = v;
    std::ofstream(path) << j.dump(2) << "\n";
}

std::string region_cell(const SweepRow& row) {
    if (row.protocol != Protocol::Proposed || !row.report || !row.report->policy) return "NA";
    return to_string(row.report->policy->region);
}

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "omega1_db,pr_db,protocol,sum_rate,r1r_bar,r2r_bar,rr1_bar,rr2_bar,residual_c1,residual_c2,region,mu1,mu2,"
          "t_share,frac_m1,frac_m2,frac_m3,frac_m4,frac_m5,frac_m6,std_error,seed\n";
    for (const auto& row : rows) {
        os << num(row.omega1_db) << "," << num(row.pr_db) << "," << to_string(row.protocol);
        if (!row.report) {
            for (int k = 0; k < 18; ++k) os << ",NA";
            os << "," << row.seed << "\n";
            continue;
        }
        const SumRateReport& r = *row.report;
        os << "," << num(r.sum_rate) << "," << num(r.r1r_bar) << "," << num(r.r2r_bar) << "," << num(r.rr1_bar) << ","
           << num(r.rr2_bar) << "," << num(r.residual_c1) << "," << num(r.residual_c2) << "," << region_cell(row);
        if (r.policy) {
            os << "," << num(r.policy->mu1) << "," << num(r.policy->mu2) << ","
               << (row.protocol == Protocol::ThreeMode ? "NA" : num(r.policy->t_share));
        } else {
            os << ",NA,NA," << (row.protocol == Protocol::MABC ? num(kMabcDefaultShare) : "NA");
        }
        for (double f : r.mode_histogram) os << "," << num(f);
        os << "," << num(r.std_error) << "," << row.seed << "\n";
    }
    return os.str();
}

nlohmann::json row_json(const SweepRow& row) {
    nlohmann::json j{{"omega1_db", row.omega1_db},
                     {"pr_db", row.pr_db},
                     {"protocol", to_string(row.protocol)},
                     {"seed", row.seed}};
    if (!row.report) {
        j["error"] = row.error;
        return j;
    }
    const SumRateReport& r = *row.report;
    j["sum_rate"] = r.sum_rate;
    j["r1r_bar"] = r.r1r_bar;
    j["r2r_bar"] = r.r2r_bar;
    j["rr1_bar"] = r.rr1_bar;
    j["rr2_bar"] = r.rr2_bar;
    j["residual_c1"] = r.residual_c1;
    j["residual_c2"] = r.residual_c2;
    j["region"] = region_cell(row);
    j["mode_histogram"] = r.mode_histogram;
    j["std_error"] = r.std_error;
    j["final_queues"] = {r.final_queues.q1, r.final_queues.q2};
    j["slots"] = r.slots;
    if (r.policy) j["policy"] = *r.policy;
    return j;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json manifest_json(const Options& o, const SweepSpec& s, const std::vector<SweepRow>& rows,
                             std::size_t cache_hits, const std::string& command) {
    nlohmann::json j;
    j["tool"] = "bdr";
    j["version"] = kToolVersion;
    j["timestamp"] = timestamp();
    j["command"] = command;
    j["config"] = {{"omega1_db", s.omega1_db},   {"omega2_db", s.omega2_db},
                   {"p1_db", s.p1_db},           {"p2_db", s.p2_db},
                   {"pr_db", s.pr_db},           {"n_slots", s.n_slots},
                   {"calib_samples", s.calibration_samples},
                   {"warmup", s.warmup_discard}, {"seed", s.seed},
                   {"protocol", o.protocol},     {"preset", o.preset},
                   {"format", o.format},         {"calib_cache", o.calib_cache}};
    auto tuples = nlohmann::json::array();
    for (const auto& r : rows)
        tuples.push_back({{"omega1_db", r.omega1_db},
                          {"pr_db", r.pr_db},
                          {"protocol", to_string(r.protocol)},
                          {"seed", r.seed},
                          {"cache_hit", r.cache_hit}});
    j["tuples"] = tuples;
    j["calibration_cache_hits"] = cache_hits;
    return j;
}

int report_failures(const std::vector<SweepRow>& rows, std::ostream& err) {
    int code = kExitOk;
    for (const auto& r : rows) {
        if (r.report) continue;
        err << "error: omega1_db=" << r.omega1_db << " pr_db=" << r.pr_db << " protocol=" << to_string(r.protocol)
            << ": " << r.error << "\n";
        if (!r.error_trace.empty()) err << "residual trace:\n" << r.error_trace;
        code = kExitSolver;
    }
    return code;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open output file " + o.out);
    f << text;
}

int do_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    const SweepSpec spec = build_spec(o);
    CalibrationCache cache;
    if (!o.calib_cache.empty()) load_cache(o.calib_cache, cache);
    const auto rows = sweep(spec, o.threads, &cache);
    if (!o.calib_cache.empty()) save_cache(o.calib_cache, cache);

    std::string text;
    if (o.format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& r : rows) arr.push_back(row_json(r));
        text = arr.dump(2) + "\n";
    } else {
        text = format_csv(rows);
    }
    emit(o, text, out);
    const std::string manifest_path = !o.manifest.empty() ? o.manifest : (o.out.empty() ? "" : o.out + ".manifest.json");
    if (!manifest_path.empty())
        std::ofstream(manifest_path) << manifest_json(o, spec, rows, cache.hits(), "simulate").dump(2) << "\n";
    return report_failures(rows, err);
}

int do_calibrate(const Options& o, std::ostream& out, std::ostream& err) {
    const SweepSpec spec = build_spec(o);
    const Protocol protocol = protocol_from_string(o.protocol);
    CalibrationCache cache;
    if (!o.calib_cache.empty()) load_cache(o.calib_cache, cache);

    auto results = nlohmann::json::array();
    int code = kExitOk;
    for (std::size_t j = 0; j < spec.pr_db.size(); ++j)
        for (std::size_t i = 0; i < spec.omega1_db.size(); ++i) {
            SimConfig cfg{.seed = tuple_seed(spec.seed, i, j, protocol),
                          .powers = NodePowers(db_to_linear(spec.p1_db), db_to_linear(spec.p2_db),
                                               db_to_linear(spec.pr_db[j])),
                          .model = FadingModel::rayleigh(
                              ChannelStats(db_to_linear(spec.omega1_db[i]), db_to_linear(spec.omega2_db))),
                          .protocol = protocol,
                          .calibration_samples = spec.calibration_samples,
                          .policy = std::nullopt};
            nlohmann::json entry{{"omega1_db", spec.omega1_db[i]}, {"pr_db", spec.pr_db[j]}, {"seed", cfg.seed}};
            try {
                const std::string key = calibration_key(cfg);
                auto params = cache.find(key);
                if (!params) {
                    params = calibrate_for(cfg);
                    cache.store(key, *params);
                }
                entry["policy"] = *params;
            } catch (const CalibrationError& e) {
                err << "error: omega1_db=" << spec.omega1_db[i] << " pr_db=" << spec.pr_db[j] << ": " << e.what()
                    << "\nresidual trace:\n"
                    << e.trace();
                entry["error"] = e.what();
                code = kExitSolver;
            }
            results.push_back(entry);
        }
    if (!o.calib_cache.empty()) save_cache(o.calib_cache, cache);
    const bool single = results.size() == 1 && results[0].contains("policy");
    emit(o, (single ? results[0]["policy"] : results).dump(2) + "\n", out);
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive mode selection for a bidirectional buffer-aided relay"};
    app.require_subcommand(1);
    Options calib_opts, sim_opts;
    CLI::App* calibrate = app.add_subcommand("calibrate", "calibrate selection thresholds and print them as JSON");
    CLI::App* simulate = app.add_subcommand("simulate", "simulate protocols over a scenario sweep");
    add_common(*calibrate, calib_opts, false);
    add_common(*simulate, sim_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        if (calibrate->parsed()) return do_calibrate(calib_opts, out, err);
        return do_simulate(sim_opts, out, err);
    } catch (const CLI::Error& e) {
        err << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CalibrationError& e) {
        err << "error: " << e.what() << "\nresidual trace:\n" << e.trace();
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bdr
