// delone: build, export and check the density-encoding Delone sets.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "delone/delone_set.hpp"
#include "delone/palette.hpp"
#include "delone/psi.hpp"
#include "delone/schedule.hpp"
#include "delone/verifier.hpp"

using namespace delone;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kOperational = 1, kConfig = 2, kFailed = 3 };

struct Options {
    std::string config_path;
    std::string schedule_json;
    std::string density_json;
    int threads = 0;
    long long seed = -1;
    long long cap = -1;
    long long alpha_budget = -1;

    // points
    std::string lo, hi, out;
    // render
    int level = 0;
    std::string out_dir;
    bool ascii = false;
    // verify
    std::string which = "all";
    std::vector<std::string> radii, net_radii;
    int pairs = 0, net_pairs = 0;
    long long samples = 0;
    std::string report;
    std::string fault;
    std::string encoding_mode;
};

json load_config(const Options& o) {
    json cfg = json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot read config '" + o.config_path + "'");
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("malformed config: ") + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    }
    try {
        if (!o.schedule_json.empty()) cfg["schedule"] = json::parse(o.schedule_json);
        if (!o.density_json.empty()) cfg["density"] = json::parse(o.density_json);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed inline JSON: ") + e.what());
    }
    if (o.threads > 0) cfg["threads"] = o.threads;
    if (o.seed >= 0) cfg["seed"] = o.seed;
    if (o.cap >= 0) cfg["caps"]["materialize"] = o.cap;
    if (o.alpha_budget >= 0) cfg["caps"]["alpha_budget"] = o.alpha_budget;
    return cfg;
}

template <class T>
T get(const json& cfg, const std::string& key, T fallback) {
    try {
        return cfg.value(key, fallback);
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

LevelSchedule load_schedule(const json& cfg) {
    if (!cfg.contains("schedule")) throw ConfigError("config has no schedule");
    const json& s = cfg["schedule"];
    if (s.contains("bk")) {
        try {
            return bk_schedule(s["bk"].at("d").get<int>(), s["bk"].at("n_max").get<int>()).schedule;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad bk schedule: ") + e.what());
        }
    }
    return LevelSchedule::from_json(s);
}

std::shared_ptr<PaletteEngine> make_engine(const json& cfg) {
    LevelSchedule sched = load_schedule(cfg);
    DensityFn rho = cfg.contains("density") ? DensityFn::from_json(cfg["density"]) : DensityFn::constant(1.5);
    PaletteOptions po;
    json caps = cfg.value("caps", json::object());
    po.materialize_cap = static_cast<Int>(get<long long>(caps, "materialize", 1LL << 26));
    po.alpha_budget = static_cast<Int>(get<long long>(caps, "alpha_budget", 1LL << 20));
    po.threads = get<int>(cfg, "threads", 1);
    return std::make_shared<PaletteEngine>(sched, rho, po);
}

std::vector<Dyadic> parse_point(const std::string& text) {
    std::vector<Dyadic> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Dyadic::parse(item));
    return out;
}

std::vector<Rational> parse_radii(const json& list) {
    std::vector<Rational> out;
    for (const auto& v : list) out.push_back(parse_rational(v.is_string() ? v.get<std::string>() : v.dump()));
    return out;
}

int cmd_validate(const Options& o) {
    json cfg = load_config(o);
    LevelSchedule sched = load_schedule(cfg);
    if (cfg["schedule"].contains("bk")) {
        BkSchedule bk = bk_schedule(sched.d(), sched.n_max());
        std::cout << "bk schedule: K=" << bk.k << " (series " << bk.k_series << ")\n";
    }
    ValidationReport rep = validate_schedule(sched);
    std::cout << "schedule " << sched.canonical() << "\nhash " << sched.hash() << "\n" << rep.text();
    std::cout << (rep.valid() ? "valid\n" : "INVALID\n");
    return rep.valid() ? kPass : kOperational;
}

int cmd_points(const Options& o) {
    json cfg = load_config(o);
    auto engine = make_engine(cfg);
    PsiField field(engine);
    json win = cfg.value("window", json::object());
    std::string lo = o.lo, hi = o.hi;
    if (lo.empty() && win.contains("lo")) lo = win["lo"].get<std::string>();
    if (hi.empty() && win.contains("hi")) hi = win["hi"].get<std::string>();
    if (lo.empty() || hi.empty()) throw UsageError("points needs --lo and --hi");
    Box box{parse_point(lo), parse_point(hi)};
    if (box.dim() != engine->d() || static_cast<int>(box.hi.size()) != engine->d())
        throw UsageError("window corners need " + std::to_string(engine->d()) + " coordinates");
    std::string out = o.out.empty() ? cfg.value("output", json::object()).value("points", "points.csv") : o.out;
    PointWindow pw = points_in_window(field, box);
    write_points_csv(pw, out);
    std::ofstream meta(out + ".meta.json", std::ios::binary);
    meta << points_metadata(pw, field);
    std::cout << pw.points.size() << " points written to " << out << " (hash " << pw.hash << ")\n";
    return kPass;
}

int cmd_render(const Options& o) {
    json cfg = load_config(o);
    auto engine = make_engine(cfg);
    int level = o.level > 0 ? o.level : cfg.value("level", 1);
    std::string dir = o.out_dir.empty() ? cfg.value("output", json::object()).value("render_dir", ".") : o.out_dir;
    std::filesystem::create_directories(dir);
    const auto& grids = engine->materialize_level(level);
    for (size_t j = 0; j < grids.size(); ++j) {
        std::string path = dir + "/palette_L" + std::to_string(level) + "_C" + std::to_string(j + 1) + ".pgm";
        write_pgm(grids[j], path, o.ascii,
                  "delone " + engine->hash() + " level " + std::to_string(level) + " colour " + std::to_string(j + 1));
        std::cout << path << " " << grids[j].side << "x" << (grids[j].d >= 2 ? grids[j].side : 1) << "\n";
    }
    return kPass;
}

// A level where condition (A) can be broken by flipping one cell.
std::vector<Report> injected_goodness(PaletteEngine& eng, const std::string& fault) {
    const auto& s = eng.schedule();
    int n = 0;
    for (int m = 2; m <= eng.top_level(); ++m) {
        bool wide = fault == "b" || s.p(m - 2) > 0;
        if (wide && eng.materializable(m) && eng.materializable(m - 1)) {
            n = m;
            break;
        }
    }
    if (n == 0) throw CapacityError("no materializable level for fault injection");
    std::vector<Grid> level = eng.materialize_level(n);
    const auto& prev = eng.materialize_level(n - 1);
    const int d = eng.d();
    if (fault == "a") {
        // One cell of the last tile of colour 1.
        LatticePoint x = LatticePoint::filled(d, static_cast<Int>(level[0].side - 1));
        level[0].at(x) = level[0].at(x) == 1 ? 2 : 1;
    } else {
        // Strip block 1, sub-cube 1 should carry colour 1; paint colour 2 there.
        const Grid& wrong = prev[1];
        for (size_t lin = 0; lin < wrong.cells(); ++lin) level[0].at(wrong.point(lin)) = wrong.values[lin];
    }
    GoodnessReport g = PaletteEngine::check_goodness_grids(s, n, level, prev);
    Report rep;
    rep.check = "goodness";
    rep.lines.push_back("fault injected into condition (" + std::string(fault == "a" ? "A" : "B") + ") at level " +
                        std::to_string(n));
    for (const auto& f : g.failures) rep.fail("level " + std::to_string(n) + " " + f);
    if (!g.pass() && g.failures.empty()) rep.fail("level " + std::to_string(n));
    return {rep};
}

int cmd_verify(const Options& o) {
    json cfg = load_config(o);
    auto engine = make_engine(cfg);
    PsiField field(engine);
    const auto& s = engine->schedule();
    json vcfg = cfg.value("verify", json::object());
    const std::uint64_t seed = static_cast<std::uint64_t>(get<long long>(cfg, "seed", 1));
    const int threads = get<int>(cfg, "threads", 1);
    const long long samples = o.samples > 0 ? o.samples : get<long long>(vcfg, "samples", 10000);
    const int pairs = o.pairs > 0 ? o.pairs : get<int>(vcfg, "pairs", 64);
    const int net_pairs = o.net_pairs > 0 ? o.net_pairs : get<int>(vcfg, "net_pairs", 32);
    json radii = o.radii.empty() ? vcfg.value("radii", json::array({3, 8, 16})) : json(o.radii);
    json net_radii = o.net_radii.empty() ? vcfg.value("net_radii", json::array({2, 4})) : json(o.net_radii);
    const std::string which = o.which;
    static const std::set<std::string> known{"goodness", "repetitivity", "net-repetitivity", "encoding", "nesting", "all"};
    if (!known.count(which)) throw UsageError("unknown check '" + which + "'");
    const bool all = which == "all";

    std::vector<Report> reports;
    if (which == "goodness" || all) {
        if (!o.fault.empty()) {
            if (o.fault != "a" && o.fault != "b") throw UsageError("--inject-fault takes a or b");
            for (auto& r : injected_goodness(*engine, o.fault)) reports.push_back(r);
        } else {
            reports.push_back(verify_goodness(*engine, samples, seed));
        }
    }
    if (which == "nesting" || all) {
        reports.push_back(check_nesting(field));
        reports.push_back(verify_level_consistency(field, get<long long>(vcfg, "consistency_samples", 1000), seed));
        reports.push_back(verify_colour_patches(field));
        if (engine->materializable(2) && field.max_psi_level() >= 2)
            reports.push_back(verify_partition_claim(field, 2, get<long long>(vcfg, "partition_samples", 64), seed));
    }
    if (which == "repetitivity" || all) {
        for (const auto& r : parse_radii(radii)) {
            int n = matching_level(s, Surd{r, 0});
            if (n == 0) throw UsageError("radius " + to_string(r) + " matches no level");
            reports.push_back(verify_mapping_repetitivity(field, n, r, {pairs, seed, threads}));
        }
    }
    if (which == "net-repetitivity" || all) {
        for (const auto& r : parse_radii(net_radii))
            reports.push_back(verify_net_repetitivity(field, std::nullopt, r, {net_pairs, seed, threads}));
    }
    if (which == "encoding" || (all && s.palette_mode())) {
        if (!s.palette_mode()) throw UsageError("encoding needs a palette-mode schedule");
        EncodingOptions eo;
        eo.seed = seed;
        eo.samples = samples;
        std::string mode = o.encoding_mode.empty() ? vcfg.value("encoding_mode", "exhaustive") : o.encoding_mode;
        eo.exhaustive = mode != "sampled";
        std::vector<int> levels = vcfg.value("encoding_levels", std::vector<int>{});
        if (levels.empty())
            for (int n = 2; n <= s.n_max(); ++n)
                if (s.c(n - 1) >= 3) levels.push_back(n);
        for (int n : levels) reports.push_back(encoding_report(*engine, n, eo));
    }

    json summary = combine(reports);
    summary["hash"] = engine->hash();
    std::string text;
    for (const auto& r : reports) text += r.text();
    text += "hash " + engine->hash() + "\n";
    text += std::string("overall: ") + (summary["pass"].get<bool>() ? "PASS" : "FAIL") + "\n";
    text += "#json " + summary.dump() + "\n";
    std::cout << text;
    std::string report = o.report.empty() ? cfg.value("output", json::object()).value("report", "") : o.report;
    if (!report.empty()) {
        std::ofstream(report, std::ios::binary) << text;
        std::ofstream(report + ".json", std::ios::binary) << summary.dump(2) << "\n";
    }
    return summary["pass"].get<bool>() ? kPass : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repetitive Delone sets encoding a density"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "JSON config file");
    app.add_option("--schedule", o.schedule_json, "inline schedule JSON");
    app.add_option("--density", o.density_json, "inline density JSON");
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--seed", o.seed, "PRNG seed");
    app.add_option("--cap", o.cap, "cells per materialized colour");
    app.add_option("--alpha-budget", o.alpha_budget, "tiles per alpha sweep");

    auto* validate = app.add_subcommand("validate", "check schedule constraints");
    validate->fallthrough();
    auto* points = app.add_subcommand("points", "write the points of X in a window as CSV");
    points->fallthrough();
    points->add_option("--lo", o.lo, "lower window corner, comma separated");
    points->add_option("--hi", o.hi, "upper window corner, comma separated");
    points->add_option("--out", o.out, "CSV path");
    auto* render = app.add_subcommand("render", "write the colours of a level as PGM");
    render->fallthrough();
    render->add_option("--level", o.level, "palette level");
    render->add_option("--out-dir", o.out_dir, "output directory");
    render->add_flag("--ascii", o.ascii, "ASCII PGM (P2)");
    auto* verify = app.add_subcommand("verify", "run checks");
    verify->fallthrough();
    verify->add_option("which", o.which, "goodness|repetitivity|net-repetitivity|encoding|nesting|all");
    verify->add_option("--radius", o.radii, "patch radii for repetitivity");
    verify->add_option("--net-radius", o.net_radii, "patch radii for the point set");
    verify->add_option("--pairs", o.pairs, "sampled pairs per radius");
    verify->add_option("--net-pairs", o.net_pairs, "sampled pairs per point-set radius");
    verify->add_option("--samples", o.samples, "sampled points or tiles");
    verify->add_option("--report", o.report, "write report text here (and .json)");
    verify->add_option("--inject-fault", o.fault, "corrupt a palette: a or b");
    verify->add_option("--encoding-mode", o.encoding_mode, "exhaustive or sampled");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*points) return cmd_points(o);
        if (*render) return cmd_render(o);
        if (*verify) return cmd_verify(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kConfig;
    } catch (const InvariantError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kFailed;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kOperational;
    } catch (const RangeError& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOperational;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOperational;
    }
    return kConfig;
}
