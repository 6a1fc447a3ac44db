// Command-line driver: designs constellations, sweeps embedding schemes,
// runs the convex tag-power optimizer, Monte Carlo link simulations and
// end-to-end authentication experiments. Emits CSV artifacts plus a JSON
// run manifest per command.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pla/analysis.hpp"
#include "pla/auth.hpp"
#include "pla/constellation.hpp"
#include "pla/embedding.hpp"
#include "pla/optimizer.hpp"
#include "pla/simulator.hpp"
#include "pla/special_math.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

pla::SystemConfig system_config(const json& j) {
    pla::SystemConfig cfg;
    try {
        cfg.n_antennas = j.at("n_antennas").get<int>();
        cfg.msg_order = j.at("msg_order").get<int>();
        cfg.tag_order = j.at("tag_order").get<int>();
        cfg.sigma2 = j.value("sigma2", 1.0);
        if (j.contains("gamma_m_db"))
            cfg.gamma_m = db_to_linear(j.at("gamma_m_db").get<double>());
        if (j.contains("gamma_tot_db"))
            cfg.gamma_tot = db_to_linear(j.at("gamma_tot_db").get<double>());
        else
            cfg.gamma_tot = cfg.gamma_m;
        if (!j.contains("gamma_m_db")) cfg.gamma_m = cfg.gamma_tot;
        cfg.mac_len = j.value("mac_len", 32);
        cfg.fa_budget = j.value("fa_budget", 0.01);
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return cfg;
}

struct RunContext {
    std::string command;
    std::string config_path;
    json config;
    std::uint64_t seed = 1;
    long long trials = 0;
    fs::path out_dir;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();

    std::ofstream open_csv(const std::string& name) {
        fs::create_directories(out_dir);
        outputs.push_back(name);
        std::ofstream f(out_dir / name);
        f.imbue(std::locale::classic());
        f.precision(17);
        return f;
    }

    void write_json(const std::string& name, const json& j) {
        fs::create_directories(out_dir);
        outputs.push_back(name);
        std::ofstream f(out_dir / name);
        f << j.dump(2) << "\n";
    }

    void write_manifest() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        json m;
        m["tool"] = "pla";
        m["version"] = kVersion;
        m["command"] = command;
        m["config_path"] = config_path;
        m["config"] = config;
        m["seed"] = seed;
        m["trials"] = trials;
        m["outputs"] = outputs;
        m["wall_clock_seconds"] = secs;
        fs::create_directories(out_dir);
        std::ofstream f(out_dir / "manifest.json");
        f << m.dump(2) << "\n";
    }
};

pla::EmbeddingScheme scheme_from_config(const pla::SystemConfig& cfg,
                                        const json& j) {
    const pla::MessageConstellation con = pla::design_constellation(cfg);
    const std::string kind = j.value("scheme", "uniform");
    if (kind == "uniform") {
        if (!j.contains("beta")) throw ConfigError("uniform scheme needs beta");
        return pla::build_uniform(con, cfg.tag_order, j.at("beta").get<double>());
    }
    if (kind == "message_based") {
        std::vector<double> r;
        if (j.contains("ratios"))
            r = j.at("ratios").get<std::vector<double>>();
        else if (j.contains("r"))
            r.assign(cfg.msg_order, j.at("r").get<double>());
        else
            throw ConfigError("message_based scheme needs ratios or r");
        return pla::build_message_based(con, cfg.tag_order, r);
    }
    throw ConfigError("unknown scheme kind: " + kind);
}

void cmd_design(RunContext& ctx) {
    const pla::SystemConfig cfg = system_config(ctx.config);
    const pla::MessageConstellation con = pla::design_constellation(cfg);
    json out;
    out["ratio"] = con.ratio;
    out["sigma2"] = con.sigma2;
    out["powers"] = con.powers;
    out["thresholds"] = con.thresholds;
    out["message_only_ser"] = pla::message_only_ser(cfg, con);
    ctx.write_json("constellation.json", out);
}

void cmd_uniform_sweep(RunContext& ctx) {
    const pla::SystemConfig cfg = system_config(ctx.config);
    const pla::MessageConstellation con = pla::design_constellation(cfg);
    const int grid = ctx.config.value("beta_grid", 200);
    if (grid < 1) throw ConfigError("beta_grid must be >= 1");
    auto csv = ctx.open_csv("uniform_sweep.csv");
    csv << "beta,p_em_theory,p_et_theory";
    if (ctx.trials > 0)
        csv << ",p_em_mc,p_em_lo,p_em_hi,p_et_mc,p_et_lo,p_et_hi";
    csv << "\n";
    for (int gi = 1; gi <= grid; ++gi) {
        const double beta = static_cast<double>(gi) / grid;
        const auto scheme = pla::build_uniform(con, cfg.tag_order, beta);
        const double pem = pla::message_ser(scheme, cfg.n_antennas);
        const double pet = pla::tag_ser(scheme, cfg.n_antennas).average;
        csv << beta << "," << pem << "," << pet;
        if (ctx.trials > 0) {
            const auto mc = pla::simulate_ser(scheme, cfg.n_antennas, ctx.trials,
                                              ctx.seed + gi);
            csv << "," << mc.p_em << "," << mc.p_em_ci.lo << ","
                << mc.p_em_ci.hi << "," << mc.p_et << "," << mc.p_et_ci.lo
                << "," << mc.p_et_ci.hi;
        }
        csv << "\n";
    }
}

void cmd_mbased_sweep(RunContext& ctx) {
    const pla::SystemConfig cfg = system_config(ctx.config);
    const pla::MessageConstellation con = pla::design_constellation(cfg);
    const int grid = ctx.config.value("r_grid", 100);
    const double rmax = std::pow(con.ratio, 1.0 / (cfg.tag_order - 1));
    auto csv = ctx.open_csv("mbased_sweep.csv");
    csv << "r,p_em_theory,p_et_theory";
    if (ctx.trials > 0)
        csv << ",p_em_mc,p_em_lo,p_em_hi,p_et_mc,p_et_lo,p_et_hi";
    csv << "\n";
    for (int gi = 1; gi <= grid; ++gi) {
        const double r =
            1.0 + (rmax - 1.0) * gi / (grid + 1.0);  // open interval (1, rmax)
        const std::vector<double> ratios(cfg.msg_order, r);
        const auto scheme = pla::build_message_based(con, cfg.tag_order, ratios);
        const double pem = pla::message_ser(scheme, cfg.n_antennas);
        const double pet =
            pla::tag_ser_message_based(ratios, cfg.tag_order, cfg.n_antennas);
        csv << r << "," << pem << "," << pet;
        if (ctx.trials > 0) {
            const auto mc = pla::simulate_ser(scheme, cfg.n_antennas, ctx.trials,
                                              ctx.seed + gi);
            csv << "," << mc.p_em << "," << mc.p_em_ci.lo << ","
                << mc.p_em_ci.hi << "," << mc.p_et << "," << mc.p_et_ci.lo
                << "," << mc.p_et_ci.hi;
        }
        csv << "\n";
    }
}

void cmd_optimize(RunContext& ctx) {
    const pla::SystemConfig cfg = system_config(ctx.config);
    const double delta = ctx.config.value("delta", 1e-6);
    const pla::OptSolution sol = pla::solve_power_allocation(cfg, delta);
    if (!sol.ok()) throw InfeasibleError("optimization infeasible at delta");
    json out;
    out["delta"] = delta;
    out["alpha_star"] = sol.alpha_star;
    out["k"] = sol.k;
    out["r"] = sol.r;
    out["p_et_opt"] = sol.p_et_opt;
    out["p_em_upper_at_opt"] = sol.p_em_upper_at_opt;
    out["tag_power_used"] = sol.tag_power_used;
    out["kkt_residual"] = sol.kkt_residual;
    ctx.write_json("solution.json", out);

    // Export the optimized scheme for the simulator / auth commands.
    pla::SystemConfig at = cfg;
    at.gamma_m = sol.alpha_star * cfg.gamma_tot;
    const auto con = pla::design_constellation(at);
    bool exportable = true;
    const double rmax = std::pow(con.ratio, 1.0 / (cfg.tag_order - 1));
    for (double r : sol.r)
        if (!(r > 1.0) || !(r < rmax)) exportable = false;
    if (exportable) {
        const auto scheme =
            pla::build_message_based(con, cfg.tag_order, sol.r);
        ctx.outputs.push_back("scheme.json");
        fs::create_directories(ctx.out_dir);
        std::ofstream f(ctx.out_dir / "scheme.json");
        f << scheme.to_json() << "\n";
    }
}

void cmd_tradeoff(RunContext& ctx) {
    pla::SystemConfig cfg = system_config(ctx.config);
    std::vector<double> deltas =
        ctx.config.value("deltas", std::vector<double>{1e-6});
    std::vector<double> gdbs;
    if (ctx.config.contains("gamma_tot_db_list"))
        gdbs = ctx.config.at("gamma_tot_db_list").get<std::vector<double>>();
    else
        gdbs = {10.0 * std::log10(cfg.gamma_tot)};
    auto csv = ctx.open_csv("tradeoff.csv");
    csv << "delta,gamma_tot_db,feasible,alpha_star,p_et_opt,p_em_upper\n";
    for (double gdb : gdbs) {
        cfg.gamma_tot = db_to_linear(gdb);
        cfg.gamma_m = cfg.gamma_tot;
        const auto pts = pla::tradeoff_curve(cfg, deltas);
        for (const auto& pt : pts) {
            csv << pt.delta << "," << gdb << "," << (pt.feasible ? 1 : 0);
            if (pt.feasible)
                csv << "," << pt.solution.alpha_star << ","
                    << pt.solution.p_et_opt << ","
                    << pt.solution.p_em_upper_at_opt;
            else
                csv << ",,,";
            csv << "\n";
        }
    }
}

void cmd_simulate(RunContext& ctx) {
    const pla::SystemConfig cfg = system_config(ctx.config);
    const auto scheme = scheme_from_config(cfg, ctx.config);
    const long long trials = ctx.trials > 0 ? ctx.trials : 100000;
    const auto mc = pla::simulate_ser(scheme, cfg.n_antennas, trials, ctx.seed);
    const double pem_t = pla::message_ser(scheme, cfg.n_antennas);
    const auto pet_t = pla::tag_ser(scheme, cfg.n_antennas);
    auto csv = ctx.open_csv("simulate.csv");
    csv << "trials,p_em_theory,p_em_mc,p_em_lo,p_em_hi,"
           "p_et_theory,p_et_mc,p_et_lo,p_et_hi\n";
    csv << mc.trials << "," << pem_t << "," << mc.p_em << "," << mc.p_em_ci.lo
        << "," << mc.p_em_ci.hi << "," << pet_t.average << "," << mc.p_et
        << "," << mc.p_et_ci.lo << "," << mc.p_et_ci.hi << "\n";
}

void cmd_auth(RunContext& ctx) {
    const pla::SystemConfig cfg = system_config(ctx.config);
    const auto scheme = scheme_from_config(cfg, ctx.config);
    const long long frames = ctx.trials > 0 ? ctx.trials : 10000;
    const std::string key_str = ctx.config.value("key", "default-demo-key");
    const std::vector<std::uint8_t> key(key_str.begin(), key_str.end());
    const std::string attacker = ctx.config.value("attacker", "legit");
    pla::AttackerMode mode;
    if (attacker == "legit")
        mode = pla::AttackerMode::Legit;
    else if (attacker == "forger")
        mode = pla::AttackerMode::RandomTagForger;
    else
        throw ConfigError("attacker must be legit or forger");

    const auto rep =
        pla::run_auth_experiment(cfg, scheme, frames, mode, key, ctx.seed);
    auto csv = ctx.open_csv("auth.csv");
    csv << "mode,frames,accepted,acceptance_rate,ci_lo,ci_hi,i_star,theta0,"
           "achieved_fa,empirical_p,mean_theta,theory_detection_rate\n";
    csv << attacker << "," << rep.frames << "," << rep.accepted << ","
        << rep.acceptance_rate << "," << rep.acceptance_ci.lo << ","
        << rep.acceptance_ci.hi << "," << rep.i_star << "," << rep.theta0
        << "," << rep.achieved_fa << "," << rep.empirical_p << ","
        << rep.mean_theta << ","
        << pla::detection_rate(cfg.mac_len, rep.i_star, rep.empirical_p)
        << "\n";

    json meta;
    meta["mac"] = "hmac-sha256";
    meta["key_id"] = key_str;
    meta["seed"] = ctx.seed;
    meta["epsilon"] = cfg.fa_budget;
    meta["mac_len"] = cfg.mac_len;
    meta["i_star"] = rep.i_star;
    ctx.write_json("auth_meta.json", meta);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physical layer authentication toolkit for non-coherent "
                 "massive SIMO links"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    long long trials = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")
            ->required();
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--trials", trials, "Monte Carlo trials / frames");
    };

    struct Cmd {
        const char* name;
        const char* help;
        void (*fn)(RunContext&);
    };
    const Cmd cmds[] = {
        {"design", "design the message constellation", cmd_design},
        {"uniform-sweep", "sweep uniform embedding over beta", cmd_uniform_sweep},
        {"mbased-sweep", "sweep message-based embedding over r", cmd_mbased_sweep},
        {"optimize", "solve the tag-power optimization", cmd_optimize},
        {"tradeoff", "trade-off curves over delta and gamma_tot", cmd_tradeoff},
        {"simulate", "Monte Carlo SER estimation", cmd_simulate},
        {"auth", "end-to-end authentication experiment", cmd_auth},
    };
    for (const auto& c : cmds) add_common(app.add_subcommand(c.name, c.help));

    CLI11_PARSE(app, argc, argv);

    RunContext ctx;
    ctx.seed = seed;
    ctx.trials = trials;
    ctx.out_dir = out_dir;
    ctx.config_path = config_path;

    try {
        ctx.config = load_config(config_path);
        for (const auto& c : cmds) {
            if (app.get_subcommand(c.name)->parsed()) {
                ctx.command = c.name;
                c.fn(ctx);
                break;
            }
        }
        ctx.write_manifest();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
