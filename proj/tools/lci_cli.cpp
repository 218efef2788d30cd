// lci — life-cycle insurance model command line.
//
// Subcommands: calibrate, loads, profiles, solve, table3, report.
// All floating-point output is printed at 6 significant digits; identical
// inputs produce byte-identical output files.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lci/calibration.hpp"
#include "lci/errors.hpp"
#include "lci/lifetable.hpp"
#include "lci/loads.hpp"
#include "lci/profiles.hpp"
#include "lci/scenario.hpp"
#include "lci/solver.hpp"

namespace {

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw lci::ValidationError("cannot open output file '" + path + "'");
    return out;
}

lci::ScenarioConfig resolve_config(const std::string& preset, const std::string& config_path) {
    lci::ScenarioConfig cfg =
        preset.empty() ? lci::ScenarioConfig{} : lci::preset_config(preset);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw lci::ParseError("cannot open config file '" + config_path + "'");
        cfg = lci::parse_config(in, cfg);
    }
    return cfg;
}

std::vector<lci::ValueSlice> solve_with_cache(const lci::ScenarioConfig& cfg,
                                              const lci::Scenario& sc,
                                              const std::string& cache_dir) {
    std::string cache_path;
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        char key[32];
        std::snprintf(key, sizeof(key), "%016llx",
                      static_cast<unsigned long long>(lci::config_hash(cfg)));
        cache_path = cache_dir + "/" + key + ".slices";
        std::vector<lci::ValueSlice> cached;
        if (lci::load_slices(cache_path, cached)) {
            const auto n = static_cast<std::size_t>(
                std::lround(cfg.solver.horizon_T / cfg.solver.dt));
            if (cached.size() == n + 1) return cached;
        }
    }
    std::vector<lci::ValueSlice> slices = lci::backward_induction(sc, cfg.solver);
    if (!cache_path.empty()) lci::save_slices(cache_path, slices);
    return slices;
}

const char* phase_name(int sign) {
    return sign > 0 ? "insurance" : (sign < 0 ? "annuity" : "none");
}

void write_trajectory(const lci::Trajectory& traj, std::ostream& out) {
    out << "age,t,wealth,consumption,premium,sum_insured,legacy\n";
    for (const auto& p : traj.points) {
        out << g6(p.age) << ',' << g6(p.t) << ',' << g6(p.wealth) << ',' << g6(p.consumption)
            << ',' << g6(p.premium) << ',' << g6(p.sum_insured) << ',' << g6(p.legacy) << '\n';
    }
}

void write_participation(const std::vector<lci::PhaseInterval>& phases, std::ostream& out) {
    out << "age_begin,age_end,phase\n";
    for (const auto& ph : phases)
        out << g6(ph.age_begin) << ',' << g6(ph.age_end) << ',' << phase_name(ph.sign) << '\n';
}

int cmd_calibrate(const std::string& input, const std::string& output_dir) {
    std::ifstream in(input);
    if (!in) throw lci::ParseError("cannot open life-table file '" + input + "'");
    const auto rows = lci::parse_life_tables(in);
    lci::AggregatedTable table = lci::aggregate(rows);
    lci::exposures(table, 0.5);
    const lci::CalibrationResult res = lci::calibrate(table);

    std::cout << "survival least squares: b = " << g6(res.lm_estimate.b)
              << ", m = " << g6(res.lm_estimate.m)
              << " (residual norm " << g6(res.lsq_residual_norm) << ")\n";
    std::cout << "poisson mle:            b = " << g6(res.mle_estimate.b)
              << ", m = " << g6(res.mle_estimate.m) << " (alpha = " << g6(res.alpha_hat)
              << ", beta = " << g6(res.beta_hat) << ")\n";
    std::cout << "blended (0.25/0.75):    b = " << g6(res.blended.b)
              << ", m = " << g6(res.blended.m) << "\n";

    auto agg = open_out(output_dir, "aggregate.csv");
    lci::write_aggregate_csv(table, agg);

    auto fit = open_out(output_dir, "mortality_fit.csv");
    fit << "age,empirical_rate,fitted_rate\n";
    const lci::GompertzParams blend{res.blended.m, res.blended.b, 0.0};
    for (const auto& [age, rate] : lci::mortality_rate_curve(table)) {
        const double fitted = lci::hazard(blend, age + 0.5);
        fit << age << ',' << g6(rate) << ',' << g6(fitted) << '\n';
    }
    return lci::exit_code::ok;
}

int cmd_loads(double rate, double age, double load, const std::string& output_dir) {
    lci::LoadSchedule sched;
    sched.pricing_rate = rate;
    sched.calibration_age = age;
    const lci::GompertzParams pricing{sched.base.m, sched.base.b, age};

    auto t2 = open_out(output_dir, "table2.csv");
    t2 << "load,kappa_ins,modal_age_ins,kappa_ann,modal_age_ann\n";
    std::cout << "load  kappa_ins  m_ins   kappa_ann  m_ann\n";
    for (int pct = 0; pct <= 20; pct += 2) {
        const double L = pct / 100.0;
        lci::LoadSchedule row = sched;
        row.kappa_ins = L == 0.0 ? 1.0 : lci::solve_kappa_ins(L, rate, pricing);
        row.kappa_ann = L == 0.0 ? 1.0 : lci::solve_kappa_ann(L, rate, pricing);
        t2 << g6(L) << ',' << g6(row.kappa_ins) << ',' << g6(row.m_ins()) << ','
           << g6(row.kappa_ann) << ',' << g6(row.m_ann()) << '\n';
        std::cout << g6(L) << "  " << g6(row.kappa_ins) << "  " << g6(row.m_ins()) << "  "
                  << g6(row.kappa_ann) << "  " << g6(row.m_ann()) << '\n';
    }

    lci::LoadSchedule fixed = sched;
    fixed.kappa_ins = load == 0.0 ? 1.0 : lci::solve_kappa_ins(load, rate, pricing);
    fixed.kappa_ann = load == 0.0 ? 1.0 : lci::solve_kappa_ann(load, rate, pricing);
    auto f2 = open_out(output_dir, "figure2.csv");
    f2 << "age,load_ins,load_ann\n";
    for (int a = 25; a <= 95; ++a) {
        const lci::ImpliedLoads il = lci::implied_load_by_age(fixed, a);
        f2 << a << ',' << g6(il.L_ins) << ',' << g6(il.L_ann) << '\n';
    }
    return lci::exit_code::ok;
}

int cmd_profiles(const std::string& output_dir) {
    const lci::IncomeProfile income = lci::fit_income(lci::default_income_anchors());
    const lci::DependencyProfile dep = lci::make_dependency_profile();
    std::cout << "income ln-quadratic: q2 = " << g6(income.q2) << ", q1 = " << g6(income.q1)
              << ", q0 = " << g6(income.q0) << "; peak at t = " << g6(income.peak_t()) << "\n";
    const auto [tmin, vmin] = dep.interior_minimum();
    std::cout << "survivor needs: min " << g6(vmin) << " at age " << g6(25.0 + tmin)
              << ", join " << g6(dep.K) << ", retirement level " << g6(dep.P) << "\n";
    auto out = open_out(output_dir, "profiles.csv");
    out << "t,age,income,dependency\n";
    for (int i = 0; i <= 340; ++i) {
        const double t = 0.25 * i;
        out << g6(t) << ',' << g6(25.0 + t) << ',' << g6(income(t)) << ',' << g6(dep(t))
            << '\n';
    }
    return lci::exit_code::ok;
}

int cmd_solve(const std::string& preset, const std::string& config_path,
              const std::string& output_override, const std::string& cache_dir,
              bool emit_policy) {
    const lci::ScenarioConfig cfg = resolve_config(preset, config_path);
    const std::string out_dir = output_override.empty() ? cfg.output_dir : output_override;
    const lci::Scenario sc = lci::build_scenario(cfg);
    const auto slices = solve_with_cache(cfg, sc, cache_dir);
    const lci::Trajectory traj =
        lci::forward_simulate(sc, cfg.solver, slices, cfg.initial_wealth);
    const auto phases = lci::participation_report(traj, 1.0);

    auto tfile = open_out(out_dir, "trajectory.csv");
    write_trajectory(traj, tfile);
    auto pfile = open_out(out_dir, "participation.csv");
    write_participation(phases, pfile);

    if (emit_policy) {
        auto pol = open_out(out_dir, "policy.csv");
        pol << "t,wealth,value,c_opt,p_opt\n";
        const int stride = std::max<int>(1, static_cast<int>(std::lround(1.0 / cfg.solver.dt)));
        for (std::size_t i = 0; i < slices.size(); i += stride) {
            const auto& s = slices[i];
            for (std::size_t j = 0; j < s.wealth.size(); ++j) {
                if (!s.feasible[j]) continue;
                pol << g6(s.t) << ',' << g6(s.wealth[j]) << ',' << g6(s.value[j]) << ','
                    << g6(s.c_opt[j]) << ',' << g6(s.p_opt[j]) << '\n';
            }
        }
    }

    std::cout << "scenario " << cfg.name << ": solved " << slices.size() - 1 << " steps, "
              << cfg.solver.wealth_nodes << " wealth nodes\n";
    for (const auto& ph : phases)
        std::cout << "  " << phase_name(ph.sign) << "  ages " << g6(ph.age_begin) << " to "
                  << g6(ph.age_end) << "\n";
    return lci::exit_code::ok;
}

int cmd_table3(double wealth, const std::string& loads_csv, const std::string& preset,
               const std::string& config_path, const std::string& output_override,
               const std::string& cache_dir) {
    std::vector<double> loads;
    {
        std::stringstream ss(loads_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            char* end = nullptr;
            const double pct = std::strtod(item.c_str(), &end);
            if (end == item.c_str() || *end != '\0')
                throw lci::ParseError("table3: bad load list entry '" + item + "'");
            loads.push_back(pct / 100.0);
        }
        if (loads.empty()) throw lci::ParseError("table3: empty load list");
    }
    const std::vector<int> ages{65, 70, 75, 80, 85, 90};

    lci::ScenarioConfig base = resolve_config(preset.empty() ? "postret-18" : preset,
                                              config_path);
    base.initial_wealth = wealth;
    const std::string out_dir = output_override.empty() ? base.output_dir : output_override;

    auto csv = open_out(out_dir, "table3.csv");
    csv << "load,age,demand_per_year,demand_hundreds\n";
    std::cout << "load";
    for (int a : ages) std::cout << '\t' << a;
    std::cout << '\n';
    for (double L : loads) {
        lci::ScenarioConfig cfg = base;
        cfg.load_ins = L;
        cfg.load_ann = L;
        cfg.kappa_ins = 0.0;
        cfg.kappa_ann = 0.0;
        const lci::Scenario sc = lci::build_scenario(cfg);
        const auto slices = solve_with_cache(cfg, sc, cache_dir);
        const lci::Trajectory traj =
            lci::forward_simulate(sc, cfg.solver, slices, cfg.initial_wealth);
        std::cout << g6(100.0 * L) << '%';
        for (int a : ages) {
            const double d = lci::annuity_demand(traj, a);
            csv << g6(L) << ',' << a << ',' << g6(d) << ',' << g6(d / 100.0) << '\n';
            std::cout << '\t' << g6(d / 100.0);
        }
        std::cout << std::endl;
    }
    return lci::exit_code::ok;
}

int cmd_report(const std::string& preset, const std::string& config_path,
               const std::string& cache_dir) {
    const lci::ScenarioConfig cfg = resolve_config(preset, config_path);
    const lci::Scenario sc = lci::build_scenario(cfg);
    const auto slices = solve_with_cache(cfg, sc, cache_dir);
    const lci::Trajectory traj =
        lci::forward_simulate(sc, cfg.solver, slices, cfg.initial_wealth);
    const auto phases = lci::participation_report(traj, 1.0);

    std::cout << "scenario: " << cfg.name << "\n";
    std::cout << "entry age " << g6(cfg.initial_age) << ", horizon " << g6(cfg.horizon)
              << " years, initial wealth " << g6(cfg.initial_wealth) << "\n";
    std::cout << "kappa_ins = " << g6(sc.schedule.kappa_ins)
              << ", kappa_ann = " << g6(sc.schedule.kappa_ann) << "\n";
    std::cout << "participation phases (tolerance $1/year):\n";
    for (const auto& ph : phases)
        std::cout << "  " << phase_name(ph.sign) << "  ages " << g6(ph.age_begin) << " to "
                  << g6(ph.age_end) << "\n";
    std::cout << "premium path ($/year) at five-year ages:\n";
    const double age0 = traj.points.front().age;
    const double age_last = traj.points.back().age;
    for (double a = age0; a < age_last; a += 5.0) {
        const std::size_t i = static_cast<std::size_t>(
            std::lround((a - age0) / cfg.solver.dt));
        if (i >= traj.points.size()) break;
        const auto& p = traj.points[i];
        std::cout << "  age " << g6(p.age) << ": p* = " << g6(p.premium)
                  << ", wealth = " << g6(p.wealth) << ", c = " << g6(p.consumption) << "\n";
    }
    return lci::exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"life-cycle insurance model: mortality calibration, loaded contract "
                 "pricing, profiles, and the consumption/insurance dynamic program"};
    app.require_subcommand(1);

    std::string input, output_dir = ".", cache_dir, preset, config_path, loads_list;
    double rate = 0.02, age = 65.0, load = 0.18, wealth = 500000.0;
    bool emit_policy = false;

    auto* calibrate = app.add_subcommand("calibrate", "fit Gompertz mortality to a life table");
    calibrate->add_option("--input", input, "life-table CSV (country,age,lx,dx)")->required();
    calibrate->add_option("--output", output_dir, "output directory");

    auto* loads_cmd = app.add_subcommand("loads", "solve load calibrations and implied loads");
    loads_cmd->add_option("--rate", rate, "pricing interest rate (default 0.02)");
    loads_cmd->add_option("--age", age, "calibration age (default 65)");
    loads_cmd->add_option("--load", load, "load fixing kappas for the age sweep (default 0.18)");
    loads_cmd->add_option("--output", output_dir, "output directory");

    auto* profiles = app.add_subcommand("profiles", "emit earnings and survivor-needs profiles");
    profiles->add_option("--output", output_dir, "output directory");

    std::string solve_output;
    auto* solve = app.add_subcommand("solve", "solve a scenario and simulate the optimal path");
    solve->add_option("--preset", preset, "named scenario preset");
    solve->add_option("--config", config_path, "INI scenario config (overlays the preset)");
    solve->add_option("--output", solve_output, "output directory (overrides config)");
    solve->add_option("--cache", cache_dir, "warm-cache directory for solved slices");
    solve->add_flag("--emit-policy", emit_policy, "also write yearly policy-grid slices");

    auto* table3 = app.add_subcommand("table3", "post-retirement annuity demand by load and age");
    table3->add_option("--wealth", wealth, "wealth at retirement (default 500000)");
    table3->add_option("--loads", loads_list, "comma-separated load percents")
        ->default_val("0,2,4,6,8,10,12,14");
    table3->add_option("--preset", preset, "base preset (default postret-18)");
    table3->add_option("--config", config_path, "INI config overlay");
    table3->add_option("--output", solve_output, "output directory (overrides config)");
    table3->add_option("--cache", cache_dir, "warm-cache directory");

    auto* report = app.add_subcommand("report", "print the participation report for a scenario");
    report->add_option("--preset", preset, "named scenario preset");
    report->add_option("--config", config_path, "INI scenario config (overlays the preset)");
    report->add_option("--cache", cache_dir, "warm-cache directory");

    try {
        app.parse(argc, argv);
        if (calibrate->parsed()) return cmd_calibrate(input, output_dir);
        if (loads_cmd->parsed()) return cmd_loads(rate, age, load, output_dir);
        if (profiles->parsed()) return cmd_profiles(output_dir);
        if (solve->parsed())
            return cmd_solve(preset, config_path, solve_output, cache_dir, emit_policy);
        if (table3->parsed())
            return cmd_table3(wealth, loads_list, preset, config_path, solve_output, cache_dir);
        if (report->parsed()) return cmd_report(preset, config_path, cache_dir);
        return lci::exit_code::ok;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : lci::exit_code::parse;
    } catch (const lci::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return lci::exit_code::parse;
    } catch (const lci::InfeasibilityError& e) {
        std::cerr << "infeasibility: " << e.what() << "\n";
        return lci::exit_code::infeasibility;
    } catch (const lci::ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return lci::exit_code::non_convergence;
    } catch (const lci::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return lci::exit_code::validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lci::exit_code::validation;
    }
}
