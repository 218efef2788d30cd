#include "lci/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "lci/errors.hpp"
#include "lci/loads.hpp"

namespace lci {

namespace {

ScenarioConfig base_fullcycle(double L_ins, double L_ann) {
    ScenarioConfig c;
    c.initial_age = 25.0;
    c.horizon = 85.0;
    c.solver.horizon_T = c.horizon;
    c.initial_wealth = 0.0;
    c.bequest_mode = BequestMode::hara;
    c.load_ins = L_ins;
    c.load_ann = L_ann;
    return c;
}

ScenarioConfig base_postret(double L_ins, double L_ann) {
    ScenarioConfig c;
    c.initial_age = 65.0;
    c.horizon = 45.0;
    c.solver.horizon_T = c.horizon;
    c.initial_wealth = 500000.0;
    c.bequest_mode = BequestMode::hara;
    c.load_ins = L_ins;
    c.load_ann = L_ann;
    return c;
}

// Power-utility bequests with unit altruism weight: phi = 0.5 makes
// phi/(1-phi) = 1, so the bequest term is the plain power function.
void make_crra(ScenarioConfig& c) {
    c.bequest_mode = BequestMode::crra;
    c.phi = 0.5;
}

}  // namespace

ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig c;
    if (name == "fullcycle-18") {
        c = base_fullcycle(0.18, 0.18);
    } else if (name == "fullcycle-12") {
        c = base_fullcycle(0.12, 0.12);
    } else if (name == "fullcycle-fair") {
        c = base_fullcycle(0.0, 0.0);
    } else if (name == "fullcycle-18-crra") {
        c = base_fullcycle(0.18, 0.18);
        make_crra(c);
    } else if (name == "fullcycle-fair-crra") {
        c = base_fullcycle(0.0, 0.0);
        make_crra(c);
    } else if (name == "feedforward-ann-6") {
        c = base_fullcycle(0.12, 0.06);
    } else if (name == "feedforward-ann-12") {
        c = base_fullcycle(0.12, 0.12);
    } else if (name == "feedforward-ann-18") {
        c = base_fullcycle(0.12, 0.18);
    } else if (name == "feedforward-ins-6") {
        c = base_fullcycle(0.06, 0.12);
    } else if (name == "feedforward-ins-12") {
        c = base_fullcycle(0.12, 0.12);
    } else if (name == "feedforward-ins-18") {
        c = base_fullcycle(0.18, 0.12);
    } else if (name == "postret-18") {
        c = base_postret(0.18, 0.18);
    } else if (name == "postret-fair") {
        c = base_postret(0.0, 0.0);
    } else if (name == "postret-crra-18") {
        c = base_postret(0.18, 0.18);
        make_crra(c);
    } else if (name == "postret-fair-crra") {
        c = base_postret(0.0, 0.0);
        make_crra(c);
    } else if (name == "figure3") {
        c = preset_config("postret-18");
    } else if (name == "figure4") {
        c = preset_config("fullcycle-18");
    } else if (name == "figure5") {
        c = preset_config("feedforward-ann-18");
    } else if (name == "figure6") {
        c = preset_config("feedforward-ins-18");
    } else if (name.rfind("table3-", 0) == 0) {
        const std::string pct = name.substr(7);
        char* end = nullptr;
        const double L = std::strtod(pct.c_str(), &end) / 100.0;
        if (end == pct.c_str() || *end != '\0' || L < 0.0 || L >= 1.0)
            throw ValidationError("unknown preset: " + name);
        c = base_postret(L, L);
    } else {
        throw ValidationError("unknown preset: " + name);
    }
    c.name = name;
    return c;
}

std::vector<std::string> preset_names() {
    return {"fullcycle-18",     "fullcycle-12",     "fullcycle-fair",
            "fullcycle-18-crra", "fullcycle-fair-crra",
            "feedforward-ann-6", "feedforward-ann-12", "feedforward-ann-18",
            "feedforward-ins-6", "feedforward-ins-12", "feedforward-ins-18",
            "postret-18",       "postret-fair",     "postret-crra-18",
            "postret-fair-crra", "figure3",          "figure4",
            "figure5",          "figure6",          "table3-<L>"};
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw ParseError("config line " + std::to_string(line) + ": expected a number, got '" +
                         v + "'");
    return x;
}

int parse_int(const std::string& v, int line) {
    const double x = parse_number(v, line);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-9)
        throw ParseError("config line " + std::to_string(line) + ": expected an integer, got '" +
                         v + "'");
    return i;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    std::string section;
    std::string raw;
    int line = 0;
    bool seen_any = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t cut = s.find_first_of("#;");
        if (cut != std::string::npos) s.erase(cut);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError("config line " + std::to_string(line) + ": unterminated section");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "scenario" && section != "preferences" && section != "loads" &&
                section != "mortality" && section != "profiles" && section != "solver" &&
                section != "output")
                throw ParseError("config line " + std::to_string(line) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ParseError("config line " + std::to_string(line) + ": empty key or value");
        seen_any = true;

        auto unknown = [&]() -> ParseError {
            return ParseError("config line " + std::to_string(line) + ": unknown key '" + key +
                              "' in section [" + section + "]");
        };

        if (section == "scenario") {
            if (key == "preset") {
                ScenarioConfig p = preset_config(val);
                p.name = cfg.name == "custom" ? val : cfg.name;
                p.output_dir = cfg.output_dir;
                cfg = p;
            } else if (key == "name") {
                cfg.name = val;
            } else if (key == "initial_age") {
                cfg.initial_age = parse_number(val, line);
            } else if (key == "horizon") {
                cfg.horizon = parse_number(val, line);
                // Keep the solver horizon in lockstep; an explicit
                // [solver] horizon_T key later in the file still overrides.
                cfg.solver.horizon_T = cfg.horizon;
            } else if (key == "initial_wealth") {
                cfg.initial_wealth = parse_number(val, line);
            } else if (key == "bequest_mode") {
                if (val == "crra")
                    cfg.bequest_mode = BequestMode::crra;
                else if (val == "hara")
                    cfg.bequest_mode = BequestMode::hara;
                else
                    throw ParseError("config line " + std::to_string(line) +
                                     ": bequest_mode must be crra or hara");
            } else {
                throw unknown();
            }
        } else if (section == "preferences") {
            if (key == "r")
                cfg.r = parse_number(val, line);
            else if (key == "sigma")
                cfg.sigma = parse_number(val, line);
            else if (key == "beta")
                cfg.beta = parse_number(val, line);
            else if (key == "phi")
                cfg.phi = parse_number(val, line);
            else
                throw unknown();
        } else if (section == "loads") {
            if (key == "load_ins")
                cfg.load_ins = parse_number(val, line);
            else if (key == "load_ann")
                cfg.load_ann = parse_number(val, line);
            else if (key == "kappa_ins")
                cfg.kappa_ins = parse_number(val, line);
            else if (key == "kappa_ann")
                cfg.kappa_ann = parse_number(val, line);
            else if (key == "pricing_rate")
                cfg.pricing_rate = parse_number(val, line);
            else if (key == "calibration_age")
                cfg.calibration_age = parse_number(val, line);
            else
                throw unknown();
        } else if (section == "mortality") {
            if (key == "m")
                cfg.gompertz_m = parse_number(val, line);
            else if (key == "b")
                cfg.gompertz_b = parse_number(val, line);
            else
                throw unknown();
        } else if (section == "profiles") {
            if (key == "pension")
                cfg.pension = parse_number(val, line);
            else if (key == "cb_join")
                cfg.cb_join = parse_number(val, line);
            else if (key == "cb_retirement")
                cfg.cb_retirement = parse_number(val, line);
            else
                throw unknown();
        } else if (section == "solver") {
            if (key == "horizon_T")
                cfg.solver.horizon_T = parse_number(val, line);
            else if (key == "dt")
                cfg.solver.dt = parse_number(val, line);
            else if (key == "wealth_nodes")
                cfg.solver.wealth_nodes = parse_int(val, line);
            else if (key == "interpolation") {
                if (val == "monotone-cubic")
                    cfg.solver.interpolation = InterpKind::monotone_cubic;
                else if (val == "linear")
                    cfg.solver.interpolation = InterpKind::linear;
                else
                    throw ParseError("config line " + std::to_string(line) +
                                     ": interpolation must be monotone-cubic or linear");
            } else if (key == "control_tolerance")
                cfg.solver.control_tolerance = parse_number(val, line);
            else if (key == "integration_order")
                cfg.solver.integration_order = parse_int(val, line);
            else if (key == "w_max")
                cfg.solver.w_max = parse_number(val, line);
            else if (key == "borrow_fraction")
                cfg.solver.borrow_fraction = parse_number(val, line);
            else
                throw unknown();
        } else if (section == "output") {
            if (key == "dir")
                cfg.output_dir = val;
            else
                throw unknown();
        } else {
            throw ParseError("config line " + std::to_string(line) +
                             ": key outside any [section]");
        }
    }
    if (!seen_any && line == 0)
        throw ParseError("config: empty input");
    return cfg;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    if (!(cfg.initial_age >= 0.0) || !(cfg.horizon > 0.0))
        throw ValidationError("scenario: initial_age and horizon must be positive");
    if (!(cfg.sigma > 0.0) || cfg.sigma == 1.0)
        throw ValidationError("scenario: sigma must be positive and different from 1");
    if (!(cfg.phi > 0.0 && cfg.phi < 1.0))
        throw ValidationError("scenario: phi must lie in (0, 1)");
    if (!(cfg.gompertz_b > 0.0))
        throw ValidationError("scenario: Gompertz b must be positive");
    if (cfg.load_ins < 0.0 || cfg.load_ins >= 1.0 || cfg.load_ann < 0.0 || cfg.load_ann >= 1.0)
        throw ValidationError("scenario: loads must lie in [0, 1)");

    Scenario sc;
    sc.mortality = GompertzParams{cfg.gompertz_m, cfg.gompertz_b, cfg.initial_age};
    sc.prefs.r = cfg.r;
    sc.prefs.sigma = cfg.sigma;
    sc.prefs.beta = cfg.beta;
    sc.prefs.phi = cfg.phi;
    sc.prefs.bequest_mode = cfg.bequest_mode;
    sc.prefs.dependency = make_dependency_profile(cfg.cb_retirement, cfg.cb_join);

    const GompertzParams pricing{cfg.gompertz_m, cfg.gompertz_b, cfg.calibration_age};
    double ki = cfg.kappa_ins;
    double ka = cfg.kappa_ann;
    if (!(ki > 0.0)) ki = solve_kappa_ins(cfg.load_ins, cfg.pricing_rate, pricing);
    if (!(ka > 0.0)) ka = solve_kappa_ann(cfg.load_ann, cfg.pricing_rate, pricing);
    if (ki < 1.0 || ka < 1.0)
        throw ValidationError("scenario: kappas must be at least 1");
    sc.schedule.kappa_ins = ki;
    sc.schedule.kappa_ann = ka;
    sc.schedule.pricing_rate = cfg.pricing_rate;
    sc.schedule.calibration_age = cfg.calibration_age;
    sc.schedule.base = sc.mortality;

    sc.income = fit_income(default_income_anchors());
    sc.income.pension = cfg.pension;
    sc.profile_offset = cfg.initial_age - 25.0;
    sc.initial_wealth = cfg.initial_wealth;
    return sc;
}

std::string canonical_serialization(const ScenarioConfig& c) {
    std::ostringstream os;
    char buf[40];
    const auto num = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << key << '=' << buf << '\n';
    };
    os << "scenario-v1\n";
    num("initial_age", c.initial_age);
    num("horizon", c.horizon);
    num("initial_wealth", c.initial_wealth);
    os << "bequest_mode=" << (c.bequest_mode == BequestMode::crra ? "crra" : "hara") << '\n';
    num("r", c.r);
    num("sigma", c.sigma);
    num("beta", c.beta);
    num("phi", c.phi);
    num("load_ins", c.load_ins);
    num("load_ann", c.load_ann);
    num("kappa_ins", c.kappa_ins);
    num("kappa_ann", c.kappa_ann);
    num("pricing_rate", c.pricing_rate);
    num("calibration_age", c.calibration_age);
    num("gompertz_m", c.gompertz_m);
    num("gompertz_b", c.gompertz_b);
    num("pension", c.pension);
    num("cb_join", c.cb_join);
    num("cb_retirement", c.cb_retirement);
    num("solver.horizon_T", c.solver.horizon_T);
    num("solver.dt", c.solver.dt);
    os << "solver.wealth_nodes=" << c.solver.wealth_nodes << '\n';
    os << "solver.interpolation="
       << (c.solver.interpolation == InterpKind::monotone_cubic ? "monotone-cubic" : "linear")
       << '\n';
    num("solver.control_tolerance", c.solver.control_tolerance);
    os << "solver.integration_order=" << c.solver.integration_order << '\n';
    num("solver.w_max", c.solver.w_max);
    num("solver.borrow_fraction", c.solver.borrow_fraction);
    return os.str();
}

std::uint64_t config_hash(const ScenarioConfig& c) {
    const std::string s = canonical_serialization(c);
    std::uint64_t h = 14695981039346656037ULL;  // FNV-1a 64-bit
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {
constexpr char kCacheMagic[8] = {'L', 'C', 'I', 'S', 'L', 'C', 'E', '1'};
}

void save_slices(const std::string& path, const std::vector<ValueSlice>& slices) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cache: cannot open '" + path + "' for writing");
    out.write(kCacheMagic, sizeof(kCacheMagic));
    const std::uint64_t n = slices.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (const ValueSlice& s : slices) {
        const std::int32_t idx = s.index;
        const std::uint64_t j = s.wealth.size();
        out.write(reinterpret_cast<const char*>(&idx), sizeof(idx));
        out.write(reinterpret_cast<const char*>(&s.t), sizeof(s.t));
        out.write(reinterpret_cast<const char*>(&j), sizeof(j));
        const auto dump = [&](const std::vector<double>& v) {
            out.write(reinterpret_cast<const char*>(v.data()),
                      static_cast<std::streamsize>(v.size() * sizeof(double)));
        };
        dump(s.wealth);
        dump(s.value);
        dump(s.c_opt);
        dump(s.p_opt);
        out.write(reinterpret_cast<const char*>(s.feasible.data()),
                  static_cast<std::streamsize>(s.feasible.size()));
    }
    if (!out) throw ValidationError("cache: short write to '" + path + "'");
}

bool load_slices(const std::string& path, std::vector<ValueSlice>& slices) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) return false;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in || n == 0 || n > 4000000) return false;
    std::vector<ValueSlice> out(n);
    for (ValueSlice& s : out) {
        std::int32_t idx = 0;
        std::uint64_t j = 0;
        in.read(reinterpret_cast<char*>(&idx), sizeof(idx));
        in.read(reinterpret_cast<char*>(&s.t), sizeof(s.t));
        in.read(reinterpret_cast<char*>(&j), sizeof(j));
        if (!in || j < 2 || j > 100000000) return false;
        s.index = idx;
        const auto slurp = [&](std::vector<double>& v) {
            v.resize(j);
            in.read(reinterpret_cast<char*>(v.data()),
                    static_cast<std::streamsize>(j * sizeof(double)));
        };
        slurp(s.wealth);
        slurp(s.value);
        slurp(s.c_opt);
        slurp(s.p_opt);
        s.feasible.resize(j);
        in.read(reinterpret_cast<char*>(s.feasible.data()), static_cast<std::streamsize>(j));
        if (!in) return false;
    }
    slices = std::move(out);
    return true;
}

}  // namespace lci
