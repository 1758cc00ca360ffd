// heston_qcost: command-line front end for the pricer, the fixed-point
// replay, the resource model and the amplitude-estimation simulator.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hqc/arith_error.hpp"
#include "hqc/config.hpp"
#include "hqc/iqae.hpp"
#include "hqc/parallel.hpp"
#include "hqc/pricer.hpp"
#include "hqc/qresource.hpp"

namespace {

using nlohmann::json;
using namespace hqc;

constexpr int kExitConfig = 1;
constexpr int kExitOverflow = 2;
constexpr int kExitRuntime = 3;

struct Common {
    std::string config_path;
    std::string instance;
    std::string scheme;
    std::optional<std::uint32_t> n_steps;
    std::optional<std::uint64_t> paths;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
};

// A table of already-formatted cells plus the JSON view of the same rows.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    json doc = json::object();
};

std::string num(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(10);
    os << v;
    return os.str();
}

std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(std::uint32_t v) { return std::to_string(v); }

void emit(const Table& t, const Common& c) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw ConfigError("out", "cannot write '" + c.out + "'");
        os = &file;
    }
    if (c.format == "json") {
        *os << t.doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.header.size(); ++i) *os << (i ? "," : "") << t.header[i];
    *os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) *os << (i ? "," : "") << row[i];
        *os << '\n';
    }
}

RunConfig load(const Common& c) {
    if (c.config_path.empty() == c.instance.empty()) {
        throw ConfigError("config", "give exactly one of --config or --instance");
    }
    RunConfig rc = c.instance.empty() ? load_run_config(c.config_path) : load_instance(c.instance);
    if (!c.scheme.empty()) {
        try {
            rc.scheme = parse_scheme(c.scheme);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("scheme", e.what());
        }
    }
    if (c.n_steps) {
        if (*c.n_steps < 1) throw ConfigError("n-steps", "must be at least 1");
        rc.n_steps = *c.n_steps;
        for (auto& [s, cfg] : rc.quantum) cfg.n_steps = *c.n_steps;
    }
    if (c.paths) {
        if (*c.paths < 1) throw ConfigError("paths", "must be at least 1");
        rc.paths = *c.paths;
    }
    if (c.seed) rc.seed = *c.seed;
    return rc;
}

Scheme pricing_scheme(const RunConfig& rc) { return rc.scheme.value_or(Scheme::strong_euler); }

// Schemes the quantum commands run over: the one requested, else all configured.
std::vector<Scheme> quantum_schemes(const RunConfig& rc, const Common& c) {
    if (rc.quantum.empty()) throw ConfigError("quantum", "missing");
    std::vector<Scheme> out;
    if (!c.scheme.empty()) {
        if (!rc.quantum.count(*rc.scheme)) throw ConfigError("quantum." + std::string(scheme_name(*rc.scheme)), "missing");
        out.push_back(*rc.scheme);
    } else {
        for (const auto& [s, cfg] : rc.quantum) out.push_back(s);
    }
    return out;
}

const std::vector<std::string> kPriceHeader{"scheme", "N", "n_paths", "mean", "std_error", "clamp_rate"};

std::vector<std::string> price_cells(Scheme s, std::uint32_t n, const PriceEstimate& e) {
    return {std::string(scheme_name(s)), num(n), num(e.n_paths), num(e.mean), num(e.std_error), num(e.clamp_rate)};
}

json price_json(Scheme s, std::uint32_t n, const PriceEstimate& e) {
    return {{"scheme", scheme_name(s)}, {"N", n},           {"n_paths", e.n_paths},
            {"mean", e.mean},           {"std_error", e.std_error}, {"clamp_rate", e.clamp_rate}};
}

Table run_price(const Common& c) {
    const RunConfig rc = load(c);
    const Scheme s = pricing_scheme(rc);
    const PriceEstimate e = price(rc.option, rc.model, s, TimeGrid{rc.option.expiry, rc.n_steps}, rc.paths, rc.seed);
    Table t;
    t.header = kPriceHeader;
    t.rows.push_back(price_cells(s, rc.n_steps, e));
    t.doc = {{"command", "price"}, {"instance", rc.name}, {"seed", rc.seed}, {"rows", json::array({price_json(s, rc.n_steps, e)})}};
    return t;
}

Table run_converge(const Common& c, const std::vector<std::string>& scheme_names, std::vector<std::uint32_t> n_list) {
    const RunConfig rc = load(c);
    std::vector<Scheme> schemes;
    if (!c.scheme.empty()) schemes.push_back(*rc.scheme);
    for (const auto& name : scheme_names) {
        try {
            schemes.push_back(parse_scheme(name));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("schemes", e.what());
        }
    }
    if (schemes.empty()) schemes.assign(kAllSchemes.begin(), kAllSchemes.end());
    if (n_list.empty()) {
        for (std::uint32_t n = 2; n <= 1024; n *= 2) n_list.push_back(n);
    }
    std::vector<ConvergenceRow> rows;
    try {
        rows = convergence_study(rc.option, rc.model, schemes, n_list, rc.paths, rc.seed);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("n-list", e.what());
    }
    Table t;
    t.header = kPriceHeader;
    json arr = json::array();
    for (const auto& r : rows) {
        t.rows.push_back(price_cells(r.scheme, r.n_steps, r.estimate));
        json j = price_json(r.scheme, r.n_steps, r.estimate);
        j["deviation"] = r.deviation;
        arr.push_back(j);
    }
    t.doc = {{"command", "converge"}, {"instance", rc.name}, {"seed", rc.seed}, {"rows", arr}};
    return t;
}

std::optional<PpChoice> parse_pin(const std::string& text, const std::string& key) {
    if (text.empty()) return std::nullopt;
    PpChoice c;
    char comma = 0;
    std::istringstream is(text);
    if (!(is >> c.m >> comma >> c.d) || comma != ',' || c.m < 1 || c.d < 0 || !is.eof()) {
        throw ConfigError(key, "expected M,D with M >= 1 and D >= 0");
    }
    c.pinned = true;
    return c;
}

AlgorithmConfig with_pins(AlgorithmConfig cfg, const std::optional<PpChoice>& pin_exp,
                          const std::optional<PpChoice>& pin_arcsin) {
    if (pin_exp) cfg.exp_pp = pin_exp;
    if (pin_arcsin) cfg.arcsin_pp = pin_arcsin;
    return resolve_approximants(cfg);
}

Table run_resources(const Common& c, const std::string& pin_exp_text, const std::string& pin_arcsin_text) {
    const RunConfig rc = load(c);
    const auto pin_exp = parse_pin(pin_exp_text, "pin-exp");
    const auto pin_arcsin = parse_pin(pin_arcsin_text, "pin-arcsin");
    Table t;
    t.header = {"instance", "scheme", "N",    "t_count", "t_depth", "qubits",   "t_u1",     "t_u2",
                "t_u3",     "t_q",    "n_oracle", "exp_m", "exp_d",  "arcsin_m", "arcsin_d"};
    json arr = json::array();
    for (Scheme s : quantum_schemes(rc, c)) {
        const AlgorithmConfig cfg = with_pins(rc.quantum.at(s), pin_exp, pin_arcsin);
        const TotalCost tc = total_cost(cfg);
        t.rows.push_back({rc.name, std::string(scheme_name(s)), num(cfg.n_steps), num(tc.t_count), num(tc.t_depth),
                          num(tc.qubits), num(tc.u1.t_count), num(tc.u2.t_count), num(tc.u3.t_count),
                          num(tc.q.t_count), num(tc.n_oracle), num(std::int64_t{cfg.exp_pp->m}),
                          num(std::int64_t{cfg.exp_pp->d}), num(std::int64_t{cfg.arcsin_pp->m}),
                          num(std::int64_t{cfg.arcsin_pp->d})});
        auto component = [](const ResourceCost& r) {
            return json{{"t_count", r.t_count}, {"t_depth", r.t_depth}, {"ancilla", r.ancilla}};
        };
        arr.push_back({{"scheme", scheme_name(s)},
                       {"N", cfg.n_steps},
                       {"n", cfg.fmt.n},
                       {"p", cfg.fmt.p},
                       {"t_count", tc.t_count},
                       {"t_depth", tc.t_depth},
                       {"qubits", tc.qubits},
                       {"n_oracle", tc.n_oracle},
                       {"u1", component(tc.u1)},
                       {"u2", component(tc.u2)},
                       {"u3", component(tc.u3)},
                       {"q", component(tc.q)},
                       {"exp_pp", {{"m", cfg.exp_pp->m}, {"d", cfg.exp_pp->d}, {"pinned", cfg.exp_pp->pinned}}},
                       {"arcsin_pp",
                        {{"m", cfg.arcsin_pp->m}, {"d", cfg.arcsin_pp->d}, {"pinned", cfg.arcsin_pp->pinned}}}});
    }
    t.doc = {{"command", "resources"}, {"instance", rc.name}, {"rows", arr}};
    return t;
}

struct Replay {
    AlgorithmConfig cfg;
    ArithErrorResult result;
};

Replay replay(const RunConfig& rc, Scheme s, std::uint64_t samples) {
    if (!rc.option.z_bound) throw ConfigError("option.z_bound", "missing");
    if (samples < 1) throw ConfigError("samples", "must be at least 1");
    Replay r;
    r.cfg = resolve_approximants(rc.quantum.at(s));
    const PiecewisePoly pp_exp = fit_piecewise(target_function(TargetFunction::exp), r.cfg.exp_lo, r.cfg.exp_hi,
                                               r.cfg.exp_pp->m, r.cfg.exp_pp->d);
    const PiecewisePoly pp_arcsin = fit_piecewise(target_function(TargetFunction::arcsin), 0.0, kArcsinDomainHi,
                                                  r.cfg.arcsin_pp->m, r.cfg.arcsin_pp->d);
    const TimeGrid grid{rc.option.expiry, static_cast<std::uint32_t>(r.cfg.n_steps)};
    r.result = estimate_arith_error(rc.option, rc.model, s, r.cfg.fmt, pp_exp, pp_arcsin, grid, samples, rc.seed,
                                    r.cfg.eta);
    return r;
}

Table run_error_budget(const Common& c, std::uint64_t samples) {
    const RunConfig rc = load(c);
    Table t;
    t.header = {"instance", "scheme", "N", "eps_estimate", "eps_arithm", "sin_term", "gauss_term", "total"};
    json arr = json::array();
    for (Scheme s : quantum_schemes(rc, c)) {
        const Replay r = replay(rc, s, samples);
        const ErrorBudget b = error_budget(r.cfg, r.result.eps_arithm);
        t.rows.push_back({rc.name, std::string(scheme_name(s)), num(r.cfg.n_steps), num(b.estimate), num(b.arithm),
                          num(b.sin), num(b.gauss), num(b.total)});
        arr.push_back({{"scheme", scheme_name(s)},
                       {"N", r.cfg.n_steps},
                       {"eps_estimate", b.estimate},
                       {"eps_arithm", b.arithm},
                       {"sin_term", b.sin},
                       {"gauss_term", b.gauss},
                       {"total", b.total},
                       {"samples", samples}});
    }
    t.doc = {{"command", "error-budget"}, {"instance", rc.name}, {"seed", rc.seed}, {"rows", arr}};
    return t;
}

Table run_fixedpoint_error(const Common& c, std::uint64_t samples) {
    const RunConfig rc = load(c);
    // Without --scheme, follow the top-level scheme when it has a quantum section.
    const auto schemes = quantum_schemes(rc, c);
    Scheme s = schemes.front();
    if (c.scheme.empty() && rc.scheme && rc.quantum.count(*rc.scheme)) s = *rc.scheme;
    const Replay r = replay(rc, s, samples);
    Table t;
    t.header = {"step", "max_dev_y1", "max_dev_y2", "eps_arithm"};
    json steps = json::array();
    for (std::size_t j = 0; j < r.result.max_dev_y1.size(); ++j) {
        t.rows.push_back({num(std::uint64_t{j}), num(r.result.max_dev_y1[j]), num(r.result.max_dev_y2[j]),
                          num(r.result.eps_arithm)});
        steps.push_back({{"step", j}, {"max_dev_y1", r.result.max_dev_y1[j]}, {"max_dev_y2", r.result.max_dev_y2[j]}});
    }
    t.doc = {{"command", "fixedpoint-error"}, {"instance", rc.name},          {"scheme", scheme_name(s)},
             {"seed", rc.seed},               {"samples", samples},          {"eps_arithm", r.result.eps_arithm},
             {"max_payoff_dev", r.result.max_payoff_dev}, {"steps", steps}};
    return t;
}

struct IqaeArgs {
    double a = 0.3;
    double eps = 1e-2;
    double delta = 0.05;
    std::uint64_t trials = 200;
    std::uint64_t shots = 100;
    std::uint64_t seed = 1;
};

Table run_iqae(const Common& c, const IqaeArgs& args) {
    if (!(args.a >= 0.0 && args.a <= 1.0)) throw ConfigError("a", "must lie in [0, 1]");
    if (!(args.eps > 0.0 && args.eps < 0.5)) throw ConfigError("eps", "must lie in (0, 0.5)");
    if (!(args.delta > 0.0 && args.delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
    if (args.trials < 1) throw ConfigError("trials", "must be at least 1");
    if (args.shots < 1) throw ConfigError("shots", "must be at least 1");
    const std::uint64_t seed = c.seed.value_or(args.seed);
    std::vector<IqaeResult> results(args.trials);
    parallel_for(args.trials, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            AmplitudeOracle oracle(args.a);
            CounterRng rng(seed, i);
            results[i] = iqae_estimate(oracle, args.eps, args.delta, rng, IqaeOptions{args.shots, 2.0});
        }
    });
    const std::int64_t bound = n_oracle(args.eps, args.delta);
    Table t;
    t.header = {"trial", "a_hat", "lower", "upper", "calls", "success"};
    json arr = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const IqaeResult& r = results[i];
        const bool ok = r.lower <= args.a && args.a <= r.upper;
        t.rows.push_back({num(std::uint64_t{i}), num(r.a_hat), num(r.lower), num(r.upper), num(r.calls),
                          ok ? "1" : "0"});
        arr.push_back({{"trial", i}, {"a_hat", r.a_hat}, {"lower", r.lower}, {"upper", r.upper}, {"calls", r.calls},
                       {"success", ok}});
    }
    t.doc = {{"command", "iqae-sim"}, {"a", args.a},         {"eps", args.eps},   {"delta", args.delta},
             {"shots", args.shots},   {"seed", seed},        {"n_oracle", bound}, {"rows", arr}};
    return t;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "JSON run configuration");
    sub->add_option("--instance", c.instance, "bundled preset (c1..c8, q1..q4)");
    sub->add_option("--scheme", c.scheme, "strong-euler, weak-euler or weak-taylor2");
    sub->add_option("--n-steps", c.n_steps, "number of time steps N");
    sub->add_option("--paths", c.paths, "Monte Carlo paths");
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heston option pricing and quantum resource estimation"};
    app.require_subcommand(1);
    Common common;

    auto* price_cmd = app.add_subcommand("price", "Monte Carlo price of one instance");
    add_common(price_cmd, common);

    auto* converge_cmd = app.add_subcommand("converge", "price over a grid of step counts and schemes");
    add_common(converge_cmd, common);
    std::vector<std::string> scheme_list;
    std::vector<std::uint32_t> n_list;
    converge_cmd->add_option("--schemes", scheme_list, "schemes to compare (default all)")->delimiter(',');
    converge_cmd->add_option("--n-list", n_list, "ascending step counts (default 2,4,...,1024)")->delimiter(',');

    auto* resources_cmd = app.add_subcommand("resources", "T-count, T-depth and qubit totals");
    add_common(resources_cmd, common);
    std::string pin_exp, pin_arcsin;
    resources_cmd->add_option("--pin-exp", pin_exp, "fix the exp approximant to M,D");
    resources_cmd->add_option("--pin-arcsin", pin_arcsin, "fix the arcsin approximant to M,D");

    std::uint64_t samples = 10000;
    auto* budget_cmd = app.add_subcommand("error-budget", "composed error of the quantum estimator");
    add_common(budget_cmd, common);
    budget_cmd->add_option("--samples", samples, "replay samples for the arithmetic error");

    auto* fixed_cmd = app.add_subcommand("fixedpoint-error", "fixed-point replay of the circuit arithmetic");
    add_common(fixed_cmd, common);
    fixed_cmd->add_option("--samples", samples, "replay samples");

    IqaeArgs iqae_args;
    auto* iqae_cmd = app.add_subcommand("iqae-sim", "simulate iterative amplitude estimation");
    iqae_cmd->add_option("--a", iqae_args.a, "true amplitude");
    iqae_cmd->add_option("--eps", iqae_args.eps, "target additive error");
    iqae_cmd->add_option("--delta", iqae_args.delta, "failure probability");
    iqae_cmd->add_option("--trials", iqae_args.trials, "independent runs");
    iqae_cmd->add_option("--shots", iqae_args.shots, "shots per round");
    iqae_cmd->add_option("--seed", common.seed, "master seed");
    iqae_cmd->add_option("--out", common.out, "output file (default stdout)");
    iqae_cmd->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        Table t;
        if (*price_cmd) t = run_price(common);
        else if (*converge_cmd) t = run_converge(common, scheme_list, n_list);
        else if (*resources_cmd) t = run_resources(common, pin_exp, pin_arcsin);
        else if (*budget_cmd) t = run_error_budget(common, samples);
        else if (*fixed_cmd) t = run_fixedpoint_error(common, samples);
        else t = run_iqae(common, iqae_args);
        emit(t, common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const FixedPointOverflow& e) {
        std::cerr << "fixed-point overflow: " << e.what() << '\n';
        return kExitOverflow;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
