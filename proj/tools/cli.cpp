#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "riskorder/iid_model.hpp"
#include "riskorder/json_io.hpp"
#include "riskorder/order.hpp"
#include "riskorder/solver.hpp"
#include "riskorder/tree_market.hpp"

namespace riskorder::cli {

using nlohmann::json;

namespace {

/// Signals bad user input; maps to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string gap_csv(const std::vector<GapPoint>& curve) {
    std::string s = "strike,call_x,call_y,gap\n";
    for (const auto& g : curve)
        s += fmt17(g.strike) + ',' + fmt17(g.call_x) + ',' + fmt17(g.call_y) + ',' + fmt17(g.gap) + '\n';
    return s;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
}

// JSON report goes to --out or stdout; the CSV curve to --csv, or to stdout
// instead of the JSON when --format csv is given.
void emit(const RunConfig& cfg, std::ostream& out, const json& report, const std::string& csv) {
    if (cfg.format == OutputFormat::csv) {
        if (csv.empty()) throw InputError("command '" + cfg.command + "' has no CSV output");
        out << csv;
    } else if (!cfg.out_path.empty()) {
        write_file(cfg.out_path, dump(report) + '\n');
    } else {
        out << dump(report) << '\n';
    }
    if (!cfg.csv_path.empty() && !csv.empty()) write_file(cfg.csv_path, csv);
}

void require_tol(const RunConfig& cfg) {
    if (cfg.tol && !(*cfg.tol > 0.0)) throw InputError("--tol must be positive");
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const auto tree = tree_from_json(read_json_file(cfg.tree_path));
    const auto u = utility_from_json(read_json_file(cfg.utility_path));
    Solution sol = cfg.method == "dual" ? solve_complete_dual(tree, u, cfg.x0) : solve_dp(tree, u, cfg.x0);
    json report = to_json(tree, sol);
    report["method"] = cfg.method;
    report["utility"] = to_json(u);
    report["x0"] = cfg.x0;
    emit(cfg, out, report, "");
    return kExitOk;
}

int cmd_order(const RunConfig& cfg, std::ostream& out) {
    require_tol(cfg);
    const auto x = dist_from_json(read_json_file(cfg.x_path));
    const auto y = dist_from_json(read_json_file(cfg.y_path));
    const auto rel = relation_from_string(cfg.relation);
    const auto verdict = check(rel, x, y, cfg.tol);

    json report = {{"verdict", to_json(verdict)}};
    const bool centered = rel == Relation::centered_convex;
    const auto curve = centered ? call_gap_curve(center(x), center(y)) : call_gap_curve(x, y);
    if (cfg.coupling) {
        try {
            report["coupling"] = to_json(strassen_coupling(x, y));
        } catch (const InfeasibleCoupling& e) {
            report["coupling"] = nullptr;
            report["coupling_error"] = e.what();
        }
    }
    emit(cfg, out, report, gap_csv(curve));
    return kExitOk;
}

int cmd_counterexample(const RunConfig& cfg, std::ostream& out) {
    require_tol(cfg);
    if (!(cfg.p_more > cfg.p_less && cfg.p_less > 0.0))
        throw InputError("need --p-more > --p-less > 0");
    const auto conv = convention_from_string(cfg.convention);
    const auto tree = build_two_period_example(cfg.eps, cfg.alpha, cfg.K, conv);
    const auto more = solve_dp(tree, Utility::power(cfg.p_more), 1.0);
    const auto less = solve_dp(tree, Utility::power(cfg.p_less), 1.0);
    const auto verdict = check_mc(more.terminal, less.terminal, cfg.tol);

    const auto base = build_two_period_example(0.0, cfg.alpha, cfg.K, conv);
    const auto base_more = solve_dp(base, Utility::power(cfg.p_more), 1.0);
    const auto base_less = solve_dp(base, Utility::power(cfg.p_less), 1.0);

    auto stage = [&](const Solution& s) {
        json j = {{"time0", s.control[0]}};
        j["inserted"] = cfg.eps > 0.0 ? json(s.control[tree.index_of(2)]) : json(nullptr);
        return j;
    };
    json report = {
        {"parameters",
         {{"epsilon", cfg.eps},
          {"alpha", cfg.alpha},
          {"K", cfg.K},
          {"p_more", cfg.p_more},
          {"p_less", cfg.p_less},
          {"convention", to_string(conv)}}},
        {"base_fractions", {{"more", base_more.control[0]}, {"less", base_less.control[0]}}},
        {"fractions", {{"more", stage(more)}, {"less", stage(less)}}},
        {"terminal", {{"more", to_json(more.terminal)}, {"less", to_json(less.terminal)}}},
        {"max_payoff", {{"more", more.terminal.max_value()}, {"less", less.terminal.max_value()}}},
        {"verdict", to_json(verdict)},
    };
    if (!cfg.export_x_path.empty()) write_file(cfg.export_x_path, dump(to_json(more.terminal)) + '\n');
    if (!cfg.export_y_path.empty()) write_file(cfg.export_y_path, dump(to_json(less.terminal)) + '\n');
    emit(cfg, out, report, gap_csv(call_gap_curve(more.terminal, less.terminal)));
    return kExitOk;
}

int cmd_perturb(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out_path.empty() && cfg.format == OutputFormat::csv) throw InputError("perturb writes JSON only");
    const auto tree = tree_from_json(read_json_file(cfg.tree_path));
    const int t = cfg.target_time.value_or(tree.horizon() - 1);
    NodeSelector sel = [&](const TreeNode& n) {
        if (cfg.node_ids.empty()) return true;
        return std::find(cfg.node_ids.begin(), cfg.node_ids.end(), n.id) != cfg.node_ids.end();
    };
    const auto result = perturb(tree, t, sel, cfg.eps, cfg.alpha, cfg.K);
    emit(cfg, out, to_json(result), "");
    return kExitOk;
}

int cmd_iid(const RunConfig& cfg, std::ostream& out) {
    require_tol(cfg);
    const IncrementDist inc(dist_from_json(read_json_file(cfg.increment_path)));
    const double pi_more = optimal_fraction(inc, cfg.p_more);
    const double pi_less = optimal_fraction(inc, cfg.p_less);

    json report = {{"drift", inc.drift()},
                   {"periods", cfg.periods},
                   {"fractions", {{"more", pi_more}, {"less", pi_less}}}};
    std::string csv;
    bool exact = !cfg.paths.has_value();
    if (exact) {
        try {
            const auto x = euler_product_dist(inc, pi_more, cfg.periods);
            const auto y = euler_product_dist(inc, pi_less, cfg.periods);
            const auto v = check_euler_order(inc, pi_more, pi_less, cfg.periods, cfg.tol);
            report["mode"] = "exact";
            report["verdict"] = to_json(v);
            csv = gap_csv(call_gap_curve(center(x), center(y)));
        } catch (const EnumerationCapExceeded&) {
            exact = false;
        }
    }
    if (!exact) {
        if (!cfg.seed) throw InputError("Monte Carlo mode needs an explicit --seed");
        const std::size_t paths = cfg.paths.value_or(100000);
        const auto rep = check_euler_order_mc(inc, pi_more, pi_less, cfg.periods, paths, *cfg.seed, cfg.workers);
        report["mode"] = "monte_carlo";
        report["paths"] = paths;
        report["seed"] = *cfg.seed;
        report["verdict"] = to_json(rep.verdict);
        json se = json::array();
        std::vector<GapPoint> curve;
        for (const auto& g : rep.curve) {
            curve.push_back({g.strike, g.call_x, g.call_y, g.gap});
            se.push_back({{"strike", g.strike}, {"gap", g.gap}, {"std_error", g.std_error}});
        }
        report["gap_std_errors"] = se;
        csv = gap_csv(curve);
    }
    emit(cfg, out, report, csv);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Expected-utility portfolios on finite markets and their stochastic-order comparisons"};
    app.require_subcommand(1);
    std::string format = "json";

    auto add_common = [&](CLI::App* sub, bool with_csv) {
        sub->add_option("--out", cfg.out_path, "Write the JSON report here instead of stdout");
        if (with_csv) {
            sub->add_option("--csv", cfg.csv_path, "Write the call-gap curve (strike,call_x,call_y,gap) here");
            sub->add_option("--format", format, "Primary output on stdout")
                ->check(CLI::IsMember({"json", "csv"}));
            sub->add_option("--tol", cfg.tol, "Order-check tolerance (default 1e-9 scaled by the means)");
        }
    };

    auto* solve = app.add_subcommand("solve", "Optimal investment on an event tree");
    solve->add_option("--tree", cfg.tree_path, "Tree model JSON")->required();
    solve->add_option("--utility", cfg.utility_path, "Utility JSON")->required();
    solve->add_option("--x0", cfg.x0, "Initial capital")->capture_default_str();
    solve->add_option("--method", cfg.method, "dp (any tree) or dual (complete trees)")
        ->check(CLI::IsMember({"dp", "dual"}))
        ->capture_default_str();
    add_common(solve, false);

    auto* order = app.add_subcommand("order", "Compare two distributions in a stochastic order");
    order->add_option("--x", cfg.x_path, "Distribution JSON of X")->required();
    order->add_option("--y", cfg.y_path, "Distribution JSON of Y")->required();
    order->add_option("--relation", cfg.relation, "mc, c or centered-c")
        ->check(CLI::IsMember({"mc", "c", "centered-c"}))
        ->capture_default_str();
    order->add_flag("--coupling", cfg.coupling, "Also construct a martingale coupling of X and Y");
    add_common(order, true);

    auto* cex = app.add_subcommand("counterexample", "Perturbed two-period market with two power investors");
    cex->add_option("--epsilon", cfg.eps, "Probability of the inserted branch (0 = complete base model)")
        ->capture_default_str();
    cex->add_option("--alpha", cfg.alpha, "Down probability inside the inserted branch")->capture_default_str();
    cex->add_option("--K", cfg.K, "Up multiplier inside the inserted branch")->capture_default_str();
    cex->add_option("--p-more", cfg.p_more, "Relative risk aversion of the more risk averse investor")
        ->capture_default_str();
    cex->add_option("--p-less", cfg.p_less, "Relative risk aversion of the less risk averse investor")
        ->capture_default_str();
    cex->add_option("--convention", cfg.convention, "Root probabilities: normalized or subtractive")
        ->check(CLI::IsMember({"normalized", "subtractive"}))
        ->capture_default_str();
    cex->add_option("--export-x", cfg.export_x_path, "Write the more risk averse terminal law here");
    cex->add_option("--export-y", cfg.export_y_path, "Write the less risk averse terminal law here");
    add_common(cex, true);

    auto* pert = app.add_subcommand("perturb", "Insert coin-flip branches before the last period");
    pert->add_option("--tree", cfg.tree_path, "Tree model JSON")->required();
    pert->add_option("--time", cfg.target_time, "Perturbed date (must be horizon - 1; the default)");
    pert->add_option("--nodes", cfg.node_ids, "Node ids to perturb (default: all at the date)")->delimiter(',');
    pert->add_option("--epsilon", cfg.eps, "Coin probability of heads")->capture_default_str();
    pert->add_option("--alpha", cfg.alpha, "Down probability after heads")->capture_default_str();
    pert->add_option("--K", cfg.K, "Up multiplier after heads")->capture_default_str();
    add_common(pert, false);

    auto* iid = app.add_subcommand("iid", "Euler-product convex order for i.i.d. returns");
    iid->add_option("--increment", cfg.increment_path, "Distribution JSON of one period's return")->required();
    iid->add_option("--p-more", cfg.p_more, "Relative risk aversion of the more risk averse investor")
        ->capture_default_str();
    iid->add_option("--p-less", cfg.p_less, "Relative risk aversion of the less risk averse investor")
        ->capture_default_str();
    iid->add_option("--periods", cfg.periods, "Number of periods N")->check(CLI::NonNegativeNumber)->required();
    iid->add_option("--paths", cfg.paths, "Force Monte Carlo with this many paths (>= 1000)");
    iid->add_option("--seed", cfg.seed, "Monte Carlo seed (required whenever sampling)");
    iid->add_option("--workers", cfg.workers, "Monte Carlo threads; results do not depend on it")
        ->capture_default_str();
    add_common(iid, true);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (cfg.command == "solve") return cmd_solve(cfg, out);
        if (cfg.command == "order") return cmd_order(cfg, out);
        if (cfg.command == "counterexample") return cmd_counterexample(cfg, out);
        if (cfg.command == "perturb") return cmd_perturb(cfg, out);
        if (cfg.command == "iid") return cmd_iid(cfg, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitInvalidInput;
}

}  // namespace riskorder::cli
