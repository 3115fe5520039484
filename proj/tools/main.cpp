#include "levyedge/edgeworth.hpp"
#include "levyedge/errors.hpp"
#include "levyedge/model_io.hpp"
#include "levyedge/oracles.hpp"
#include "levyedge/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace levyedge;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_gate = 3;
constexpr int exit_numerical = 4;

// Raised when a series comes back diverging or an oracle fails numerically.
struct numerical_failure : error {
    explicit numerical_failure(const std::string& what) : error(what) {}
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Options {
    std::string command;
    std::string model_path;
    double t = 1.0;
    std::optional<double> x_lo;
    std::optional<double> x_hi;
    int x_n = 13;
    std::vector<double> x_list;
    int order = 2;
    double tol = 1e-10;
    int max_order = 40;
    std::int64_t n_paths = 1000000;
    std::uint64_t seed = 12345;
    std::string format = "csv";
    std::string out_path;
    std::string oracle_method = "none";
    bool override_conditions = false;
    std::int64_t n_summands = 50;
    int k_moments = 4;
    std::vector<int> study_orders{1, 2, 3};
    std::vector<double> study_times{4.0, 16.0, 64.0, 256.0};
};

std::vector<double> resolve_grid(const Options& opt, double default_lo = -3.0,
                                 double default_hi = 3.0) {
    if (!opt.x_list.empty()) return opt.x_list;
    if (opt.x_n < 1) throw config_error("grid: need at least one point");
    const double lo = opt.x_lo.value_or(default_lo);
    const double hi = opt.x_hi.value_or(default_hi);
    std::vector<double> grid;
    if (opt.x_n == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (int i = 0; i < opt.x_n; ++i) grid.push_back(lo + (hi - lo) * i / (opt.x_n - 1));
    return grid;
}

json config_json(const Options& opt) {
    json cfg;
    cfg["version"] = levyedge::version;
    cfg["command"] = opt.command;
    cfg["model"] = opt.model_path;
    cfg["t"] = opt.t;
    const bool abs_like = opt.command == "abs";
    if (!opt.x_list.empty())
        cfg["x"] = opt.x_list;
    else
        cfg["x_grid"] = {opt.x_lo.value_or(abs_like ? 0.5 : -3.0),
                         opt.x_hi.value_or(3.0), opt.x_n};
    cfg["order"] = opt.order;
    cfg["tol"] = opt.tol;
    cfg["max_order"] = opt.max_order;
    cfg["n_paths"] = opt.n_paths;
    cfg["seed"] = opt.seed;
    cfg["oracle"] = opt.oracle_method;
    cfg["override_conditions"] = opt.override_conditions;
    if (opt.command == "iid-sum") {
        cfg["n"] = opt.n_summands;
        cfg["k"] = opt.k_moments;
    }
    if (opt.command == "convergence-study") {
        cfg["orders"] = opt.study_orders;
        cfg["times"] = opt.study_times;
    }
    cfg["format"] = opt.format;
    return cfg;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    json diagnostics = json::object();
    std::vector<std::string> comments;  // CSV '#' lines beyond config/version
};

void write_output(const Options& opt, const json& cfg, const Table& table) {
    std::string text;
    if (opt.format == "csv") {
        text += "# levyedge " + std::string(levyedge::version) + "\n";
        text += "# config " + cfg.dump() + "\n";
        for (const auto& line : table.comments) text += "# " + line + "\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            text += (c ? "," : "") + table.columns[c];
        text += "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + row[c];
            text += "\n";
        }
    } else {
        json out;
        out["config"] = cfg;
        json results = json::array();
        for (const auto& row : table.rows) {
            json obj;
            for (std::size_t c = 0; c < table.columns.size(); ++c) {
                // numeric-looking cells stay numbers in JSON
                const std::string& cell = row[c];
                try {
                    std::size_t pos = 0;
                    const double v = std::stod(cell, &pos);
                    if (pos == cell.size()) {
                        obj[table.columns[c]] = v;
                        continue;
                    }
                } catch (...) {
                }
                obj[table.columns[c]] = cell;
            }
            results.push_back(std::move(obj));
        }
        out["results"] = std::move(results);
        out["diagnostics"] = table.diagnostics;
        text = out.dump(2) + "\n";
    }
    if (opt.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.out_path, std::ios::binary);
        if (!f) throw config_error("cannot write output file '" + opt.out_path + "'");
        f << text;
    }
}

struct LoadedModel {
    LevyTriplet raw;
    LevyTriplet centered;
    AffineMap map;
    bool standardized = false;  // raw rho was nonzero, thresholds are mapped
};

LoadedModel load(const Options& opt) {
    if (opt.model_path.empty()) throw config_error("--model is required");
    LevyTriplet raw = load_model(opt.model_path);
    auto [map, centered] = standardize(raw, opt.t);
    const bool shift = raw.rho() != 0.0;
    return {std::move(raw), std::move(centered), map, shift};
}

// Thresholds are standardized units for centered models and raw units
// otherwise; the applied map is reported either way.
double to_std_units(const LoadedModel& model, double x) {
    return model.standardized ? model.map(x) : x;
}

void note_model_diagnostics(const LoadedModel& model, Table& table) {
    table.diagnostics["affine_map"] = {{"shift", model.map.shift}, {"scale", model.map.scale}};
    table.diagnostics["thresholds"] =
        model.standardized ? "raw (mapped through the affine map)" : "standardized";
    json warnings = json::array();
    for (const auto& w : model.raw.warnings()) {
        warnings.push_back(w);
        table.comments.push_back("warning " + w);
    }
    table.diagnostics["warnings"] = std::move(warnings);
}

void note_gate_diagnostics(const Options& opt, const ConditionReport& report, Table& table) {
    table.diagnostics["strongest_condition"] = to_string(report.strongest);
    if (opt.override_conditions && !exact_series_certified(report)) {
        table.diagnostics["watermark"] = "UNVERIFIED CONDITIONS";
        table.comments.push_back("UNVERIFIED CONDITIONS");
    }
}

void note_continuity_warning(const Options& opt, const LoadedModel& model, Table& table) {
    if (model.centered.sigma2() == 0.0 && model.centered.measure().density_pieces.empty() &&
        opt.override_conditions) {
        const std::string w =
            "lattice law: supplied thresholds may be discontinuity points";
        table.comments.push_back("warning " + w);
        table.diagnostics["warnings"].push_back(w);
    }
}

std::string verdict_cell(const SeriesResult& res, bool& saw_divergence) {
    if (res.verdict == SeriesVerdict::diverging) saw_divergence = true;
    return to_string(res.verdict);
}

Table run_cumulants(const Options& opt, const LoadedModel& model) {
    const int top = std::max(2, opt.order);
    Table table;
    table.columns = {"order", "gamma", "lambda"};
    const auto cs = cumulant_set(model.centered, top - 2, opt.t);
    for (int order = 2; order <= top; ++order)
        table.rows.push_back({std::to_string(order), fmt(cs.gamma(order)), fmt(cs.lambda(order))});
    table.diagnostics["V"] = cs.V();
    table.diagnostics["t"] = opt.t;
    note_model_diagnostics(model, table);
    return table;
}

Table run_check(const LoadedModel& model) {
    const auto report = check_conditions(model.centered);
    Table table;
    table.columns = {"field", "value"};
    auto row = [&table](const std::string& field, const std::string& value) {
        table.rows.push_back({field, value});
    };
    row("bounded_support", to_string(report.bounded_support));
    if (report.bounded_support == Verdict3::holds)
        row("support_bound", fmt(report.support_bound));
    row("density_tail_decay", to_string(report.density_tail_decay.verdict));
    if (report.density_tail_decay.verdict == Verdict3::holds) {
        row("density_tail_C", fmt(report.density_tail_decay.C));
        row("density_tail_epsilon", fmt(report.density_tail_decay.epsilon));
        row("density_tail_a", fmt(report.density_tail_decay.a));
    }
    row("interval_mass_decay", to_string(report.interval_mass_decay.verdict));
    if (report.interval_mass_decay.verdict == Verdict3::holds) {
        row("interval_mass_C", fmt(report.interval_mass_decay.C));
        row("interval_mass_epsilon", fmt(report.interval_mass_decay.epsilon));
        row("interval_mass_a", fmt(report.interval_mass_decay.a));
    }
    row("exp_moment", to_string(report.exp_moment));
    if (report.exp_moment == Verdict3::holds)
        row("exp_moment_lambda", fmt(report.exp_moment_lambda));
    row("cramer_sufficient", report.cramer_sufficient ? "true" : "false");
    row("cramer_declared", report.cramer_declared ? "true" : "false");
    row("strongest_condition", to_string(report.strongest));
    row("exact_series_certified", exact_series_certified(report) ? "true" : "false");
    note_model_diagnostics(model, table);
    return table;
}

Table run_cdf(const Options& opt, const LoadedModel& model) {
    const auto grid = resolve_grid(opt);
    const auto cs = cumulant_set(model.centered, opt.order, opt.t);
    Table table;
    table.columns = {"x", "x_std", "value", "order", "tail_estimate"};
    const bool with_cf = opt.oracle_method == "cf" || opt.oracle_method == "both";
    const bool with_mc = opt.oracle_method == "mc" || opt.oracle_method == "both";
    if (with_cf) {
        table.columns.push_back("oracle_cf");
        table.columns.push_back("oracle_cf_error_bound");
    }
    if (with_mc) {
        table.columns.push_back("oracle_mc");
        table.columns.push_back("oracle_mc_std_error");
    }
    for (double x : grid) {
        const double y = to_std_units(model, x);
        const auto res = cdf_truncated(cs, y, opt.order);
        std::vector<std::string> row{fmt(x), fmt(y), fmt(res.value), std::to_string(opt.order),
                                     fmt(res.tail_estimate)};
        if (with_cf) {
            const auto est = cf_inversion_cdf(model.centered, opt.t, y);
            row.push_back(fmt(est.value));
            row.push_back(fmt(est.error_bound));
        }
        if (with_mc) {
            const auto est = simulate_cdf(model.centered, opt.t, y, opt.n_paths, opt.seed);
            row.push_back(fmt(est.value));
            row.push_back(fmt(est.std_error));
        }
        table.rows.push_back(std::move(row));
    }
    note_model_diagnostics(model, table);
    return table;
}

Table run_cdf_exact(const Options& opt, const LoadedModel& model, bool& saw_divergence) {
    const auto grid = resolve_grid(opt);
    if (grid.size() < 2) throw config_error("cdf-exact: need at least two grid points");
    const auto report = check_conditions(model.centered);
    const auto gate = series_gate(report, opt.override_conditions);
    const auto cs = cumulant_set(model.centered, std::min(opt.max_order, 60), opt.t);
    SeriesOptions series_opts{opt.tol, opt.max_order, opt.override_conditions};
    Table table;
    table.columns = {"x1", "x2", "value", "verdict", "n_terms", "tail_estimate"};
    const bool with_cf = opt.oracle_method == "cf" || opt.oracle_method == "both";
    if (with_cf) {
        table.columns.push_back("oracle_cf");
        table.columns.push_back("oracle_cf_error_bound");
    }
    const double anchor = to_std_units(model, grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double y = to_std_units(model, grid[i]);
        const auto res = cdf_difference_exact(cs, anchor, y, series_opts, gate);
        std::vector<std::string> row{fmt(grid.front()), fmt(grid[i]),      fmt(res.value),
                                     verdict_cell(res, saw_divergence),    std::to_string(res.n_terms_used),
                                     fmt(res.tail_estimate)};
        if (with_cf) {
            const auto est = cf_inversion_cdf_diff(model.centered, opt.t, anchor, y);
            row.push_back(fmt(est.value));
            row.push_back(fmt(est.error_bound));
        }
        table.rows.push_back(std::move(row));
    }
    note_model_diagnostics(model, table);
    note_gate_diagnostics(opt, report, table);
    note_continuity_warning(opt, model, table);
    return table;
}

Table run_pdf(const Options& opt, const LoadedModel& model, bool& saw_divergence) {
    const auto grid = resolve_grid(opt);
    const auto report = check_conditions(model.centered);
    const auto gate = series_gate(report, opt.override_conditions);
    const bool density_exists =
        model.centered.sigma2() > 0.0 || model.centered.cramer_declared();
    const auto cs = cumulant_set(model.centered, std::min(opt.max_order, 60), opt.t);
    SeriesOptions series_opts{opt.tol, opt.max_order, opt.override_conditions};
    Table table;
    table.columns = {"x", "x_std", "value", "verdict", "n_terms", "tail_estimate"};
    for (double x : grid) {
        const double y = to_std_units(model, x);
        const auto res = pdf_series(cs, y, series_opts, gate, density_exists);
        table.rows.push_back({fmt(x), fmt(y), fmt(res.value), verdict_cell(res, saw_divergence),
                              std::to_string(res.n_terms_used), fmt(res.tail_estimate)});
    }
    note_model_diagnostics(model, table);
    note_gate_diagnostics(opt, report, table);
    note_continuity_warning(opt, model, table);
    return table;
}

Table run_abs(const Options& opt, const LoadedModel& model, bool& saw_divergence) {
    const auto grid = resolve_grid(opt, 0.5, 3.0);
    const auto report = check_conditions(model.centered);
    const auto gate = series_gate(report, opt.override_conditions);
    const auto cs = cumulant_set(model.centered, std::min(opt.max_order, 60), opt.t);
    SeriesOptions series_opts{opt.tol, opt.max_order, opt.override_conditions};
    Table table;
    table.columns = {"x", "below", "above", "verdict", "n_terms"};
    for (double x : grid) {
        const double y = to_std_units(model, x);
        if (!(y > 0.0)) throw config_error("abs: thresholds must be positive after standardizing");
        const auto below = abs_cdf(cs, y, series_opts, gate);
        const auto above = abs_tail(cs, y, series_opts, gate);
        table.rows.push_back({fmt(x), fmt(below.value), fmt(above.value),
                              verdict_cell(below, saw_divergence),
                              std::to_string(below.n_terms_used)});
    }
    note_model_diagnostics(model, table);
    note_gate_diagnostics(opt, report, table);
    note_continuity_warning(opt, model, table);
    return table;
}

Table run_one_sided(const Options& opt, const LoadedModel& model, bool& saw_divergence) {
    const auto grid = resolve_grid(opt);
    const auto report = check_conditions(model.centered);
    SeriesOptions series_opts{opt.tol, opt.max_order, opt.override_conditions};
    Table table;
    table.columns = {"x", "value", "verdict", "n_terms", "tail_estimate"};
    const bool with_mc = opt.oracle_method == "mc" || opt.oracle_method == "both";
    if (with_mc) {
        table.columns.push_back("oracle_mc");
        table.columns.push_back("oracle_mc_std_error");
    }
    for (double x : grid) {
        const double y = to_std_units(model, x);
        const auto res = one_sided_cdf(model.centered, report, opt.t, y, series_opts);
        std::vector<std::string> row{fmt(x), fmt(res.value), verdict_cell(res, saw_divergence),
                                     std::to_string(res.n_terms_used), fmt(res.tail_estimate)};
        if (with_mc) {
            const auto est = simulate_cdf(model.centered, opt.t, y, opt.n_paths, opt.seed);
            row.push_back(fmt(est.value));
            row.push_back(fmt(est.std_error));
        }
        table.rows.push_back(std::move(row));
    }
    note_model_diagnostics(model, table);
    note_gate_diagnostics(opt, report, table);
    note_continuity_warning(opt, model, table);
    return table;
}

Table run_iid_sum(const Options& opt, const LoadedModel& model) {
    if (opt.k_moments < 3) throw config_error("iid-sum: need k >= 3");
    if (opt.n_summands < 1) throw config_error("iid-sum: need n >= 1");
    const auto grid = resolve_grid(opt);
    const auto cs = cumulant_set(model.centered, opt.k_moments - 2, 1.0);
    Table table;
    table.columns = {"x", "value"};
    for (double x : grid) {
        const double y = to_std_units(model, x);
        table.rows.push_back({fmt(x), fmt(iid_sum_cdf(cs, opt.n_summands, y, opt.k_moments))});
    }
    table.diagnostics["n"] = opt.n_summands;
    table.diagnostics["k"] = opt.k_moments;
    note_model_diagnostics(model, table);
    return table;
}

Table run_oracle(const Options& opt, const LoadedModel& model) {
    const auto grid = resolve_grid(opt);
    const std::string method = opt.oracle_method == "none" ? "both" : opt.oracle_method;
    const bool with_cf = method == "cf" || method == "both";
    const bool with_mc = method == "mc" || method == "both";
    Table table;
    table.columns = {"x"};
    if (with_cf) {
        table.columns.push_back("cf_value");
        table.columns.push_back("cf_error_bound");
    }
    if (with_mc) {
        table.columns.push_back("mc_value");
        table.columns.push_back("mc_std_error");
    }
    for (double x : grid) {
        const double y = to_std_units(model, x);
        std::vector<std::string> row{fmt(x)};
        if (with_cf) {
            const auto est = cf_inversion_cdf(model.centered, opt.t, y);
            row.push_back(fmt(est.value));
            row.push_back(fmt(est.error_bound));
        }
        if (with_mc) {
            const auto est = simulate_cdf(model.centered, opt.t, y, opt.n_paths, opt.seed);
            row.push_back(fmt(est.value));
            row.push_back(fmt(est.std_error));
        }
        table.rows.push_back(std::move(row));
    }
    note_model_diagnostics(model, table);
    return table;
}

Table run_convergence_study(const Options& opt, const LoadedModel& model) {
    const auto grid = resolve_grid(opt);
    int top_order = 0;
    for (int n : opt.study_orders) top_order = std::max(top_order, n);
    if (top_order < 1) throw config_error("convergence-study: need at least one order >= 1");
    Table table;
    table.columns = {"order", "t", "max_abs_error", "log10_t", "log10_error"};
    json slopes = json::array();
    for (int order : opt.study_orders) {
        std::vector<double> log_t, log_err;
        for (double t : opt.study_times) {
            const auto cs = cumulant_set(model.centered, top_order, t);
            double worst = 0.0;
            for (double x : grid) {
                const double y = to_std_units(model, x);
                const double approx = cdf_truncated(cs, y, order).value;
                const auto ref = cf_inversion_cdf(model.centered, t, y);
                worst = std::max(worst, std::abs(approx - ref.value));
            }
            table.rows.push_back({std::to_string(order), fmt(t), fmt(worst),
                                  fmt(std::log10(t)), fmt(std::log10(std::max(worst, 1e-300)))});
            log_t.push_back(std::log(t));
            log_err.push_back(std::log(std::max(worst, 1e-300)));
        }
        // least-squares slope of log error against log t
        double mean_t = 0.0, mean_e = 0.0;
        for (std::size_t i = 0; i < log_t.size(); ++i) {
            mean_t += log_t[i];
            mean_e += log_err[i];
        }
        mean_t /= static_cast<double>(log_t.size());
        mean_e /= static_cast<double>(log_t.size());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < log_t.size(); ++i) {
            num += (log_t[i] - mean_t) * (log_err[i] - mean_e);
            den += (log_t[i] - mean_t) * (log_t[i] - mean_t);
        }
        const double slope = den > 0.0 ? num / den : 0.0;
        const double expected = -0.5 * (order + 1);
        slopes.push_back({{"order", order}, {"slope", slope}, {"expected", expected}});
        table.comments.push_back("slope order=" + std::to_string(order) + " " + fmt(slope) +
                                 " expected " + fmt(expected));
    }
    table.diagnostics["slopes"] = std::move(slopes);
    note_model_diagnostics(model, table);
    return table;
}

int dispatch(const Options& opt) {
    const json cfg = config_json(opt);
    const LoadedModel model = load(opt);
    bool saw_divergence = false;
    Table table;
    if (opt.command == "cumulants")
        table = run_cumulants(opt, model);
    else if (opt.command == "check")
        table = run_check(model);
    else if (opt.command == "cdf")
        table = run_cdf(opt, model);
    else if (opt.command == "cdf-exact")
        table = run_cdf_exact(opt, model, saw_divergence);
    else if (opt.command == "pdf")
        table = run_pdf(opt, model, saw_divergence);
    else if (opt.command == "abs")
        table = run_abs(opt, model, saw_divergence);
    else if (opt.command == "one-sided")
        table = run_one_sided(opt, model, saw_divergence);
    else if (opt.command == "iid-sum")
        table = run_iid_sum(opt, model);
    else if (opt.command == "oracle")
        table = run_oracle(opt, model);
    else if (opt.command == "convergence-study")
        table = run_convergence_study(opt, model);
    else
        throw config_error("unknown command '" + opt.command + "'");
    write_output(opt, cfg, table);
    if (saw_divergence)
        throw numerical_failure("series diverging: tail conditions do not hold at the "
                                "requested arguments");
    return exit_ok;
}

int fail(int code, const std::string& kind, const std::string& message) {
    json err;
    err["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Series representations for the one-dimensional laws of Levy processes"};
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* cmd, bool needs_grid) {
        cmd->add_option("-m,--model", opt.model_path, "model file (JSON)")->required();
        cmd->add_option("-t,--t", opt.t, "time horizon");
        if (needs_grid) {
            cmd->add_option("--x-lo", opt.x_lo, "grid start");
            cmd->add_option("--x-hi", opt.x_hi, "grid end");
            cmd->add_option("--x-n", opt.x_n, "grid size");
            cmd->add_option("-x,--x", opt.x_list, "explicit thresholds (overrides the grid)");
        }
        cmd->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("-o,--out", opt.out_path, "output path (default stdout)");
        return cmd;
    };
    const auto add_series = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opt.tol, "convergence tolerance");
        cmd->add_option("--max-order", opt.max_order, "highest series order");
        cmd->add_flag("--override-conditions", opt.override_conditions,
                      "run the exact series even when the tail conditions are not certified");
        return cmd;
    };
    const auto add_oracle = [&](CLI::App* cmd) {
        cmd->add_option("--with-oracle,--method", opt.oracle_method,
                        "reference computation: none, cf, mc or both")
            ->check(CLI::IsMember({"none", "cf", "mc", "both"}));
        cmd->add_option("--n-paths", opt.n_paths, "Monte Carlo paths");
        cmd->add_option("--seed", opt.seed, "Monte Carlo seed");
        return cmd;
    };

    auto* cumulants = add_common(app.add_subcommand("cumulants", "cumulants and scaled cumulants"),
                                 false);
    cumulants->add_option("--order", opt.order, "highest cumulant order")->default_val(10);
    add_common(app.add_subcommand("check", "tail-condition report"), false);
    auto* cdf = add_common(app.add_subcommand("cdf", "truncated CDF expansion"), true);
    cdf->add_option("--order", opt.order, "number of correction terms");
    add_oracle(cdf);
    auto* cdf_exact = add_common(
        app.add_subcommand("cdf-exact", "exact CDF differences against the first grid point"),
        true);
    add_series(cdf_exact);
    add_oracle(cdf_exact);
    add_series(add_common(app.add_subcommand("pdf", "density series"), true));
    add_series(add_common(app.add_subcommand("abs", "law of the absolute value"), true));
    auto* one_sided = add_common(
        app.add_subcommand("one-sided", "one-sided law of a spectrally positive model"), true);
    add_series(one_sided);
    add_oracle(one_sided);
    auto* iid = add_common(app.add_subcommand("iid-sum", "expansion for sums of iid copies"), true);
    iid->add_option("-n,--n", opt.n_summands, "number of summands");
    iid->add_option("-k,--k", opt.k_moments, "available moment order (>= 3)");
    add_oracle(add_common(app.add_subcommand("oracle", "reference values only"), true));
    auto* study = add_common(
        app.add_subcommand("convergence-study", "truncation error against the time horizon"),
        true);
    study->add_option("--orders", opt.study_orders, "truncation orders")->delimiter(',');
    study->add_option("--times", opt.study_times, "time horizons")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return exit_config;
    }
    opt.command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(opt);
    } catch (const condition_gate_error& e) {
        return fail(exit_gate, "condition_gate", e.what());
    } catch (const numerical_failure& e) {
        return fail(exit_numerical, "numerical", e.what());
    } catch (const quadrature_error& e) {
        return fail(exit_numerical, "quadrature", e.what());
    } catch (const moment_error& e) {
        return fail(exit_numerical, "moment", e.what());
    } catch (const config_error& e) {
        return fail(exit_config, "config", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(exit_config, "config", e.what());
    } catch (const std::exception& e) {
        return fail(exit_numerical, "internal", e.what());
    }
}
