// delayloop: tuning charts, tuned points, reference-table reproduction, step-response
// traces and stability margins for PI, Smith predictor and variable-structure
// control of first-order-plus-dead-time plants.
//
// Exit codes: 0 success, 1 table1 --strict found deviations, 2 bad flags,
// 3 infeasible tuning, 4 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "delayloop/delayloop.hpp"

namespace {

using namespace delayloop;

struct RunConfig {
    std::string controller = "pi";
    std::optional<double> tp;
    std::optional<double> gain, time_constant, delay;
    std::optional<double> h, hi;
    double po_y = 0.0105;
    double po_v = 0.10;
    double band = kDefaultBand;
    double ts = kDefaultHorizon;
    std::optional<double> grid_step;
    std::string format = "csv";
    std::string out;
    bool strict = false;
    std::string pi_rule = "feasible";
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ControllerKind controller_kind(const std::string& name)
{
    if (name == "pi") {
        return ControllerKind::kPi;
    }
    if (name == "sp") {
        return ControllerKind::kSmithPredictor;
    }
    return ControllerKind::kProposed;
}

std::optional<PlantModel> physical_plant(const RunConfig& c)
{
    if (!c.gain && !c.time_constant && !c.delay) {
        return std::nullopt;
    }
    if (!c.gain || !c.time_constant || !c.delay) {
        throw UsageError("--gain, --time-constant and --delay must be given together");
    }
    return PlantModel{*c.gain, *c.time_constant, *c.delay};
}

double resolve_tp(const RunConfig& c)
{
    if (const auto plant = physical_plant(c)) {
        const double tp = normalize_plant(*plant).tp;
        if (c.tp && std::abs(*c.tp - tp) > 1e-12 * std::max(1.0, tp)) {
            throw UsageError("--tp conflicts with --time-constant/--delay");
        }
        return tp;
    }
    if (!c.tp) {
        throw UsageError("--tp (or --gain/--time-constant/--delay) is required");
    }
    return *c.tp;
}

ControllerGains resolve_gains(const RunConfig& c, ControllerKind kind)
{
    if (!c.hi) {
        throw UsageError("--hi is required");
    }
    if (kind == ControllerKind::kProposed) {
        if (c.h && *c.h != 0.0) {
            throw UsageError("the proposed controller has no proportional gain (--h must be 0)");
        }
        return {0.0, *c.hi};
    }
    if (!c.h) {
        throw UsageError("--h is required");
    }
    return {*c.h, *c.hi};
}

constexpr double deg(double d) { return d * std::numbers::pi / 180.0; }

std::vector<ChartCurve> chart(const RunConfig& c, ControllerKind kind, unsigned threads)
{
    std::vector<CurveRequest> requests;
    auto add = [&](CurveKind k, double level, std::string label, std::vector<double> sweep,
                   std::optional<double> tp = std::nullopt) {
        CurveRequest r;
        r.kind = k;
        r.controller = kind;
        r.level = level;
        r.label = std::move(label);
        r.sweep = std::move(sweep);
        r.tp = tp;
        r.band = c.band;
        r.ts = c.ts;
        r.threads = threads;
        requests.push_back(std::move(r));
    };
    const auto pm_levels = {std::pair{30.0, "gamma_p1"}, std::pair{45.0, "gamma_p2"}, std::pair{60.0, "gamma_p3"}};
    switch (kind) {
    case ControllerKind::kPi: {
        const double tp = resolve_tp(c);
        const double h_max = stabilizing_gain_limit(tp).h_u;
        auto sweep = grid(0.0, h_max * (1.0 - 1e-9), c.grid_step.value_or(0.02));
        add(CurveKind::kStability, 0.0, "gamma_s", sweep, tp);
        for (const auto& [d, label] : pm_levels) {
            add(CurveKind::kPhaseMargin, deg(d), label, sweep, tp);
        }
        add(CurveKind::kOvershootY, c.po_y, "gamma_y", sweep, tp);
        add(CurveKind::kOvershootV, c.po_v, "gamma_v", sweep, tp);
        break;
    }
    case ControllerKind::kSmithPredictor: {
        auto sweep = grid(0.0, 3.0, c.grid_step.value_or(0.01));
        add(CurveKind::kDamping, 0.0, "gamma_d", sweep);
        add(CurveKind::kOvershootY, c.po_y, "gamma_y", sweep);
        add(CurveKind::kOvershootV, c.po_v, "gamma_v", sweep);
        break;
    }
    case ControllerKind::kProposed: {
        auto sweep = grid(0.1, 10.0, c.grid_step.value_or(0.1));
        add(CurveKind::kStability, 0.0, "gamma_s", sweep);
        for (const auto& [d, label] : pm_levels) {
            add(CurveKind::kPhaseMargin, deg(d), label, sweep);
        }
        add(CurveKind::kOvershootY, c.po_y, "gamma_y", sweep);
        add(CurveKind::kOvershootV, c.po_v, "gamma_v", sweep);
        add(CurveKind::kSteadiness, c.band, "gamma_b", sweep);
        break;
    }
    }
    std::vector<ChartCurve> curves;
    for (const auto& r : requests) {
        curves.push_back(trace_curve(r));
    }
    return curves;
}

TunedPoint tune(const RunConfig& c, ControllerKind kind, unsigned threads)
{
    const double tp = resolve_tp(c);
    switch (kind) {
    case ControllerKind::kPi: {
        PiTuningPresets p;
        p.po_y = c.po_y;
        p.po_v_max = c.po_v;
        p.ts = c.ts;
        p.rule = c.pi_rule == "gamma-y" ? PiRule::kOvershootCurve : PiRule::kFeasibleRegion;
        p.threads = threads;
        if (c.grid_step) {
            p.h_step = *c.grid_step;
        }
        return tune_pi(tp, p);
    }
    case ControllerKind::kSmithPredictor: return tune_sp(tp, {c.po_y, c.po_v, c.ts});
    case ControllerKind::kProposed: return tune_proposed(tp, {c.po_y, c.band, c.po_v, c.ts});
    }
    throw UsageError("unknown controller");
}

report::TimeSeries simulate(const RunConfig& c, ControllerKind kind)
{
    const double tp = resolve_tp(c);
    const auto g = resolve_gains(c, kind);
    const double step = kConformantSpacing;
    const auto n = static_cast<std::size_t>(std::llround(c.ts / step)) + 1;
    report::TimeSeries s;
    auto push = [&](double t, double y, double v) {
        s.t.push_back(t);
        s.y.push_back(y);
        s.v.push_back(v);
    };
    switch (kind) {
    case ControllerKind::kPi: {
        const auto resp = pi_step_response(g, tp, c.ts + 1.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = step * static_cast<double>(k);
            push(t, resp.eval(t), control_output(resp, t));
        }
        break;
    }
    case ControllerKind::kSmithPredictor:
        for (std::size_t k = 0; k < n; ++k) {
            const double t = step * static_cast<double>(k);
            const auto v = sp_response(g, tp, t);
            push(t, v.y, v.v);
        }
        break;
    case ControllerKind::kProposed: {
        const ProposedScenario scn{tp, g.hi, c.band, c.ts};
        validate(scn);
        const ProposedResponse resp(scn, std::max(0.0, c.ts + 1.0 - scn.switch_time()) + 1.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = step * static_cast<double>(k);
            push(t, resp.y(t), resp.v(t));
        }
        break;
    }
    }
    return s;
}

std::string margins(const RunConfig& c, ControllerKind kind)
{
    if (kind == ControllerKind::kSmithPredictor) {
        const double h = c.h.value_or(0.0);
        return std::string("controller,h,stable\nsp,") + report::num(h) + ',' + (sp_is_stable(h) ? "1" : "0") + '\n';
    }
    const double tp = resolve_tp(c);
    const double h = kind == ControllerKind::kProposed ? 0.0 : c.h.value_or(0.0);
    const auto ug = ultimate_gain(tp);
    const auto lim = stabilizing_gain_limit(tp);
    std::string out = "controller,tp,h,z_a,h_u,h_limit,z1,z2,hi_max,hi,z_b,pm_rad,pm_deg\n";
    out += to_string(kind) + ',' + report::num(tp) + ',' + report::num(h) + ',' + report::num(ug.z_a) + ',' +
           report::num(ug.h_u) + ',' + report::num(lim.h_u) + ',';
    const auto b = hi_stability_bounds(h, tp);
    out += report::num(b.z1) + ',' + report::num(b.z2) + ',' + report::num(b.hi_max) + ',';
    if (c.hi) {
        const auto m = phase_margin({h, *c.hi}, tp);
        out += report::num(*c.hi) + ',' + report::num(m.z_b) + ',' + report::num(m.pm) + ',' +
               report::num(m.pm * 180.0 / std::numbers::pi) + '\n';
    } else {
        out += ",,,\n";
    }
    return out;
}

void emit(const RunConfig& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open output file " + c.out);
    }
    f << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tuning charts and step-response analysis for dead-time control loops"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1, 1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--controller", cfg.controller, "pi | sp | proposed")
            ->check(CLI::IsMember({"pi", "sp", "proposed"}));
        sub->add_option("--tp", cfg.tp, "normalized time constant T_p/L")->check(CLI::PositiveNumber);
        sub->add_option("--gain", cfg.gain, "process gain K");
        sub->add_option("--time-constant", cfg.time_constant, "process time constant T_p");
        sub->add_option("--delay", cfg.delay, "process dead time L");
        sub->add_option("--h", cfg.h, "dimensionless proportional gain K K_p");
        sub->add_option("--hi", cfg.hi, "dimensionless integral gain K K_i L");
        sub->add_option("--poy", cfg.po_y, "PO_y preset")->check(CLI::PositiveNumber);
        sub->add_option("--pov", cfg.po_v, "PO_v preset")->check(CLI::PositiveNumber);
        sub->add_option("--bs", cfg.band, "band half-width B_s")->check(CLI::Range(1e-9, 1.0 - 1e-9));
        sub->add_option("--ts", cfg.ts, "horizon in delays")->check(CLI::Range(1.0 + 1e-9, 11.0));
        sub->add_option("--grid", cfg.grid_step, "sweep step")->check(CLI::PositiveNumber);
        sub->add_option("--format", cfg.format, "csv | svg")->check(CLI::IsMember({"csv", "svg"}));
        sub->add_option("--out", cfg.out, "output file (default stdout)");
    };

    auto* chart_cmd = app.add_subcommand("chart", "emit tuning-chart curves");
    auto* tune_cmd = app.add_subcommand("tune", "tune one controller for one t_p");
    auto* table_cmd = app.add_subcommand("table1", "reproduce the 13-row comparison table");
    auto* sim_cmd = app.add_subcommand("simulate", "setpoint 1 -> 0 response, columns t,y,v");
    auto* margins_cmd = app.add_subcommand("margins", "ultimate gain, h_i bound and phase margin");
    for (auto* sub : {chart_cmd, tune_cmd, table_cmd, sim_cmd, margins_cmd}) {
        common(sub);
    }
    tune_cmd->add_option("--pi-rule", cfg.pi_rule, "feasible (default) | gamma-y")
        ->check(CLI::IsMember({"feasible", "gamma-y"}));
    table_cmd->add_flag("--strict", cfg.strict, "exit 1 if any cell is outside tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const unsigned threads = default_thread_count();
    const ControllerKind kind = controller_kind(cfg.controller);
    try {
        if (chart_cmd->parsed()) {
            const auto curves = chart(cfg, kind, threads);
            for (const auto& c : curves) {
                if (!c.missing.empty()) {
                    std::cerr << c.label << ": no crossing at " << c.missing.size() << " sweep values\n";
                }
            }
            emit(cfg, cfg.format == "svg" ? report::chart_svg(curves, to_string(kind) + " tuning chart")
                                          : report::chart_csv(curves));
        } else if (tune_cmd->parsed()) {
            emit(cfg, report::tuned_header() + report::tuned_row(tune(cfg, kind, threads)));
        } else if (table_cmd->parsed()) {
            const auto rows = reproduce_table1(threads);
            emit(cfg, report::table1_csv(rows));
            std::size_t bad = 0;
            for (const auto& r : rows) {
                for (const auto& v : r.violations) {
                    std::cerr << "t_p=" << report::num(r.reference.tp) << " " << v << '\n';
                    ++bad;
                }
            }
            if (cfg.strict && bad > 0) {
                std::cerr << bad << " cells outside tolerance\n";
                return 1;
            }
        } else if (sim_cmd->parsed()) {
            const auto s = simulate(cfg, kind);
            std::cerr << "ise=" << report::num(trapezoid_of_squares(s.y, kConformantSpacing)) << '\n';
            emit(cfg, report::series_csv(s));
        } else if (margins_cmd->parsed()) {
            emit(cfg, margins(cfg, kind));
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 4;
    } catch (const std::out_of_range& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
