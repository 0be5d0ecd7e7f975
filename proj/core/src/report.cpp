#include "wfrec/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "wfrec/planner.hpp"

namespace wfrec {
namespace {

using nlohmann::json;

json config_json(const RunConfig& cfg) {
    json j;
    j["model"]["a"] = cfg.model_a;
    j["model"]["b"] = cfg.model_b;
    j["model"]["epsilon"] = cfg.model_epsilon;
    j["plan"]["c"] = cfg.plan.c;
    j["plan"]["m_fraction"] = cfg.plan.m_fraction;
    j["plan"]["alpha_fraction"] = cfg.plan.alpha_fraction;
    j["plan"]["kappa_fraction"] = cfg.plan.kappa_fraction;
    j["sim"]["scheme"] = scheme_name(cfg.sim.scheme);
    j["sim"]["dt"] = cfg.sim.dt;
    j["sim"]["t_max"] = cfg.sim.t_max;
    j["sim"]["clamp_eps"] = cfg.sim.clamp_eps;
    j["sim"]["master_seed"] = cfg.sim.master_seed;
    j["sim"]["n_paths"] = cfg.sim.n_paths;
    j["verify"]["recurrence_x0"] = cfg.verify.recurrence_x0;
    j["verify"]["recurrence_scheme"] = scheme_name(cfg.verify.recurrence_scheme);
    j["verify"]["recurrence_dt"] = cfg.verify.recurrence_dt;
    j["verify"]["boundary_x0"] = cfg.verify.boundary_x0;
    j["verify"]["boundary_horizon"] = cfg.verify.boundary_horizon;
    j["verify"]["boundary_scheme"] = scheme_name(cfg.verify.boundary_scheme);
    j["verify"]["touch_tolerance"] = cfg.verify.touch_tolerance;
    j["verify"]["hit_x0"] = cfg.verify.hit_x0;
    j["verify"]["hit_beta"] = cfg.verify.hit_beta;
    j["verify"]["stationary_x0"] = cfg.verify.stationary_x0;
    j["verify"]["stationary_t"] = cfg.verify.stationary_t;
    j["verify"]["bins"] = cfg.verify.bins;
    j["verify"]["tv_tolerance"] = cfg.verify.tv_tolerance;
    j["verify"]["decay_x0"] = cfg.verify.decay_x0;
    j["verify"]["decay_snapshots"] = cfg.verify.decay_snapshots;
    j["verify"]["censor_tolerance"] = cfg.verify.censor_tolerance;
    j["verify"]["kurtosis_guard"] = cfg.verify.kurtosis_guard;
    j["drift"]["grid_size"] = cfg.drift_grid_size;
    j["simulate"]["x0"] = cfg.simulate.x0;
    j["simulate"]["stop"] = cfg.simulate.stop;
    j["simulate"]["threshold"] = cfg.simulate.threshold;
    j["out"]["dir"] = cfg.out_dir;
    j["out"]["format"] = format_name(cfg.format);
    return j;
}

json report_body(const VerificationReport& r) {
    json j;
    j["quantity"] = r.quantity;
    j["bound_value"] = r.bound_value;
    j["mean"] = r.estimate.mean;
    j["std_error"] = r.estimate.std_error;
    j["n"] = r.estimate.n;
    j["censored_fraction"] = r.estimate.censored_fraction;
    j["ci99_halfwidth"] = r.estimate.ci99_halfwidth;
    j["verdict"] = verdict_name(r.verdict);
    j["claim"] = r.claim;
    j["notes"] = r.notes;
    for (const auto& [key, value] : r.aux) j["aux"][key] = value;
    return j;
}

void attach_meta(json& j, const RunConfig& cfg) {
    j["config"] = config_json(cfg);
    j["master_seed"] = cfg.sim.master_seed;
    j["version"] = version_string();
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';  // double inner quotes
        out += c;
    }
    out += '"';
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string version_string() { return "wfrec 1.0.0"; }

std::string report_json(const VerificationReport& report, const RunConfig& cfg) {
    json j = report_body(report);
    attach_meta(j, cfg);
    return j.dump(2) + "\n";
}

std::string reports_csv(const std::vector<VerificationReport>& reports) {
    std::string out =
        "quantity,bound_value,mean,std_error,n,censored_fraction,"
        "ci99_halfwidth,verdict,claim,notes\n";
    for (const VerificationReport& r : reports) {
        out += csv_quote(r.quantity) + ',' + fmt_double(r.bound_value) + ',' +
               fmt_double(r.estimate.mean) + ',' + fmt_double(r.estimate.std_error) +
               ',' + std::to_string(r.estimate.n) + ',' +
               fmt_double(r.estimate.censored_fraction) + ',' +
               fmt_double(r.estimate.ci99_halfwidth) + ',' +
               verdict_name(r.verdict) + ',' + csv_quote(r.claim) + ',' +
               csv_quote(r.notes) + '\n';
    }
    return out;
}

std::string plan_json(const RunConfig& cfg) {
    const ModelParams p = cfg.model();
    const RecurrencePlan plan = plan_recurrence(p, cfg.plan.c, cfg.plan.m_fraction,
                                                cfg.plan.alpha_fraction);
    json j;
    j["recurrence"]["c"] = plan.c;
    j["recurrence"]["m"] = plan.m;
    j["recurrence"]["alpha"] = plan.alpha;
    j["recurrence"]["C_m"] = plan.C_m;
    j["recurrence"]["g_m"] = plan.g_m;
    j["recurrence"]["admissible_m_max"] = recurrence_m_max(p);
    j["recurrence"]["admissible_alpha_max"] =
        recurrence_alpha_max(p, plan.c, plan.m);

    for (int endpoint : {0, 1}) {
        const BoundaryPlan bp = plan_boundary(p, endpoint, cfg.plan.kappa_fraction);
        json& bj = j[endpoint == 0 ? "boundary_endpoint0" : "boundary_endpoint1"];
        bj["kappa"] = bp.kappa;
        bj["b0"] = bp.b0;
        bj["n"] = bp.n;
        bj["endpoint"] = bp.endpoint;
        bj["admissible_kappa_max"] = boundary_kappa_max(p, endpoint);
        bj["admissible_n_max"] = 2.0 * bp.b0 / (p.epsilon * p.epsilon) - 1.0;
    }
    attach_meta(j, cfg);
    return j.dump(2) + "\n";
}

std::string scan_summary_json(const std::vector<DriftScanReport>& scans,
                              const RunConfig& cfg) {
    json j;
    bool all_hold = true;
    for (const DriftScanReport& scan : scans) {
        json& sj = j["scans"][scan.label];
        sj["holds"] = scan.holds;
        sj["inequality_margin"] = scan.inequality_margin;
        sj["max_rel_err"] = scan.max_rel_err;
        sj["grid_size"] = scan.grid.size();
        sj["grid_lo"] = scan.grid.empty() ? 0.0 : scan.grid.front();
        sj["grid_hi"] = scan.grid.empty() ? 0.0 : scan.grid.back();
        all_hold = all_hold && scan.holds;
    }
    j["all_hold"] = all_hold;
    j["margin_tolerance"] = kDriftMarginTolerance;
    attach_meta(j, cfg);
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path fs_path(path);
    std::error_code ec;
    if (fs_path.has_parent_path())
        std::filesystem::create_directories(fs_path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace wfrec
