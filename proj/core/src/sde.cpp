#include "wfrec/sde.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "wfrec/rng.hpp"

namespace wfrec {
namespace {

struct Stepper {
    const ModelParams& p;
    Scheme scheme;
    double dt;
    double sqdt;
    double lo;  // clamp_eps
    double hi;  // 1 - clamp_eps

    Stepper(const ModelParams& p_, const SimConfig& cfg)
        : p(p_),
          scheme(cfg.scheme),
          dt(cfg.dt),
          sqdt(std::sqrt(cfg.dt)),
          lo(cfg.clamp_eps),
          hi(1.0 - cfg.clamp_eps) {}

    double advance(double x, double z, std::uint64_t& clamp_events) const {
        double prop;
        if (scheme == Scheme::Lamperti) {
            const double root = std::sqrt(x * (1.0 - x));
            const double sig = p.epsilon * root;
            const double sigp = p.epsilon * (1.0 - 2.0 * x) / (2.0 * root);
            const double y = (2.0 / p.epsilon) * std::asin(std::sqrt(x));
            const double yp =
                y + (drift(p, x) / sig - 0.5 * sigp) * dt + sqdt * z;
            const double s = std::sin(p.epsilon * yp / 2.0);
            prop = s * s;
        } else {
            prop = x + drift(p, x) * dt +
                   p.epsilon * std::sqrt(x * (1.0 - x)) * sqdt * z;
        }
        if (prop >= lo && prop <= hi) return prop;
        ++clamp_events;
        if (scheme == Scheme::EulerReflect) {
            for (int i = 0; i < 100 && (prop < lo || prop > hi); ++i) {
                if (prop < lo) prop = 2.0 * lo - prop;
                if (prop > hi) prop = 2.0 * hi - prop;
            }
            if (prop >= lo && prop <= hi) return prop;
        }
        return prop < lo ? lo : hi;
    }
};

int fired_condition(const StoppingSpec& stop, double x) {
    for (std::size_t i = 0; i < stop.conditions.size(); ++i)
        if (stop.conditions[i].satisfied(x)) return (int)i;
    return -1;
}

std::uint64_t grid_steps(const SimConfig& cfg) {
    const double raw = cfg.t_max / cfg.dt;
    std::uint64_t n = (std::uint64_t)std::llround(raw);
    if (n < 1) n = 1;
    return n;
}

void require_start(const SimConfig& cfg, double x0) {
    if (!(x0 >= cfg.clamp_eps && x0 <= 1.0 - cfg.clamp_eps))
        throw std::invalid_argument(
            "x0 must lie in [clamp_eps, 1-clamp_eps], got " + std::to_string(x0));
}

// Shared batch driver: atomic work queue, records stored by path index so
// the output is invariant under the worker count.
template <typename PerPath>
void dispatch(std::uint64_t n_paths, unsigned threads, const PerPath& body) {
    unsigned t = threads ? threads : std::thread::hardware_concurrency();
    if (t < 1) t = 1;
    if ((std::uint64_t)t > n_paths) t = (unsigned)n_paths;

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    const auto worker = [&]() {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= n_paths || failed.load(std::memory_order_relaxed)) break;
            try {
                body(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    first_error = "path " + std::to_string(i) + ": " + e.what();
                break;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(t - 1);
    for (unsigned w = 1; w < t; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
    if (failed.load()) throw std::runtime_error(first_error);
}

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("sim.dt must be > 0");
    if (!(dt < t_max)) throw ConfigError("sim.dt must be < sim.t_max");
    if (!(clamp_eps > 0.0 && clamp_eps < 1e-6))
        throw ConfigError("sim.clamp_eps must lie in (0, 1e-6)");
    if (n_paths < 1) throw ConfigError("sim.n_paths must be >= 1");
}

bool StopCondition::satisfied(double x) const {
    switch (kind) {
        case Kind::TauAlpha: return x >= threshold && x <= 1.0 - threshold;
        case Kind::GammaBeta: return x <= threshold;
        case Kind::TKappa: return x >= threshold;
    }
    return false;
}

std::string StopCondition::name() const {
    switch (kind) {
        case Kind::TauAlpha: return "tau_alpha";
        case Kind::GammaBeta: return "gamma_beta";
        case Kind::TKappa: return "t_kappa";
    }
    return "?";
}

StoppingSpec StoppingSpec::tau_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw ConfigError("tau_alpha threshold must lie in (0, 1/2)");
    return {{StopCondition{StopCondition::Kind::TauAlpha, alpha}}};
}

StoppingSpec StoppingSpec::gamma_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw ConfigError("gamma_beta threshold must lie in (0,1)");
    return {{StopCondition{StopCondition::Kind::GammaBeta, beta}}};
}

StoppingSpec StoppingSpec::t_kappa(double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw ConfigError("t_kappa threshold must lie in (0,1)");
    return {{StopCondition{StopCondition::Kind::TKappa, kappa}}};
}

StoppingSpec StoppingSpec::first_of(std::vector<StopCondition> conditions) {
    if (conditions.empty()) throw ConfigError("first_of: empty stopping spec");
    for (const StopCondition& c : conditions)
        if (!(c.threshold > 0.0 && c.threshold < 1.0))
            throw ConfigError("stopping threshold must lie in (0,1)");
    return {std::move(conditions)};
}

Functional power_functional(std::string name, double exponent) {
    return Functional{std::move(name),
                      [exponent](double x) { return std::pow(x, exponent); }};
}

double step(const ModelParams& p, const SimConfig& cfg, double x, double z,
            std::uint64_t& clamp_events) {
    return Stepper(p, cfg).advance(x, z, clamp_events);
}

PathRecord run_path(const ModelParams& p, const SimConfig& cfg, double x0,
                    const StoppingSpec& stop,
                    const std::vector<Functional>& functionals,
                    std::uint64_t path_index) {
    cfg.validate();
    require_start(cfg, x0);
    if (stop.conditions.empty())
        throw ConfigError("run_path: empty stopping spec (use run_batch_horizon)");

    PathRecord rec;
    rec.path_index = path_index;
    rec.initial_x = x0;
    rec.integrals.assign(functionals.size(), 0.0);
    rec.min_x = rec.max_x = rec.final_x = x0;

    int reason = fired_condition(stop, x0);
    if (reason >= 0) {
        rec.stop_time = 0.0;
        rec.stop_reason = reason;
        return rec;
    }

    const Stepper stepper(p, cfg);
    NormalStream stream(cfg.master_seed, path_index);
    const std::uint64_t n_steps = grid_steps(cfg);
    double x = x0;
    for (std::uint64_t k = 0; k < n_steps; ++k) {
        for (std::size_t j = 0; j < functionals.size(); ++j)
            rec.integrals[j] += functionals[j].f(x) * cfg.dt;
        x = stepper.advance(x, stream.next(), rec.clamp_events);
        if (x < rec.min_x) rec.min_x = x;
        if (x > rec.max_x) rec.max_x = x;
        reason = fired_condition(stop, x);
        if (reason >= 0) {
            rec.stop_time = std::min((double)(k + 1) * cfg.dt, cfg.t_max);
            rec.stop_reason = reason;
            rec.final_x = x;
            return rec;
        }
    }
    rec.censored = true;
    rec.stop_time = cfg.t_max;
    rec.stop_reason = -1;
    rec.final_x = x;
    return rec;
}

std::vector<PathRecord> run_batch(const ModelParams& p, const SimConfig& cfg,
                                  double x0, const StoppingSpec& stop,
                                  const std::vector<Functional>& functionals,
                                  unsigned threads) {
    cfg.validate();
    require_start(cfg, x0);
    if (stop.conditions.empty())
        throw ConfigError("run_batch: empty stopping spec (use run_batch_horizon)");

    std::vector<PathRecord> records(cfg.n_paths);
    dispatch(cfg.n_paths, threads, [&](std::uint64_t i) {
        records[i] = run_path(p, cfg, x0, stop, functionals, i);
    });
    return records;
}

HorizonResult run_batch_horizon(const ModelParams& p, const SimConfig& cfg,
                                double x0,
                                const std::vector<double>& snapshot_times,
                                const std::vector<Functional>& functionals,
                                unsigned threads) {
    cfg.validate();
    require_start(cfg, x0);

    const std::uint64_t n_steps = grid_steps(cfg);
    std::vector<std::uint64_t> snap_index(snapshot_times.size());
    for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
        const double ts = snapshot_times[s];
        if (!(ts >= 0.0 && ts <= cfg.t_max))
            throw ConfigError("snapshot time outside [0, t_max]");
        std::uint64_t idx = (std::uint64_t)std::llround(ts / cfg.dt);
        if (idx > n_steps) idx = n_steps;
        snap_index[s] = idx;
    }

    HorizonResult result;
    result.records.assign(cfg.n_paths, PathRecord{});
    result.snapshots.assign(snapshot_times.size(),
                            std::vector<double>(cfg.n_paths, 0.0));

    const Stepper stepper(p, cfg);
    dispatch(cfg.n_paths, threads, [&](std::uint64_t i) {
        PathRecord rec;
        rec.path_index = i;
        rec.initial_x = x0;
        rec.integrals.assign(functionals.size(), 0.0);
        rec.min_x = rec.max_x = rec.final_x = x0;

        NormalStream stream(cfg.master_seed, i);
        double x = x0;
        for (std::size_t s = 0; s < snap_index.size(); ++s)
            if (snap_index[s] == 0) result.snapshots[s][i] = x;
        for (std::uint64_t k = 0; k < n_steps; ++k) {
            for (std::size_t j = 0; j < functionals.size(); ++j)
                rec.integrals[j] += functionals[j].f(x) * cfg.dt;
            x = stepper.advance(x, stream.next(), rec.clamp_events);
            if (x < rec.min_x) rec.min_x = x;
            if (x > rec.max_x) rec.max_x = x;
            for (std::size_t s = 0; s < snap_index.size(); ++s)
                if (snap_index[s] == k + 1) result.snapshots[s][i] = x;
        }
        rec.stop_time = cfg.t_max;
        rec.stop_reason = -1;
        rec.censored = false;
        rec.final_x = x;
        result.records[i] = std::move(rec);
    });
    return result;
}

std::string path_records_csv(const std::vector<PathRecord>& records,
                             const StoppingSpec& stop,
                             const std::vector<Functional>& functionals,
                             bool horizon_run) {
    std::string out = "path_index,stop_time,stop_reason";
    for (const Functional& f : functionals) out += "," + f.name;
    out += ",clamp_events,min_x,max_x,final_x\n";
    for (const PathRecord& rec : records) {
        out += std::to_string(rec.path_index);
        out += ',';
        append_double(out, rec.stop_time);
        out += ',';
        if (rec.stop_reason >= 0 &&
            rec.stop_reason < (int)stop.conditions.size())
            out += stop.conditions[rec.stop_reason].name();
        else
            out += horizon_run ? "horizon" : "censored";
        for (double v : rec.integrals) {
            out += ',';
            append_double(out, v);
        }
        out += ',';
        out += std::to_string(rec.clamp_events);
        out += ',';
        append_double(out, rec.min_x);
        out += ',';
        append_double(out, rec.max_x);
        out += ',';
        append_double(out, rec.final_x);
        out += '\n';
    }
    return out;
}

}  // namespace wfrec
