#pragma once

// Subcommands behind the frogsim executable. Each returns a process exit
// status: 0 for a decisive result, 2 for Inconclusive, 1 for errors and
// failed checks. Outputs are deterministic given files and seeds.
//
// CSV files start with one "# schema: <name>/<version>" line, then a header row.

#include "frog/analytics.hpp"
#include "frog/criteria.hpp"
#include "frog/model_io.hpp"
#include "frog/oracle.hpp"
#include "frog/simulator.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace frog::cli {

inline constexpr int kExitDecisive = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

inline constexpr const char* kTrialsSchema = "frog-trials/1";
inline constexpr const char* kSitesSchema = "frog-site-visits/1";
inline constexpr const char* kPhaseSchema = "frog-phase-grid/1";
inline constexpr const char* kReportSchema = "frog-sim-report/1";

inline std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------------------
// classify

inline int cmd_classify(const std::string& model_path, const std::string& json_out, std::ostream& os,
                        const ClassifyOptions& opts = {}) {
    const ModelSpec spec = load_model(model_path);
    const Verdict v = classify(spec, opts);
    os << summary(v) << "\n";
    for (const auto& n : v.notes) os << "  note: " << n << "\n";
    if (!json_out.empty()) write_file(json_out, to_json(v).dump(2) + "\n");
    return v.decisive() ? kExitDecisive : kExitInconclusive;
}

// ---------------------------------------------------------------------------
// simulate

inline std::string trials_csv(const std::vector<TrialRecord>& trials) {
    std::ostringstream os;
    os << "# schema: " << kTrialsSchema << "\n";
    os << "trial,seed,activated_count,rightmost_activated,origin_visits,all_dead_time,hit_site_horizon,"
          "hit_time_horizon,retired_walkers\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& r = trials[i];
        os << i << ',' << r.seed << ',' << r.activated_count << ',' << r.rightmost_activated << ',' << r.origin_visits
           << ',' << (r.all_dead_time ? std::to_string(*r.all_dead_time) : std::string()) << ','
           << r.hit_site_horizon << ',' << r.hit_time_horizon << ',' << r.retired_walkers << "\n";
    }
    return os.str();
}

inline std::string sites_csv(const std::vector<SiteVisitRow>& rows) {
    std::ostringstream os;
    os << "# schema: " << kSitesSchema << "\n";
    os << "site,activations,visits,frequency,std_error,analytic\n";
    for (const auto& r : rows)
        os << r.site << ',' << r.activations << ',' << r.visits << ',' << fmt(r.frequency) << ','
           << fmt(r.std_error) << ',' << fmt(r.analytic) << "\n";
    return os.str();
}

inline nlohmann::json to_json(const SimConfig& c) {
    return {{"site_horizon", c.site_horizon},
            {"time_horizon", c.time_horizon},
            {"replications", c.replications},
            {"rng_seed", c.rng_seed},
            {"origin_visit_target", c.origin_visit_target},
            {"front_fraction", c.front_fraction},
            {"escape_tolerance", c.escape_tolerance},
            {"local_step_budget", c.local_step_budget}};
}

inline nlohmann::json to_json(const EstimateReport& r) {
    return {{"quantity", r.quantity}, {"estimate", r.estimate}, {"std_error", r.std_error}, {"replications", r.replications}};
}

/// Aggregated report over a set of trials.
inline nlohmann::json simulation_report(const std::vector<TrialRecord>& trials, const SimConfig& cfg) {
    std::size_t local = 0, front = 0, dead = 0, site_trunc = 0, time_trunc = 0;
    double activated = 0.0;
    const double target = cfg.front_fraction * static_cast<double>(cfg.site_horizon);
    for (const auto& r : trials) {
        if (r.origin_visits >= cfg.origin_visit_target) ++local;
        if (static_cast<double>(r.rightmost_activated) >= target) ++front;
        if (r.all_dead_time) ++dead;
        site_trunc += r.hit_site_horizon;
        time_trunc += r.hit_time_horizon;
        activated += static_cast<double>(r.activated_count);
    }
    const std::size_t n = trials.size();
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["config"] = to_json(cfg);
    j["local_survival_proxy"] = to_json(bernoulli_report(local, n, cfg, "P(origin visits >= K by time horizon)"));
    j["infinite_activation_proxy"] = to_json(bernoulli_report(front, n, cfg, "P(rightmost activated >= rho * site horizon)"));
    j["extinct_by_horizon"] = to_json(bernoulli_report(dead, n, cfg, "P(all walkers dead by time horizon)"));
    j["mean_activated"] = n ? activated / static_cast<double>(n) : 0.0;
    j["truncated_by_site_horizon"] = site_trunc;
    j["truncated_by_time_horizon"] = time_trunc;
    j["note"] = "finite-horizon proxies; asymptotic survival probabilities are not reproducible at finite horizon";
    return j;
}

inline int cmd_simulate(const std::string& model_path, const SimConfig& cfg, const std::string& out_prefix, std::ostream& os) {
    const ModelSpec spec = load_model(model_path);
    validate(spec);
    const auto trials = run_trials(spec, cfg);
    const auto rows = per_site_visit_table(spec, trials, std::min<Site>(cfg.site_horizon, 64));
    auto report = simulation_report(trials, cfg);
    write_file(out_prefix + "_trials.csv", trials_csv(trials));
    write_file(out_prefix + "_sites.csv", sites_csv(rows));
    if (cfg.record_trajectory && !trials.empty()) {
        std::ostringstream fr;
        fr << "# schema: frog-front/1\ntick,rightmost_activated\n";
        for (std::size_t t = 0; t < trials[0].front.size(); ++t) fr << t + 1 << ',' << trials[0].front[t] << "\n";
        write_file(out_prefix + "_front.csv", fr.str());
    }
    write_file(out_prefix + "_report.json", report.dump(2) + "\n");
    os << "local survival proxy " << fmt(report["local_survival_proxy"]["estimate"].get<double>()) << " +- "
       << fmt(report["local_survival_proxy"]["std_error"].get<double>()) << " over " << trials.size() << " trials\n";
    return kExitDecisive;
}

// ---------------------------------------------------------------------------
// sweep-phase

struct SweepOptions {
    double alpha_lo = 0.25, alpha_hi = 3.0;
    double beta_lo = 0.25, beta_hi = 3.0;
    double step = 0.25;
    DriftSide side = DriftSide::Left;
    bool include_infinite_beta = true;
    std::size_t overlay_every = 0;  ///< simulate every k-th grid point (0 = no overlay)
    SimConfig overlay_config{};
};

inline std::vector<double> grid_axis(double lo, double hi, double step) {
    if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0)) throw DomainError("sweep ranges must be positive with lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
}

inline const char* side_name(DriftSide s) { return s == DriftSide::Left ? "left" : "right"; }

inline std::string phase_grid_csv(const SweepOptions& o) {
    std::ostringstream os;
    os << "# schema: " << kPhaseSchema << "\n";
    os << "side,alpha,beta,local,global,infinite_activation,citations";
    if (o.overlay_every) os << ",proxy_estimate,proxy_std_error";
    os << "\n";
    auto betas = grid_axis(o.beta_lo, o.beta_hi, o.step);
    if (o.include_infinite_beta) betas.push_back(std::numeric_limits<double>::infinity());
    std::size_t index = 0;
    for (double a : grid_axis(o.alpha_lo, o.alpha_hi, o.step)) {
        for (double b : betas) {
            const Verdict v = phase_power_law(PhasePoint{a, b, o.side});
            std::string cites;
            for (std::size_t i = 0; i < v.citations.size(); ++i) cites += (i ? "/" : "") + v.citations[i];
            os << side_name(o.side) << ',' << fmt(a) << ',' << fmt(b) << ',' << to_string(v.local) << ','
               << to_string(v.global) << ',' << to_string(v.infinite_activation) << ',' << cites;
            if (o.overlay_every) {
                if (index % o.overlay_every == 0) {
                    const auto r = estimate_local_survival_proxy(phase_model(PhasePoint{a, b, o.side}), o.overlay_config);
                    os << ',' << fmt(r.estimate) << ',' << fmt(r.std_error);
                } else {
                    os << ",,";
                }
            }
            os << "\n";
            ++index;
        }
    }
    return os.str();
}

inline int cmd_sweep_phase(const SweepOptions& o, const std::string& out_path, std::ostream& os) {
    const std::string csv = phase_grid_csv(o);
    if (out_path.empty() || out_path == "-")
        os << csv;
    else
        write_file(out_path, csv);
    return kExitDecisive;
}

// ---------------------------------------------------------------------------
// oracle-check

struct OracleCheckOptions {
    bool mutate_radicand = false; ///< test mode: evaluate closed forms with the radicand's correction term negated
    bool empty_grid = false;
    std::int64_t horizon = 10000;
};

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline double closed_form(const StepLaw& law, Direction d, bool mutate) {
    if (!mutate) return first_passage(law, d);
    const double a = 2.0 * law.p * law.l - 1.0;
    const double rad = std::max(0.0, a * a - 4.0 * law.p * (1.0 - law.p) * law.l);
    const double num = 2.0 * law.p * (d == Direction::Left ? law.l : 1.0 - law.l);
    return num / (1.0 + std::sqrt(rad));
}

} // namespace detail

/// Closed forms against the DP oracle, gambler's-ruin identities, exact enumeration and the coupling.
inline std::vector<CheckLine> oracle_checks(const OracleCheckOptions& o) {
    std::vector<CheckLine> lines;
    if (o.empty_grid) return lines;
    const bool m = o.mutate_radicand;
    for (double p : {0.5, 0.8, 0.95, 1.0})
        for (double l : {0.2, 0.45, 0.5, 0.55, 0.8})
            for (std::int64_t d : {1, 3})
                for (Direction dir : {Direction::Left, Direction::Right}) {
                    if (p == 1.0 && l == 0.5) continue; // critical walk: the tail decays too slowly for any horizon
                    const StepLaw law{p, l};
                    const double cf = std::pow(detail::closed_form(law, dir, m), static_cast<double>(d));
                    const double dp = dp_first_passage(law, d, o.horizon, dir);
                    const double tol = p < 1.0 ? 1e-6 : 1e-3;
                    char name[96];
                    std::snprintf(name, sizeof name, "dp p=%.2f l=%.2f d=%lld %s", p, l, static_cast<long long>(d),
                                  dir == Direction::Left ? "left" : "right");
                    lines.push_back({name, std::abs(cf - dp) <= tol && dp <= cf + 1e-12,
                                     "closed " + fmt(cf) + " dp " + fmt(dp)});
                }
    double worst = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double l = i / 1000.0;
        const StepLaw law{1.0, l};
        worst = std::max(worst, std::abs(detail::closed_form(law, Direction::Left, m) - std::min(1.0, l / (1.0 - l))));
        worst = std::max(worst, std::abs(detail::closed_form(law, Direction::Right, m) - std::min(1.0, (1.0 - l) / l)));
    }
    lines.push_back({"gambler's ruin identities", worst <= 1e-14, "max error " + fmt(worst)});

    ModelSpec one;
    one.drift = SequenceFamily::constant(0.4);
    one.lifetime = SequenceFamily::constant(0.5);
    one.occupied = OccupiedSet::explicit_sites({0});
    const auto e = enumerate_small_activation(one, 6);
    bool geo = e.total_mass == 1;
    for (std::size_t t = 0; t < e.all_dead_by.size(); ++t) {
        Rational expect = 1;
        for (std::size_t k = 0; k < t; ++k) expect /= 2;
        geo = geo && e.all_dead_by[t] == 1 - expect;
    }
    lines.push_back({"enumeration: geometric lifetime", geo, "P(all dead by t) = 1 - 2^-t"});

    ModelSpec cpl;
    cpl.drift = SequenceFamily::power_above(1.0, 0.25, {0.75});
    SimConfig sc;
    sc.site_horizon = 100;
    sc.time_horizon = 500;
    std::size_t mism = 0;
    for (std::size_t i = 0; i < 50; ++i) mism += !coupled_frog_firework(cpl, sc, trial_seed(sc, i)).equal();
    lines.push_back({"frog/firework coupling", mism == 0, std::to_string(mism) + " mismatches in 50 trials"});
    return lines;
}

inline int cmd_oracle_check(const OracleCheckOptions& o, std::ostream& os) {
    const auto lines = oracle_checks(o);
    std::size_t failed = 0;
    for (const auto& l : lines) {
        os << (l.pass ? "PASS " : "FAIL ") << l.name << "  (" << l.detail << ")\n";
        failed += !l.pass;
    }
    os << lines.size() - failed << "/" << lines.size() << " checks passed\n";
    return failed ? kExitError : kExitDecisive;
}

} // namespace frog::cli
