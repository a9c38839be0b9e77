#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "beeps/analysis/amplification.hpp"
#include "beeps/analysis/ballsbins.hpp"
#include "beeps/analysis/lowerbound.hpp"
#include "beeps/beepfirst.hpp"
#include "beeps/experiment.hpp"
#include "beeps/jitterjump.hpp"
#include "beeps/kernels.hpp"
#include "beeps/rng.hpp"

namespace beeps::cli {

namespace {

using json = nlohmann::ordered_json;

struct SimArgs {
  std::string protocol = "jitterjump";
  std::string graph;
  std::size_t n = 64;
  std::size_t delta = 4;
  std::vector<std::size_t> sweep;
  double eta = 1.0 / 16.0;
  double kappa = 64.0;
  Slot q = 0;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  std::uint64_t max_periods = 200;
  std::uint64_t settle = 5;
  std::string wakeup = "simultaneous";
  double wake_spread = 1.0;
  std::string out;
  std::string events;
  std::uint32_t window = 0;
  bool delayed_interval = false;
  bool json = false;
  unsigned threads = 1;
};

std::string expand_graph(std::string spec, std::size_t n, std::size_t delta) {
  auto replace = [&](const std::string& key, const std::string& value) {
    for (auto pos = spec.find(key); pos != std::string::npos; pos = spec.find(key, pos + value.size())) {
      spec.replace(pos, key.size(), value);
    }
  };
  replace("{n}", std::to_string(n));
  replace("{delta}", std::to_string(delta));
  return spec;
}

WakeupSchedule make_wakeup(const SimArgs& a, std::size_t nodes, double period_length, bool slotted,
                           std::uint64_t trial_seed) {
  if (a.wakeup == "simultaneous") return WakeupSchedule::simultaneous(nodes);
  if (a.wakeup == "random") {
    Rng rng(derive_seed(trial_seed, 0, Stream::Wakeup));
    if (slotted) {
      const auto span = static_cast<std::uint64_t>(std::llround(a.wake_spread * period_length));
      return WakeupSchedule::uniform_slots(nodes, std::max<std::uint64_t>(span, 1), rng);
    }
    return WakeupSchedule::uniform_times(nodes, a.wake_spread * period_length, rng);
  }
  std::ifstream in(a.wakeup);
  if (!in) throw ConfigError("cannot open wakeup file '" + a.wakeup + "'");
  return parse_wakeup(in, nodes);
}

std::vector<DynamicEvent> load_events(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open events file '" + path + "'");
  return parse_events(in);
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

struct Totals {
  std::uint64_t trials = 0;
  std::uint64_t converged = 0;
  std::vector<double> convergence;  // per trial, converged only
  json per_trial = json::array();
  json violations = json::object();
  bool ok = true;

  void add_violation(const std::string& key, std::uint64_t count) {
    violations[key] = violations.value(key, std::uint64_t{0}) + count;
    if (count) ok = false;
  }
};

void run_jitterjump_size(const SimArgs& a, bool dynamic, std::size_t n, std::uint64_t trial_base, Totals& tot,
                         std::ostream* csv) {
  const auto events = load_events(a.events);
  const std::string spec = expand_graph(a.graph, n, a.delta);

  std::function<JitterJumpOutcome(std::uint64_t)> one = [&](std::uint64_t t) {
    const std::uint64_t trial_seed = derive_seed(a.seed, trial_base + t, Stream::Trial);
    JitterJumpRun run{make_graph(spec, derive_seed(trial_seed, 0, Stream::Topology)), {}, {}, events, a.settle,
                      csv != nullptr};
    SimConfig cfg;
    cfg.eta = a.eta;
    cfg.kappa = a.kappa;
    cfg.slots_per_period = a.q;
    cfg.window = a.window;
    cfg.dynamic = dynamic;
    cfg.master_seed = trial_seed;
    cfg.max_periods = a.max_periods;
    run.config = resolve_jitterjump(cfg, run.topology);
    run.wake = make_wakeup(a, run.topology.size(), static_cast<double>(run.config.slots_per_period), true, trial_seed);
    return run_jitterjump(run);
  };
  const auto outcomes = run_trials(a.trials, a.threads, one);

  for (std::uint64_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    ++tot.trials;
    if (o.converged) {
      ++tot.converged;
      tot.convergence.push_back(static_cast<double>(o.convergence_period));
    } else {
      tot.ok = false;
    }
    tot.add_violation("free_slot", o.free_slot_violations);
    tot.add_violation("degree_estimate", o.degree_violations);
    tot.add_violation("good_persistence", o.persistence_violations);
    tot.add_violation("interval_coloring", o.coloring_violations);
    tot.add_violation("interval_floor", o.interval_floor_violations);
    tot.add_violation("hardness", o.hardness_violations);
    tot.add_violation("protocol_error", o.protocol_error.empty() ? 0 : 1);

    json row = {{"trial", trial_base + t},
                {"n", o.final_snapshot.nodes.size()},
                {"converged", o.converged},
                {"convergence_period", o.converged ? json(o.convergence_period) : json(nullptr)},
                {"periods_run", o.periods_run},
                {"free_slot_checks", o.free_slot_checks},
                {"degree_checks", o.degree_checks}};
    if (o.min_normalized_interval) row["min_normalized_interval"] = *o.min_normalized_interval;
    if (dynamic) {
      row["degree_windows"] = o.degree_windows;
      row["resets"] = o.resets;
      row["free_slot_shortfalls"] = o.dynamic_free_slot_shortfalls;
      json churn = json::array();
      for (const auto& c : o.churn) {
        churn.push_back({{"event_period", c.event_period},
                         {"restabilized_after", c.restabilized_after ? json(*c.restabilized_after) : json(nullptr)}});
        if (!c.restabilized_after) tot.ok = false;
      }
      row["churn"] = churn;
    }
    if (!o.protocol_error.empty()) row["protocol_error"] = o.protocol_error;
    tot.per_trial.push_back(row);
    if (csv) write_trace_rows(*csv, trial_base + t, o.trace);
  }
}

void run_beepfirst_size(const SimArgs& a, std::size_t n, std::uint64_t trial_base, Totals& tot, std::ostream* csv,
                        std::uint64_t& ties) {
  const std::string spec = expand_graph(a.graph, n, a.delta);
  std::function<BeepFirstOutcome(std::uint64_t)> one = [&](std::uint64_t t) {
    const std::uint64_t trial_seed = derive_seed(a.seed, trial_base + t, Stream::Trial);
    BeepFirstRun run{make_graph(spec, derive_seed(trial_seed, 0, Stream::Topology)), {}, {}, csv != nullptr};
    SimConfig cfg;
    cfg.epsilon = a.epsilon;
    cfg.delayed_interval = a.delayed_interval;
    cfg.master_seed = trial_seed;
    cfg.max_periods = a.max_periods;
    run.config = resolve_beepfirst(cfg);
    run.wake = make_wakeup(a, run.topology.size(), run.config.period, false, trial_seed);
    return run_beepfirst(run);
  };
  const auto outcomes = run_trials(a.trials, a.threads, one);

  for (std::uint64_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    ++tot.trials;
    const bool in_time = o.all_stable && o.max_stabilization_periods <= 3.0;
    if (o.all_stable) {
      ++tot.converged;
      tot.convergence.push_back(o.max_stabilization_periods);
    }
    if (!in_time) tot.ok = false;
    tot.add_violation("search_overrun", o.overruns);
    tot.add_violation("phase_tie", o.phase_ties);
    tot.add_violation("interval_coloring", o.coloring_violations);
    tot.add_violation("interval_value", o.interval_mismatches);
    ties += o.ties;
    json row = {{"trial", trial_base + t},
                {"n", o.final_snapshot.nodes.size()},
                {"all_stable", o.all_stable},
                {"max_stabilization_periods", o.max_stabilization_periods},
                {"max_search_periods", o.max_search_periods},
                {"beep_ties", o.ties}};
    if (!o.protocol_error.empty()) row["protocol_error"] = o.protocol_error;
    tot.per_trial.push_back(row);
    if (csv) write_trace_rows(*csv, trial_base + t, o.trace);
  }
}

int run_simulation(const SimArgs& args, bool dynamic, std::ostream& out) {
  SimArgs a = args;
  if (a.protocol != "jitterjump" && a.protocol != "beepfirst") {
    throw ConfigError("unknown protocol '" + a.protocol + "'");
  }
  if (dynamic && a.protocol != "jitterjump") throw ConfigError("dynamic mode needs --protocol jitterjump");
  if (a.trials == 0) throw ConfigError("--trials must be positive");
  if (a.graph.empty()) a.graph = "regular:{n}:{delta}";
  if (a.sweep.empty()) a.sweep.push_back(a.n);

  std::ofstream csv_file;
  std::ostream* csv = nullptr;
  if (!a.out.empty()) {
    csv_file.open(a.out, std::ios::binary);
    if (!csv_file) throw ConfigError("cannot write '" + a.out + "'");
    csv_file << kTraceHeader << '\n';
    csv = &csv_file;
  }

  Totals tot;
  std::uint64_t ties = 0;
  json sizes = json::array();
  std::vector<std::pair<double, double>> fit;  // (ln n, median max convergence)
  for (std::size_t i = 0; i < a.sweep.size(); ++i) {
    Totals local;
    const std::uint64_t base = i * a.trials;
    if (a.protocol == "jitterjump") {
      run_jitterjump_size(a, dynamic, a.sweep[i], base, local, csv);
    } else {
      run_beepfirst_size(a, a.sweep[i], base, local, csv, ties);
    }
    const double med = median(local.convergence);
    const double mx = local.convergence.empty() ? 0.0 : *std::max_element(local.convergence.begin(), local.convergence.end());
    sizes.push_back({{"n", a.sweep[i]},
                     {"trials", local.trials},
                     {"converged", local.converged},
                     {"median_convergence", med},
                     {"max_convergence", mx}});
    if (a.sweep[i] >= 2 && !local.convergence.empty()) fit.emplace_back(std::log(static_cast<double>(a.sweep[i])), med);
    tot.trials += local.trials;
    tot.converged += local.converged;
    tot.convergence.insert(tot.convergence.end(), local.convergence.begin(), local.convergence.end());
    for (auto& row : local.per_trial) tot.per_trial.push_back(std::move(row));
    for (auto& [k, v] : local.violations.items()) tot.add_violation(k, v.get<std::uint64_t>());
    tot.ok = tot.ok && local.ok;
  }

  json summary = {{"mode", dynamic ? "dynamic" : "static"},
                  {"protocol", a.protocol},
                  {"graph", a.graph},
                  {"seed", a.seed},
                  {"trials", tot.trials},
                  {"converged", tot.converged},
                  {"median_convergence", median(tot.convergence)},
                  {"max_convergence",
                   tot.convergence.empty() ? 0.0 : *std::max_element(tot.convergence.begin(), tot.convergence.end())},
                  {"violations", tot.violations}};
  if (a.protocol == "beepfirst") summary["beep_ties"] = ties;
  if (a.sweep.size() > 1) {
    summary["sizes"] = sizes;
    // Least squares through the origin: median ~ C ln n.
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : fit) {
      sxy += x * y;
      sxx += x * x;
    }
    if (sxx > 0.0) summary["fitted_log_constant"] = sxy / sxx;
  }
  summary["kernel_isa"] = std::string(kernels::isa_name(kernels::active_isa()));
  summary["status"] = tot.ok ? "pass" : "fail";

  if (a.json) {
    summary["per_trial"] = tot.per_trial;
    out << summary.dump(2) << '\n';
  } else {
    for (auto& [k, v] : summary.items()) {
      if (k == "violations") {
        out << "violations";
        for (auto& [vk, vv] : v.items()) out << ' ' << vk << '=' << vv.dump();
        out << '\n';
      } else if (k == "sizes") {
        for (const auto& s : v) {
          out << "size n=" << s["n"].dump() << " converged=" << s["converged"].dump() << '/' << s["trials"].dump()
              << " median=" << s["median_convergence"].dump() << " max=" << s["max_convergence"].dump() << '\n';
        }
      } else {
        out << k << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
      }
    }
  }
  return tot.ok ? kExitOk : kExitValidation;
}

void add_sim_options(CLI::App& cmd, SimArgs& a, bool dynamic) {
  cmd.add_option("--protocol", a.protocol, "beepfirst or jitterjump")->capture_default_str();
  cmd.add_option("--graph", a.graph,
                 "edge-list path or generator: gnp:N:P, regular:N:D, star:N, clique:N, blocks:K "
                 "({n} and {delta} expand to --n and --delta)");
  cmd.add_option("--n", a.n, "node count for the default graph")->capture_default_str();
  cmd.add_option("--delta", a.delta, "degree for the default random-regular graph")->capture_default_str();
  cmd.add_option("--sweep", a.sweep, "run the campaign for each listed n")->delimiter(',');
  cmd.add_option("--eta", a.eta, "buffer fraction, in (0, 1/16]")->capture_default_str();
  cmd.add_option("--kappa", a.kappa, "slots per unit of max degree, at least 4/eta")->capture_default_str();
  cmd.add_option("--q", a.q, "explicit slots per period (default ceil(kappa*Delta))");
  cmd.add_option("--epsilon", a.epsilon, "start-delay spread for beepfirst")->capture_default_str();
  cmd.add_option("--seed", a.seed, "master seed")->capture_default_str();
  cmd.add_option("--trials", a.trials, "trials per size")->capture_default_str();
  cmd.add_option("--max-periods", a.max_periods, "period cap per trial")->capture_default_str();
  cmd.add_option("--settle", a.settle, "extra all-good periods simulated after convergence")->capture_default_str();
  cmd.add_option("--wakeup", a.wakeup, "simultaneous, random, or a 'node wake' file")->capture_default_str();
  cmd.add_option("--wake-spread", a.wake_spread, "random wakeups span this many periods")->capture_default_str();
  cmd.add_flag("--delayed-interval", a.delayed_interval, "beepfirst picks I_v from the final gap");
  cmd.add_option("--out", a.out, "per-period CSV trace");
  cmd.add_flag("--json", a.json, "machine-readable summary");
  cmd.add_option("--threads", a.threads, "worker threads")->capture_default_str();
  if (dynamic) {
    cmd.add_option("--events", a.events, "dynamic events file ('period kind args' per line)");
    cmd.add_option("--r", a.window, "degree window length (default ceil(log2 n))");
  }
}

int run_ballsbins(unsigned m, unsigned n, std::uint64_t trials, std::uint64_t seed, bool as_json, std::ostream& out) {
  if (n == 0) throw std::domain_error("ballsbins: n must be at least 1");
  const auto exact = analysis::bb_exact(m, n);
  const double quarter = static_cast<double>(m) / 4.0;
  const double p_quarter = exact.prob_greater(quarter);
  bool ok = true;
  json j = {{"balls", m}, {"bins", n}, {"mean", exact.mean}, {"prob_greater_quarter", p_quarter}};
  json pmf = json::array();
  for (std::size_t k = 0; k < exact.pmf.size(); ++k) {
    if (exact.pmf[k] > 0.0) pmf.push_back({{"k", k}, {"p", exact.pmf[k]}});
  }
  j["pmf"] = pmf;
  if (m >= 12 && n >= m) {
    const bool gate = p_quarter > 0.5 && exact.mean > static_cast<double>(m) / 2.0;
    j["quarter_gate"] = gate ? "pass" : "fail";
    ok = ok && gate;
  }
  if (trials > 0) {
    const auto sample = analysis::bb_montecarlo(m, n, trials, seed);
    const auto agree = analysis::compare_occupancy(exact, sample, 4.0);
    j["montecarlo"] = {{"trials", trials},
                       {"prob_greater_quarter", sample.frequency_greater(quarter)},
                       {"bins_checked", agree.bins_checked},
                       {"bins_outside_4sigma", agree.bins_outside},
                       {"worst_z", agree.worst_z}, {"worst_tail", agree.worst_tail}};
    ok = ok && agree.bins_outside == 0;
  }
  j["status"] = ok ? "pass" : "fail";
  if (as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << "balls " << m << "\nbins " << n << '\n';
    for (const auto& e : pmf) out << "P[Z=" << e["k"].dump() << "] " << e["p"].dump() << '\n';
    out << "E[Z] " << j["mean"].dump() << '\n';
    out << "P[Z>m/4] " << j["prob_greater_quarter"].dump() << '\n';
    if (j.contains("quarter_gate")) out << "quarter_gate " << j["quarter_gate"].get<std::string>() << '\n';
    if (j.contains("montecarlo")) {
      const auto& mc = j["montecarlo"];
      out << "montecarlo trials=" << mc["trials"].dump() << " P[Z>m/4]=" << mc["prob_greater_quarter"].dump()
          << " bins_outside_4sigma=" << mc["bins_outside_4sigma"].dump() << " worst_z=" << mc["worst_z"].dump() << " worst_tail=" << mc["worst_tail"].dump()
          << '\n';
    }
    out << "status " << j["status"].get<std::string>() << '\n';
  }
  return ok ? kExitOk : kExitValidation;
}

int run_lowerbound(analysis::TwinCouplingConfig cfg, bool as_json, std::ostream& out) {
  if (cfg.blocks < 2) throw ConfigError("lowerbound: k must be at least 2");
  if (cfg.trials == 0) throw ConfigError("lowerbound: trials must be positive");
  auto shared = cfg;
  shared.shared_randomness = true;
  const auto coupled = analysis::twin_coupling_experiment(shared);
  auto independent = cfg;
  independent.shared_randomness = false;
  const auto free_run = analysis::twin_coupling_experiment(independent);

  const double action_freq = free_run.same_action_frequency();
  const double n_obs = static_cast<double>(std::max<std::uint64_t>(free_run.same_state_observations, 1));
  const double action_floor = 0.5 - 3.0 * std::sqrt(0.25 / n_obs);
  const double retained = free_run.retained_fraction();
  const double target = 1.0 - 1.0 / std::numbers::e;
  const double retained_floor =
      target - 3.0 * std::sqrt(target * (1.0 - target) / static_cast<double>(free_run.trials));

  const bool a_ok = coupled.divergences == 0;
  const bool b_ok = free_run.same_state_observations > 0 && action_freq >= action_floor;
  const bool c_ok = retained >= retained_floor;
  json j = {{"k", cfg.blocks},
            {"protocol", std::string(analysis::twin_protocol_name(cfg.protocol))},
            {"slots", cfg.slots},
            {"trials", cfg.trials},
            {"note", "checks the coupling mechanism behind the lower bound, not the asymptotic statement"},
            {"shared_randomness_divergences", coupled.divergences},
            {"same_state_observations", free_run.same_state_observations},
            {"same_action_frequency", action_freq},
            {"same_action_floor", action_floor},
            {"retained_fraction", retained},
            {"retained_floor", retained_floor},
            {"coupling", a_ok ? "pass" : "fail"},
            {"same_action", b_ok ? "pass" : "fail"},
            {"retention", c_ok ? "pass" : "fail"}};
  const bool ok = a_ok && b_ok && c_ok;
  j["status"] = ok ? "pass" : "fail";
  if (as_json) {
    out << j.dump(2) << '\n';
  } else {
    for (auto& [k, v] : j.items()) out << k << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interval coloring in the beeping model: simulations and oracles", "beepsim"};
  app.require_subcommand(1);

  SimArgs static_args, dynamic_args;
  auto* st = app.add_subcommand("static", "run a protocol on a fixed graph");
  add_sim_options(*st, static_args, false);
  auto* dy = app.add_subcommand("dynamic", "run the slotted protocol in dynamic mode with churn events");
  add_sim_options(*dy, dynamic_args, true);

  auto* oracle = app.add_subcommand("oracle", "analytic and Monte Carlo oracles");
  oracle->require_subcommand(1);
  bool oracle_json = false;
  oracle->add_flag("--json", oracle_json, "machine-readable output");

  unsigned bb_m = 12, bb_n = 12;
  std::uint64_t bb_trials = 0, bb_seed = 1;
  auto* bb = oracle->add_subcommand("ballsbins", "occupancy distribution of m balls in n bins");
  bb->add_option("--m", bb_m, "balls")->capture_default_str();
  bb->add_option("--n", bb_n, "bins")->capture_default_str();
  bb->add_option("--trials", bb_trials, "Monte Carlo trials (0 skips)")->capture_default_str();
  bb->add_option("--seed", bb_seed, "Monte Carlo seed")->capture_default_str();

  double am_c = 2.0, am_p = 0.5, am_q = 1.0, am_n = 16.0;
  std::optional<double> am_eta;
  auto* am = oracle->add_subcommand("amplify", "periods until all nodes are good with probability 1 - n^-q");
  am->add_option("--c", am_c, "periods per attempt")->capture_default_str();
  am->add_option("--p", am_p, "success probability per attempt")->capture_default_str();
  am->add_option("--q", am_q, "failure exponent")->capture_default_str();
  am->add_option("--n", am_n, "node count")->capture_default_str();
  am->add_option("--eta", am_eta, "derive p from the slotted protocol's buffer fraction");

  analysis::TwinCouplingConfig lb;
  lb.slots = 0;
  std::string lb_protocol = "jitterjump";
  auto* lbc = oracle->add_subcommand("lowerbound", "twin-coupling experiment on the cycle-of-blocks graph");
  lbc->add_option("--k", lb.blocks, "blocks")->capture_default_str();
  lbc->add_option("--slots", lb.slots, "slots per trial (default log2 k)");
  lbc->add_option("--trials", lb.trials, "trials")->capture_default_str();
  lbc->add_option("--seed", lb.seed, "master seed")->capture_default_str();
  lbc->add_option("--protocol", lb_protocol, "jitterjump or coinflip")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (st->parsed()) return run_simulation(static_args, false, out);
    if (dy->parsed()) return run_simulation(dynamic_args, true, out);
    if (bb->parsed()) return run_ballsbins(bb_m, bb_n, bb_trials, bb_seed, oracle_json, out);
    if (am->parsed()) {
      const double p = am_eta ? analysis::bad_to_good_probability(*am_eta) : am_p;
      const double rounds = analysis::amplification_rounds(am_c, p, am_q, am_n);
      if (oracle_json) {
        out << json{{"c", am_c}, {"p", p}, {"q", am_q}, {"n", am_n}, {"periods", rounds}}.dump(2) << '\n';
      } else {
        out << "c " << am_c << "\np " << p << "\nq " << am_q << "\nn " << am_n << "\nperiods " << rounds << '\n';
      }
      return kExitOk;
    }
    if (lbc->parsed()) {
      lb.protocol = analysis::parse_twin_protocol(lb_protocol);
      if (lb.slots == 0) {
        lb.slots = static_cast<std::uint64_t>(std::max(1.0, std::round(std::log2(static_cast<double>(lb.blocks)))));
      }
      return run_lowerbound(lb, oracle_json, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace beeps::cli
