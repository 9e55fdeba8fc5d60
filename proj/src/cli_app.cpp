#include "aggnet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aggnet/closedform.hpp"
#include "aggnet/csv.hpp"
#include "aggnet/equilibrium.hpp"
#include "aggnet/manifest.hpp"
#include "aggnet/montecarlo.hpp"
#include "aggnet/network.hpp"
#include "aggnet/rational.hpp"
#include "aggnet/welfare.hpp"

namespace aggnet {
namespace {

using nlohmann::json;

struct Common {
    std::string backend = "float";
    uint64_t seed = 0;
    std::string out;
    int window = 0;
};

struct NetIn {
    std::string spec_path;
    std::string network_path;
    std::string maximal;
    int chain = 0;
    int generations = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--backend", c.backend, "rational or float")
        ->check(CLI::IsMember({"rational", "float"}));
    cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--out", c.out, "output file path");
    cmd->add_option("--window", c.window, "tail window in agents")
        ->check(CLI::PositiveNumber);
}

void add_netin(CLI::App* cmd, NetIn& n, bool allow_raw, bool required) {
    auto* g = cmd->add_option_group("network input");
    g->add_option("--spec", n.spec_path, "generations spec JSON file");
    if (allow_raw)
        g->add_option("--network", n.network_path, "explicit network JSON file");
    g->add_option("--maximal", n.maximal, "maximal generations network, K=<int>");
    g->add_option("--chain", n.chain, "chain with the given agent count")
        ->check(CLI::PositiveNumber);
    if (required)
        g->require_option(1);
    else
        g->require_option(0, 1);
    cmd->add_option("--generations", n.generations, "generation count")
        ->check(CLI::PositiveNumber);
}

int parse_k(const std::string& text) {
    std::string t = text;
    if (t.rfind("K=", 0) == 0 || t.rfind("k=", 0) == 0)
        t = t.substr(2);
    try {
        size_t pos = 0;
        int k = std::stoi(t, &pos);
        if (pos != t.size() || k < 1)
            throw InputError("");
        return k;
    } catch (const std::exception&) {
        throw InputError("cannot parse a position count from '" + text + "'");
    }
}

struct Resolved {
    Network net;
    std::optional<GenerationsSpec> spec;
};

Resolved resolve_net(const NetIn& in) {
    Resolved r;
    if (!in.maximal.empty()) {
        if (in.generations < 1)
            throw InputError("--maximal needs --generations");
        r.spec = make_maximal_spec(parse_k(in.maximal), in.generations);
    } else if (in.chain > 0) {
        r.spec = make_maximal_spec(1, in.chain);
    } else if (!in.spec_path.empty()) {
        GenerationsSpec spec = load_spec(in.spec_path);
        if (in.generations > 0)
            spec.generations = in.generations;
        spec.validate();
        r.spec = spec;
    } else if (!in.network_path.empty()) {
        if (in.generations > 0)
            throw InputError("--generations needs a spec input");
        r.net = load_network(in.network_path);
        return r;
    } else {
        throw InputError("no network input given");
    }
    r.net = expand_spec(*r.spec);
    return r;
}

int tail_window(const Resolved& r, const Common& c) {
    if (c.window > 0)
        return std::min(c.window, r.net.n);
    if (r.spec)
        return std::min(2 * r.spec->K, r.net.n);
    return std::max(1, r.net.n / 10);
}

SignalCounts<double> counts_to_float(const SignalCounts<Rational>& in) {
    SignalCounts<double> out;
    out.r.reserve(in.r.size());
    for (const Rational& q : in.r)
        out.r.push_back(to_double(q));
    return out;
}

SignalCounts<double> counts_for(const Resolved& r, const std::string& backend) {
    if (r.net.has_signal_links()) {
        if (backend == "rational")
            return counts_to_float(mentorship_weights<Rational>(r.net).counts);
        return mentorship_weights<double>(r.net).counts;
    }
    if (backend == "rational") {
        auto eq = equilibrium_weights<Rational>(r.net);
        return counts_to_float(signal_counts<Rational>(eq.W));
    }
    auto eq = equilibrium_weights<double>(r.net);
    return signal_counts<double>(eq.W);
}

void write_manifest(const std::vector<std::string>& argv, uint64_t seed,
                    const json& config, const std::vector<std::string>& outputs,
                    const std::string& path) {
    RunManifest m;
    m.command = argv;
    m.seed = seed;
    m.config_json = config.dump();
    m.outputs = outputs;
    m.write(path);
}

double tail_increment_mean(const std::vector<double>& series, int tail) {
    if (series.size() < 2)
        throw InputError("series too short for increments");
    int avail = int(series.size()) - 1;
    int use = std::min(std::max(tail, 1), avail);
    double acc = 0.0;
    for (int k = 0; k < use; ++k) {
        size_t hi = series.size() - 1 - size_t(k);
        acc += series[hi] - series[hi - 1];
    }
    return acc / double(use);
}

json family_prediction(const Resolved& r) {
    json out;
    out["family"] = "custom";
    out["prediction"] = nullptr;
    if (!r.spec)
        return out;
    const GenerationsSpec& spec = *r.spec;
    switch (spec.kind) {
    case NetKind::maximal:
        out["family"] = "maximal";
        out["prediction"] = maximal_efficiency(spec.K);
        break;
    case NetKind::mentorship:
        out["family"] = "mentorship";
        out["prediction"] = 1.0;
        break;
    case NetKind::silo: {
        out["family"] = "silo";
        SiloRates rates = silo_rates(spec.partition);
        json p;
        p["executive_rate"] = rates.executive;
        p["per_silo"] = rates.per_silo;
        out["prediction"] = p;
        break;
    }
    case NetKind::general: {
        SymmetryReport rep = validate_symmetry(spec);
        if (rep.is_symmetric && rep.strongly_connected && rep.c >= 1) {
            out["family"] = "symmetric";
            out["prediction"] = symmetric_efficiency(rep.d, rep.c, spec.K);
        } else {
            out["family"] = "general";
        }
        break;
    }
    }
    return out;
}

int cmd_efficiency(const std::vector<std::string>& argv, const NetIn& in,
                   const Common& c, std::ostream& out) {
    Resolved r = resolve_net(in);
    SignalCounts<double> sc = counts_for(r, c.backend);
    int w = tail_window(r, c);
    EfficiencyEstimate est = efficiency_estimate(sc, w);

    std::string path = c.out.empty() ? "efficiency.csv" : c.out;
    CsvWriter csv(path, {"agent", "r", "r_over_i"});
    for (int i = 1; i <= r.net.n; ++i)
        csv.row({csv_num(i), csv_num(sc.r[size_t(i)]),
                 csv_num(sc.r[size_t(i)] / double(i))});
    csv.close();

    json summary;
    summary["command"] = "efficiency";
    summary["backend"] = c.backend;
    summary["n"] = r.net.n;
    summary["window"] = w;
    summary["efficiency_estimate"] = est.value;
    json fam = family_prediction(r);
    summary["family"] = fam["family"];
    summary["prediction"] = fam["prediction"];
    summary["abs_gap"] = nullptr;
    if (fam["prediction"].is_number()) {
        summary["abs_gap"] = std::abs(est.value - fam["prediction"].get<double>());
    } else if (fam["family"] == "silo") {
        // silo families are judged per generation: executives are position 1
        int K = r.spec->K;
        std::vector<double> exec_r;
        for (int t = 1; t <= r.spec->generations; ++t)
            exec_r.push_back(sc.r[size_t((t - 1) * K + 1)]);
        double est_exec = tail_increment_mean(exec_r, std::max(2, w / K));
        summary["executive_rate_estimate"] = est_exec;
        summary["abs_gap"] =
            std::abs(est_exec - fam["prediction"]["executive_rate"].get<double>());
    }
    summary["out"] = path;
    summary["seed"] = c.seed;
    write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
    out << summary.dump(2) << "\n";
    return 0;
}

template <typename T>
json weights_doc(const Network& net) {
    auto value_json = [](const T& v) -> json {
        if constexpr (scalar_traits<T>::exact)
            return rational_str(v);
        else
            return v;
    };
    json agents = json::array();
    if (net.has_signal_links()) {
        auto res = mentorship_weights<T>(net);
        for (int i = 1; i <= net.n; ++i) {
            json a;
            a["i"] = i;
            a["neighbors"] = net.neighbors[size_t(i)];
            json idx = json::array(), wts = json::array();
            for (size_t k = 0; k < res.W[size_t(i)].idx.size(); ++k) {
                idx.push_back(res.W[size_t(i)].idx[k]);
                wts.push_back(value_json(res.W[size_t(i)].w[k]));
            }
            a["row_index"] = idx;
            a["row_weight"] = wts;
            a["r"] = value_json(res.counts.r[size_t(i)]);
            agents.push_back(a);
        }
        return agents;
    }
    auto eq = equilibrium_weights<T>(net);
    auto counts = signal_counts<T>(eq.W);
    for (int i = 1; i <= net.n; ++i) {
        json a;
        a["i"] = i;
        a["neighbors"] = net.neighbors[size_t(i)];
        json beta = json::array();
        for (const T& b : eq.beta.beta[size_t(i)])
            beta.push_back(value_json(b));
        a["beta"] = beta;
        json idx = json::array(), wts = json::array();
        for (size_t k = 0; k < eq.W[size_t(i)].idx.size(); ++k) {
            idx.push_back(eq.W[size_t(i)].idx[k]);
            wts.push_back(value_json(eq.W[size_t(i)].w[k]));
        }
        a["row_index"] = idx;
        a["row_weight"] = wts;
        a["r"] = value_json(counts.r[size_t(i)]);
        agents.push_back(a);
    }
    return agents;
}

int cmd_weights(const std::vector<std::string>& argv, const NetIn& in,
                const Common& c, std::ostream& out) {
    Resolved r = resolve_net(in);
    json doc;
    doc["command"] = "weights";
    doc["backend"] = c.backend;
    doc["n"] = r.net.n;
    doc["agents"] = c.backend == "rational" ? weights_doc<Rational>(r.net)
                                            : weights_doc<double>(r.net);
    std::string path = c.out.empty() ? "weights.json" : c.out;
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw InputError("cannot open output file: " + path);
        f << doc.dump(2) << '\n';
        if (!f)
            throw InputError("write failed");
    }
    json summary;
    summary["command"] = "weights";
    summary["backend"] = c.backend;
    summary["n"] = r.net.n;
    summary["out"] = path;
    write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
    out << summary.dump(2) << "\n";
    return 0;
}

StrategyProfile<double> profile_from_json(const std::string& path,
                                          const Network& net) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw InputError("cannot open profile file: " + path);
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("own") ||
        !doc.contains("nbr"))
        throw InputError("profile file must be {\"own\": [...], \"nbr\": [[...]]}");
    StrategyProfile<double> prof;
    prof.tag = ProfileTag::custom;
    auto own = doc["own"];
    auto nbr = doc["nbr"];
    if (!own.is_array() || !nbr.is_array() || int(own.size()) != net.n ||
        int(nbr.size()) != net.n)
        throw InputError("profile arrays must have one entry per agent");
    prof.own.assign(size_t(net.n) + 1, 0.0);
    prof.nbr.assign(size_t(net.n) + 1, {});
    for (int i = 1; i <= net.n; ++i) {
        prof.own[size_t(i)] = own[size_t(i - 1)].get<double>();
        for (const auto& v : nbr[size_t(i - 1)])
            prof.nbr[size_t(i)].push_back(v.get<double>());
    }
    prof.check_against(net);
    return prof;
}

int cmd_simulate(const std::vector<std::string>& argv, const NetIn& in,
                 const Common& c, const std::string& profile,
                 const std::string& profile_file, double sigma2, long long reps,
                 int state, int collect, std::ostream& out) {
    Resolved r = resolve_net(in);
    StrategyProfile<double> prof;
    if (profile == "equilibrium") {
        auto eq = equilibrium_weights<double>(r.net);
        prof = equilibrium_profile(r.net, eq);
    } else if (profile == "planner") {
        if (!r.spec)
            throw InputError("planner profile needs a spec input");
        prof = planner_profile<double>(*r.spec, r.spec->generations);
    } else if (profile == "custom") {
        if (profile_file.empty())
            throw InputError("custom profile needs --profile-file");
        prof = profile_from_json(profile_file, r.net);
    } else {
        throw InputError("unknown profile kind: " + profile);
    }

    SimConfig cfg;
    cfg.sigma2 = sigma2;
    cfg.replications = reps;
    cfg.seed = c.seed;
    cfg.state = state;
    cfg.collect_agent = collect;
    EmpiricalMoments m = simulate_paths(r.net, prof, cfg);
    auto checks = empirical_signal_count(m);

    std::string path = c.out.empty() ? "simulate.csv" : c.out;
    CsvWriter csv(path, {"agent", "mean", "var", "r_hat_mean", "r_hat_var", "se"});
    for (int i = 1; i <= r.net.n; ++i) {
        const AgentMoments& am = m.agents[size_t(i)];
        csv.row({csv_num(i), csv_num(am.mean), csv_num(am.var),
                 csv_num(am.r_hat_mean), csv_num(am.r_hat_var),
                 csv_num(am.se_r_mean)});
    }
    csv.close();

    double max_z = 0.0;
    json flagged = json::array();
    for (int i = 1; i <= r.net.n; ++i) {
        double z = std::abs(checks[size_t(i)].z);
        max_z = std::max(max_z, z);
        if (z > 4.0)
            flagged.push_back(i);
    }
    json summary;
    summary["command"] = "simulate";
    summary["profile"] = profile;
    summary["sigma2"] = sigma2;
    summary["replications"] = reps;
    summary["state"] = state;
    summary["seed"] = c.seed;
    summary["max_abs_z"] = max_z;
    summary["flagged_agents"] = flagged;
    summary["out"] = path;
    write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
    out << summary.dump(2) << "\n";
    return 0;
}

int cmd_random(const std::vector<std::string>& argv, const Common& c, int d,
               const std::string& grid_text, int draws, std::ostream& out) {
    std::vector<int> grid;
    size_t pos = 0;
    while (pos < grid_text.size()) {
        size_t comma = grid_text.find(',', pos);
        std::string tok = grid_text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            size_t used = 0;
            int n = std::stoi(tok, &used);
            if (used != tok.size() || n < 1)
                throw InputError("");
            grid.push_back(n);
        } catch (const std::exception&) {
            throw InputError("bad --n-grid entry: '" + tok + "'");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    EnsembleResult res = random_ensemble(grid, d, draws, c.seed);

    std::string path = c.out.empty() ? "random.csv" : c.out;
    CsvWriter csv(path, {"n", "draw", "r_n", "r_over_n"});
    for (size_t gi = 0; gi < grid.size(); ++gi)
        for (int k = 0; k < draws; ++k) {
            double r = res.r_values[gi][size_t(k)];
            csv.row({csv_num(grid[gi]), csv_num(k), csv_num(r),
                     csv_num(r / double(grid[gi]))});
        }
    csv.close();

    bool ratio_down = true, r_up = true;
    for (size_t gi = 1; gi < grid.size(); ++gi) {
        ratio_down = ratio_down && res.median_ratio[gi] < res.median_ratio[gi - 1];
        r_up = r_up && res.median_r[gi] > res.median_r[gi - 1];
    }
    json summary;
    summary["command"] = "random";
    summary["d"] = d;
    summary["n_grid"] = grid;
    summary["draws"] = draws;
    summary["seed"] = c.seed;
    summary["median_r"] = res.median_r;
    summary["median_r_over_n"] = res.median_ratio;
    summary["median_ratio_decreasing"] = ratio_down;
    summary["median_r_increasing"] = r_up;
    summary["out"] = path;
    write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
    out << summary.dump(2) << "\n";
    return 0;
}

int cmd_planner(const std::vector<std::string>& argv, const NetIn& in,
                const Common& c, std::ostream& out) {
    Resolved r = resolve_net(in);
    if (!r.spec)
        throw InputError("planner needs a spec input");
    const GenerationsSpec& spec = *r.spec;

    SignalCounts<double> sc;
    if (c.backend == "rational") {
        auto prof = planner_profile<Rational>(spec, spec.generations);
        auto rows = induced_rows(r.net, prof);
        sc = counts_to_float(signal_counts<Rational>(rows));
    } else {
        auto prof = planner_profile<double>(spec, spec.generations);
        auto rows = induced_rows(r.net, prof);
        sc = signal_counts<double>(rows);
    }
    int w = tail_window(r, c);
    EfficiencyEstimate est = efficiency_estimate(sc, w);

    std::string path = c.out.empty() ? "planner.csv" : c.out;
    CsvWriter csv(path, {"agent", "r", "r_over_i"});
    for (int i = 1; i <= r.net.n; ++i)
        csv.row({csv_num(i), csv_num(sc.r[size_t(i)]),
                 csv_num(sc.r[size_t(i)] / double(i))});
    csv.close();

    std::vector<double> gen_means;
    for (int t = 1; t <= spec.generations; ++t) {
        double acc = 0.0;
        for (int k = 1; k <= spec.K; ++k)
            acc += sc.r[size_t((t - 1) * spec.K + k)];
        gen_means.push_back(acc / double(spec.K));
    }
    double tail_rate = spec.generations >= 2
                           ? tail_increment_mean(gen_means, std::max(1, w / spec.K))
                           : gen_means.front();

    json summary;
    summary["command"] = "planner";
    summary["backend"] = c.backend;
    summary["n"] = r.net.n;
    summary["window"] = w;
    summary["efficiency_estimate"] = est.value;
    summary["tail_generation_increment"] = tail_rate;
    summary["benchmark_rate"] = spec.K; // one generation carries K signals
    summary["out"] = path;
    write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
    out << summary.dump(2) << "\n";
    return 0;
}

std::vector<double> compare_side_series(const std::string& maximal,
                                        const std::string& spec_path,
                                        int horizon) {
    if (maximal.empty() == spec_path.empty())
        throw InputError("each compare side needs exactly one of --maximal-*/--spec-*");
    GenerationsSpec spec =
        maximal.empty() ? load_spec(spec_path) : make_maximal_spec(parse_k(maximal), 1);
    spec.generations = (horizon + spec.K - 1) / spec.K;
    Network net = expand_spec(spec);
    auto eq = equilibrium_weights<double>(net);
    auto sc = signal_counts<double>(eq.W);
    std::vector<double> rs = r_series(sc);
    rs.resize(size_t(horizon));
    return rs;
}

int cmd_welfare(const std::vector<std::string>& argv, const NetIn& in,
                const Common& c, bool curve, bool series, bool compare,
                double sigma2, double r_min, double r_max, double r_step,
                double v_bar, const std::string& maximal_a,
                const std::string& spec_a, const std::string& maximal_b,
                const std::string& spec_b, int horizon, double delta,
                int t_start, double gamma_inf, std::ostream& out) {
    json summary;
    summary["command"] = "welfare";
    summary["sigma2"] = sigma2;

    if (curve) {
        UtilityCurve uc = utility_curve(sigma2, r_min, r_max, r_step);
        std::string path = c.out.empty() ? "welfare_curve.csv" : c.out;
        CsvWriter csv(path, {"r", "v"});
        bool monotone = true;
        for (size_t k = 0; k < uc.points.size(); ++k) {
            csv.row({csv_num(uc.points[k].first), csv_num(uc.points[k].second)});
            if (k > 0)
                monotone = monotone && uc.points[k].second > uc.points[k - 1].second;
        }
        csv.close();
        summary["mode"] = "curve";
        summary["points"] = uc.points.size();
        summary["strictly_increasing"] = monotone;
        summary["out"] = path;
        write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
        out << summary.dump(2) << "\n";
        return 0;
    }

    if (series) {
        Resolved r = resolve_net(in);
        SignalCounts<double> sc = counts_for(r, c.backend);
        std::vector<double> rs = r_series(sc);
        std::vector<double> v = welfare_series(rs, sigma2);
        std::string path = c.out.empty() ? "welfare_series.csv" : c.out;
        CsvWriter csv(path, {"agent", "v"});
        for (size_t k = 0; k < v.size(); ++k)
            csv.row({csv_num(int(k) + 1), csv_num(v[k])});
        csv.close();
        summary["mode"] = "series";
        summary["n"] = r.net.n;
        summary["out"] = path;
        if (!std::isnan(v_bar)) {
            AttainmentReport rep = attainment(rs, sigma2, v_bar);
            json att;
            att["v_bar"] = rep.v_bar;
            att["horizon"] = rep.horizon;
            att["weak"] = rep.weak ? json(*rep.weak) : json(nullptr);
            att["strong"] = rep.strong ? json(*rep.strong) : json(nullptr);
            summary["attainment"] = att;
        }
        write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
        out << summary.dump(2) << "\n";
        return 0;
    }

    (void)compare;
    std::vector<double> ra = compare_side_series(maximal_a, spec_a, horizon);
    std::vector<double> rb = compare_side_series(maximal_b, spec_b, horizon);
    int T_star = t_start;
    if (T_star <= 0) {
        // onset of side-A dominance in the count series
        if (ra[size_t(horizon) - 1] < rb[size_t(horizon) - 1])
            throw InputError("side A never dominates side B on this horizon; "
                             "pass --t-start explicitly");
        T_star = horizon;
        for (int i = horizon - 1; i >= 0; --i) {
            if (ra[size_t(i)] >= rb[size_t(i)])
                T_star = i + 1;
            else
                break;
        }
    }
    std::vector<double> va = welfare_series(ra, sigma2);
    std::vector<double> vb = welfare_series(rb, sigma2);
    WelfareWeights w = WelfareWeights::t_patient_geometric(T_star, delta, horizon);
    w.gamma_inf = gamma_inf;
    PatientCompare pc = patient_compare(va, vb, w);

    summary["mode"] = "compare";
    summary["horizon"] = horizon;
    summary["t_start"] = T_star;
    summary["delta"] = delta;
    summary["gamma_inf"] = gamma_inf;
    summary["gamma_a"] = pc.gamma_a;
    summary["gamma_b"] = pc.gamma_b;
    summary["sign"] = pc.sign;
    summary["warn_a"] = pc.warn_a;
    summary["warn_b"] = pc.warn_b;
    std::string path = c.out.empty() ? "welfare_compare.json" : c.out;
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw InputError("cannot open output file: " + path);
        f << summary.dump(2) << '\n';
        if (!f)
            throw InputError("write failed");
    }
    write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
    out << summary.dump(2) << "\n";
    return 0;
}

int cmd_figure(const std::vector<std::string>& argv, const Common& c,
               const std::string& name, int k_max, int horizon,
               std::ostream& out) {
    std::string path = c.out.empty() ? "figure_" + name + ".csv" : c.out;
    if (name == "fig1mid" || name == "fig1right") {
        if (k_max < 1)
            throw InputError("figure: k-max must be positive");
        CsvWriter csv(path, {"K", name == "fig1mid" ? "rate" : "efficiency"});
        for (int K = 1; K <= k_max; ++K) {
            double v = name == "fig1mid" ? double(2 * K - 1) / double(K)
                                         : maximal_efficiency(K);
            csv.row({csv_num(K), csv_num(v)});
        }
        csv.close();
    } else if (name == "fig2") {
        if (horizon < 1)
            throw InputError("figure: horizon must be positive");
        CsvWriter csv(path, {"K", "i", "r"});
        for (int K = 2; K <= 5; ++K) {
            GenerationsSpec spec = make_maximal_spec(K, (horizon + K - 1) / K);
            Network net = expand_spec(spec);
            auto eq = equilibrium_weights<double>(net);
            auto sc = signal_counts<double>(eq.W);
            for (int i = 1; i <= horizon; ++i)
                csv.row({csv_num(K), csv_num(i), csv_num(sc.r[size_t(i)])});
        }
        csv.close();
    } else {
        throw InputError("unknown figure name: " + name);
    }
    json summary;
    summary["command"] = "figure";
    summary["name"] = name;
    summary["out"] = path;
    write_manifest(argv, c.seed, summary, {path}, path + ".manifest.json");
    out << summary.dump(2) << "\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Bayesian learning on finite observation networks"};
    app.name("aggnet");
    app.require_subcommand(1);

    Common c_eff, c_wts, c_sim, c_rnd, c_pln, c_wel, c_fig;
    NetIn n_eff, n_wts, n_sim, n_pln, n_wel;

    auto* eff = app.add_subcommand("efficiency", "per-agent signal counts and tail efficiency");
    add_common(eff, c_eff);
    add_netin(eff, n_eff, true, true);

    auto* wts = app.add_subcommand("weights", "equilibrium signal weights and responses");
    add_common(wts, c_wts);
    add_netin(wts, n_wts, true, true);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo sample paths");
    add_common(sim, c_sim);
    add_netin(sim, n_sim, true, true);
    std::string sim_profile = "equilibrium", sim_profile_file;
    double sim_sigma2 = 1.0;
    long long sim_reps = 100000;
    int sim_state = 1, sim_collect = 0;
    sim->add_option("--profile", sim_profile, "equilibrium, planner, or custom")
        ->check(CLI::IsMember({"equilibrium", "planner", "custom"}));
    sim->add_option("--profile-file", sim_profile_file, "custom profile JSON");
    sim->add_option("--sigma2", sim_sigma2, "signal variance")->check(CLI::PositiveNumber);
    sim->add_option("--reps", sim_reps, "replications")->check(CLI::PositiveNumber);
    sim->add_option("--state", sim_state, "conditioning state, 0 or 1")
        ->check(CLI::Range(0, 1));
    sim->add_option("--collect", sim_collect, "agent whose samples to keep")
        ->check(CLI::NonNegativeNumber);

    auto* rnd = app.add_subcommand("random", "fixed-degree random network ensemble");
    add_common(rnd, c_rnd);
    int rnd_d = 2, rnd_draws = 100;
    std::string rnd_grid = "100,300,1000";
    rnd->add_option("--d", rnd_d, "out-degree")->check(CLI::PositiveNumber);
    rnd->add_option("--n-grid", rnd_grid, "comma-separated agent counts");
    rnd->add_option("--draws", rnd_draws, "network draws per n")->check(CLI::PositiveNumber);

    auto* pln = app.add_subcommand("planner", "near-efficient profile counts");
    add_common(pln, c_pln);
    add_netin(pln, n_pln, false, true);

    auto* wel = app.add_subcommand("welfare", "utilities, attainment, patient comparison");
    add_common(wel, c_wel);
    add_netin(wel, n_wel, true, false);
    bool wel_curve = false, wel_series = false, wel_compare = false;
    auto* mode = wel->add_option_group("mode");
    mode->add_flag("--curve", wel_curve, "utility as a function of r");
    mode->add_flag("--series", wel_series, "per-agent utility for a network");
    mode->add_flag("--compare", wel_compare, "patient welfare comparison of two networks");
    mode->require_option(1);
    double wel_sigma2 = 1.0, wel_rmin = 1.0, wel_rmax = 20.0, wel_rstep = 0.5;
    double wel_vbar = std::numeric_limits<double>::quiet_NaN();
    std::string wel_max_a, wel_spec_a, wel_max_b, wel_spec_b;
    int wel_horizon = 200, wel_tstart = 0;
    double wel_delta = 0.99, wel_gamma_inf = 0.0;
    wel->add_option("--sigma2", wel_sigma2, "signal variance")->check(CLI::PositiveNumber);
    wel->add_option("--r-min", wel_rmin, "curve grid start");
    wel->add_option("--r-max", wel_rmax, "curve grid end");
    wel->add_option("--r-step", wel_rstep, "curve grid step");
    wel->add_option("--v-bar", wel_vbar, "attainment threshold in (-0.25, 0)");
    wel->add_option("--maximal-a", wel_max_a, "compare side A: maximal K=<int>");
    wel->add_option("--spec-a", wel_spec_a, "compare side A: spec JSON");
    wel->add_option("--maximal-b", wel_max_b, "compare side B: maximal K=<int>");
    wel->add_option("--spec-b", wel_spec_b, "compare side B: spec JSON");
    wel->add_option("--horizon", wel_horizon, "compare horizon in agents")
        ->check(CLI::PositiveNumber);
    wel->add_option("--delta", wel_delta, "geometric weight decay");
    wel->add_option("--t-start", wel_tstart, "patience index (0 = auto)");
    wel->add_option("--gamma-inf", wel_gamma_inf, "weight on the limit proxy");

    auto* fig = app.add_subcommand("figure", "closed-form and engine figure data");
    add_common(fig, c_fig);
    std::string fig_name;
    int fig_kmax = 10, fig_horizon = 200;
    fig->add_option("name", fig_name, "fig1mid, fig1right, or fig2")->required();
    fig->add_option("--k-max", fig_kmax, "largest K for fig1 data");
    fig->add_option("--horizon", fig_horizon, "agent horizon for fig2");

    std::vector<std::string> argv_store;
    argv_store.push_back("aggnet");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(argv_store.size());
    for (auto& s : argv_store)
        argv.push_back(s.data());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help() << std::flush;
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (eff->parsed())
            return cmd_efficiency(args, n_eff, c_eff, out);
        if (wts->parsed())
            return cmd_weights(args, n_wts, c_wts, out);
        if (sim->parsed())
            return cmd_simulate(args, n_sim, c_sim, sim_profile, sim_profile_file,
                                sim_sigma2, sim_reps, sim_state, sim_collect, out);
        if (rnd->parsed())
            return cmd_random(args, c_rnd, rnd_d, rnd_grid, rnd_draws, out);
        if (pln->parsed())
            return cmd_planner(args, n_pln, c_pln, out);
        if (wel->parsed())
            return cmd_welfare(args, n_wel, c_wel, wel_curve, wel_series,
                               wel_compare, wel_sigma2, wel_rmin, wel_rmax,
                               wel_rstep, wel_vbar, wel_max_a, wel_spec_a,
                               wel_max_b, wel_spec_b, wel_horizon, wel_delta,
                               wel_tstart, wel_gamma_inf, out);
        if (fig->parsed())
            return cmd_figure(args, c_fig, fig_name, fig_kmax, fig_horizon, out);
        err << "no subcommand given\n";
        return 2;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace aggnet
