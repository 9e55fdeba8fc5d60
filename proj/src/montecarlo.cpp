#include "aggnet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "aggnet/rng.hpp"

namespace aggnet {

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    int budget = hw == 0 ? 1 : int(hw);
    if (const char* env = std::getenv("AGGNET_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v < 1 << 16)
            budget = std::min(budget, int(v));
    }
    return budget;
}

void SimConfig::validate() const {
    if (!(sigma2 > 0.0))
        throw InputError("sim config: sigma2 must be positive");
    if (replications < 1)
        throw InputError("sim config: need at least one replication");
    if (state != 0 && state != 1)
        throw InputError("sim config: state must be 0 or 1");
    if (collect_agent < 0)
        throw InputError("sim config: collect_agent must be nonnegative");
}

namespace {

constexpr long long kBlockReps = 4096;

struct BlockAcc {
    long long cnt = 0;
    std::vector<double> mean;
    std::vector<double> m2;
    std::vector<double> samples;
};

// Chan's pairwise update; merging blocks in index order keeps the result
// independent of which worker ran which block.
void merge_into(BlockAcc& into, const BlockAcc& from) {
    if (from.cnt == 0)
        return;
    if (into.cnt == 0) {
        into = from;
        return;
    }
    double na = double(into.cnt), nb = double(from.cnt);
    double m = na + nb;
    for (size_t i = 0; i < into.mean.size(); ++i) {
        double delta = from.mean[i] - into.mean[i];
        into.mean[i] += delta * (nb / m);
        into.m2[i] += from.m2[i] + delta * delta * (na * nb / m);
    }
    into.cnt += from.cnt;
    into.samples.insert(into.samples.end(), from.samples.begin(),
                        from.samples.end());
}

template <typename Fn>
void run_blocks(long long blocks, Fn&& body) {
    int workers = std::min<long long>(thread_budget(), blocks);
    if (workers <= 1) {
        for (long long b = 0; b < blocks; ++b)
            body(b);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto loop = [&] {
        for (;;) {
            long long b = next.fetch_add(1);
            if (b >= blocks)
                return;
            try {
                body(b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(loop);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace

EmpiricalMoments simulate_paths(const Network& net,
                                const StrategyProfile<double>& prof,
                                const SimConfig& cfg) {
    net.validate();
    if (net.has_signal_links())
        throw InputError("simulate_paths: signal-link networks are not supported");
    prof.check_against(net);
    cfg.validate();
    if (cfg.collect_agent > net.n)
        throw InputError("sim config: collect_agent out of range");

    int n = net.n;
    long long reps = cfg.replications;
    long long blocks = (reps + kBlockReps - 1) / kBlockReps;
    std::vector<BlockAcc> accs;
    accs.resize(size_t(blocks));

    double sig = std::sqrt(cfg.sigma2);
    double signal_mean = cfg.state == 1 ? 1.0 : -1.0;
    double lam_scale = 2.0 / cfg.sigma2;

    run_blocks(blocks, [&](long long b) {
        BlockAcc acc;
        acc.mean.assign(size_t(n), 0.0);
        acc.m2.assign(size_t(n), 0.0);
        long long lo = b * kBlockReps;
        long long hi = std::min(reps, lo + kBlockReps);
        if (cfg.collect_agent >= 1)
            acc.samples.reserve(size_t(hi - lo));
        std::vector<double> ell(size_t(n) + 1, 0.0);
        for (long long rep = lo; rep < hi; ++rep) {
            Philox rng(cfg.seed, uint64_t(rep));
            for (int i = 1; i <= n; ++i) {
                double lam = lam_scale * (signal_mean + sig * rng.normal());
                double v = prof.own[size_t(i)] * lam;
                const auto& nb = net.neighbors[size_t(i)];
                const auto& wts = prof.nbr[size_t(i)];
                for (size_t k = 0; k < nb.size(); ++k)
                    v += wts[k] * ell[size_t(nb[k])];
                ell[size_t(i)] = v;
            }
            acc.cnt += 1;
            for (int i = 1; i <= n; ++i) {
                double delta = ell[size_t(i)] - acc.mean[size_t(i - 1)];
                acc.mean[size_t(i - 1)] += delta / double(acc.cnt);
                acc.m2[size_t(i - 1)] +=
                    delta * (ell[size_t(i)] - acc.mean[size_t(i - 1)]);
            }
            if (cfg.collect_agent >= 1)
                acc.samples.push_back(ell[size_t(cfg.collect_agent)]);
        }
        accs[size_t(b)] = std::move(acc);
    });

    BlockAcc total;
    total.mean.assign(size_t(n), 0.0);
    total.m2.assign(size_t(n), 0.0);
    for (long long b = 0; b < blocks; ++b)
        merge_into(total, accs[size_t(b)]);

    EmpiricalMoments out;
    out.cfg = cfg;
    out.agents.assign(size_t(n) + 1, AgentMoments{});
    double sign = cfg.state == 1 ? 1.0 : -1.0;
    for (int i = 1; i <= n; ++i) {
        AgentMoments& am = out.agents[size_t(i)];
        am.mean = total.mean[size_t(i - 1)];
        am.var = reps > 1 ? total.m2[size_t(i - 1)] / double(reps - 1) : 0.0;
        am.r_hat_mean = sign * am.mean * cfg.sigma2 / 2.0;
        am.r_hat_var = am.var * cfg.sigma2 / 4.0;
        am.se_mean = std::sqrt(am.var / double(reps));
        am.se_r_mean = am.se_mean * cfg.sigma2 / 2.0;
        am.se_r_var = reps > 1
                          ? am.var * std::sqrt(2.0 / double(reps - 1)) * cfg.sigma2 / 4.0
                          : 0.0;
    }
    out.collected = std::move(total.samples);
    return out;
}

std::vector<SignalCountCheck> empirical_signal_count(const EmpiricalMoments& m) {
    std::vector<SignalCountCheck> out(m.agents.size());
    for (size_t i = 1; i < m.agents.size(); ++i) {
        const AgentMoments& am = m.agents[i];
        SignalCountCheck& c = out[i];
        c.r_hat_mean = am.r_hat_mean;
        c.r_hat_var = am.r_hat_var;
        c.gap = std::abs(am.r_hat_var - am.r_hat_mean);
        double denom = std::sqrt(am.se_r_mean * am.se_r_mean +
                                 am.se_r_var * am.se_r_var);
        if (denom > 0.0)
            c.z = (am.r_hat_var - am.r_hat_mean) / denom;
        else
            c.z = c.gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return out;
}

namespace {

// r of the last agent depends only on its ancestors, so the engine runs on
// the backward closure of agent n.
double closure_count(const Network& net) {
    int n = net.n;
    std::vector<char> keep(size_t(n) + 1, 0);
    std::vector<int> stack{n};
    keep[size_t(n)] = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j : net.neighbors[size_t(i)])
            if (!keep[size_t(j)]) {
                keep[size_t(j)] = 1;
                stack.push_back(j);
            }
    }
    std::vector<int> old_of;
    std::vector<int> new_of(size_t(n) + 1, 0);
    old_of.push_back(0);
    for (int i = 1; i <= n; ++i)
        if (keep[size_t(i)]) {
            old_of.push_back(i);
            new_of[size_t(i)] = int(old_of.size()) - 1;
        }
    Network sub;
    sub.n = int(old_of.size()) - 1;
    sub.neighbors.assign(size_t(sub.n) + 1, {});
    sub.signal_links.assign(size_t(sub.n) + 1, 0);
    for (int i = 1; i <= sub.n; ++i) {
        for (int j : net.neighbors[size_t(old_of[size_t(i)])])
            sub.neighbors[size_t(i)].push_back(new_of[size_t(j)]);
        std::sort(sub.neighbors[size_t(i)].begin(), sub.neighbors[size_t(i)].end());
    }
    auto eq = equilibrium_weights<double>(sub);
    auto counts = signal_counts<double>(eq.W);
    return counts.r[size_t(sub.n)];
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double h = q * double(v.size() - 1);
    size_t lo = size_t(h);
    size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = h - double(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

} // namespace

EnsembleResult random_ensemble(const std::vector<int>& n_grid, int d, int draws,
                               uint64_t seed) {
    if (n_grid.empty())
        throw InputError("random ensemble: empty n grid");
    for (int n : n_grid)
        if (n < 1)
            throw InputError("random ensemble: n must be positive");
    if (d < 1)
        throw InputError("random ensemble: d must be positive");
    if (draws < 1)
        throw InputError("random ensemble: need at least one draw");

    EnsembleResult res;
    res.n_grid = n_grid;
    res.d = d;
    res.seed = seed;
    res.r_values.assign(n_grid.size(), std::vector<double>(size_t(draws), 0.0));

    long long items = (long long)n_grid.size() * draws;
    run_blocks(items, [&](long long item) {
        size_t gi = size_t(item / draws);
        int k = int(item % draws);
        RandomNetSpec rn;
        rn.n = n_grid[gi];
        rn.d = d;
        rn.seed = seed;
        rn.stream = uint64_t(item);
        Network net = sample_fixed_degree(rn);
        res.r_values[gi][size_t(k)] = closure_count(net);
    });

    for (size_t gi = 0; gi < n_grid.size(); ++gi) {
        const auto& rv = res.r_values[gi];
        std::vector<double> ratio(rv.size());
        for (size_t k = 0; k < rv.size(); ++k)
            ratio[k] = rv[k] / double(n_grid[gi]);
        res.median_r.push_back(quantile(rv, 0.5));
        res.q1_r.push_back(quantile(rv, 0.25));
        res.q3_r.push_back(quantile(rv, 0.75));
        res.median_ratio.push_back(quantile(ratio, 0.5));
        res.q1_ratio.push_back(quantile(ratio, 0.25));
        res.q3_ratio.push_back(quantile(ratio, 0.75));
    }
    return res;
}

} // namespace aggnet
