#pragma once

#include <vector>

#include "aggnet/equilibrium.hpp"
#include "aggnet/linalg.hpp"
#include "aggnet/network.hpp"
#include "aggnet/rational.hpp"

namespace aggnet {

// Per-generation conditional moments of log-actions in a symmetric
// generations network: var/cov given the high state, and the common weight
// beta the generation puts on each observed action (0 for the first
// generation, which observes nobody).
template <typename T>
struct GenerationMoments {
    int t = 0;
    T var;
    T cov;
    T beta;
};

struct PositionChain {
    Matrix<double> transition;      // K x K, rows sum to 1
    std::vector<double> stationary; // pi*, sums to 1
};

// Conditional mean / variance of the sum of a generation's log-actions; the
// closed-form neighbor weight is written in these terms.
struct GenSummary {
    double mu_sum = 0.0;
    double sigma2_sum = 0.0;
};

double maximal_efficiency(int K); // (2K-1)/K^2

// (1 + (d^2-d)/(d^2-d+c)) / K, with the 0/0 = 0 convention at d = 1.
template <typename T>
T symmetric_efficiency_exact(int d, int c, int K);
double symmetric_efficiency(int d, int c, int K);

// (2 - 1/K)/K; self-checks against symmetric_efficiency on every (d, c)
// consistent with K.
template <typename T>
T cancellation_efficiency_exact(int K);
double cancellation_efficiency(int K);

struct SiloRates {
    std::vector<double> per_silo; // (2|S|-1)/|S| per silo
    double executive = 0.0;       // their sum
};
SiloRates silo_rates(const std::vector<std::vector<int>>& partition);

// Var/Cov/beta recursion from the first generation; exact when T is the
// rational scalar. r per generation is var * sigma2/4.
template <typename T>
std::vector<GenerationMoments<T>> moment_recursion(int d, int c, const T& sigma2,
                                                   int T_gens);

template <typename T>
std::vector<T> generation_counts(const std::vector<GenerationMoments<T>>& moments,
                                 const T& sigma2);

// The common weight an agent puts on each observed action when everyone in
// the previous cohort plays the sum-statistic with the given conditional
// moments.
double maximal_beta(double mu_sum, double sigma2_sum, double sigma2, int K);

GenSummary generation_summary(double mean_prev, double var_prev, double cov_prev,
                              int K);

// pi* by repeated squaring of the position transition matrix; requires a
// symmetric, strongly connected spec with c >= 1.
PositionChain stationary_distribution(const GenerationsSpec& spec);

// pi* by exact linear solve of pi'P = pi', sum pi = 1.
std::vector<Rational> stationary_exact(const GenerationsSpec& spec);

// The near-efficient profile: own weight 1/pi*_k and neighbor weight 1/|Psi_k|,
// rescaled per agent by b_i = 2E/Var of the unrescaled action so the result
// keeps the signal-counting interpretation.
template <typename T>
StrategyProfile<T> planner_profile(const GenerationsSpec& spec, int T_gens);

// Mean r per generation from per-agent counts.
template <typename T>
std::vector<T> generation_means(const SignalCounts<T>& counts, int K);

// Consecutive differences of a per-generation series (entry t-2 holds
// r_t - r_{t-1}).
template <typename T>
std::vector<T> increment_series(const std::vector<T>& gen_series);

// Generations t >= first_t whose increment exceeds the bound.
template <typename T>
std::vector<int> increment_violations(const std::vector<T>& increments,
                                      const T& bound, int first_t);

// ---- template definitions ----

template <typename T>
T symmetric_efficiency_exact(int d, int c, int K) {
    if (d < 1 || c < 0 || c > d || K < 1)
        throw InputError("symmetric efficiency: need d >= 1, 0 <= c <= d, K >= 1");
    if (c == 0 && d >= 2)
        throw InputError("symmetric efficiency: c = 0 forces d = 1");
    T num(d);
    num = num * (d - 1); // d^2 - d
    T rate(1);
    if (d >= 2)
        rate += num / (num + T(c));
    return rate / T(K);
}

template <typename T>
T cancellation_efficiency_exact(int K) {
    if (K < 2)
        throw InputError("cancellation efficiency: need K >= 2");
    Rational ref = (Rational(2) - Rational(1) / Rational(K)) / Rational(K);
    // every (d, c) with c(K-1) = d(d-1), 1 <= c < d reproduces the same value
    for (int d = 2; d <= K; ++d) {
        long long prod = 1LL * d * (d - 1);
        if (prod % (K - 1) != 0)
            continue;
        long long c = prod / (K - 1);
        if (c < 1 || c >= d)
            continue;
        if (symmetric_efficiency_exact<Rational>(d, int(c), K) != ref)
            throw NumericError("cancellation efficiency self-check failed");
    }
    return (T(2) - T(1) / T(K)) / T(K);
}

template <typename T>
std::vector<GenerationMoments<T>> moment_recursion(int d, int c, const T& sigma2,
                                                   int T_gens) {
    if (d < 1 || c < 0 || c > d)
        throw InputError("moment recursion: need d >= 1 and 0 <= c <= d");
    if (c == 0 && d >= 2)
        throw InputError("moment recursion: c = 0 forces d = 1");
    if (!(sigma2 > T(0)))
        throw InputError("moment recursion: sigma2 must be positive");
    if (T_gens < 1)
        throw InputError("moment recursion: need at least one generation");
    std::vector<GenerationMoments<T>> out;
    out.reserve(size_t(T_gens));
    T base = T(4) / sigma2;
    GenerationMoments<T> cur{1, base, T(0), T(0)};
    out.push_back(cur);
    for (int t = 2; t <= T_gens; ++t) {
        T beta = cur.var / (cur.var + T(d - 1) * cur.cov);
        T b2 = beta * beta;
        GenerationMoments<T> next;
        next.t = t;
        next.beta = beta;
        next.var = base + b2 * (T(d) * cur.var + T(d) * T(d - 1) * cur.cov);
        next.cov = b2 * (T(c) * cur.var + (T(d) * T(d) - T(c)) * cur.cov);
        out.push_back(next);
        cur = next;
    }
    return out;
}

template <typename T>
std::vector<T> generation_counts(const std::vector<GenerationMoments<T>>& moments,
                                 const T& sigma2) {
    std::vector<T> r;
    r.reserve(moments.size());
    for (const auto& m : moments)
        r.push_back(m.var * sigma2 / T(4));
    return r;
}

template <typename T>
StrategyProfile<T> planner_profile(const GenerationsSpec& spec, int T_gens) {
    GenerationsSpec run = spec;
    run.generations = T_gens;
    SymmetryReport rep = validate_symmetry(run);
    if (!rep.is_symmetric || rep.c < 1 || !rep.strongly_connected)
        throw InputError("planner profile needs a symmetric, strongly connected "
                         "spec with c >= 1");
    std::vector<T> pi;
    if constexpr (scalar_traits<T>::exact) {
        pi = stationary_exact(run);
    } else {
        PositionChain chain = stationary_distribution(run);
        pi.assign(chain.stationary.begin(), chain.stationary.end());
    }
    Network net = build_generations(run);
    int K = run.K;

    StrategyProfile<T> unresc;
    unresc.tag = ProfileTag::planner;
    unresc.own.assign(size_t(net.n) + 1, T(0));
    unresc.nbr.assign(size_t(net.n) + 1, {});
    for (int i = 1; i <= net.n; ++i) {
        int k = position_of(i, K);
        unresc.own[size_t(i)] = T(1) / pi[size_t(k - 1)];
        size_t deg = net.neighbors[size_t(i)].size();
        if (deg > 0)
            unresc.nbr[size_t(i)].assign(deg, T(1) / T(int(deg)));
    }

    WeightMatrix<T> rows = induced_rows(net, unresc);
    std::vector<T> b(size_t(net.n) + 1, T(1));
    for (int i = 1; i <= net.n; ++i) {
        T s1 = rows[size_t(i)].sum();
        T s2 = rows[size_t(i)].sum_sq();
        b[size_t(i)] = s1 / s2; // 2E/Var in sigma2-free form
    }

    StrategyProfile<T> prof;
    prof.tag = ProfileTag::planner;
    prof.own.assign(size_t(net.n) + 1, T(0));
    prof.nbr.assign(size_t(net.n) + 1, {});
    for (int i = 1; i <= net.n; ++i) {
        prof.own[size_t(i)] = b[size_t(i)] * unresc.own[size_t(i)];
        const auto& nb = net.neighbors[size_t(i)];
        auto& w = prof.nbr[size_t(i)];
        w.reserve(nb.size());
        for (size_t k = 0; k < nb.size(); ++k)
            w.push_back(b[size_t(i)] * unresc.nbr[size_t(i)][k] / b[size_t(nb[k])]);
    }
    return prof;
}

template <typename T>
std::vector<T> generation_means(const SignalCounts<T>& counts, int K) {
    int n = int(counts.r.size()) - 1;
    if (K < 1 || n < 1 || n % K != 0)
        throw InputError("generation means: counts do not cover whole generations");
    int T_gens = n / K;
    std::vector<T> out;
    out.reserve(size_t(T_gens));
    for (int t = 1; t <= T_gens; ++t) {
        T acc(0);
        for (int k = 1; k <= K; ++k)
            acc += counts.r[size_t((t - 1) * K + k)];
        out.push_back(acc / T(K));
    }
    return out;
}

template <typename T>
std::vector<T> increment_series(const std::vector<T>& gen_series) {
    std::vector<T> inc;
    if (gen_series.size() < 2)
        return inc;
    inc.reserve(gen_series.size() - 1);
    for (size_t t = 1; t < gen_series.size(); ++t)
        inc.push_back(gen_series[t] - gen_series[t - 1]);
    return inc;
}

template <typename T>
std::vector<int> increment_violations(const std::vector<T>& increments,
                                      const T& bound, int first_t) {
    std::vector<int> bad;
    for (size_t k = 0; k < increments.size(); ++k) {
        int t = int(k) + 2; // increments[k] is r_{k+2} - r_{k+1}
        if (t >= first_t && increments[k] > bound)
            bad.push_back(t);
    }
    return bad;
}

} // namespace aggnet
