#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aggnet/errors.hpp"
#include "aggnet/linalg.hpp"
#include "aggnet/network.hpp"
#include "aggnet/rational.hpp"
#include "aggnet/tolerance.hpp"

namespace aggnet {

// Log-signal scaling: lambda_i = (2/sigma2) s_i, conditionally
// N(+-2/sigma2, 4/sigma2).
struct LogSignalParams {
    double sigma2 = 1.0;
    double mean2() const { return 2.0 / sigma2; }
    double var4() const { return 4.0 / sigma2; }
};

// One weight-matrix row: a log-action written as a combination of log-signals.
// Stored sparse over its support (the agent's indirect neighborhood plus the
// agent itself), indices ascending.
template <typename T>
struct WeightRow {
    std::vector<int> idx;
    std::vector<T> w;

    T sum() const {
        T acc(0);
        for (const T& v : w)
            acc += v;
        return acc;
    }
    T sum_sq() const {
        T acc(0);
        for (const T& v : w)
            acc += v * v;
        return acc;
    }
};

template <typename T>
using WeightMatrix = std::vector<WeightRow<T>>; // size n+1, [0] unused

template <typename T>
struct BetaProfile {
    std::vector<std::vector<T>> beta; // size n+1, parallel to neighbors
};

struct EfficiencyEstimate {
    double value = 0.0;
    int window = 0;
};

template <typename T>
struct SignalCounts {
    std::vector<T> r; // size n+1, [0] unused
    std::optional<EfficiencyEstimate> efficiency_tail;
};

enum class ProfileTag { equilibrium, planner, custom };

inline std::string profile_tag_name(ProfileTag t) {
    switch (t) {
    case ProfileTag::equilibrium: return "equilibrium";
    case ProfileTag::planner: return "planner";
    case ProfileTag::custom: return "custom";
    }
    return "custom";
}

// General log-linear strategy: own[i] on the agent's log-signal plus nbr[i]
// on observed log-actions, parallel to N(i).
template <typename T>
struct StrategyProfile {
    ProfileTag tag = ProfileTag::custom;
    std::vector<T> own;              // size n+1, [0] unused
    std::vector<std::vector<T>> nbr; // size n+1, [0] unused

    void check_against(const Network& net) const {
        if (int(own.size()) != net.n + 1 || int(nbr.size()) != net.n + 1)
            throw InputError("strategy profile does not cover every agent");
        for (int i = 1; i <= net.n; ++i)
            if (nbr[size_t(i)].size() != net.neighbors[size_t(i)].size())
                throw InputError("strategy profile weights do not match N(" +
                                 std::to_string(i) + ")");
    }
};

template <typename T>
struct EquilibriumResult {
    WeightMatrix<T> W;
    BetaProfile<T> beta;
};

template <typename T>
struct BestResponse {
    std::vector<T> beta;
    T own = T(1);
    T r = T(0);
    bool degenerate = false; // float backend fell back to minimum-norm
};

namespace detail {

template <typename T>
T row_dot(const WeightRow<T>& a, const WeightRow<T>& b) {
    T acc(0);
    size_t x = 0, y = 0;
    while (x < a.idx.size() && y < b.idx.size()) {
        if (a.idx[x] == b.idx[y]) {
            acc += a.w[x] * b.w[y];
            ++x;
            ++y;
        } else if (a.idx[x] < b.idx[y]) {
            ++x;
        } else {
            ++y;
        }
    }
    return acc;
}

// Accumulates sparse rows into a scratch vector, then emits the merged row.
// Reused across agents so the scratch allocation is paid once.
template <typename T>
class RowMerger {
public:
    explicit RowMerger(int n) : scratch_(size_t(n) + 1, T(0)), mark_(size_t(n) + 1, 0) {}

    void add(const WeightRow<T>& row, const T& coef) {
        for (size_t k = 0; k < row.idx.size(); ++k)
            add_entry(row.idx[k], coef * row.w[k]);
    }

    void add_entry(int j, const T& v) {
        if (!mark_[size_t(j)]) {
            mark_[size_t(j)] = 1;
            touched_.push_back(j);
            scratch_[size_t(j)] = v;
        } else {
            scratch_[size_t(j)] += v;
        }
    }

    WeightRow<T> take() {
        std::sort(touched_.begin(), touched_.end());
        WeightRow<T> out;
        out.idx = touched_;
        out.w.reserve(touched_.size());
        for (int j : touched_) {
            out.w.push_back(scratch_[size_t(j)]);
            scratch_[size_t(j)] = T(0);
            mark_[size_t(j)] = 0;
        }
        touched_.clear();
        return out;
    }

private:
    std::vector<T> scratch_;
    std::vector<char> mark_;
    std::vector<int> touched_;
};

// Solves (W_hat W_hat') beta = W_hat 1 from the observed rows. The rhs entries
// are the neighbors' full row sums. equilibrium_path selects the singularity
// policy: equilibrium systems must be positive definite, custom profiles may
// fall back to minimum-norm least squares (float backend only).
template <typename T>
std::vector<T> solve_beta(const std::vector<const WeightRow<T>*>& rows,
                          const std::vector<T>& rhs, bool equilibrium_path,
                          bool* degenerate) {
    int d = int(rows.size());
    Matrix<T> gram(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) {
            T v = row_dot(*rows[size_t(a)], *rows[size_t(b)]);
            gram(a, b) = v;
            gram(b, a) = v;
        }
    }
    if constexpr (scalar_traits<T>::exact) {
        // no exact minimum-norm fallback: singular custom profiles are a
        // float-backend feature
        return solve_spd_exact(gram, rhs, "neighbor-action system");
    } else {
        FloatSolve sol = solve_spd_float(gram, rhs, !equilibrium_path,
                                         "neighbor-action system");
        if (degenerate)
            *degenerate = sol.degenerate;
        return sol.x;
    }
}

} // namespace detail

// Unique equilibrium weights by the inductive row recursion: each agent's
// log-action is lambda_i plus the beta-combination of observed log-actions,
// and beta solves the SPD normal system built from the observed rows. No
// sigma2 anywhere: the weights are scale-free.
template <typename T>
EquilibriumResult<T> equilibrium_weights(const Network& net) {
    net.validate();
    if (net.has_signal_links())
        throw InputError("equilibrium_weights: network has signal links; "
                         "use mentorship_weights");
    EquilibriumResult<T> res;
    res.W.assign(size_t(net.n) + 1, {});
    res.beta.beta.assign(size_t(net.n) + 1, {});
    std::vector<T> rowsum(size_t(net.n) + 1, T(0));
    detail::RowMerger<T> merger(net.n);
    for (int i = 1; i <= net.n; ++i) {
        const auto& nb = net.neighbors[size_t(i)];
        if (nb.empty()) {
            res.W[size_t(i)].idx = {i};
            res.W[size_t(i)].w = {T(1)};
            rowsum[size_t(i)] = T(1);
            continue;
        }
        std::vector<const WeightRow<T>*> rows;
        std::vector<T> rhs;
        rows.reserve(nb.size());
        rhs.reserve(nb.size());
        for (int j : nb) {
            rows.push_back(&res.W[size_t(j)]);
            rhs.push_back(rowsum[size_t(j)]);
        }
        std::vector<T> beta = detail::solve_beta<T>(rows, rhs, true, nullptr);
        for (size_t k = 0; k < nb.size(); ++k)
            merger.add(*rows[k], beta[k]);
        merger.add_entry(i, T(1));
        res.W[size_t(i)] = merger.take();
        rowsum[size_t(i)] = res.W[size_t(i)].sum();
        res.beta.beta[size_t(i)] = std::move(beta);
    }
    return res;
}

// beta = 2 mu' cov^{-1}, the sigma2-explicit route. Serves as the oracle path
// against the scale-free recursion.
inline std::vector<double> beta_from_moments(const std::vector<double>& mu,
                                             const Matrix<double>& cov) {
    if (cov.rows != cov.cols || int(mu.size()) != cov.rows)
        throw InputError("beta_from_moments: dimension mismatch");
    FloatSolve sol = solve_spd_float(cov, mu, false, "beta_from_moments");
    for (double& v : sol.x)
        v *= 2.0;
    return sol.x;
}

// r_i = sum_j w_ij, with the signal-counting identity sum w = sum w^2 asserted
// (exact in the rational backend, tolerance-checked in float).
template <typename T>
SignalCounts<T> signal_counts(const WeightMatrix<T>& W) {
    SignalCounts<T> sc;
    sc.r.assign(W.size(), T(0));
    for (size_t i = 1; i < W.size(); ++i) {
        T s1 = W[i].sum();
        T s2 = W[i].sum_sq();
        bool ok;
        if constexpr (scalar_traits<T>::exact)
            ok = (s1 == s2);
        else
            ok = near(to_double(s1), to_double(s2));
        if (!ok)
            throw NumericError("signal-counting identity violated at agent " +
                               std::to_string(i) + " (sum " +
                               std::to_string(to_double(s1)) + ", sum of squares " +
                               std::to_string(to_double(s2)) + ")");
        sc.r[i] = s1;
    }
    return sc;
}

// Conditional mean and variance of the row's log-action given the high state.
template <typename T>
std::pair<double, double> action_moments(const WeightMatrix<T>& W, int i,
                                         const LogSignalParams& params) {
    if (i < 1 || i >= int(W.size()))
        throw InputError("action_moments: agent out of range");
    const WeightRow<T>& row = W[size_t(i)];
    return {params.mean2() * to_double(row.sum()),
            params.var4() * to_double(row.sum_sq())};
}

// Mean of r_i/i over the last `window` agents.
template <typename T>
EfficiencyEstimate efficiency_estimate(const SignalCounts<T>& sc, int window) {
    int n = int(sc.r.size()) - 1;
    if (window < 1 || window > n)
        throw InputError("efficiency window out of range");
    double acc = 0.0;
    for (int i = n - window + 1; i <= n; ++i)
        acc += to_double(sc.r[size_t(i)]) / double(i);
    return {acc / double(window), window};
}

// Rows induced by an arbitrary log-linear profile, by forward substitution:
// row_i = own_i e_i + sum_k nbr_{i,k} row_{j(k)}. Computes agents 1..limit.
template <typename T>
WeightMatrix<T> induced_rows(const Network& net, const StrategyProfile<T>& prof,
                             int limit) {
    prof.check_against(net);
    if (limit < 0 || limit > net.n)
        throw InputError("induced_rows: limit out of range");
    WeightMatrix<T> W(size_t(net.n) + 1);
    detail::RowMerger<T> merger(net.n);
    for (int i = 1; i <= limit; ++i) {
        const auto& nb = net.neighbors[size_t(i)];
        for (size_t k = 0; k < nb.size(); ++k)
            merger.add(W[size_t(nb[k])], prof.nbr[size_t(i)][k]);
        if (!(prof.own[size_t(i)] == T(0)))
            merger.add_entry(i, prof.own[size_t(i)]);
        W[size_t(i)] = merger.take();
    }
    return W;
}

template <typename T>
WeightMatrix<T> induced_rows(const Network& net, const StrategyProfile<T>& prof) {
    return induced_rows(net, prof, net.n);
}

// Best response of agent i to arbitrary predecessor strategies: the same
// normal-system formula applied to the profile-induced rows. Own-signal weight
// is 1 and the result keeps the signal-counting interpretation.
template <typename T>
BestResponse<T> best_response(const Network& net, const StrategyProfile<T>& prof,
                              int i) {
    net.validate();
    if (i < 1 || i > net.n)
        throw InputError("best_response: agent out of range");
    WeightMatrix<T> W = induced_rows(net, prof, i - 1);
    const auto& nb = net.neighbors[size_t(i)];
    BestResponse<T> out;
    if (nb.empty()) {
        out.r = T(1);
        return out;
    }
    std::vector<const WeightRow<T>*> rows;
    std::vector<T> rhs;
    rows.reserve(nb.size());
    rhs.reserve(nb.size());
    for (int j : nb) {
        rows.push_back(&W[size_t(j)]);
        rhs.push_back(W[size_t(j)].sum());
    }
    out.beta = detail::solve_beta<T>(rows, rhs, false, &out.degenerate);
    out.r = T(1);
    for (size_t k = 0; k < nb.size(); ++k)
        out.r += out.beta[k] * rhs[k];
    return out;
}

// Signal count of an outside observer who holds no signal and sees only agent
// j's action under the profile: measures how informative that behavior is.
template <typename T>
T observer_informativeness(const Network& net, const StrategyProfile<T>& prof,
                           int j) {
    if (j < 1 || j > net.n)
        throw InputError("observer_informativeness: agent out of range");
    WeightMatrix<T> W = induced_rows(net, prof, j);
    T s1 = W[size_t(j)].sum();
    T s2 = W[size_t(j)].sum_sq();
    if (s2 == T(0))
        return T(0);
    return s1 * s1 / s2;
}

template <typename T>
struct MentorshipResult {
    WeightMatrix<T> W;
    SignalCounts<T> counts;
};

// Mentorship equilibrium: every agent decodes the previous generation's pooled
// signals exactly, so the generation-t row is all ones on agents up to
// (t-1)K plus itself, and r = K(t-1)+1. The network must carry the
// position-matched signal links of build_mentorship.
template <typename T>
MentorshipResult<T> mentorship_weights(const Network& net) {
    net.validate();
    // infer K from the first generation (agents with no neighbors)
    int K = 0;
    while (K < net.n && net.neighbors[size_t(K + 1)].empty())
        ++K;
    if (K == 0)
        throw InputError("mentorship_weights: no first generation found");
    if (net.n % K != 0)
        throw InputError("mentorship_weights: agent count is not a whole "
                         "number of generations");
    int T_gens = net.n / K;
    for (int t = 1; t <= T_gens; ++t) {
        for (int k = 1; k <= K; ++k) {
            int i = (t - 1) * K + k;
            const auto& nb = net.neighbors[size_t(i)];
            int link = net.signal_links[size_t(i)];
            if (t == 1) {
                if (!nb.empty() || link != 0)
                    throw InputError("mentorship_weights: malformed first generation");
                continue;
            }
            bool full_prev = int(nb.size()) == K;
            for (int k2 = 0; full_prev && k2 < K; ++k2)
                full_prev = nb[size_t(k2)] == (t - 2) * K + k2 + 1;
            if (!full_prev || link != i - K)
                throw InputError("mentorship_weights: agent " + std::to_string(i) +
                                 " does not follow the mentorship pattern");
        }
    }
    MentorshipResult<T> res;
    res.W.assign(size_t(net.n) + 1, {});
    for (int i = 1; i <= net.n; ++i) {
        int t = generation_of(i, K);
        auto& row = res.W[size_t(i)];
        for (int j = 1; j <= (t - 1) * K; ++j) {
            row.idx.push_back(j);
            row.w.push_back(T(1));
        }
        row.idx.push_back(i);
        row.w.push_back(T(1));
    }
    res.counts = signal_counts(res.W);
    return res;
}

// The equilibrium strategies as a profile (own weight 1, neighbor weights
// beta), for simulation and best-response consistency checks.
template <typename T>
StrategyProfile<T> equilibrium_profile(const Network& net,
                                       const EquilibriumResult<T>& eq) {
    StrategyProfile<T> prof;
    prof.tag = ProfileTag::equilibrium;
    prof.own.assign(size_t(net.n) + 1, T(1));
    prof.nbr = eq.beta.beta;
    return prof;
}

template <typename T>
StrategyProfile<double> profile_to_float(const StrategyProfile<T>& p) {
    StrategyProfile<double> out;
    out.tag = p.tag;
    out.own.reserve(p.own.size());
    for (const T& v : p.own)
        out.own.push_back(to_double(v));
    out.nbr.reserve(p.nbr.size());
    for (const auto& row : p.nbr) {
        std::vector<double> r;
        r.reserve(row.size());
        for (const T& v : row)
            r.push_back(to_double(v));
        out.nbr.push_back(std::move(r));
    }
    return out;
}

// Counts as a plain series: element k is agent k+1's r, as double.
template <typename T>
std::vector<double> r_series(const SignalCounts<T>& sc) {
    std::vector<double> out;
    if (sc.r.size() <= 1)
        return out;
    out.reserve(sc.r.size() - 1);
    for (size_t i = 1; i < sc.r.size(); ++i)
        out.push_back(to_double(sc.r[i]));
    return out;
}

} // namespace aggnet
