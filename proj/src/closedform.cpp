#include "aggnet/closedform.hpp"

#include <cmath>
#include <cstdlib>

namespace aggnet {

double maximal_efficiency(int K) {
    if (K < 1)
        throw InputError("maximal efficiency: need K >= 1");
    return double(2 * K - 1) / (double(K) * double(K));
}

double symmetric_efficiency(int d, int c, int K) {
    return to_double(symmetric_efficiency_exact<Rational>(d, c, K));
}

double cancellation_efficiency(int K) {
    return to_double(cancellation_efficiency_exact<Rational>(K));
}

SiloRates silo_rates(const std::vector<std::vector<int>>& partition) {
    if (partition.empty())
        throw InputError("silo rates: empty partition");
    SiloRates rates;
    rates.per_silo.reserve(partition.size());
    for (const auto& part : partition) {
        if (part.empty())
            throw InputError("silo rates: empty silo");
        double s = double(part.size());
        double rate = (2.0 * s - 1.0) / s;
        rates.per_silo.push_back(rate);
        rates.executive += rate;
    }
    return rates;
}

double maximal_beta(double mu_sum, double sigma2_sum, double sigma2, int K) {
    if (!(sigma2_sum > 0.0) || !(sigma2 > 0.0) || K < 1)
        throw InputError("maximal beta: need positive variances and K >= 1");
    double ratio = mu_sum * mu_sum / sigma2_sum;
    return (ratio + 1.0 / sigma2) / (double(K) * ratio + 1.0 / sigma2);
}

GenSummary generation_summary(double mean_prev, double var_prev, double cov_prev,
                              int K) {
    GenSummary s;
    s.mu_sum = double(K) * mean_prev;
    s.sigma2_sum = double(K) * var_prev + double(K) * double(K - 1) * cov_prev;
    return s;
}

namespace {

Matrix<double> square(const Matrix<double>& a) {
    Matrix<double> out(a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.rows; ++k) {
            double v = a(i, k);
            if (v == 0.0)
                continue;
            for (int j = 0; j < a.cols; ++j)
                out(i, j) += v * a(k, j);
        }
    return out;
}

Matrix<double> position_transition(const GenerationsSpec& spec) {
    Matrix<double> P(spec.K, spec.K);
    for (int k = 1; k <= spec.K; ++k) {
        const auto& obs = spec.psi[size_t(k - 1)];
        double p = 1.0 / double(obs.size());
        for (int j : obs)
            P(k - 1, j - 1) = p;
    }
    return P;
}

void require_symmetric(const GenerationsSpec& spec, const char* who) {
    SymmetryReport rep = validate_symmetry(spec);
    if (!rep.is_symmetric || rep.c < 1 || !rep.strongly_connected)
        throw InputError(std::string(who) +
                         ": needs a symmetric, strongly connected spec with c >= 1");
}

} // namespace

PositionChain stationary_distribution(const GenerationsSpec& spec) {
    require_symmetric(spec, "stationary distribution");
    PositionChain chain;
    chain.transition = position_transition(spec);
    int K = spec.K;

    Matrix<double> Q = chain.transition;
    bool converged = false;
    for (int it = 0; it < 10000 && !converged; ++it) {
        Matrix<double> R = square(Q);
        double diff = 0.0;
        for (size_t idx = 0; idx < Q.a.size(); ++idx)
            diff = std::max(diff, std::abs(R.a[idx] - Q.a[idx]));
        converged = diff < 1e-12;
        Q = R;
    }
    if (!converged)
        throw NumericError("position chain power iteration did not converge");

    double spread = 0.0;
    for (int j = 0; j < K; ++j)
        for (int i = 1; i < K; ++i)
            spread = std::max(spread, std::abs(Q(i, j) - Q(0, j)));
    if (spread > 1e-9)
        throw NumericError("position chain limit rows disagree");

    chain.stationary.assign(size_t(K), 0.0);
    for (int j = 0; j < K; ++j) {
        double acc = 0.0;
        for (int i = 0; i < K; ++i)
            acc += Q(i, j);
        chain.stationary[size_t(j)] = acc / double(K);
    }
    double total = 0.0;
    for (double v : chain.stationary)
        total += v;
    for (double& v : chain.stationary)
        v /= total;

    for (int j = 0; j < K; ++j) {
        double acc = 0.0;
        for (int i = 0; i < K; ++i)
            acc += chain.stationary[size_t(i)] * chain.transition(i, j);
        if (std::abs(acc - chain.stationary[size_t(j)]) > 1e-12)
            throw NumericError("stationary distribution residual too large");
    }
    return chain;
}

std::vector<Rational> stationary_exact(const GenerationsSpec& spec) {
    require_symmetric(spec, "stationary distribution");
    int K = spec.K;
    Matrix<Rational> A(K, K);
    std::vector<Rational> rhs(size_t(K), Rational(0));
    // pi' P = pi' on the first K-1 coordinates, then sum pi = 1
    for (int j = 1; j <= K; ++j) {
        const auto& obs = spec.psi[size_t(j - 1)];
        Rational p = Rational(1) / Rational(int(obs.size()));
        for (int k : obs)
            if (k - 1 < K - 1)
                A(k - 1, j - 1) += p;
    }
    for (int k = 0; k < K - 1; ++k)
        A(k, k) -= Rational(1);
    for (int j = 0; j < K; ++j)
        A(K - 1, j) = Rational(1);
    rhs[size_t(K - 1)] = Rational(1);
    std::vector<Rational> pi = solve_exact(A, rhs, "stationary distribution");
    for (const Rational& v : pi)
        if (!(v > 0))
            throw NumericError("stationary distribution has a nonpositive entry");
    return pi;
}

} // namespace aggnet
