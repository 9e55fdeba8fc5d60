#pragma once

// Independent reference implementation used only by tests. Computes every
// agent's log-action as a dense rational vector over the log-signals via the
// explicit-variance route: mu_j = (2/sigma2) S1(row_j), Cov_jk =
// (4/sigma2) <row_j, row_k>, beta = 2 Cov^{-1} mu, solved by Gauss-Jordan
// elimination with partial pivoting. Deliberately shares no code with the
// library's fraction-free scale-free recursion.

#include <stdexcept>
#include <vector>

#include "aggnet/network.hpp"
#include "aggnet/rational.hpp"
#include "aggnet/rng.hpp"

namespace oracle {

using aggnet::Network;
using aggnet::Rational;

struct DenseEquilibrium {
    // rows[i][j] is the weight of log-signal j in agent i's log-action;
    // index 0 unused on both axes
    std::vector<std::vector<Rational>> rows;
    std::vector<std::vector<Rational>> beta; // parallel to neighbors
};

inline std::vector<Rational> gj_solve(std::vector<std::vector<Rational>> A,
                                      std::vector<Rational> b) {
    int n = int(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        Rational best(0);
        for (int r = col; r < n; ++r) {
            Rational mag = abs(A[size_t(r)][size_t(col)]);
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (piv < 0)
            throw std::runtime_error("oracle: singular system");
        std::swap(A[size_t(piv)], A[size_t(col)]);
        std::swap(b[size_t(piv)], b[size_t(col)]);
        Rational d = A[size_t(col)][size_t(col)];
        for (int j = 0; j < n; ++j)
            A[size_t(col)][size_t(j)] /= d;
        b[size_t(col)] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col)
                continue;
            Rational f = A[size_t(r)][size_t(col)];
            if (f == 0)
                continue;
            for (int j = 0; j < n; ++j)
                A[size_t(r)][size_t(j)] -= f * A[size_t(col)][size_t(j)];
            b[size_t(r)] -= f * b[size_t(col)];
        }
    }
    return b;
}

inline DenseEquilibrium dense_equilibrium(const Network& net,
                                          const Rational& sigma2) {
    int n = net.n;
    Rational mean1 = Rational(2) / sigma2; // conditional mean of a log-signal
    Rational var1 = Rational(4) / sigma2;  // its conditional variance
    DenseEquilibrium eq;
    eq.rows.assign(size_t(n) + 1,
                   std::vector<Rational>(size_t(n) + 1, Rational(0)));
    eq.beta.assign(size_t(n) + 1, {});
    for (int i = 1; i <= n; ++i) {
        const auto& nb = net.neighbors[size_t(i)];
        int d = int(nb.size());
        std::vector<Rational> beta;
        if (d > 0) {
            std::vector<std::vector<Rational>> C(
                size_t(d), std::vector<Rational>(size_t(d), Rational(0)));
            std::vector<Rational> mu(size_t(d), Rational(0));
            for (int a = 0; a < d; ++a) {
                const auto& ra = eq.rows[size_t(nb[size_t(a)])];
                for (int m = 1; m <= n; ++m)
                    mu[size_t(a)] += ra[size_t(m)];
                mu[size_t(a)] *= mean1;
                for (int bcol = 0; bcol < d; ++bcol) {
                    const auto& rb = eq.rows[size_t(nb[size_t(bcol)])];
                    Rational dot(0);
                    for (int m = 1; m <= n; ++m)
                        dot += ra[size_t(m)] * rb[size_t(m)];
                    C[size_t(a)][size_t(bcol)] = var1 * dot;
                }
            }
            std::vector<Rational> rhs(mu);
            for (auto& v : rhs)
                v *= 2;
            beta = gj_solve(C, rhs);
        }
        auto& row = eq.rows[size_t(i)];
        row[size_t(i)] += Rational(1);
        for (int a = 0; a < d; ++a) {
            const auto& ra = eq.rows[size_t(nb[size_t(a)])];
            for (int m = 1; m <= n; ++m)
                row[size_t(m)] += beta[size_t(a)] * ra[size_t(m)];
        }
        eq.beta[size_t(i)] = std::move(beta);
    }
    return eq;
}

// Random DAG on 1..n: each pair j < i becomes an edge with probability pct/100.
inline Network random_dag(aggnet::Philox& rng, int n, uint32_t pct) {
    Network net;
    net.n = n;
    net.neighbors.assign(size_t(n) + 1, {});
    net.signal_links.assign(size_t(n) + 1, 0);
    for (int i = 2; i <= n; ++i)
        for (int j = 1; j < i; ++j)
            if (rng.below(100) < pct)
                net.neighbors[size_t(i)].push_back(j);
    return net;
}

} // namespace oracle
