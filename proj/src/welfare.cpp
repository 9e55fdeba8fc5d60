#include "aggnet/welfare.hpp"

#include <cmath>

#include "aggnet/errors.hpp"

namespace aggnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void check_count_domain(double r, double sigma2, const char* who) {
    if (!(r >= 1.0))
        throw InputError(std::string(who) + ": need r >= 1");
    if (!(sigma2 > 0.0))
        throw InputError(std::string(who) + ": need sigma2 > 0");
}

} // namespace

double accuracy_prob(double r, double sigma2, double eps) {
    check_count_domain(r, sigma2, "accuracy_prob");
    if (!(eps > 0.0) || !(eps < 0.5))
        throw InputError("accuracy_prob: need eps in (0, 0.5)");
    double L = std::log((1.0 - eps) / eps);
    double mean = 2.0 * r / sigma2;
    double sd = 2.0 * std::sqrt(r) / std::sqrt(sigma2);
    return 1.0 - normal_cdf((L - mean) / sd);
}

double accuracy_prob_low(double r, double sigma2, double eps) {
    check_count_domain(r, sigma2, "accuracy_prob");
    if (!(eps > 0.0) || !(eps < 0.5))
        throw InputError("accuracy_prob: need eps in (0, 0.5)");
    // log-action below ln(eps/(1-eps)) under the low-state distribution
    double L = std::log(eps / (1.0 - eps));
    double mean = -2.0 * r / sigma2;
    double sd = 2.0 * std::sqrt(r) / std::sqrt(sigma2);
    return normal_cdf((L - mean) / sd);
}

double expected_utility(double r, double sigma2) {
    check_count_domain(r, sigma2, "expected_utility");
    double m = 2.0 * r / sigma2;
    double s = 2.0 * std::sqrt(r) / std::sqrt(sigma2);
    auto estimate = [&](long long nodes) {
        double lo = -10.0, hi = 10.0;
        double h = (hi - lo) / double(nodes - 1);
        double acc = 0.0;
        for (long long k = 0; k < nodes; ++k) {
            double z = lo + double(k) * h;
            double x = m + s * z;
            double q = 1.0 / (1.0 + std::exp(x)); // 1 - logistic(x); 0 on overflow
            double f = q * q * std::exp(-0.5 * z * z);
            acc += (k == 0 || k == nodes - 1) ? 0.5 * f : f;
        }
        return -acc * h / std::sqrt(2.0 * kPi);
    };
    long long nodes = 201;
    double prev = estimate(nodes);
    for (int iter = 0; iter < 24; ++iter) {
        nodes = 2 * nodes - 1;
        double cur = estimate(nodes);
        if (std::abs(cur - prev) < 1e-10)
            return cur;
        prev = cur;
    }
    throw NumericError("expected_utility: quadrature did not settle");
}

UtilityCurve utility_curve(double sigma2, double r_min, double r_max, double step) {
    if (!(sigma2 > 0.0) || !(r_min >= 1.0) || !(r_max >= r_min) || !(step > 0.0))
        throw InputError("utility_curve: bad grid");
    UtilityCurve curve;
    curve.sigma2 = sigma2;
    long long count = (long long)std::floor((r_max - r_min) / step + 1e-9) + 1;
    curve.points.reserve(size_t(count));
    for (long long k = 0; k < count; ++k) {
        double r = r_min + double(k) * step;
        curve.points.emplace_back(r, expected_utility(r, sigma2));
    }
    return curve;
}

std::vector<double> welfare_series(const std::vector<double>& r_series,
                                   double sigma2) {
    std::vector<double> v;
    v.reserve(r_series.size());
    for (double r : r_series)
        v.push_back(expected_utility(r, sigma2));
    return v;
}

AttainmentReport attainment(const std::vector<double>& r_series, double sigma2,
                            double v_bar) {
    if (r_series.empty())
        throw InputError("attainment: empty series");
    if (!(v_bar > -0.25) || !(v_bar < 0.0))
        throw InputError("attainment: v_bar must lie in (-0.25, 0)");
    std::vector<double> v = welfare_series(r_series, sigma2);
    AttainmentReport rep;
    rep.horizon = int(v.size());
    rep.v_bar = v_bar;
    rep.sigma2 = sigma2;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] >= v_bar) {
            rep.weak = int(i) + 1;
            break;
        }
    int last_below = 0;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] < v_bar)
            last_below = int(i) + 1;
    if (last_below < int(v.size()))
        rep.strong = last_below + 1;
    return rep;
}

void WelfareWeights::validate() const {
    for (double g : gammas)
        if (!(g >= 0.0))
            throw InputError("welfare weights: gammas must be nonnegative");
    if (!(gamma_inf >= 0.0))
        throw InputError("welfare weights: gamma_inf must be nonnegative");
    if (T < 1)
        throw InputError("welfare weights: T must be at least 1");
    for (int i = 1; i < T && size_t(i) <= gammas.size(); ++i)
        if (gammas[size_t(i) - 1] != 0.0)
            throw InputError("welfare weights: gammas must vanish before T");
}

WelfareWeights WelfareWeights::t_patient_geometric(int T, double delta,
                                                   int length) {
    if (T < 1 || length < 1 || !(delta > 0.0) || !(delta <= 1.0))
        throw InputError("welfare weights: bad geometric parameters");
    WelfareWeights w;
    w.T = T;
    w.gammas.assign(size_t(length), 0.0);
    for (int i = T; i <= length; ++i)
        w.gammas[size_t(i) - 1] = std::pow(delta, i - T);
    return w;
}

PatientCompare patient_compare(const std::vector<double>& v_a,
                               const std::vector<double>& v_b,
                               const WelfareWeights& weights, int conv_lag) {
    if (v_a.size() != v_b.size())
        throw InputError("patient_compare: series lengths differ");
    if (v_a.empty())
        throw InputError("patient_compare: empty series");
    if (conv_lag < 1)
        throw InputError("patient_compare: conv_lag must be positive");
    weights.validate();
    size_t n = v_a.size();
    auto total = [&](const std::vector<double>& v) {
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double g = i < weights.gammas.size() ? weights.gammas[i] : 0.0;
            acc += g * v[i];
        }
        return acc + weights.gamma_inf * v[n - 1];
    };
    auto unconverged = [&](const std::vector<double>& v) {
        if (weights.gamma_inf <= 0.0 || n <= size_t(conv_lag))
            return false;
        return std::abs(v[n - 1] - v[n - 1 - size_t(conv_lag)]) > 1e-6;
    };
    PatientCompare out;
    out.gamma_a = total(v_a);
    out.gamma_b = total(v_b);
    out.sign = out.gamma_a > out.gamma_b ? 1 : (out.gamma_a < out.gamma_b ? -1 : 0);
    out.warn_a = unconverged(v_a);
    out.warn_b = unconverged(v_b);
    return out;
}

} // namespace aggnet
