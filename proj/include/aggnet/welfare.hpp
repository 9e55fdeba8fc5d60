#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace aggnet {

struct UtilityCurve {
    double sigma2 = 1.0;
    std::vector<std::pair<double, double>> points; // (r, v)
};

// Nonnegative agent weights plus a weight on the limit utility. gammas[k]
// weights agent k+1; agents past the vector get weight 0.
struct WelfareWeights {
    std::vector<double> gammas;
    double gamma_inf = 0.0;
    int T = 1; // patience index: gammas[i-1] = 0 for i < T

    void validate() const;
    // Weights delta^(i-T) for i >= T, zero before, truncated at `length`.
    static WelfareWeights t_patient_geometric(int T, double delta, int length);
};

struct AttainmentReport {
    std::optional<int> strong; // smallest I with v_i >= v_bar for all i >= I
    std::optional<int> weak;   // first i with v_i >= v_bar
    int horizon = 0;           // series length the report is relative to
    double v_bar = 0.0;
    double sigma2 = 1.0;
};

struct PatientCompare {
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    int sign = 0; // +1 if gamma_a > gamma_b, -1 if smaller, 0 if equal
    bool warn_a = false; // limit proxy used on a visibly unconverged series
    bool warn_b = false;
};

// Probability the action exceeds 1-eps in the high state when the log-action
// aggregates r signals of variance sigma2.
double accuracy_prob(double r, double sigma2, double eps);

// Mirror probability (action below eps in the low state); equals
// accuracy_prob by state symmetry.
double accuracy_prob_low(double r, double sigma2, double eps);

// Expected quadratic-loss utility of an action based on r signals; adaptive
// trapezoid quadrature refined until successive estimates differ by < 1e-10.
double expected_utility(double r, double sigma2);

UtilityCurve utility_curve(double sigma2, double r_min, double r_max, double step);

// v per agent; r_series[k] is agent k+1's count.
std::vector<double> welfare_series(const std::vector<double>& r_series,
                                   double sigma2);

AttainmentReport attainment(const std::vector<double>& r_series, double sigma2,
                            double v_bar);

// Weighted welfare sums of two equally long utility series; gamma_inf is
// applied to each final value as the limit proxy, with a warning flag when
// the last values still move by more than 1e-6 across `conv_lag` agents.
PatientCompare patient_compare(const std::vector<double>& v_a,
                               const std::vector<double>& v_b,
                               const WelfareWeights& weights, int conv_lag = 10);

} // namespace aggnet
