#include "gsd/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace gsd::stat {

namespace {

constexpr double kPi = 3.14159265358979323846;

GaussLegendre make_rule(int n) {
    // Newton iteration on Legendre polynomials, cos-spaced starting values
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

std::mutex g_rule_mutex;
std::map<int, GaussLegendre> g_rules;

struct Interval {
    double a, b;
    double value;  // GL31 estimate
    double error;  // |GL31 - GL15|
    bool operator<(const Interval& o) const { return error < o.error; }
};

template <class F>
Interval evaluate(F&& f, double a, double b, long& evals) {
    const GaussLegendre& lo = gauss_legendre(15);
    const GaussLegendre& hi = gauss_legendre(31);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s_lo = 0.0, s_hi = 0.0;
    for (int i = 0; i < 15; ++i) s_lo += lo.weights[i] * f(c + h * lo.nodes[i]);
    for (int i = 0; i < 31; ++i) s_hi += hi.weights[i] * f(c + h * hi.nodes[i]);
    evals += 46;
    return {a, b, h * s_hi, std::fabs(h * (s_hi - s_lo))};
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: order must be >= 1");
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end()) it = g_rules.emplace(n, make_rule(n)).first;
    return it->second;
}

IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, long max_evals) {
    if (!(b > a)) return {0.0, 0.0, 0};
    long evals = 0;
    std::priority_queue<Interval> queue;
    queue.push(evaluate(f, a, b, evals));
    double total_value = queue.top().value;
    double active_error = queue.top().error;
    double frozen_error = 0.0;  // error on intervals too narrow to split further
    while (active_error + frozen_error > abs_tol) {
        if (evals >= max_evals || queue.empty())
            throw IntegrationError("integrate_adaptive: tolerance not reached",
                                   active_error + frozen_error);
        const Interval worst = queue.top();
        queue.pop();
        active_error -= worst.error;
        if (worst.b - worst.a < 1e-14 * (b - a)) {
            frozen_error += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Interval left = evaluate(f, worst.a, mid, evals);
        const Interval right = evaluate(f, mid, worst.b, evals);
        total_value += left.value + right.value - worst.value;
        active_error += left.error + right.error;
        queue.push(left);
        queue.push(right);
    }
    return {total_value, active_error + frozen_error, evals};
}

double integrate_against_density(const std::function<double(double)>& f,
                                 const std::function<double(double)>& density_pdf,
                                 const std::function<double(double)>& quantile,
                                 double abs_tol) {
    const double lo = quantile(1e-9);
    const double hi = quantile(1.0 - 1e-9);
    auto g = [&](double x) { return f(x) * density_pdf(x); };
    // interior quantile splits keep the adaptive pass from over-refining one
    // long interval when the density is sharply peaked
    const double q1 = quantile(0.25), q2 = quantile(0.5), q3 = quantile(0.75);
    const double edges[5] = {lo, q1, q2, q3, hi};
    double total = 0.0;
    for (int i = 0; i < 4; ++i)
        total += integrate_adaptive(g, edges[i], edges[i + 1], abs_tol / 5.0).value;
    return total;
}

}  // namespace gsd::stat
