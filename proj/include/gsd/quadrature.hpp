#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsd::stat {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending, weights positive.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of the requested order, computed once and cached. Thread-safe.
const GaussLegendre& gauss_legendre(int n);

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;  // achieved error estimate
    long evals = 0;
};

class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

  private:
    double achieved_;
};

/// Globally adaptive integration of f over [a, b]: intervals with the largest
/// GL15-vs-GL31 disagreement are bisected until the summed estimate meets
/// abs_tol. Robust to bounded integrands with step discontinuities (the
/// error estimate near a jump decays linearly with interval width).
/// Throws IntegrationError carrying the achieved estimate when the evaluation
/// budget is exhausted first.
IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, long max_evals = 4'000'000);

/// Integral of f against a normalized density over (0, inf), per the domain
/// split policy: the domain is truncated at the density's 1e-9 and 1-1e-9
/// quantiles (the neglected mass is below 2e-9 for f bounded in [0,1]) and
/// integrated adaptively inside. `quantile` maps p in (0,1) to the
/// density's p-quantile.
double integrate_against_density(const std::function<double(double)>& f,
                                 const std::function<double(double)>& density_pdf,
                                 const std::function<double(double)>& quantile,
                                 double abs_tol);

}  // namespace gsd::stat
