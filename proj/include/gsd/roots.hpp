#pragma once

#include <functional>

namespace gsd::stat {

struct RootOptions {
    double tol = 1e-10;          // on |g(x)| or bracket width
    int max_iter = 200;
    bool expand_bracket = true;  // widen geometrically until the sign changes
    double expand_limit = 64.0;  // max factor applied to the initial width
};

/// Root of a continuous function with a sign change on [lo, hi] (Brent).
/// If the bracket does not straddle a root and expansion is allowed, the
/// bracket is widened geometrically about its midpoint up to expand_limit
/// times its width; failing that, throws std::runtime_error.
double find_root(const std::function<double(double)>& g, double lo, double hi,
                 const RootOptions& opt = {});

}  // namespace gsd::stat
