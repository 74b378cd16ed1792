#pragma once

#include "hessquot/cone_sampler.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace hessquot {

/// Outcome of one randomized check.  Margins are oriented so that a
/// nonnegative value means the relation held; they are normalized by
/// max(|lhs|, |rhs|, 1) so reports are comparable across sample scales.
struct CheckReport {
    std::string name;
    int samples = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double tolerance = 1e-9;
    int failure_count = 0;
    std::vector<std::string> failures;  // offending inputs, capped for replay

    bool passed() const { return failure_count == 0; }
    nlohmann::json to_json() const;
};

/// The explicit constants appearing in the cone inequalities:
///   c0 = min{ eps^2 del^2 / (2(n-2)(n-1)),  eps^2 del / (4(n-1)) }
///   c1 = (n/k) ((k-l)/(n-l)) c0^2 / (n-k+1)
///   c2 = n(k-l) / (k (n-l) (n-k+1))
///   c3 = ((k-l)/k) / C(n,l)
struct ConeInequalityConstants {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    static ConeInequalityConstants compute(int n, int k, int l, double delta, double epsilon);
};

/// sigma_k = sigma_k(.|i) + lambda_i sigma_{k-1}(.|i); Euler identity; minor sum.
CheckReport check_sigma_identities(int n, int k, int samples, std::uint64_t seed, int threads = 1);

/// For sorted lambda in Gamma_k: minor chain monotonicity, lambda_k > 0 with
/// the product upper bound, and lambda_1 sigma_{k-1}(.|1) >= (k/n) sigma_k.
CheckReport check_sorted_cone_bounds(int n, int k, int samples, std::uint64_t seed, int threads = 1);

/// Normalized ratio means are monotone across admissible (r, s) pairs.
CheckReport check_maclaurin_monotonicity(int n, int k, int l, int samples, std::uint64_t seed,
                                         int threads = 1);

/// With a negative leading eigenvalue: sigma_m(.|0) >= sigma_m for m <= k, and
/// dF/dlambda_0 >= c2 * sum_i dF/dlambda_i.
CheckReport check_negative_first_dominance(int n, int k, int l, int samples, std::uint64_t seed,
                                           int threads = 1);

/// Matrix form on arrow-shaped A with A(0,0) < 0: dF/dA_00 >= c2 * trace(DF)
/// and trace(DF) >= c3 * (-A_00)^{k-l-1}.
CheckReport check_arrow_matrix_dominance(int n, int k, int l, int samples, std::uint64_t seed,
                                         int threads = 1);

/// Pinched spectra (lambda_0 >= delta*lambda_1, -lambda_{n-1} >= eps*lambda_0):
/// sigma_m(.|0) >= c0 sigma_m for m <= k-1 and dF/dlambda_0 >= c1 * sum_i.
CheckReport check_pinched_dominance(int n, int k, int l, double delta, double epsilon, int samples,
                                    std::uint64_t seed, int threads = 1);

/// The matrix derivative at diagonal A agrees with sigma_gradient.
CheckReport check_diagonal_gradient_consistency(int n, int k, int samples, std::uint64_t seed,
                                                int threads = 1);

struct SuiteConfig {
    int n_min = 3;
    int n_max = 6;
    int samples = 10000;
    std::uint64_t seed = 7;
    int threads = 0;  // 0 = hardware
    double delta = 0.1;
    double epsilon = 0.1;
};

/// Every check over the full (n, k, l) matrix; constraints that force a
/// negative eigenvalue are run for k < n only.
std::vector<CheckReport> run_inequality_suite(const SuiteConfig& cfg);

}  // namespace hessquot
