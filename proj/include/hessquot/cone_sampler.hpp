#pragma once

#include "hessquot/spectral_operator.hpp"
#include "hessquot/symmetric_functions.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hessquot {

class InfeasibleSpecError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
class SamplingExhaustedError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// What a generated sample must satisfy.
///  - gamma_cone:        lambda in Gamma_k
///  - sorted_descending: lambda in Gamma_k, entries sorted descending
///  - negative_first:    lambda in Gamma_k with lambda_0 < 0 (needs k < n)
///  - pinched:           lambda in Gamma_k, lambda_1 >= ... >= lambda_{n-1},
///                       lambda_0 > 0 > lambda_{n-1}, lambda_0 >= delta*lambda_1,
///                       -lambda_{n-1} >= epsilon*lambda_0 (needs k >= 2, k < n)
///  - arrow_matrix:      symmetric A with A(0,0) < 0, lower-right block diagonal,
///                       lambda(A) in Gamma_k (needs k < n)
enum class ConeConstraint {
    gamma_cone,
    sorted_descending,
    negative_first,
    pinched,
    arrow_matrix,
};

struct SampleSpec {
    int n = 3;
    int k = 2;
    int l = 0;
    std::uint64_t seed = 0;
    int count = 1;
    ConeConstraint constraint = ConeConstraint::gamma_cone;
    double delta = 0.1;    // pinched mode only, in (0, 1]
    double epsilon = 0.1;  // pinched mode only, in (0, 1]
};

struct SampleBatch {
    std::vector<Spectrum> spectra;    // empty for arrow_matrix
    std::vector<SymMatrix> matrices;  // filled for arrow_matrix only
};

/// Draws exactly spec.count samples, each re-validated against the constraint
/// before return.  Same spec yields bitwise-identical output.  Throws
/// InfeasibleSpecError when the constraint cannot be met for (n, k) and
/// SamplingExhaustedError when the per-sample attempt budget (10^6) runs out.
SampleBatch sample(const SampleSpec& spec);

/// Single sample for stream position `index`; used by the check suite so that
/// results are independent of how samples are partitioned across threads.
Spectrum sample_spectrum_at(const SampleSpec& spec, std::uint64_t index);
SymMatrix sample_matrix_at(const SampleSpec& spec, std::uint64_t index);

/// Constraint predicate, exposed for re-validation in tests.
bool satisfies_constraint(const SampleSpec& spec, const Spectrum& lambda);
bool satisfies_constraint(const SampleSpec& spec, const SymMatrix& A);

}  // namespace hessquot
