#include "hessquot/cone_sampler.hpp"

#include "hessquot/rng.hpp"

#include <algorithm>
#include <cmath>

namespace hessquot {

namespace {

constexpr int kAttemptBudget = 1'000'000;

void validate_spec(const SampleSpec& spec) {
    HessianPair check(spec.k, spec.l, spec.n);  // validates 0 <= l < k <= n
    (void)check;
    if (spec.count < 0) throw std::invalid_argument("SampleSpec: count must be >= 0");
    switch (spec.constraint) {
        case ConeConstraint::negative_first:
        case ConeConstraint::arrow_matrix:
            if (spec.k >= spec.n)
                throw InfeasibleSpecError(
                    "sampler: Gamma_n admits no negative entry, need k < n");
            break;
        case ConeConstraint::pinched:
            if (spec.k < 2) throw InfeasibleSpecError("sampler: pinched constraint needs k >= 2");
            if (spec.k >= spec.n)
                throw InfeasibleSpecError(
                    "sampler: Gamma_n admits no negative entry, need k < n");
            if (!(spec.delta > 0.0 && spec.delta <= 1.0 && spec.epsilon > 0.0 && spec.epsilon <= 1.0))
                throw std::invalid_argument("SampleSpec: delta, epsilon must lie in (0, 1]");
            break;
        default:
            break;
    }
}

Eigen::VectorXd box_draw(Rng& rng, int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

bool in_cone(const Eigen::VectorXd& v, int k) {
    return gamma_k_membership(Spectrum(v), k).member;
}

// Gamma_k is invariant under lambda -> lambda + t(1,...,1) for t > 0, so a
// stalled rejection loop can always be rescued by climbing the diagonal.
Eigen::VectorXd diagonal_rescue(Eigen::VectorXd v, int k) {
    for (int rung = 1; rung <= 256; ++rung) {
        Eigen::VectorXd shifted = v.array() + 0.25 * rung;
        if (in_cone(shifted, k)) return shifted;
    }
    throw SamplingExhaustedError("sampler: diagonal rescue failed");
}

Spectrum draw_gamma_cone(const SampleSpec& spec, Rng& rng) {
    Eigen::VectorXd last;
    for (int attempt = 0; attempt < kAttemptBudget; ++attempt) {
        last = box_draw(rng, spec.n, -1.0, 3.0);
        if (in_cone(last, spec.k)) return Spectrum(last);
        if (attempt > 0 && attempt % 512 == 0) return Spectrum(diagonal_rescue(last, spec.k));
    }
    throw SamplingExhaustedError("sampler: rejection budget exceeded (gamma_cone)");
}

Spectrum draw_negative_first(const SampleSpec& spec, Rng& rng) {
    for (int attempt = 0; attempt < kAttemptBudget; ++attempt) {
        Eigen::VectorXd v = box_draw(rng, spec.n, -1.0, 3.0);
        if (v.minCoeff() >= 0.0 || !in_cone(v, spec.k)) {
            // A long dry streak switches to a constructive draw: positives plus
            // one negative entry whose magnitude is halved until the cone accepts.
            if (attempt > 0 && attempt % 2048 == 0) {
                Eigen::VectorXd pos = box_draw(rng, spec.n, 0.5, 3.0);
                double mag = rng.uniform(0.05, 1.0);
                for (int j = 0; j < 60; ++j, mag *= 0.5) {
                    Eigen::VectorXd cand = pos;
                    cand[0] = -mag;
                    if (in_cone(cand, spec.k)) return Spectrum(cand);
                }
            }
            continue;
        }
        // Move the most negative entry to slot 0.
        int arg = 0;
        v.minCoeff(&arg);
        std::swap(v[0], v[arg]);
        return Spectrum(v);
    }
    throw SamplingExhaustedError("sampler: rejection budget exceeded (negative_first)");
}

Spectrum draw_pinched(const SampleSpec& spec, Rng& rng) {
    const int n = spec.n;
    for (int attempt = 0; attempt < kAttemptBudget; ++attempt) {
        Eigen::VectorXd tail = box_draw(rng, n - 1, -1.0, 3.0);
        std::sort(tail.data(), tail.data() + n - 1, std::greater<double>());
        const double tail_min = tail[n - 2];
        if (tail_min >= 0.0) continue;
        // lambda_0 must satisfy lambda_0 >= delta*lambda_1 and lambda_0 <= -lambda_{n-1}/epsilon.
        const double lo = std::max(spec.delta * tail[0], 1e-6);
        const double hi = (-tail_min) / spec.epsilon;
        if (lo > hi) continue;
        Eigen::VectorXd v(n);
        v[0] = rng.uniform(lo, hi);
        v.segment(1, n - 1) = tail;
        if (in_cone(v, spec.k)) return Spectrum(v);
    }
    // the pinched set shrinks as delta and epsilon grow and is empty for
    // large values at high (n, k)
    throw SamplingExhaustedError(
        "sampler: rejection budget exceeded (pinched); the constraint set may be "
        "empty for delta/epsilon this large");
}

SymMatrix draw_arrow(const SampleSpec& spec, Rng& rng) {
    const int n = spec.n;
    for (int attempt = 0; attempt < kAttemptBudget; ++attempt) {
        const double shrink = std::pow(0.5, attempt / 4096);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        A(0, 0) = -rng.uniform(0.05, 1.0) * shrink;
        for (int i = 1; i < n; ++i) A(i, i) = rng.uniform(0.0, 3.0) + (1.0 - shrink);
        for (int j = 1; j < n; ++j) {
            const double off = rng.uniform(-0.8, 0.8) * shrink;
            A(0, j) = off;
            A(j, 0) = off;
        }
        SymMatrix m(A);
        if (admissibility(m, spec.k).member) return m;
    }
    throw SamplingExhaustedError("sampler: rejection budget exceeded (arrow_matrix)");
}

}  // namespace

bool satisfies_constraint(const SampleSpec& spec, const Spectrum& lambda) {
    if (lambda.dim() != spec.n) return false;
    if (!gamma_k_membership(lambda, spec.k).member) return false;
    const auto& v = lambda.values();
    switch (spec.constraint) {
        case ConeConstraint::gamma_cone:
            return true;
        case ConeConstraint::sorted_descending:
            for (int i = 0; i + 1 < spec.n; ++i)
                if (v[i] < v[i + 1]) return false;
            return true;
        case ConeConstraint::negative_first:
            return v[0] < 0.0;
        case ConeConstraint::pinched: {
            for (int i = 1; i + 1 < spec.n; ++i)
                if (v[i] < v[i + 1]) return false;
            const double first = v[0], last = v[spec.n - 1];
            return first > 0.0 && last < 0.0 && first >= spec.delta * v[1] &&
                   -last >= spec.epsilon * first;
        }
        case ConeConstraint::arrow_matrix:
            return false;
    }
    return false;
}

bool satisfies_constraint(const SampleSpec& spec, const SymMatrix& A) {
    if (spec.constraint != ConeConstraint::arrow_matrix || A.dim() != spec.n) return false;
    if (A(0, 0) >= 0.0) return false;
    for (int i = 1; i < spec.n; ++i)
        for (int j = 1; j < spec.n; ++j)
            if (i != j && A(i, j) != 0.0) return false;
    return admissibility(A, spec.k).member;
}

Spectrum sample_spectrum_at(const SampleSpec& spec, std::uint64_t index) {
    validate_spec(spec);
    if (spec.constraint == ConeConstraint::arrow_matrix)
        throw std::invalid_argument("sampler: arrow_matrix produces matrices, not spectra");
    Rng rng = Rng::fork(spec.seed, index);
    Spectrum out = [&] {
        switch (spec.constraint) {
            case ConeConstraint::negative_first:
                return draw_negative_first(spec, rng);
            case ConeConstraint::pinched:
                return draw_pinched(spec, rng);
            case ConeConstraint::sorted_descending: {
                Spectrum s = draw_gamma_cone(spec, rng);
                Eigen::VectorXd v = s.values();
                std::sort(v.data(), v.data() + v.size(), std::greater<double>());
                return Spectrum(v);
            }
            default:
                return draw_gamma_cone(spec, rng);
        }
    }();
    if (!satisfies_constraint(spec, out))
        throw std::logic_error("sampler: generated spectrum failed its own constraint");
    return out;
}

SymMatrix sample_matrix_at(const SampleSpec& spec, std::uint64_t index) {
    validate_spec(spec);
    if (spec.constraint != ConeConstraint::arrow_matrix)
        throw std::invalid_argument("sampler: spectrum constraints do not produce matrices");
    Rng rng = Rng::fork(spec.seed, index);
    SymMatrix out = draw_arrow(spec, rng);
    if (!satisfies_constraint(spec, out))
        throw std::logic_error("sampler: generated matrix failed its own constraint");
    return out;
}

SampleBatch sample(const SampleSpec& spec) {
    validate_spec(spec);
    SampleBatch batch;
    if (spec.constraint == ConeConstraint::arrow_matrix) {
        batch.matrices.reserve(spec.count);
        for (int i = 0; i < spec.count; ++i)
            batch.matrices.push_back(sample_matrix_at(spec, static_cast<std::uint64_t>(i)));
    } else {
        batch.spectra.reserve(spec.count);
        for (int i = 0; i < spec.count; ++i)
            batch.spectra.push_back(sample_spectrum_at(spec, static_cast<std::uint64_t>(i)));
    }
    return batch;
}

}  // namespace hessquot
