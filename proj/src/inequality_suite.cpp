#include "hessquot/inequality_suite.hpp"

#include "hessquot/parallel.hpp"
#include "hessquot/rng.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <sstream>

namespace hessquot {

namespace {

constexpr int kFailureCap = 8;

double scale_of(double lhs, double rhs) {
    return std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

std::string spectrum_str(const Spectrum& lam) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (int i = 0; i < lam.dim(); ++i) os << (i ? ", " : "") << lam[i];
    os << ")";
    return os.str();
}

struct ChunkAccum {
    double worst = std::numeric_limits<double>::infinity();
    int failure_count = 0;
    std::vector<std::string> examples;
};

class MarginRecorder {
public:
    MarginRecorder(double tol, ChunkAccum& acc) : tol_(tol), acc_(acc) {}

    void record(double margin, const std::function<std::string()>& describe) {
        acc_.worst = std::min(acc_.worst, margin);
        if (margin < -tol_) {
            ++acc_.failure_count;
            if (acc_.examples.size() < kFailureCap) acc_.examples.push_back(describe());
        }
    }

private:
    double tol_;
    ChunkAccum& acc_;
};

CheckReport run_check(std::string name, int samples, double tol, int threads,
                      const std::function<void(std::uint64_t, MarginRecorder&)>& body) {
    const int t = std::max(1, std::min(resolve_thread_count(threads), std::max(1, samples)));
    std::vector<ChunkAccum> accs(t);
    parallel_chunks(0, samples, t, [&](int chunk, long long lo, long long hi) {
        MarginRecorder rec(tol, accs[chunk]);
        for (long long i = lo; i < hi; ++i) body(static_cast<std::uint64_t>(i), rec);
    });
    CheckReport rep;
    rep.name = std::move(name);
    rep.samples = samples;
    rep.tolerance = tol;
    for (const auto& a : accs) {
        rep.worst_margin = std::min(rep.worst_margin, a.worst);
        rep.failure_count += a.failure_count;
        for (const auto& e : a.examples)
            if (rep.failures.size() < kFailureCap) rep.failures.push_back(e);
    }
    return rep;
}

std::string cfg_tag(int n, int k, int l) {
    std::ostringstream os;
    os << " n=" << n << " k=" << k;
    if (l >= 0) os << " l=" << l;
    return os.str();
}

}  // namespace

nlohmann::json CheckReport::to_json() const {
    return nlohmann::json{{"name", name},
                          {"samples", samples},
                          {"worst_margin", worst_margin},
                          {"tolerance", tolerance},
                          {"failure_count", failure_count},
                          {"failures", failures}};
}

ConeInequalityConstants ConeInequalityConstants::compute(int n, int k, int l, double delta,
                                                         double epsilon) {
    HessianPair check(k, l, n);
    (void)check;
    ConeInequalityConstants c;
    const double ratio = (static_cast<double>(n) / k) * (static_cast<double>(k - l) / (n - l));
    c.c2 = ratio / (n - k + 1);
    c.c3 = (static_cast<double>(k - l) / k) / binomial(n, l);
    if (n >= 3) {
        const double e2 = epsilon * epsilon;
        c.c0 = std::min(e2 * delta * delta / (2.0 * (n - 2) * (n - 1)),
                        e2 * delta / (4.0 * (n - 1)));
        c.c1 = ratio * c.c0 * c.c0 / (n - k + 1);
    } else {
        // the c0 formula divides by n-2; callers needing c0/c1 must have n >= 3
        c.c0 = std::numeric_limits<double>::quiet_NaN();
        c.c1 = std::numeric_limits<double>::quiet_NaN();
    }
    return c;
}

CheckReport check_sigma_identities(int n, int k, int samples, std::uint64_t seed, int threads) {
    if (k < 1 || k > n) throw std::invalid_argument("check_sigma_identities: bad degree");
    return run_check(
        "sigma-identities" + cfg_tag(n, k, -1), samples, 1e-10, threads,
        [n, k, seed](std::uint64_t idx, MarginRecorder& rec) {
            Rng rng = Rng::fork(seed, idx);
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v[i] = rng.uniform(-3.0, 3.0);
            const Spectrum lam(v);
            const double sk = elementary_symmetric(lam, k);
            const auto describe = [&](const char* what) {
                return [&lam, what] { return std::string(what) + " at lambda=" + spectrum_str(lam); };
            };
            double euler = 0.0, minor_sum = 0.0;
            for (int i = 0; i < n; ++i) {
                const int ex[1] = {i};
                const double minor_k = elementary_symmetric(lam, k, ex);
                const double minor_km1 = elementary_symmetric(lam, k - 1, ex);
                const double recomposed = minor_k + lam[i] * minor_km1;
                rec.record(-std::abs(recomposed - sk) / scale_of(recomposed, sk),
                           describe("decomposition identity"));
                euler += lam[i] * minor_km1;
                minor_sum += minor_k;
            }
            rec.record(-std::abs(euler - k * sk) / scale_of(euler, k * sk),
                       describe("euler identity"));
            rec.record(-std::abs(minor_sum - (n - k) * sk) / scale_of(minor_sum, (n - k) * sk),
                       describe("minor-sum identity"));
        });
}

CheckReport check_sorted_cone_bounds(int n, int k, int samples, std::uint64_t seed, int threads) {
    SampleSpec spec;
    spec.n = n;
    spec.k = k;
    spec.l = k - 1;  // any valid l; draws ignore it
    spec.seed = seed;
    spec.constraint = ConeConstraint::sorted_descending;
    return run_check(
        "sorted-cone-bounds" + cfg_tag(n, k, -1), samples, 1e-9, threads,
        [spec, n, k](std::uint64_t idx, MarginRecorder& rec) {
            const Spectrum lam = sample_spectrum_at(spec, idx);
            const auto describe = [&](const char* what) {
                return [&lam, what] { return std::string(what) + " at lambda=" + spectrum_str(lam); };
            };
            std::vector<double> minors(n);
            for (int i = 0; i < n; ++i) {
                const int ex[1] = {i};
                minors[i] = elementary_symmetric(lam, k - 1, ex);
            }
            // descending entries give ascending minors
            for (int i = 0; i + 1 < n; ++i)
                rec.record((minors[i + 1] - minors[i]) / scale_of(minors[i], minors[i + 1]),
                           describe("minor chain"));
            rec.record(minors[0] / scale_of(minors[0], 0.0), describe("minor positivity"));

            const double lam_scale = std::max(1.0, lam.values().cwiseAbs().maxCoeff());
            rec.record(lam[k - 1] / lam_scale, describe("lambda_k positivity"));

            const double sk = elementary_symmetric(lam, k);
            double prod = binomial(n, k);
            for (int i = 0; i < k; ++i) prod *= lam[i];
            rec.record((prod - sk) / scale_of(prod, sk), describe("product bound"));

            const double lhs = lam[0] * minors[0];
            const double rhs = (static_cast<double>(k) / n) * sk;
            rec.record((lhs - rhs) / scale_of(lhs, rhs), describe("euler lower bound"));
        });
}

CheckReport check_maclaurin_monotonicity(int n, int k, int l, int samples, std::uint64_t seed,
                                         int threads) {
    HessianPair p(k, l, n);
    SampleSpec spec;
    spec.n = n;
    spec.k = k;
    spec.l = l;
    spec.seed = seed;
    spec.constraint = ConeConstraint::gamma_cone;
    return run_check(
        "maclaurin-monotonicity" + cfg_tag(n, k, l), samples, 1e-9, threads,
        [spec, p](std::uint64_t idx, MarginRecorder& rec) {
            const Spectrum lam = sample_spectrum_at(spec, idx);
            const int n = p.n;
            std::vector<double> e(n + 1);
            for (int m = 0; m <= n; ++m) e[m] = elementary_symmetric(lam, m) / binomial(n, m);
            const double lhs = std::pow(e[p.k] / e[p.l], 1.0 / (p.k - p.l));
            for (int r = 1; r <= p.k; ++r) {
                for (int s = 0; s <= std::min(r - 1, p.l); ++s) {
                    const double rhs = std::pow(e[r] / e[s], 1.0 / (r - s));
                    rec.record((rhs - lhs) / scale_of(lhs, rhs), [&lam, r, s] {
                        std::ostringstream os;
                        os << "ratio pair (r=" << r << ", s=" << s
                           << ") at lambda=" << spectrum_str(lam);
                        return os.str();
                    });
                }
            }
        });
}

CheckReport check_negative_first_dominance(int n, int k, int l, int samples, std::uint64_t seed,
                                           int threads) {
    HessianPair p(k, l, n);
    const ConeInequalityConstants cs = ConeInequalityConstants::compute(n, k, l, 0.5, 0.5);
    SampleSpec spec;
    spec.n = n;
    spec.k = k;
    spec.l = l;
    spec.seed = seed;
    spec.constraint = ConeConstraint::negative_first;
    return run_check(
        "negative-first-dominance" + cfg_tag(n, k, l), samples, 1e-9, threads,
        [spec, p, cs](std::uint64_t idx, MarginRecorder& rec) {
            const Spectrum lam = sample_spectrum_at(spec, idx);
            const auto describe = [&](const char* what) {
                return [&lam, what] { return std::string(what) + " at lambda=" + spectrum_str(lam); };
            };
            const int ex[1] = {0};
            for (int m = 0; m <= p.k; ++m) {
                const double minor_m = elementary_symmetric(lam, m, ex);
                const double full_m = elementary_symmetric(lam, m);
                rec.record((minor_m - full_m) / scale_of(minor_m, full_m),
                           describe("leading-minor lower bound"));
            }
            const Eigen::VectorXd g = hessian_quotient_gradient(lam, p);
            const double rhs = cs.c2 * g.sum();
            rec.record((g[0] - rhs) / scale_of(g[0], rhs), describe("gradient dominance"));
        });
}

CheckReport check_arrow_matrix_dominance(int n, int k, int l, int samples, std::uint64_t seed,
                                         int threads) {
    HessianPair p(k, l, n);
    const ConeInequalityConstants cs = ConeInequalityConstants::compute(n, k, l, 0.5, 0.5);
    SampleSpec spec;
    spec.n = n;
    spec.k = k;
    spec.l = l;
    spec.seed = seed;
    spec.constraint = ConeConstraint::arrow_matrix;
    return run_check(
        "arrow-matrix-dominance" + cfg_tag(n, k, l), samples, 1e-9, threads,
        [spec, p, cs](std::uint64_t idx, MarginRecorder& rec) {
            const SymMatrix A = sample_matrix_at(spec, idx);
            const auto describe = [&](const char* what) {
                return [&A, what] {
                    std::ostringstream os;
                    os.precision(17);
                    os << what << " at A=" << A.matrix();
                    return os.str();
                };
            };
            const SymMatrix Fd = operator_derivative(A, p);
            const double d00 = Fd(0, 0);
            const double tr = Fd.matrix().trace();
            rec.record((d00 - cs.c2 * tr) / scale_of(d00, cs.c2 * tr),
                       describe("corner dominance"));
            const double lower = cs.c3 * std::pow(-A(0, 0), p.k - p.l - 1);
            rec.record((tr - lower) / scale_of(tr, lower), describe("trace lower bound"));
        });
}

CheckReport check_pinched_dominance(int n, int k, int l, double delta, double epsilon, int samples,
                                    std::uint64_t seed, int threads) {
    if (n < 3) throw std::invalid_argument("check_pinched_dominance: needs n >= 3");
    HessianPair p(k, l, n);
    const ConeInequalityConstants cs = ConeInequalityConstants::compute(n, k, l, delta, epsilon);
    SampleSpec spec;
    spec.n = n;
    spec.k = k;
    spec.l = l;
    spec.seed = seed;
    spec.constraint = ConeConstraint::pinched;
    spec.delta = delta;
    spec.epsilon = epsilon;
    return run_check(
        "pinched-dominance" + cfg_tag(n, k, l), samples, 1e-9, threads,
        [spec, p, cs](std::uint64_t idx, MarginRecorder& rec) {
            const Spectrum lam = sample_spectrum_at(spec, idx);
            const auto describe = [&](const char* what) {
                return [&lam, what] { return std::string(what) + " at lambda=" + spectrum_str(lam); };
            };
            const int ex[1] = {0};
            for (int m = 0; m <= p.k - 1; ++m) {
                const double minor_m = elementary_symmetric(lam, m, ex);
                const double rhs = cs.c0 * elementary_symmetric(lam, m);
                rec.record((minor_m - rhs) / scale_of(minor_m, rhs),
                           describe("scaled minor lower bound"));
            }
            const Eigen::VectorXd g = hessian_quotient_gradient(lam, p);
            const double rhs = cs.c1 * g.sum();
            rec.record((g[0] - rhs) / scale_of(g[0], rhs), describe("pinched gradient dominance"));
        });
}

CheckReport check_diagonal_gradient_consistency(int n, int k, int samples, std::uint64_t seed,
                                                int threads) {
    HessianPair p(k, 0, n);
    SampleSpec spec;
    spec.n = n;
    spec.k = k;
    spec.l = 0;
    spec.seed = seed;
    spec.constraint = ConeConstraint::gamma_cone;
    return run_check(
        "diagonal-gradient-consistency" + cfg_tag(n, k, -1), samples, 1e-10, threads,
        [spec, p](std::uint64_t idx, MarginRecorder& rec) {
            const Spectrum lam = sample_spectrum_at(spec, idx);
            const SymMatrix A(Eigen::MatrixXd(lam.values().asDiagonal()));
            const SymMatrix Fd = operator_derivative(A, p);
            const Eigen::VectorXd g = sigma_gradient(lam, p.k);
            for (int i = 0; i < p.n; ++i) {
                rec.record(-std::abs(Fd(i, i) - g[i]) / scale_of(Fd(i, i), g[i]), [&lam, i] {
                    std::ostringstream os;
                    os << "diagonal derivative component " << i
                       << " at lambda=" << spectrum_str(lam);
                    return os.str();
                });
            }
        });
}

std::vector<CheckReport> run_inequality_suite(const SuiteConfig& cfg) {
    std::vector<CheckReport> reports;
    const auto subseed = [&](int ordinal, int n, int k, int l) {
        Rng r = Rng::fork(cfg.seed, (static_cast<std::uint64_t>(ordinal) << 24) ^
                                        (static_cast<std::uint64_t>(n) << 16) ^
                                        (static_cast<std::uint64_t>(k) << 8) ^
                                        static_cast<std::uint64_t>(l + 1));
        return r.next();
    };
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        for (int k = 1; k <= n; ++k) {
            reports.push_back(
                check_sigma_identities(n, k, cfg.samples, subseed(1, n, k, 0), cfg.threads));
            reports.push_back(
                check_sorted_cone_bounds(n, k, cfg.samples, subseed(2, n, k, 0), cfg.threads));
            reports.push_back(check_diagonal_gradient_consistency(n, k, cfg.samples,
                                                                  subseed(3, n, k, 0), cfg.threads));
            for (int l = 0; l < k; ++l) {
                reports.push_back(check_maclaurin_monotonicity(n, k, l, cfg.samples,
                                                               subseed(4, n, k, l), cfg.threads));
                if (k < n) {
                    reports.push_back(check_negative_first_dominance(
                        n, k, l, cfg.samples, subseed(5, n, k, l), cfg.threads));
                    reports.push_back(check_arrow_matrix_dominance(
                        n, k, l, cfg.samples, subseed(6, n, k, l), cfg.threads));
                    if (k >= 2)
                        reports.push_back(check_pinched_dominance(n, k, l, cfg.delta, cfg.epsilon,
                                                                  cfg.samples, subseed(7, n, k, l),
                                                                  cfg.threads));
                }
            }
        }
    }
    return reports;
}

}  // namespace hessquot
