#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "hyperinv/matrix.hpp"
#include "hyperinv/schemes.hpp"

namespace hyperinv {

/// Stopping rules for the iteration driver.
///   reliable: ||X_{k+1}-X_k|| / (p^k alpha) < eps   (k = 0-based loop index)
///   residual: ||I - A X_{k+1}||             <= eps
///   step:     ||X_{k+1}-X_k||               <= eps
struct StopRule {
    enum class Kind { reliable, residual, step } kind = Kind::step;
    double epsilon = 1e-8;
    NormKind norm = NormKind::frobenius;
    int max_loops = 100;
    double alpha = 1.0;  // scaling of the initial approximation, for `reliable`

    static StopRule step(double eps, NormKind n = NormKind::frobenius, int loops = 100) {
        return {Kind::step, eps, n, loops, 1.0};
    }
    static StopRule residual(double eps, NormKind n = NormKind::frobenius, int loops = 100) {
        return {Kind::residual, eps, n, loops, 1.0};
    }
    static StopRule reliable(double eps, double alpha, NormKind n = NormKind::frobenius,
                             int loops = 100) {
        return {Kind::reliable, eps, n, loops, alpha};
    }
};

enum class Terminated { converged, loop_budget, divergence_detected };

inline const char* to_string(Terminated t) {
    switch (t) {
        case Terminated::converged: return "converged";
        case Terminated::loop_budget: return "loop-budget";
        case Terminated::divergence_detected: return "divergence-detected";
    }
    return "?";
}

template <class R>
struct LoopRecord {
    R step_norm{};
    std::optional<R> residual_norm;
    int matmuls = 0;
};

template <class T>
struct IterationReport {
    using R = real_t<T>;
    int loops = 0;
    Terminated terminated = Terminated::loop_budget;
    std::vector<LoopRecord<R>> history;
    DenseMatrix<T> final_x;
    std::optional<double> coc;
    int matmuls_per_loop = 0;          // as measured on the first loop
    bool reliable_rule_degraded = false;  // p^k*alpha overflowed, fell back to step rule

    std::vector<R> step_norms() const {
        std::vector<R> s;
        s.reserve(history.size());
        for (const auto& rec : history) s.push_back(rec.step_norm);
        return s;
    }
};

inline double boost_log_ratio(double a, double b) { return std::log(a / b); }
inline mp_real boost_log_ratio(const mp_real& a, const mp_real& b) {
    return boost::multiprecision::log(a / b);
}

/// Computational order of convergence from the last three consecutive
/// positive, strictly decreasing step norms:
///   rho = ln(s_{k+1}/s_k) / ln(s_k/s_{k-1}).
template <class R>
double coc_estimate(const std::vector<R>& step_norms) {
    const int n = static_cast<int>(step_norms.size());
    for (int k = n - 1; k >= 2; --k) {
        const R& s1 = step_norms[k - 2];
        const R& s2 = step_norms[k - 1];
        const R& s3 = step_norms[k];
        if (s3 > R(0) && s2 > s3 && s1 > s2) {
            const double num = to_double(boost_log_ratio(s3, s2));
            const double den = to_double(boost_log_ratio(s2, s1));
            return num / den;
        }
    }
    throw diagnostic_error("coc_estimate: insufficient history");
}

/// EI = p^(1/c)
inline double efficiency_index(int p, int c) {
    if (p < 2 || c < 1) throw config_error("efficiency_index: need p >= 2, c >= 1");
    return std::pow(static_cast<double>(p), 1.0 / c);
}

/// s ~ 2 log_p(kappa)
inline double predicted_loops(double kappa, int p) {
    if (kappa < 1.0) throw config_error("predicted_loops: kappa must be >= 1");
    return 2.0 * std::log(kappa) / std::log(static_cast<double>(p));
}

struct IterateOptions {
    bool record_residual = false;  // log ||I - A X_k|| (costs one extra product per loop,
                                   // charged outside the scheme's count)
};

/// Repeats scheme_step until the stop rule fires, the loop budget is hit, or
/// divergence is detected (non-finite entries, or the step norm exceeding
/// 1e3 x its running minimum on 3 consecutive loops).
template <class T>
IterationReport<T> iterate(SchemeId id, const DenseMatrix<T>& a, const DenseMatrix<T>& x0,
                           const StopRule& stop, const IterateOptions& opts = {}) {
    using R = real_t<T>;
    IterationReport<T> report;
    DenseMatrix<T> x = x0;
    const int p = id.order();
    const double log_p = std::log(static_cast<double>(p));
    const double log_alpha = std::log(std::abs(stop.alpha) > 0 ? std::abs(stop.alpha) : 1.0);
    // p^k * alpha overflows the double exponent range past this k
    const double max_log_denom = 700.0;

    R min_step(0);
    bool have_min = false;
    bool armed = false;
    int growth_streak = 0;

    for (int k = 0; k < stop.max_loops; ++k) {
        MatmulCounter counter;
        DenseMatrix<T> next;
        bool diverged_nonfinite = false;
        try {
            next = scheme_step(id, a, x, &counter);
        } catch (const diagnostic_error&) {
            diverged_nonfinite = true;
        }
        if (diverged_nonfinite) {
            report.terminated = Terminated::divergence_detected;
            break;
        }

        LoopRecord<R> rec;
        rec.matmuls = static_cast<int>(counter.total);
        rec.step_norm = norm(next - x, stop.norm);
        if (opts.record_residual || stop.kind == StopRule::Kind::residual)
            rec.residual_norm = norm(residual(a, next), stop.norm);
        report.history.push_back(rec);
        if (report.loops == 0) report.matmuls_per_loop = rec.matmuls;
        ++report.loops;
        x = next;

        bool fired = false;
        switch (stop.kind) {
            case StopRule::Kind::step:
                fired = rec.step_norm <= R(stop.epsilon);
                break;
            case StopRule::Kind::residual:
                fired = *rec.residual_norm <= R(stop.epsilon);
                break;
            case StopRule::Kind::reliable: {
                const double log_denom = k * log_p + log_alpha;
                if (log_denom > max_log_denom) {
                    report.reliable_rule_degraded = true;
                    fired = rec.step_norm <= R(stop.epsilon);
                } else if (rec.step_norm == R(0)) {
                    fired = true;
                } else {
                    // compare in logs so huge denominators cannot overflow
                    const double log_step = to_double(boost_log_ratio(rec.step_norm, R(1)));
                    fired = log_step - log_denom < std::log(stop.epsilon);
                }
                break;
            }
        }
        if (fired) {
            report.terminated = Terminated::converged;
            break;
        }

        // Divergence watch on the step-norm trend, checked only when the rule
        // did not fire (the reliable rule deliberately tolerates p^k-paced
        // growth). Armed once the step norm has dropped below its starting
        // value: rank-deficient targets legitimately grow ||X|| for many
        // loops while the iterate accumulates small-singular-value mass.
        if (!have_min || rec.step_norm < min_step) {
            min_step = rec.step_norm;
            have_min = true;
            growth_streak = 0;
            if (min_step < report.history.front().step_norm) armed = true;
        } else if (armed && min_step > R(0) && rec.step_norm >= R(1e3) * min_step) {
            if (++growth_streak >= 3) {
                report.terminated = Terminated::divergence_detected;
                break;
            }
        } else {
            growth_streak = 0;
        }
    }

    report.final_x = x;
    try {
        report.coc = coc_estimate(report.step_norms());
    } catch (const diagnostic_error&) {
        report.coc = std::nullopt;
    }
    return report;
}

template <class R>
struct PenroseResiduals {
    R outer{};   // ||X A X - X||
    R inner{};   // ||A X A - A||
    R sym_ax{};  // ||(AX)* - AX||
    R sym_xa{};  // ||(XA)* - XA||
    R max() const { return std::max({outer, inner, sym_ax, sym_xa}); }
};

/// The four Penrose residual norms of a candidate generalized inverse. Only
/// the first is meaningful for plain outer inverses; all four certify a
/// Moore-Penrose inverse.
template <class T>
PenroseResiduals<real_t<T>> outer_inverse_check(const DenseMatrix<T>& a,
                                                const DenseMatrix<T>& x, NormKind kind) {
    if (a.cols() != x.rows() || a.rows() != x.cols())
        throw shape_error("outer_inverse_check: X must be conformable with A");
    PenroseResiduals<real_t<T>> out;
    const auto ax = matmul(a, x);
    const auto xa = matmul(x, a);
    out.outer = norm(matmul(x, ax) - x, kind);
    out.inner = norm(matmul(ax, a) - a, kind);
    out.sym_ax = norm(conj_transpose(ax) - ax, kind);
    out.sym_xa = norm(conj_transpose(xa) - xa, kind);
    return out;
}

}  // namespace hyperinv
