// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "hyperinv/decomp.hpp"
#include "hyperinv/gmres.hpp"
#include "hyperinv/init.hpp"
#include "hyperinv/iterate.hpp"
#include "hyperinv/matrix.hpp"
#include "hyperinv/model_problems.hpp"
#include "hyperinv/precond.hpp"
#include "hyperinv/schemes.hpp"

using namespace hyperinv;
using testutil::Rng;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. coefficient and factorization verification
// ---------------------------------------------------------------------------
Outcome criterion1() {
    Outcome out;
    auto worst = [](const auto& k) {
        auto w = k.a1 - k.a1;  // zero of the right type
        for (const auto& r : pm_system_even_residuals(k)) w = std::max(w, r);
        for (const auto& r : pm_system_c_residuals(k)) w = std::max(w, r);
        for (const auto& r : pm_system_d_residuals(k)) w = std::max(w, r);
        return w;
    };
    const auto kd = pm_coefficients<double>();
    const double wd = worst(kd);
    out.require(wd <= 1e-12, fmt("double system residual %.2e > 1e-12", wd));
    const auto cd = verify_pm_factorization(kd, 1e-12);
    out.require(cd.ok, fmt("double poly error %.2e > 1e-12", cd.max_coefficient_error));

    precision_guard guard(150);
    const auto km = pm_coefficients<mp_real>();
    const mp_real wm = worst(km);
    out.require(wm <= mp_real("1e-140"),
                fmt("150-digit system residual %.2e > 1e-140", to_double(wm)));
    const auto cm = verify_pm_factorization(km, mp_real("1e-140"));
    out.require(cm.ok,
                fmt("150-digit poly error %.2e > 1e-140", to_double(cm.max_coefficient_error)));
    out.note(fmt("max poly |coeff-1|: double %.1e, 150-digit %.1e", cd.max_coefficient_error,
                 to_double(cm.max_coefficient_error)));
    return out;
}

// ---------------------------------------------------------------------------
// 2. Drazin benchmark reproduction at 150-digit arithmetic
// ---------------------------------------------------------------------------
Outcome criterion2() {
    Outcome out;
    precision_guard guard(170);  // 150 requested digits + guard digits
    const auto a = drazin_benchmark_matrix<mp_real>();
    const auto dz = init_drazin(a);
    out.require(dz.index == 3, fmt("index %d != 3", dz.index));

    struct Expect {
        SchemeId id;
        int it;
        double rho;
        double final_step;
    };
    const Expect table[] = {
        {SchemeId::sm(), 17, 2.0, 3.712e-66},
        {SchemeId::cm(), 11, 3.0, 1.833e-59},
        {SchemeId::fm(), 7, 7.0, 6.3e-120},
        {SchemeId::pm(), 5, 18.0, 7.474e-107},
    };
    std::string its;
    for (const auto& e : table) {
        const auto rep =
            iterate(e.id, a, dz.x0, StopRule::step(1e-50, NormKind::infinity_norm, 100));
        const std::string name = e.id.name();
        out.require(rep.terminated == Terminated::converged, name + " did not converge");
        out.require(rep.loops == e.it,
                    fmt("%s IT %d != %d", name.c_str(), rep.loops, e.it));
        const double rho = rep.coc.value_or(-1.0);
        out.require(std::abs(rho - e.rho) <= 0.5,
                    fmt("%s rho %.2f outside %.1f +- 0.5", name.c_str(), rho, e.rho));
        const double fin = to_double(rep.history.back().step_norm);
        const double ratio = fin / e.final_step;
        out.require(ratio >= 0.1 && ratio <= 10.0,
                    fmt("%s final step %.3e outside a decade of %.3e", name.c_str(), fin,
                        e.final_step));
        its += fmt("%s %d ", name.c_str(), rep.loops);
    }
    out.note("IT: " + its);
    return out;
}

// ---------------------------------------------------------------------------
// 3. PM and HM step equivalence with HYPERPOWER(18)
// ---------------------------------------------------------------------------
Outcome criterion3() {
    Outcome out;
    Rng rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(2, 8);
        auto a = testutil::random_matrix(rng, n, n);
        for (int i = 0; i < n; ++i) a(i, i) += 3.0;
        std::vector<double> ev(n);
        for (auto& e : ev) e = rng.uniform(-0.85, 0.85);  // ||I - A X0|| <= 0.9
        auto f0 = testutil::with_eigenvalues(rng, n, ev);
        auto x0 = solve(a, DenseMatrix<double>::identity(n) - f0);

        const auto hp = scheme_step(SchemeId::hyperpower(18), a, x0);
        const double scale = to_double(norm_frobenius(hp));
        const double dpm = testutil::frob_dist(scheme_step(SchemeId::pm(), a, x0), hp) / scale;
        const double dhm = testutil::frob_dist(scheme_step(SchemeId::hm(), a, x0), hp) / scale;
        worst = std::max({worst, dpm, dhm});
    }
    out.require(worst <= 1e-10, fmt("worst relative step difference %.2e > 1e-10", worst));
    out.note(fmt("worst relative difference %.1e over 100 instances", worst));
    return out;
}

// ---------------------------------------------------------------------------
// 4. one-step error recursion F1 = F0^18 against an extended oracle
// ---------------------------------------------------------------------------
Outcome criterion4() {
    Outcome out;
    Rng rng(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.integer(2, 6);
        // well-conditioned A and a normal F0 with spectral radius in [0.45, 0.5]
        auto q1 = testutil::random_orthonormal(rng, n, n);
        auto q2 = testutil::random_orthonormal(rng, n, n);
        DenseMatrix<double> d(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = rng.uniform(0.6, 1.8);
        auto a = matmul(matmul(q1, d), conj_transpose(q2));
        std::vector<double> ev(n);
        const double radius = rng.uniform(0.45, 0.5);
        for (auto& e : ev) e = rng.uniform(-1.0, 1.0);
        double emax = 0;
        for (double e : ev) emax = std::max(emax, std::abs(e));
        for (auto& e : ev) e *= radius / emax;
        auto f0 = testutil::with_eigenvalues(rng, n, ev);
        auto x0 = solve(a, DenseMatrix<double>::identity(n) - f0);

        const auto x1 = scheme_step(SchemeId::pm(), a, x0);  // the double-precision step

        precision_guard guard(60);
        auto am = testutil::lift(a);
        auto ainv = invert(am);  // extended-precision elimination oracle
        auto f0m = DenseMatrix<mp_real>::identity(n) - matmul(am, testutil::lift(x0));
        auto f18 = mat_pow(f0m, 18);
        auto f1 = matmul(am, ainv) - matmul(am, testutil::lift(x1));
        const mp_real n18 = norm_frobenius(f18);
        const double rel = to_double(abs(norm_frobenius(f1) - n18) / n18);
        worst = std::max(worst, rel);
    }
    out.require(worst <= 1e-8, fmt("worst relative deviation %.2e > 1e-8", worst));
    out.note(fmt("worst relative deviation %.1e over 50 instances", worst));
    return out;
}

// ---------------------------------------------------------------------------
// 5. Moore-Penrose property suite under Pan-Schreiber initialization
// ---------------------------------------------------------------------------
template <class T>
bool pm_penrose_within_budget(const DenseMatrix<T>& a, const DenseMatrix<T>& x0, int budget,
                              int& loops_used, double& worst_rel) {
    using R = real_t<T>;
    DenseMatrix<T> x = x0;
    for (int k = 1; k <= budget; ++k) {
        x = scheme_step(SchemeId::pm(), a, x);
        const auto pen = outer_inverse_check(a, x, NormKind::frobenius);
        const R bound = R(1e-8) * norm_frobenius(x);
        if (pen.max() <= bound) {
            loops_used = k;
            worst_rel = to_double(pen.max() / norm_frobenius(x));
            return true;
        }
        if (k == budget) worst_rel = to_double(pen.max() / norm_frobenius(x));
    }
    loops_used = -1;
    return false;
}

Outcome criterion5() {
    Outcome out;
    int loops = 0;
    double rel = 0.0;

    {  // hilbert(8,6) at double
        auto a = hilbert<double>(8, 6);
        double kappa;
        {
            precision_guard guard(60);
            auto lam = hermitian_eigenvalues(
                matmul(conj_transpose(hilbert<mp_real>(8, 6)), hilbert<mp_real>(8, 6)));
            kappa = std::sqrt(to_double(lam.front() / lam.back()));
        }
        const int budget = static_cast<int>(std::floor(predicted_loops(kappa, 18))) + 3;
        auto init = init_pan_schreiber(a);
        const bool ok = pm_penrose_within_budget(a, init.x0, budget, loops, rel);
        out.require(ok, fmt("hilbert(8,6) residuals %.2e above 1e-8*||X|| after %d loops", rel,
                            budget));
        out.note(fmt("H(8,6) kappa %.1e: %d/%d loops", kappa, loops, budget));
    }
    {  // hilbert(12,9) at 50-digit extended precision
        precision_guard guard(50);
        auto a = hilbert<mp_real>(12, 9);
        auto lam = hermitian_eigenvalues(matmul(conj_transpose(a), a));
        const double kappa = std::sqrt(to_double(lam.front() / lam.back()));
        const int budget = static_cast<int>(std::floor(predicted_loops(kappa, 18))) + 3;
        auto init = init_pan_schreiber(a);
        const bool ok = pm_penrose_within_budget(a, init.x0, budget, loops, rel);
        out.require(ok, fmt("hilbert(12,9) residuals %.2e above 1e-8*||X|| after %d loops",
                            rel, budget));
        out.note(fmt("H(12,9) kappa %.1e: %d/%d loops", kappa, loops, budget));
    }
    {  // 50 random full-rank 50x40 instances with kappa <= 1e6
        Rng rng(1003);
        int worst_margin = 1000;
        for (int trial = 0; trial < 50; ++trial) {
            const double kappa = std::pow(10.0, rng.uniform(2.0, 6.0));
            const double s1 = rng.uniform(1.2, 2.2);
            std::vector<double> sv(40);
            sv[0] = s1;
            sv[39] = s1 / kappa;
            for (int i = 1; i < 39; ++i) sv[i] = s1 * std::pow(1.0 / kappa, rng.unit());
            std::sort(sv.begin(), sv.end(), std::greater<>());
            auto a = testutil::with_singular_values(rng, 50, 40, sv);
            const int budget = static_cast<int>(std::floor(predicted_loops(kappa, 18))) + 3;
            auto init = init_pan_schreiber(a);
            const bool ok = pm_penrose_within_budget(a, init.x0, budget, loops, rel);
            if (!ok) {
                out.require(false, fmt("random instance %d (kappa %.1e) failed budget %d",
                                       trial, kappa, budget));
                break;
            }
            worst_margin = std::min(worst_margin, budget - loops);
        }
        out.note(fmt("50 random 50x40: min loop margin %d", worst_margin));
    }
    return out;
}

// ---------------------------------------------------------------------------
// 6. stability contrast between PM and PM-stable
// ---------------------------------------------------------------------------
Outcome criterion6() {
    Outcome out;
    DenseMatrix<double> a{{1, 0, 0, 0}, {0, 0.1, 0, 0}, {0, 0, 0.01, 0}, {0, 0, 0, 0}};
    DenseMatrix<double> pinv{{1, 0, 0, 0}, {0, 10, 0, 0}, {0, 0, 100, 0}, {0, 0, 0, 0}};
    // perturbed start X~0 = X0 + Delta0: exact diagonal data
    // would keep the unstable block exactly zero at double precision
    Rng rng(1004);
    auto x0 = 0.5 * conj_transpose(a);
    {
        DenseMatrix<double> delta(4, 4);
        double nrm = 0;
        for (auto& v : delta.entries()) v = rng.uniform(-1, 1);
        nrm = to_double(norm_frobenius(delta));
        for (auto& v : delta.entries()) v *= 1e-12 / nrm;
        x0 = x0 + delta;
    }

    auto run = [&](SchemeId id, std::vector<double>& errs, std::vector<double>& outers) {
        auto x = x0;
        for (int k = 0; k < 40; ++k) {
            try {
                x = scheme_step(id, a, x);
            } catch (const diagnostic_error&) {
                errs.push_back(std::numeric_limits<double>::infinity());
                break;
            }
            errs.push_back(testutil::frob_dist(x, pinv));
            outers.push_back(to_double(outer_inverse_check(a, x, NormKind::frobenius).outer));
        }
    };

    auto examine = [&](SchemeId id, bool& exceeds) {
        std::vector<double> errs, outers;
        run(id, errs, outers);
        int kmin = 0;
        for (std::size_t i = 1; i < outers.size(); ++i)
            if (outers[i] < outers[kmin]) kmin = static_cast<int>(i);
        double emin = errs[kmin], emax = errs[kmin];
        const int end = std::min<int>(static_cast<int>(errs.size()) - 1, kmin + 25);
        for (int i = kmin; i <= end; ++i) {
            emin = std::min(emin, errs[i]);
            emax = std::max(emax, errs[i]);
        }
        exceeds = emax > 10.0 * emin;
        return fmt("min %.1e max %.1e over loops %d..%d", emin, emax, kmin + 1, end + 1);
    };

    bool pm_exceeds = false, pms_exceeds = false;
    const auto pm_info = examine(SchemeId::pm(), pm_exceeds);
    const auto pms_info = examine(SchemeId::pm_stable(), pms_exceeds);
    out.require(pm_exceeds, "plain PM stayed within 10x of its minimum (" + pm_info + ")");
    out.require(!pms_exceeds, "PM-stable exceeded 10x of its minimum (" + pms_info + ")");
    out.note("PM " + pm_info + " | PM-stable " + pms_info);
    return out;
}

// ---------------------------------------------------------------------------
// 7. efficiency indices
// ---------------------------------------------------------------------------
Outcome criterion7() {
    Outcome out;
    const struct {
        int p, c;
        double expect;
    } rows[] = {{2, 2, 1.41421},  {3, 3, 1.44225},   {7, 5, 1.47577},
                {18, 9, 1.37872}, {18, 18, 1.17419}, {18, 7, 1.51121}};
    for (const auto& r : rows) {
        const double ei = efficiency_index(r.p, r.c);
        out.require(std::abs(ei - r.expect) <= 5e-6,
                    fmt("EI(%d,%d) = %.7f != %.5f", r.p, r.c, ei, r.expect));
    }
    out.note("EI(18,7) = " + fmt("%.5f", efficiency_index(18, 7)));
    return out;
}

// ---------------------------------------------------------------------------
// 8. preconditioning iteration-count ordering on the built-in 841 system
// ---------------------------------------------------------------------------
Outcome criterion8() {
    Outcome out;
    using C = std::complex<double>;
    auto a = shifted_laplacian_2d(29);
    std::vector<C> b(a.rows(), C(1, 0));
    auto jacobi = sparsify(init_diagonal(densify(a)).x0, 0.0);
    auto pm1 = build_preconditioner(a, SchemeId::pm(), 1, 1e-5);
    out.note(fmt("PM-X1 nnz %lld", pm1.nnz()));

    std::string counts;
    for (int d = 2; d <= 10; ++d) {
        GmresConfig cfg;
        cfg.tol = std::pow(10.0, -d);
        cfg.max_iters = 20 * a.rows();
        const auto none = gmres(a, b, cfg);
        const auto jac = gmres(a, b, cfg, &jacobi);
        const auto pm = gmres(a, b, cfg, &pm1);
        out.require(none.converged && jac.converged && pm.converged,
                    fmt("tol 1e-%d: a configuration failed to converge", d));
        out.require(pm.iterations < none.iterations,
                    fmt("tol 1e-%d: PM-X1 %d !< none %d", d, pm.iterations, none.iterations));
        if (d >= 6)
            out.require(pm.iterations <= jac.iterations,
                        fmt("tol 1e-%d: PM-X1 %d !<= jacobi %d", d, pm.iterations,
                            jac.iterations));
        counts += fmt("%d:%d/%d/%d ", d, pm.iterations, jac.iterations, none.iterations);
    }
    out.note("pm/jacobi/none per decade: " + counts);
    return out;
}

// ---------------------------------------------------------------------------
// 9. multiplication accounting
// ---------------------------------------------------------------------------
Outcome criterion9() {
    Outcome out;
    Rng rng(1005);
    auto a = testutil::random_matrix(rng, 6, 6);
    for (int i = 0; i < 6; ++i) a(i, i) += 4.0;
    auto x0 = init_scaled_adjoint(a).x0;

    const struct {
        SchemeId id;
        int expect;
    } rows[] = {{SchemeId::sm(), 2},          {SchemeId::cm(), 3},
                {SchemeId::fm(), 5},          {SchemeId::hm(), 9},
                {SchemeId::pm(), 7},          {SchemeId::hyperpower(2), 2},
                {SchemeId::hyperpower(7), 7}, {SchemeId::hyperpower(18), 18},
                {SchemeId::hyperpower(25), 25}};
    for (const auto& r : rows) {
        auto rep = iterate(r.id, a, x0, StopRule::step(0.0, NormKind::frobenius, 3));
        for (const auto& rec : rep.history)
            out.require(rec.matmuls == r.expect, fmt("%s measured %d != %d",
                                                     r.id.name().c_str(), rec.matmuls,
                                                     r.expect));
    }
    auto rep = iterate(SchemeId::pm_stable(), a, x0, StopRule::step(0.0, NormKind::frobenius, 3));
    for (const auto& rec : rep.history)
        out.require(rec.matmuls == 9, fmt("PM-stable measured %d != 9", rec.matmuls));
    out.note(fmt("PM-stable measures 9 products per loop for the faithful X=X_h A X_h form; "
                 "the advertised count is %d (one extra product over PM's 7)",
                 SchemeId::pm_stable().nominal_mults()));
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries = {
        {1, "coefficient/factorization verification", 1.0, criterion1},
        {2, "Drazin benchmark reproduction at 150 digits", 60.0, criterion2},
        {3, "PM/HM step equivalence with HYPERPOWER(18)", 10.0, criterion3},
        {4, "one-step error recursion vs extended oracle", 30.0, criterion4},
        {5, "Moore-Penrose property suite", 60.0, criterion5},
        {6, "stability contrast PM vs PM-stable", 5.0, criterion6},
        {7, "efficiency indices", 5.0, criterion7},
        {8, "preconditioning iteration ordering", 120.0, criterion8},
        {9, "multiplication accounting", 5.0, criterion9},
    };

    int failures = 0;
    for (const auto& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out.pass = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > e.limit_s) {
            out.pass = false;
            out.detail += fmt("%sruntime %.1fs exceeds %.0fs", out.detail.empty() ? "" : "; ",
                              secs, e.limit_s);
        }
        std::printf("[%s] criterion %d: %s (%.2fs/%.0fs)%s%s\n", out.pass ? "PASS" : "FAIL",
                    e.id, e.name, secs, e.limit_s, out.detail.empty() ? "" : " — ",
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
