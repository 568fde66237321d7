// hyperinv command-line harness: coefficient verification, the Drazin and
// Hilbert benchmarks, the GMRES preconditioning workbench, and a general
// `invert` entry point over MatrixMarket files.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hyperinv/gmres.hpp"
#include "hyperinv/init.hpp"
#include "hyperinv/iterate.hpp"
#include "hyperinv/matrix.hpp"
#include "hyperinv/mmio.hpp"
#include "hyperinv/model_problems.hpp"
#include "hyperinv/precond.hpp"
#include "hyperinv/report_json.hpp"
#include "hyperinv/schemes.hpp"

using namespace hyperinv;
using nlohmann::json;

namespace {

double wall_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

int env_threads() {
    if (const char* s = std::getenv("HYPERINV_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, std::function<void(int)> body) {
    const int workers = std::min(env_threads(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

NormKind parse_norm(const std::string& s) {
    if (s == "one" || s == "1") return NormKind::one;
    if (s == "infinity" || s == "inf") return NormKind::infinity_norm;
    if (s == "frobenius" || s == "fro") return NormKind::frobenius;
    if (s == "spectral-estimate" || s == "spectral") return NormKind::spectral_estimate;
    throw CLI::ValidationError("--norm", "unknown norm kind: " + s);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// --config <json> fills option values the command line left at defaults;
// --dump-config prints the effective configuration and exits.
struct ConfigMerge {
    json file;
    CLI::App* cmd = nullptr;

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
        in >> file;
    }
    void apply(CLI::App& app) {
        cmd = &app;
        if (file.is_null()) return;
        for (auto& [key, value] : file.items()) {
            CLI::Option* opt = app.get_option_no_throw("--" + key);
            if (!opt || opt->count() > 0) continue;  // CLI flags override file values
            std::string text = value.is_string() ? value.get<std::string>() : value.dump();
            opt->add_result(text);
            opt->run_callback();
        }
    }
    json dump(const CLI::App& app) const {
        json out = json::object();
        for (const CLI::Option* opt : app.get_options()) {
            const std::string name = opt->get_name();
            if (name.rfind("--", 0) != 0 || name == "--help" || name == "--config" ||
                name == "--dump-config")
                continue;
            const auto results = opt->results();
            if (!results.empty())
                out[name.substr(2)] = results.size() == 1 ? json(results[0]) : json(results);
            else if (!opt->get_default_str().empty())
                out[name.substr(2)] = opt->get_default_str();
        }
        return out;
    }
};

struct CommonOpts {
    std::string config_path;
    bool dump_config = false;
    unsigned long seed = 0;
    std::string out_path;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "JSON config file (flags override it)");
        app.add_flag("--dump-config", dump_config, "print the effective config as JSON and exit");
        app.add_option("--seed", seed, "seed for commands that draw random instances")
            ->default_str("0");
        app.add_option("--out", out_path, "write results as CSV to this path");
    }
};

// ---------------------------------------------------------------------------
// verify-coeffs
// ---------------------------------------------------------------------------

template <class R>
void perturb_coefficient(PmCoefficients<R>& k, const std::string& name, double delta) {
    const R d = R(delta);
    if (name == "a1") k.a1 += d;
    else if (name == "a2") k.a2 += d;
    else if (name == "a3") k.a3 += d;
    else if (name == "b1") k.b1 += d;
    else if (name == "b2") k.b2 += d;
    else if (name == "b3") k.b3 += d;
    else if (name == "mu") k.mu += d;
    else if (name == "psi") k.psi += d;
    else if (name == "c1") k.c1 += d;
    else if (name == "c2") k.c2 += d;
    else if (name == "c3") k.c3 += d;
    else if (name == "d1") k.d1 += d;
    else if (name == "d2") k.d2 += d;
    else throw CLI::ValidationError("--perturb", "unknown coefficient: " + name);
}

template <class R>
R max_system_residual(const PmCoefficients<R>& k) {
    R worst(0);
    for (const auto& r : pm_system_even_residuals(k)) worst = std::max(worst, r);
    for (const auto& r : pm_system_c_residuals(k)) worst = std::max(worst, r);
    for (const auto& r : pm_system_d_residuals(k)) worst = std::max(worst, r);
    return worst;
}

int cmd_verify_coeffs(unsigned digits, const std::string& perturb, double tol_double,
                      double tol_extended) {
    std::string pname;
    double pdelta = 0.0;
    if (!perturb.empty()) {
        const auto eq = perturb.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--perturb", "expected name=delta");
        pname = perturb.substr(0, eq);
        pdelta = std::stod(perturb.substr(eq + 1));
    }

    struct Row {
        const char* name;
        const char* closed;
    };
    const Row rows[] = {
        {"a1", "5(31+sqrt(93))/496"},
        {"a2", "(3+sqrt(93))/8"},
        {"a3", "1/2"},
        {"b1", "-5(sqrt(93)-31)/496"},
        {"b2", "(3-sqrt(93))/8"},
        {"b3", "1/2"},
        {"mu", "3/8"},
        {"psi", "321/1984"},
        {"c1", "(sqrt(27-2 sqrt(93))+1)/4"},
        {"c2", "(1-sqrt(27-2 sqrt(93)))/4"},
        {"c3", "(5 sqrt(93)-93)/496"},
        {"d1", "(-93-5 sqrt(93))/496"},
        {"d2", "-sqrt(93)/4"},
    };

    auto kd = pm_coefficients<double>();
    if (!pname.empty()) perturb_coefficient(kd, pname, pdelta);
    const double* vals[] = {&kd.a1, &kd.a2, &kd.a3, &kd.b1, &kd.b2, &kd.b3, &kd.mu,
                            &kd.psi, &kd.c1, &kd.c2, &kd.c3, &kd.d1, &kd.d2};
    std::printf("%-4s %-28s %s\n", "name", "closed form", "value");
    for (std::size_t i = 0; i < std::size(rows); ++i)
        std::printf("%-4s %-28s %.17g\n", rows[i].name, rows[i].closed, *vals[i]);

    const double sysres_d = max_system_residual(kd);
    const auto chk_d = verify_pm_factorization(kd, tol_double);
    std::printf("\ndouble precision:\n");
    std::printf("  nonlinear systems max residual: %.3e (tol %.1e)\n", sysres_d, tol_double);
    std::printf("  polynomial identity max |coeff-1|: %.3e at degree %d (tol %.1e)\n",
                chk_d.max_coefficient_error, chk_d.worst_degree, tol_double);

    precision_guard guard(digits);
    auto km = pm_coefficients<mp_real>();
    if (!pname.empty()) perturb_coefficient(km, pname, pdelta);
    const mp_real sysres_m = max_system_residual(km);
    const auto chk_m = verify_pm_factorization(km, mp_real(tol_extended));
    std::printf("%u-digit precision:\n", digits);
    std::printf("  nonlinear systems max residual: %.3e (tol %.1e)\n", to_double(sysres_m),
                tol_extended);
    std::printf("  polynomial identity max |coeff-1|: %.3e at degree %d (tol %.1e)\n",
                to_double(chk_m.max_coefficient_error), chk_m.worst_degree, tol_extended);

    const bool ok = sysres_d <= tol_double && chk_d.ok && sysres_m <= mp_real(tol_extended) &&
                    chk_m.ok;
    std::printf("\n%s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// drazin-table
// ---------------------------------------------------------------------------

struct DrazinRow {
    std::string scheme;
    int loops = 0;
    double final_step = 0.0;
    double rho = 0.0;
    int matmuls_per_loop = 0;
    std::string terminated;
};

template <class T>
DrazinRow run_drazin_scheme(SchemeId id, const DenseMatrix<T>& a, const DenseMatrix<T>& x0,
                            double eps) {
    auto rep = iterate(id, a, x0, StopRule::step(eps, NormKind::infinity_norm, 100));
    DrazinRow row;
    row.scheme = id.name();
    row.loops = rep.loops;
    row.final_step = to_double(rep.history.back().step_norm);
    row.rho = rep.coc.value_or(0.0);
    row.matmuls_per_loop = rep.matmuls_per_loop;
    row.terminated = to_string(rep.terminated);
    return row;
}

int cmd_drazin_table(unsigned digits, double eps, const std::string& schemes_csv,
                     const std::string& out_path) {
    std::vector<SchemeId> schemes;
    for (const auto& s : split(schemes_csv, ',')) schemes.push_back(SchemeId::parse(s));

    std::vector<DrazinRow> rows;
    bool fallback = false;
    if (digits >= 150) {
        precision_guard guard(digits + 20);  // guard digits on top of the requested count
        const auto a = drazin_benchmark_matrix<mp_real>();
        const auto dz = init_drazin(a);
        std::printf("index l = %d, alpha = 1/tr(A^%d) = %.6e\n", dz.index, dz.index + 1,
                    dz.alpha_magnitude());
        for (auto id : schemes) rows.push_back(run_drazin_scheme(id, a, dz.x0, eps));
    } else {
        fallback = true;
        eps = 1e-12;
        std::fprintf(stderr,
                     "warning: %u digits is below the 150 the benchmark table was computed at; "
                     "falling back to double precision with eps=1e-12 (FM row omitted)\n",
                     digits);
        const auto a = drazin_benchmark_matrix<double>();
        const auto dz = init_drazin(a);
        for (auto id : schemes) {
            if (id.kind == SchemeKind::fm) continue;
            rows.push_back(run_drazin_scheme(id, a, dz.x0, eps));
        }
    }

    std::printf("%-14s %6s %14s %8s %6s %s\n", "scheme", "IT", "final step", "rho", "mm/it",
                "terminated");
    for (const auto& r : rows)
        std::printf("%-14s %6d %14.3e %8.2f %6d %s\n", r.scheme.c_str(), r.loops,
                    r.final_step, r.rho, r.matmuls_per_loop, r.terminated.c_str());

    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << "scheme,digits,eps,loops,matmuls_per_loop,total_matmuls,final_step_norm,rho,"
              "terminated\n";
        for (const auto& r : rows) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s,%u,%g,%d,%d,%d,%.6e,%.4f,%s\n",
                          r.scheme.c_str(), fallback ? 0 : digits, eps, r.loops,
                          r.matmuls_per_loop, r.loops * r.matmuls_per_loop, r.final_step,
                          r.rho, r.terminated.c_str());
            os << buf;
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// hilbert-bench
// ---------------------------------------------------------------------------

struct HilbertRow {
    int m = 0, n = 0;
    double eps = 0.0;
    std::string scheme;
    int loops = 0;
    long long total_matmuls = 0;
    double xax = 0.0, axa = 0.0, sym_ax = 0.0, sym_xa = 0.0;
    std::string terminated;
    double ms = 0.0;
};

int cmd_hilbert_bench(const std::string& sizes_csv, const std::string& eps_csv,
                      const std::string& schemes_csv, const std::string& convention,
                      NormKind norm_kind, int max_loops, const std::string& out_path) {
    std::vector<std::pair<int, int>> sizes;
    for (const auto& s : split(sizes_csv, ',')) {
        const auto xs = split(s, 'x');
        if (xs.size() != 2) throw CLI::ValidationError("--sizes", "expected MxN pairs");
        const int m = std::stoi(xs[0]), n = std::stoi(xs[1]);
        if (m <= n)
            throw CLI::ValidationError("--sizes", "expected tall matrices (m > n), got " + s);
        sizes.emplace_back(m, n);
    }
    std::vector<double> epss;
    for (const auto& s : split(eps_csv, ',')) epss.push_back(std::stod(s));
    std::vector<SchemeId> schemes;
    for (const auto& s : split(schemes_csv, ',')) schemes.push_back(SchemeId::parse(s));
    const auto conv = convention == "classical" ? PanSchreiberConvention::singular_values
                                                : PanSchreiberConvention::eigenvalues_of_ga;

    // the eigenvalue work for the starting scale is shared per size
    struct Instance {
        DenseMatrix<double> a;
        InitResult<double> init;
        std::string error;
    };
    std::vector<Instance> instances(sizes.size());
    parallel_for(static_cast<int>(sizes.size()), [&](int s) {
        instances[s].a = hilbert<double>(sizes[s].first, sizes[s].second);
        try {
            instances[s].init = init_pan_schreiber(instances[s].a, conv);
        } catch (const std::exception& e) {
            instances[s].error = e.what();
        }
    });

    struct Task {
        int size_idx;
        double eps;
        SchemeId id;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < sizes.size(); ++s)
        for (double e : epss)
            for (auto id : schemes) tasks.push_back({static_cast<int>(s), e, id});
    std::vector<HilbertRow> rows(tasks.size());

    parallel_for(static_cast<int>(tasks.size()), [&](int t) {
        const auto& task = tasks[t];
        const auto t0 = std::chrono::steady_clock::now();
        const auto& inst = instances[task.size_idx];
        const auto& a = inst.a;
        HilbertRow row;
        row.m = a.rows();
        row.n = a.cols();
        row.eps = task.eps;
        row.scheme = task.id.name();
        try {
            if (!inst.error.empty()) throw io_error(inst.error);
            const auto& init = inst.init;
            auto stop = StopRule::reliable(task.eps, init.alpha_magnitude(), norm_kind,
                                           max_loops);
            auto rep = iterate(task.id, a, init.x0, stop);
            row.loops = rep.loops;
            row.total_matmuls = 0;
            for (const auto& rec : rep.history) row.total_matmuls += rec.matmuls;
            const auto pen = outer_inverse_check(a, rep.final_x, NormKind::frobenius);
            row.xax = to_double(pen.outer);
            row.axa = to_double(pen.inner);
            row.sym_ax = to_double(pen.sym_ax);
            row.sym_xa = to_double(pen.sym_xa);
            row.terminated = to_string(rep.terminated);
        } catch (const std::exception& e) {
            row.terminated = std::string("error: ") + e.what();
        }
        row.ms = wall_ms(t0);
        rows[t] = std::move(row);
    });

    std::printf("%-10s %8s %-14s %6s %8s %12s %12s %s\n", "size", "eps", "scheme", "IT",
                "matmuls", "|XAX-X|", "|AXA-A|", "terminated");
    for (const auto& r : rows)
        std::printf("%4dx%-5d %8.0e %-14s %6d %8lld %12.3e %12.3e %s (%.0f ms)\n", r.m, r.n,
                    r.eps, r.scheme.c_str(), r.loops, r.total_matmuls, r.xax, r.axa,
                    r.terminated.c_str(), r.ms);

    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << "m,n,eps,scheme,loops,total_matmuls,xax,axa,sym_ax,sym_xa,terminated,wall_ms\n";
        for (const auto& r : rows) {
            char buf[512];
            std::snprintf(buf, sizeof(buf), "%d,%d,%g,%s,%d,%lld,%.6e,%.6e,%.6e,%.6e,%s,%.1f\n",
                          r.m, r.n, r.eps, r.scheme.c_str(), r.loops, r.total_matmuls, r.xax,
                          r.axa, r.sym_ax, r.sym_xa, r.terminated.c_str(), r.ms);
            os << buf;
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// precond-bench
// ---------------------------------------------------------------------------

struct PrecondRow {
    std::string config;
    double tol = 0.0;
    int iterations = 0;
    bool converged = false;
    double true_rel = 0.0;
    long long build_matmuls = 0;
    long long nnz = 0;
    double ms = 0.0;
    std::vector<double> curve;
};

int cmd_precond_bench(const std::string& matrix_source, const std::string& tols_csv,
                      int restart, double chop, const std::string& out_path,
                      const std::string& curves_path) {
    using C = std::complex<double>;
    SparseMatrix<C> a;
    if (matrix_source == "builtin") {
        a = shifted_laplacian_2d(29);
    } else {
        const auto h = mmio::peek_header(matrix_source);
        if (!h.coordinate) throw io_error("precond-bench expects a coordinate (sparse) file");
        a = mmio::read_sparse_file<C>(matrix_source);
    }
    if (a.rows() != a.cols()) throw io_error("precond-bench needs a square system");
    const int n = a.rows();
    std::printf("system: %s, n = %d, nnz = %lld\n", matrix_source.c_str(), n, a.nnz());

    std::vector<double> tols;
    for (const auto& s : split(tols_csv, ',')) tols.push_back(std::stod(s));
    const std::vector<C> b(n, C(1.0, 0.0));

    // preconditioners: none, Jacobi, X5 of SM, X3 of CM, X1 of PM
    struct Pre {
        std::string name;
        std::optional<SparseMatrix<C>> m;
        long long build_matmuls = 0;
    };
    std::vector<Pre> pres;
    pres.push_back({"none", std::nullopt, 0});
    {
        const auto ad = densify(a);
        pres.push_back({"jacobi", sparsify(init_diagonal(ad).x0, 0.0), 0});
    }
    for (auto [id, loops] : {std::pair{SchemeId::sm(), 5}, std::pair{SchemeId::cm(), 3},
                             std::pair{SchemeId::pm(), 1}}) {
        MatmulCounter counter;
        auto t0 = std::chrono::steady_clock::now();
        auto m = build_preconditioner(a, id, loops, chop, &counter);
        std::printf("built %s X%d: %lld matmuls, nnz = %lld (%.0f ms)\n", id.name().c_str(),
                    loops, counter.total, m.nnz(), wall_ms(t0));
        pres.push_back({id.name() + "-X" + std::to_string(loops), std::move(m),
                        counter.total});
    }

    std::vector<PrecondRow> rows;
    for (double tol : tols) {
        for (const auto& pre : pres) {
            GmresConfig cfg;
            cfg.restart = restart;
            cfg.tol = tol;
            cfg.max_iters = 20 * n;
            cfg.record_true_residuals = !curves_path.empty();
            const auto t0 = std::chrono::steady_clock::now();
            const auto rep = gmres(a, b, cfg, pre.m ? &*pre.m : nullptr);
            PrecondRow row;
            row.config = pre.name;
            row.tol = tol;
            row.iterations = rep.iterations;
            row.converged = rep.converged;
            row.true_rel = rep.true_relative_residual;
            row.build_matmuls = pre.build_matmuls;
            row.nnz = pre.m ? pre.m->nnz() : 0;
            row.ms = wall_ms(t0);
            row.curve = rep.residual_history;
            rows.push_back(std::move(row));
        }
    }

    std::printf("%-10s %8s %6s %5s %12s %s\n", "config", "tol", "iters", "conv", "true rel",
                "ms");
    for (const auto& r : rows)
        std::printf("%-10s %8.0e %6d %5s %12.3e %.0f\n", r.config.c_str(), r.tol,
                    r.iterations, r.converged ? "yes" : "NO", r.true_rel, r.ms);

    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << "config,tol,iterations,converged,true_rel_residual,build_matmuls,nnz,wall_ms\n";
        for (const auto& r : rows) {
            char buf[512];
            std::snprintf(buf, sizeof(buf), "%s,%g,%d,%d,%.6e,%lld,%lld,%.1f\n",
                          r.config.c_str(), r.tol, r.iterations, r.converged ? 1 : 0,
                          r.true_rel, r.build_matmuls, r.nnz, r.ms);
            os << buf;
        }
    }
    if (!curves_path.empty()) {
        std::ofstream os(curves_path);
        os << "config,tol,iteration,precond_residual\n";
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.curve.size(); ++i) {
                char buf[256];
                std::snprintf(buf, sizeof(buf), "%s,%g,%zu,%.6e\n", r.config.c_str(), r.tol,
                              i + 1, r.curve[i]);
                os << buf;
            }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// invert
// ---------------------------------------------------------------------------

struct InvertChecks {
    json details = json::object();
    bool pass = true;

    template <class R>
    void add(const std::string& name, const R& value, const R& scale, double tol) {
        const double rel = to_double(scale) > 0 ? to_double(value) / to_double(scale)
                                                : to_double(value);
        details[name] = {{"residual", to_double(value)}, {"relative", rel}};
        if (rel > tol) pass = false;
    }
};

template <class T>
int invert_run(const DenseMatrix<T>& a, SchemeId scheme, const std::string& init_name,
               double eps, NormKind norm_kind, int max_loops, double check_tol,
               const std::string& out_path) {
    using R = real_t<T>;
    DenseMatrix<T> x0;
    double alpha = 1.0;
    int drazin_index = -1;
    std::string check_kind = "outer";

    if (init_name == "adjoint") {
        auto init = init_scaled_adjoint(a);
        x0 = init.x0;
        alpha = init.alpha_magnitude();
        check_kind = "moore-penrose";
    } else if (init_name == "pan-schreiber" || init_name == "pan-schreiber:classical") {
        const auto conv = init_name == "pan-schreiber"
                              ? PanSchreiberConvention::eigenvalues_of_ga
                              : PanSchreiberConvention::singular_values;
        auto init = init_pan_schreiber(a, conv);
        x0 = init.x0;
        alpha = init.alpha_magnitude();
        check_kind = "moore-penrose";
    } else if (init_name == "drazin") {
        auto init = init_drazin(a);
        x0 = init.x0;
        alpha = init.alpha_magnitude();
        drazin_index = init.index;
        check_kind = "drazin";
    } else if (init_name == "diagonal") {
        x0 = init_diagonal(a).x0;
        check_kind = "outer";
    } else if (init_name.rfind("explicit:", 0) == 0) {
        const auto parts = split(init_name, ':');
        if (parts.size() != 3)
            throw io_error("explicit init expects explicit:<file>:<alpha>");
        const auto g = mmio::read_dense_file<T>(parts[1]);
        x0 = init_explicit(g, T(R(std::stod(parts[2])))).x0;
        alpha = std::abs(std::stod(parts[2]));
        check_kind = "outer";
    } else {
        throw io_error("unknown init strategy: " + init_name);
    }

    StopRule stop = StopRule::reliable(eps, alpha, norm_kind, max_loops);
    auto rep = iterate(scheme, a, x0, stop);

    InvertChecks checks;
    const R nx = norm_frobenius(rep.final_x);
    const R na = norm_frobenius(a);
    const auto pen = outer_inverse_check(a, rep.final_x, NormKind::frobenius);
    checks.add("xax_minus_x", pen.outer, nx, check_tol);
    if (check_kind == "moore-penrose") {
        checks.add("axa_minus_a", pen.inner, na, check_tol);
        checks.add("ax_hermitian", pen.sym_ax, na * nx, check_tol);
        checks.add("xa_hermitian", pen.sym_xa, na * nx, check_tol);
    } else if (check_kind == "drazin") {
        const auto ax = matmul(a, rep.final_x);
        const auto xa = matmul(rep.final_x, a);
        checks.add("ax_minus_xa", norm_frobenius(ax - xa), na * nx, check_tol);
        const auto al = mat_pow(a, drazin_index);
        checks.add("a^{l+1}x_minus_a^l", norm_frobenius(matmul(matmul(al, a), rep.final_x) - al),
                   norm_frobenius(al), check_tol);
    }

    const bool converged = rep.terminated == Terminated::converged;
    json out = to_json(rep);
    out["scheme"] = scheme.name();
    out["init"] = init_name;
    out["alpha"] = alpha;
    if (drazin_index >= 0) out["drazin_index"] = drazin_index;
    out["checks"] = checks.details;
    out["checks_pass"] = checks.pass;
    out["check_tol"] = check_tol;
    std::cout << out.dump(2) << "\n";

    if (!out_path.empty()) mmio::write_dense_file(out_path, rep.final_x);
    return (converged && checks.pass) ? 0 : 1;
}

int cmd_invert(const std::string& matrix_path, const std::string& scheme_name,
               const std::string& init_name, double eps, unsigned digits, NormKind norm_kind,
               int max_loops, double check_tol, const std::string& out_path) {
    const SchemeId scheme = SchemeId::parse(scheme_name);
    const auto header = mmio::peek_header(matrix_path);
    auto load_dense = [&](auto tag) {
        using T = decltype(tag);
        return header.coordinate ? densify(mmio::read_sparse_file<T>(matrix_path))
                                 : mmio::read_dense_file<T>(matrix_path);
    };
    if (header.complex_field) {
        if (digits > 0)
            throw io_error("extended precision is real-only; use --digits 0 for complex input");
        return invert_run(load_dense(std::complex<double>{}), scheme, init_name, eps,
                          norm_kind, max_loops, check_tol, out_path);
    }
    if (digits > 0) {
        precision_guard guard(digits + 20);
        return invert_run(load_dense(mp_real{}), scheme, init_name, eps, norm_kind, max_loops,
                          check_tol, out_path);
    }
    return invert_run(load_dense(double{}), scheme, init_name, eps, norm_kind, max_loops,
                      check_tol, out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperpower iterations for generalized matrix inverses"};
    app.require_subcommand(1);

    // verify-coeffs
    auto* vc = app.add_subcommand("verify-coeffs",
                                  "check the order-18 scheme coefficients and factorization");
    unsigned vc_digits = 150;
    std::string vc_perturb;
    double vc_tol_d = 1e-12, vc_tol_x = 1e-140;
    CommonOpts vc_common;
    vc->add_option("--digits", vc_digits, "extended decimal digits")->default_str("150");
    vc->add_option("--perturb", vc_perturb, "perturb one coefficient, e.g. mu=1e-3");
    vc->add_option("--tol-double", vc_tol_d)->default_str("1e-12");
    vc->add_option("--tol-extended", vc_tol_x)->default_str("1e-140");
    vc_common.attach(*vc);

    // drazin-table
    auto* dt = app.add_subcommand("drazin-table", "reproduce the 12x12 Drazin benchmark table");
    unsigned dt_digits = 150;
    double dt_eps = 1e-50;
    std::string dt_schemes = "SM,CM,FM,PM";
    CommonOpts dt_common;
    dt->add_option("--digits", dt_digits)->default_str("150");
    dt->add_option("--eps", dt_eps, "infinity-norm step tolerance")->default_str("1e-50");
    dt->add_option("--schemes,--scheme", dt_schemes)->default_str("SM,CM,FM,PM");
    dt_common.attach(*dt);

    // hilbert-bench
    auto* hb = app.add_subcommand("hilbert-bench",
                                  "Moore-Penrose runs on rectangular Hilbert matrices");
    std::string hb_sizes = "100x90,200x190,300x290";
    std::string hb_eps = "1e-5,1e-6,1e-7";
    std::string hb_schemes = "SM,CM,HM,PM";
    std::string hb_conv = "literal";
    std::string hb_norm = "frobenius";
    int hb_loops = 100;
    CommonOpts hb_common;
    hb->add_option("--sizes", hb_sizes)->default_str("100x90,200x190,300x290");
    hb->add_option("--eps", hb_eps)->default_str("1e-5,1e-6,1e-7");
    hb->add_option("--schemes,--scheme", hb_schemes)->default_str("SM,CM,HM,PM");
    hb->add_option("--convention", hb_conv, "pan-schreiber alpha convention: literal|classical")
        ->default_str("literal");
    hb->add_option("--norm", hb_norm)->default_str("frobenius");
    hb->add_option("--max-loops", hb_loops)->default_str("100");
    hb_common.attach(*hb);

    // precond-bench
    auto* pb = app.add_subcommand("precond-bench",
                                  "GMRES preconditioning workbench (builtin 841 system)");
    std::string pb_matrix = "builtin";
    std::string pb_tols = "1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8,1e-9,1e-10";
    int pb_restart = 50;
    double pb_chop = 1e-5;
    std::string pb_curves;
    CommonOpts pb_common;
    pb->add_option("--matrix", pb_matrix, "builtin or a MatrixMarket coordinate file")
        ->default_str("builtin");
    pb->add_option("--tols,--eps", pb_tols);
    pb->add_option("--restart", pb_restart)->default_str("50");
    pb->add_option("--chop", pb_chop, "sparsification threshold applied after each loop")
        ->default_str("1e-5");
    pb->add_option("--curves", pb_curves, "write per-iteration residual curves CSV here");
    pb_common.attach(*pb);

    // invert
    auto* iv = app.add_subcommand("invert", "compute a generalized inverse of a MatrixMarket file");
    std::string iv_matrix, iv_scheme = "PM", iv_init = "pan-schreiber", iv_norm = "frobenius";
    double iv_eps = 1e-12, iv_check = 1e-8;
    unsigned iv_digits = 0;
    int iv_loops = 100;
    CommonOpts iv_common;
    iv->add_option("--matrix", iv_matrix, "input MatrixMarket file")->required();
    iv->add_option("--scheme", iv_scheme)->default_str("PM");
    iv->add_option("--init", iv_init,
                   "adjoint | pan-schreiber | pan-schreiber:classical | drazin | diagonal | "
                   "explicit:<file>:<alpha>")
        ->default_str("pan-schreiber");
    iv->add_option("--eps", iv_eps)->default_str("1e-12");
    iv->add_option("--digits", iv_digits, "0 = double, else extended decimal digits")
        ->default_str("0");
    iv->add_option("--norm", iv_norm)->default_str("frobenius");
    iv->add_option("--max-loops", iv_loops)->default_str("100");
    iv->add_option("--check-tol", iv_check, "relative tolerance for the defining equations")
        ->default_str("1e-8");
    iv_common.attach(*iv);

    CLI11_PARSE(app, argc, argv);

    auto handle_common = [&](CLI::App* cmd, CommonOpts& common) -> bool {
        if (!common.config_path.empty()) {
            ConfigMerge merge;
            merge.load(common.config_path);
            merge.apply(*cmd);
        }
        if (common.dump_config) {
            ConfigMerge merge;
            std::cout << merge.dump(*cmd).dump(2) << "\n";
            return true;
        }
        return false;
    };

    try {
        if (vc->parsed()) {
            if (handle_common(vc, vc_common)) return 0;
            return cmd_verify_coeffs(vc_digits, vc_perturb, vc_tol_d, vc_tol_x);
        }
        if (dt->parsed()) {
            if (handle_common(dt, dt_common)) return 0;
            return cmd_drazin_table(dt_digits, dt_eps, dt_schemes, dt_common.out_path);
        }
        if (hb->parsed()) {
            if (handle_common(hb, hb_common)) return 0;
            return cmd_hilbert_bench(hb_sizes, hb_eps, hb_schemes, hb_conv,
                                     parse_norm(hb_norm), hb_loops, hb_common.out_path);
        }
        if (pb->parsed()) {
            if (handle_common(pb, pb_common)) return 0;
            return cmd_precond_bench(pb_matrix, pb_tols, pb_restart, pb_chop,
                                     pb_common.out_path, pb_curves);
        }
        if (iv->parsed()) {
            if (handle_common(iv, iv_common)) return 0;
            return cmd_invert(iv_matrix, iv_scheme, iv_init, iv_eps, iv_digits,
                              parse_norm(iv_norm), iv_loops, iv_check, iv_common.out_path);
        }
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 0;
}
