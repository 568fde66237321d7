#pragma once

#include "hyperinv/init.hpp"
#include "hyperinv/schemes.hpp"
#include "hyperinv/sparse.hpp"

namespace hyperinv {

/// Carries the last usable sparse approximate inverse when a later loop blew up.
template <class T>
struct precond_divergence_error : diagnostic_error {
    SparseMatrix<T> partial;
    precond_divergence_error(const std::string& what, SparseMatrix<T> p)
        : diagnostic_error(what), partial(std::move(p)) {}
};

/// Runs `loops` scheme steps from the reciprocal-diagonal seed, chopping
/// entries below `threshold` at the end of each loop, and returns the final
/// sparse approximate inverse. Intermediates are dense (desk scale).
template <class T>
SparseMatrix<T> build_preconditioner(const SparseMatrix<T>& a, SchemeId scheme, int loops,
                                     real_t<T> threshold = real_t<T>(1e-5),
                                     MatmulCounter* counter = nullptr) {
    if (a.rows() != a.cols()) throw shape_error("build_preconditioner: matrix must be square");
    if (loops < 1) throw config_error("build_preconditioner: loops must be positive");
    const DenseMatrix<T> ad = densify(a);
    DenseMatrix<T> x = init_diagonal(ad).x0;  // throws degenerate_input_error on zero diagonal
    SparseMatrix<T> last = sparsify(x, threshold);
    for (int k = 0; k < loops; ++k) {
        DenseMatrix<T> next;
        try {
            next = scheme_step(scheme, ad, x, counter);
        } catch (const diagnostic_error& e) {
            throw precond_divergence_error<T>(
                "build_preconditioner: diverged at loop " + std::to_string(k + 1), last);
        }
        last = sparsify(next, threshold);
        x = densify(last);
    }
    return last;
}

}  // namespace hyperinv
