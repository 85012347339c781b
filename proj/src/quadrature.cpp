#include "leray/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <mutex>

namespace leray {

namespace {

std::once_flag g_handler_once;

double trampoline(double x, void* params) {
    auto* f = static_cast<const std::function<double(double)>*>(params);
    return (*f)(x);
}

}  // namespace

QuadResult integrate_weighted(const std::function<double(double)>& smooth, double a, double b,
                              double alpha, double beta, double epsabs, double epsrel) {
    std::call_once(g_handler_once, [] { gsl_set_error_handler_off(); });
    QuadResult r;
    if (!(b > a)) return r;

    gsl_function f;
    f.function = &trampoline;
    f.params = const_cast<void*>(static_cast<const void*>(&smooth));

    constexpr std::size_t limit = 4096;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(limit);
    int status;
    if (alpha == 0.0 && beta == 0.0) {
        status = gsl_integration_qags(&f, a, b, epsabs, epsrel, limit, ws, &r.value, &r.abserr);
    } else {
        gsl_integration_qaws_table* tbl = gsl_integration_qaws_table_alloc(alpha, beta, 0, 0);
        if (!tbl) {
            gsl_integration_workspace_free(ws);
            return r;
        }
        status =
            gsl_integration_qaws(&f, a, b, tbl, epsabs, epsrel, limit, ws, &r.value, &r.abserr);
        gsl_integration_qaws_table_free(tbl);
    }
    gsl_integration_workspace_free(ws);
    r.converged = status == GSL_SUCCESS;
    return r;
}

}  // namespace leray
