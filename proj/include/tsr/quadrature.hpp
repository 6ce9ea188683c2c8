#pragma once

#include <functional>

namespace tsr {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    int evaluations = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a,b]: bisects the panel with the
/// largest error estimate until the summed estimate meets
/// max(abs_tol, rel_tol*|value|) or max_panels is reached.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-9, double abs_tol = 0.0,
                     int max_panels = 2000);

/// Iterated 2-D integral over [ax,bx] x [ay,by]: adaptive outer rule applied
/// to inner 1-D integrals (inner tolerance tightened by `inner_factor`).
QuadResult integrate2d(const std::function<double(double, double)>& f,
                       double ax, double bx, double ay, double by,
                       double rel_tol = 1e-7, double abs_tol = 0.0,
                       int max_panels = 400, double inner_factor = 0.1);

}  // namespace tsr
