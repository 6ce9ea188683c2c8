#include "tsr/quadrature.hpp"

#include <climits>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace tsr {

namespace {

// 15-point Kronrod abscissae (positive half) and weights; rows 1,3,5,7 are
// the embedded 7-point Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = kWgk[7] * f(c);
    double resg = kWg[3] * f(c);
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double value = resk * h;
    const double err = std::fabs((resk - resg) * h);
    return Panel{a, b, value, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_panels) {
    if (!(b > a)) throw std::invalid_argument("integrate: requires b > a");
    QuadResult res;
    std::priority_queue<Panel> heap;
    heap.push(kronrod_panel(f, a, b));
    res.evaluations = 15;
    double total = heap.top().value;
    double total_err = heap.top().error;
    int panels = 1;
    while (panels < max_panels) {
        const double tol = std::max(abs_tol, rel_tol * std::fabs(total));
        if (total_err <= tol) break;
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = kronrod_panel(f, worst.a, mid);
        const Panel right = kronrod_panel(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    res.value = total;
    res.error = total_err;
    res.converged =
        total_err <= std::max(abs_tol, rel_tol * std::fabs(total));
    return res;
}

QuadResult integrate2d(const std::function<double(double, double)>& f,
                       double ax, double bx, double ay, double by,
                       double rel_tol, double abs_tol, int max_panels,
                       double inner_factor) {
    double inner_err = 0.0;
    bool inner_ok = true;
    long inner_evals = 0;
    const auto outer = [&](double x) {
        const QuadResult r =
            integrate([&](double y) { return f(x, y); }, ay, by,
                      rel_tol * inner_factor, abs_tol * inner_factor,
                      max_panels);
        inner_err = std::max(inner_err, r.error);
        inner_ok = inner_ok && r.converged;
        inner_evals += r.evaluations;
        return r.value;
    };
    QuadResult res = integrate(outer, ax, bx, rel_tol, abs_tol, max_panels);
    // fold the worst inner error, scaled by the outer measure, into the bound
    res.error += inner_err * (bx - ax);
    res.converged = res.converged && inner_ok &&
                    res.error <= std::max(abs_tol, rel_tol * std::fabs(res.value));
    res.evaluations =
        inner_evals > INT_MAX ? INT_MAX : static_cast<int>(inner_evals);
    return res;
}

}  // namespace tsr
