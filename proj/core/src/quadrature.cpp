#include "qsa/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include "qsa/errors.hpp"

namespace qsa {

namespace {

// QUADPACK dqk15 nodes and weights.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    const double fc = f(c);
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    double resabs = std::fabs(resk);
    double fv[15];
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double f1 = f(c - h * xgk[j]);
        const double f2 = f(c + h * xgk[j]);
        fv[j] = f1;
        fv[14 - j] = f2;
        resk += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::fabs(fv[j] - reskh) + std::fabs(fv[14 - j] - reskh));
    resasc *= std::fabs(h);
    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (!std::isfinite(resk))
        throw QuadratureFailure("non-finite integrand value");
    return {a, b, resk * h, err};
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureParams& qp) {
    if (a == b) return 0.0;
    std::priority_queue<Panel> heap;
    Panel first = gk15(f, a, b);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    int panels = 1;
    while (total_err > qp.abs_tol && !heap.empty()) {
        if (panels >= qp.max_panels)
            throw QuadratureFailure("panel budget exhausted before reaching tolerance");
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) continue; // interval at rounding limit
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    return total;
}

} // namespace qsa
