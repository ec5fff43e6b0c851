#include "qdcor/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qdcor/errors.hpp"

namespace qdcor {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] and the embedded 7-point Gauss
// weights (abscissae 1,3,...,13 of the Kronrod set).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gk15(const std::function<double(double)>& g, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = g(c);
    double result_gauss = fc * kWg[3];
    double result_kronrod = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = g(c - x);
        const double f2 = g(c + x);
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
    }
    result_kronrod *= h;
    result_gauss *= h;
    return {result_kronrod, std::fabs(result_kronrod - result_gauss)};
}

struct Panel {
    double a, b;
    PanelResult r;
};

// Adaptive refinement over a finite interval, splitting the worst panel.
double adapt(const std::function<double(double)>& g,
             std::vector<Panel>& panels, double rel_tol, int max_refinements) {
    int refinements = 0;
    for (;;) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        double worst_err = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].r.integral;
            err += panels[i].r.error;
            if (panels[i].r.error > worst_err) {
                worst_err = panels[i].r.error;
                worst = i;
            }
        }
        const double tol = std::max(rel_tol * std::fabs(total), 1e-300);
        if (err <= tol || worst_err <= 0.0) return total;
        if (++refinements > max_refinements)
            throw NumericError("quadrature: panel refinement cap exceeded");
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) return total;  // interval exhausted
        panels[worst] = {p.a, mid, gk15(g, p.a, mid)};
        panels.push_back({mid, p.b, gk15(g, mid, p.b)});
    }
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_refinements) {
    if (std::isnan(a) || std::isnan(b) || a > b)
        throw std::domain_error("integrate: requires a <= b");
    if (a == b) return 0.0;

    // Map the (possibly infinite) range onto finite panels in t-space.
    //   upper tail  y = lo + t/(1-t),  t in [0,1)
    //   lower tail  y = hi - t/(1-t)   (negated to keep orientation)
    // Splits at 0 and at the original endpoints fall out of the panel list.
    struct Piece {
        std::function<double(double)> g;
        double ta, tb;
    };
    std::vector<Piece> pieces;

    auto add_finite = [&](double lo, double hi) {
        if (lo >= hi) return;
        pieces.push_back({[&f](double y) { return f(y); }, lo, hi});
    };
    auto add_upper_tail = [&](double lo) {
        pieces.push_back({[&f, lo](double t) {
                              const double u = 1.0 - t;
                              const double y = lo + t / u;
                              return f(y) / (u * u);
                          },
                          0.0, 1.0});
    };
    auto add_lower_tail = [&](double hi) {
        pieces.push_back({[&f, hi](double t) {
                              const double u = 1.0 - t;
                              const double y = hi - t / u;
                              return f(y) / (u * u);
                          },
                          0.0, 1.0});
    };

    const bool a_inf = std::isinf(a);
    const bool b_inf = std::isinf(b);
    if (a_inf && b_inf) {
        add_lower_tail(0.0);
        add_upper_tail(0.0);
    } else if (a_inf) {
        if (b > 0.0) {
            add_lower_tail(0.0);
            add_finite(0.0, b);
        } else {
            add_lower_tail(b);
        }
    } else if (b_inf) {
        if (a < 0.0) {
            add_finite(a, 0.0);
            add_upper_tail(0.0);
        } else {
            add_upper_tail(a);
        }
    } else {
        if (a < 0.0 && b > 0.0) {
            add_finite(a, 0.0);
            add_finite(0.0, b);
        } else {
            add_finite(a, b);
        }
    }

    double total = 0.0;
    for (const auto& piece : pieces) {
        std::vector<Panel> panels;
        panels.push_back({piece.ta, piece.tb, gk15(piece.g, piece.ta, piece.tb)});
        total += adapt(piece.g, panels, rel_tol, max_refinements);
    }
    return total;
}

}  // namespace qdcor
