#pragma once

// Test-only adaptive Simpson quadrature, the independent oracle for the
// Fresnel implementation. Deliberately naive and separate from the library's
// series/asymptotic evaluation path.

#include <cmath>
#include <functional>

namespace qmem_test {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// integrate f over [a, b] to absolute tolerance ~tol
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    if (a == b) return 0.0;
    // split into unit-length panels so oscillatory integrands are resolved
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a))));
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + (b - a) * i / panels;
        const double x1 = a + (b - a) * (i + 1) / panels;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), fm = f(xm), f1 = f(x1);
        total += adapt(f, x0, x1, f0, fm, f1, simpson(f, x0, x1, f0, fm, f1), tol / panels, 48);
    }
    return total;
}

}  // namespace qmem_test
