#pragma once

// Test-only helpers. simpson() is the independent integration oracle used to
// check the library's closed forms and its Gauss-Legendre engine; it shares
// no code with kernsel::integrate.

#include <cmath>
#include <functional>

namespace testsupport {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int intervals = 20000) {
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; i += 2) sum += 4.0 * f(a + i * h);
    for (int i = 2; i < intervals; i += 2) sum += 2.0 * f(a + i * h);
    return sum * h / 3.0;
}

}  // namespace testsupport
