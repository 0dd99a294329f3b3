// Solve the nonlinear problem for one delta, print a few values with the
// error bound, and cross-check against the shooting method.

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "moderf/moderf.hpp"

int main(int argc, char** argv) {
    const double delta = argc > 1 ? std::atof(argv[1]) : 0.1;

    const auto cert = moderf::certify(delta);
    std::printf("delta = %g, g(delta) = %.10f, contractive: %s\n", delta, cert.g_value,
                cert.is_contractive ? "yes" : "no");
    if (!cert.is_contractive) return 1;

    const auto report = moderf::solve(delta, 1e-10);
    std::printf("%zu iterations, a-posteriori bound %.3g\n", report.iterations,
                report.a_posteriori_bound);
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
        std::printf("  step %2zu  residual %.3e\n", i + 1, report.residuals[i]);
    }

    std::printf("\n%6s %20s %20s\n", "x", "y(x)", "erf(x)");
    for (double x : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        std::printf("%6.2f %20.15f %20.15f\n", x, report.solution(x), std::erf(x));
    }

    const auto shot = moderf::solve_shooting(delta, 1e-11, report.solution.x_max());
    const double gap = moderf::compare_solutions(delta, report.solution, 1e-10);
    std::printf("\ny'(0) by shooting %.15f, sup-distance to fixed point %.2e\n", shot.slope0, gap);
    return 0;
}
