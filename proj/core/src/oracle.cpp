#include "zgsopt/oracle.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "zgsopt/errors.hpp"

namespace zgs {

OracleSolution centralized_minimize(std::span<const CostFunction> costs, const Vec& x0,
                                    double t) {
    if (costs.empty()) throw ValidationError("centralized_minimize: no costs");
    const int n = costs[0].dim;

    auto total_value = [&](const Vec& x) {
        double v = 0.0;
        for (const auto& f : costs) v += f.value(x, t);
        return v;
    };
    auto total_gradient = [&](const Vec& x) {
        Vec g = Vec::Zero(n);
        for (const auto& f : costs) g += f.gradient(x, t);
        return g;
    };

    const double tol = 1e-12;
    const int max_iter = 200;

    OracleSolution sol;
    Vec x = x0;
    Vec g = total_gradient(x);
    int it = 0;
    while (g.norm() > tol && it < max_iter) {
        Mat hess = Mat::Zero(n, n);
        for (const auto& f : costs) hess += f.hessian(x, t);
        Eigen::LLT<Mat> llt(hess);
        if (llt.info() != Eigen::Success) {
            std::ostringstream os;
            os << "centralized_minimize: aggregate Hessian not positive definite at x = ["
               << x.transpose() << "]";
            throw ConvexityError(os.str());
        }
        Vec dx = -llt.solve(g);

        // slack keeps the descent test meaningful at the roundoff floor of F
        double f0 = total_value(x);
        double slack = 1e-14 * (1.0 + std::abs(f0));
        double beta = 1.0;
        while (beta > 1e-12 && total_value(x + beta * dx) > f0 + slack) beta *= 0.5;
        x += beta * dx;
        g = total_gradient(x);
        ++it;
    }
    sol.x_star = x;
    sol.residual = g.norm();
    sol.iterations = it;
    if (sol.residual > tol) {
        std::ostringstream os;
        os << "centralized_minimize: iteration cap reached with residual " << sol.residual;
        throw NumericalError(os.str());
    }
    return sol;
}

double scalar_pdt_decay(double V0, double alpha, double p, double T_m) {
    if (!(alpha > 0.0) || !(p > 0.0 && p < 1.0) || !(T_m > 0.0)) {
        throw ValidationError("scalar_pdt_decay: need alpha > 0, 0 < p < 1, T_m > 0");
    }
    const double dt = 1e-5;
    const double floor = 1e-12;
    if (V0 <= floor) return 0.0;

    double V = V0;
    double t = 0.0;
    const double coef = 1.0 / (alpha * p * T_m);
    // the decay lemma bounds the crossing by T_m; 2*T_m is a hard safety stop
    while (t < 2.0 * T_m) {
        double dec =
            dt * coef * std::exp(std::min(alpha * std::pow(V, p), 700.0)) * std::pow(V, 1.0 - p);
        t += dt;
        if (!(dec < V)) return t;  // crossed zero within this step
        V -= dec;
        if (V <= floor) return t;
    }
    return t;
}

std::function<Vec(double)> tracking_reference(const std::vector<Vec>& biases,
                                              const TargetTrajectory& target) {
    if (biases.empty()) throw ValidationError("tracking_reference: no biases");
    Vec mean = Vec::Zero(biases[0].size());
    for (const Vec& b : biases) mean += b;
    mean /= static_cast<double>(biases.size());
    auto pos = target.position;
    return [pos, mean](double t) -> Vec { return pos(t) + mean; };
}

}  // namespace zgs
