#include "zgsopt/costs.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "zgsopt/errors.hpp"

namespace zgs {

DomainBox DomainBox::centered(int dim, double half_width) {
    DomainBox b;
    b.lo = Vec::Constant(dim, -half_width);
    b.hi = Vec::Constant(dim, half_width);
    return b;
}

namespace {

Vec zero_dgrad(const Vec& x, double) { return Vec::Zero(x.size()); }

CostFunction make_static(std::string name,
                         std::function<double(double, double)> value,
                         std::function<Vec(double, double)> gradient,
                         std::function<Mat(double, double)> hessian) {
    CostFunction f;
    f.dim = 2;
    f.time_varying = false;
    f.name = std::move(name);
    f.value = [value](const Vec& x, double) { return value(x(0), x(1)); };
    f.gradient = [gradient](const Vec& x, double) { return gradient(x(0), x(1)); };
    f.hessian = [hessian](const Vec& x, double) { return hessian(x(0), x(1)); };
    f.dgrad_dt = zero_dgrad;
    return f;
}

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Mat m2(double a11, double a12, double a22) {
    Mat m(2, 2);
    m << a11, a12, a12, a22;
    return m;
}

}  // namespace

std::vector<CostFunction> benchmark_suite_A() {
    std::vector<CostFunction> out;

    out.push_back(make_static(
        "f1",
        [](double x1, double x2) {
            return (x1 - 0.5) * (x1 - 0.5) + 2.0 * (x2 + 1.3) * (x2 + 1.3) - 0.5 * x1 * x2;
        },
        [](double x1, double x2) {
            return v2(2.0 * (x1 - 0.5) - 0.5 * x2, 4.0 * (x2 + 1.3) - 0.5 * x1);
        },
        [](double, double) { return m2(2.0, -0.5, 4.0); }));

    out.push_back(make_static(
        "f2",
        [](double x1, double x2) {
            return 2.0 * (x1 + 0.7) * (x1 + 0.7) + 1.5 * (x2 + 1.7) * (x2 + 1.7) +
                   0.3 * x1 * x2 + 0.3 * std::sin(0.3 * x1 + 1.8) +
                   0.73 * std::cos(0.5 * x2 + 1.0);
        },
        [](double x1, double x2) {
            return v2(4.0 * (x1 + 0.7) + 0.3 * x2 + 0.09 * std::cos(0.3 * x1 + 1.8),
                      3.0 * (x2 + 1.7) + 0.3 * x1 - 0.365 * std::sin(0.5 * x2 + 1.0));
        },
        [](double x1, double x2) {
            return m2(4.0 - 0.027 * std::sin(0.3 * x1 + 1.8), 0.3,
                      3.0 - 0.1825 * std::cos(0.5 * x2 + 1.0));
        }));

    out.push_back(make_static(
        "f3",
        [](double x1, double x2) {
            return 2.0 * (x1 - 1.5) * (x1 - 1.5) + 2.0 * (x2 - 0.3) * (x2 - 0.3) +
                   std::log(2.0 + 0.1 * x1 * x1) + std::log(4.0 + 0.6 * x2 * x2);
        },
        [](double x1, double x2) {
            return v2(4.0 * (x1 - 1.5) + 0.2 * x1 / (2.0 + 0.1 * x1 * x1),
                      4.0 * (x2 - 0.3) + 1.2 * x2 / (4.0 + 0.6 * x2 * x2));
        },
        [](double x1, double x2) {
            double d1 = 2.0 + 0.1 * x1 * x1;
            double d2 = 4.0 + 0.6 * x2 * x2;
            return m2(4.0 + (0.4 - 0.02 * x1 * x1) / (d1 * d1), 0.0,
                      4.0 + (4.8 - 0.72 * x2 * x2) / (d2 * d2));
        }));

    out.push_back(make_static(
        "f4",
        [](double x1, double x2) {
            return 0.5 * (x1 - 1.5) * (x1 - 1.5) + 1.5 * (x2 + 1.6) * (x2 + 1.6) +
                   0.5 * x1 * x2 + x1 / std::sqrt(2.0 + 0.4 * x1 * x1) +
                   0.6 * x2 / std::sqrt(1.0 + x2 * x2);
        },
        [](double x1, double x2) {
            double r1 = 2.0 + 0.4 * x1 * x1;
            double r2 = 1.0 + x2 * x2;
            return v2((x1 - 1.5) + 0.5 * x2 + 2.0 * std::pow(r1, -1.5),
                      3.0 * (x2 + 1.6) + 0.5 * x1 + 0.6 * std::pow(r2, -1.5));
        },
        [](double x1, double x2) {
            double r1 = 2.0 + 0.4 * x1 * x1;
            double r2 = 1.0 + x2 * x2;
            return m2(1.0 - 2.4 * x1 * std::pow(r1, -2.5), 0.5,
                      3.0 - 1.8 * x2 * std::pow(r2, -2.5));
        }));

    out.push_back(make_static(
        "f5",
        [](double x1, double x2) {
            return (x1 - 2.0) * (x1 - 2.0) + (x2 - 0.9) * (x2 - 0.9) + 0.7 * x1 * x2 +
                   0.3 * std::exp(-0.4 * x1 * x1) + 0.7 * std::exp(-0.5 * x2 * x2);
        },
        [](double x1, double x2) {
            return v2(2.0 * (x1 - 2.0) + 0.7 * x2 - 0.24 * x1 * std::exp(-0.4 * x1 * x1),
                      2.0 * (x2 - 0.9) + 0.7 * x1 - 0.7 * x2 * std::exp(-0.5 * x2 * x2));
        },
        [](double x1, double x2) {
            return m2(2.0 + (0.192 * x1 * x1 - 0.24) * std::exp(-0.4 * x1 * x1), 0.7,
                      2.0 + 0.7 * (x2 * x2 - 1.0) * std::exp(-0.5 * x2 * x2));
        }));

    out.push_back(make_static(
        "f6",
        [](double x1, double x2) {
            return 1.5 * (x1 - 0.8) * (x1 - 0.8) + 2.0 * (x2 + 1.5) * (x2 + 1.5);
        },
        [](double x1, double x2) { return v2(3.0 * (x1 - 0.8), 4.0 * (x2 + 1.5)); },
        [](double, double) { return m2(3.0, 0.0, 4.0); }));

    return out;
}

CostFunction quadratic_tracking(const TargetTrajectory& target, const Vec& bias) {
    if (!target.position || !target.velocity) {
        throw ValidationError("quadratic_tracking: target needs position and velocity");
    }
    const int dim = static_cast<int>(bias.size());
    CostFunction f;
    f.dim = dim;
    f.time_varying = true;
    f.name = "tracking";
    auto observed = [target, bias](double t) -> Vec { return target.position(t) + bias; };
    f.value = [observed](const Vec& x, double t) {
        return (x - observed(t)).squaredNorm();
    };
    f.gradient = [observed](const Vec& x, double t) -> Vec {
        return 2.0 * (x - observed(t));
    };
    f.hessian = [dim](const Vec&, double) -> Mat { return 2.0 * Mat::Identity(dim, dim); };
    f.dgrad_dt = [target](const Vec&, double t) -> Vec { return -2.0 * target.velocity(t); };
    return f;
}

CostFunction quadratic_cost(const Mat& Q, const Vec& b, double c) {
    if (Q.rows() != Q.cols() || Q.rows() != b.size()) {
        throw ValidationError("quadratic_cost: dimension mismatch");
    }
    if (!Q.isApprox(Q.transpose(), 1e-12)) {
        throw ValidationError("quadratic_cost: Q must be symmetric");
    }
    CostFunction f;
    f.dim = static_cast<int>(b.size());
    f.time_varying = false;
    f.name = "quadratic";
    f.value = [Q, b, c](const Vec& x, double) { return 0.5 * x.dot(Q * x) + b.dot(x) + c; };
    f.gradient = [Q, b](const Vec& x, double) -> Vec { return Q * x + b; };
    f.hessian = [Q](const Vec&, double) -> Mat { return Q; };
    f.dgrad_dt = zero_dgrad;
    return f;
}

DerivativeReport check_derivatives(const CostFunction& f, int samples,
                                   const DomainBox& box, std::uint64_t seed) {
    if (samples < 1) throw ValidationError("check_derivatives: samples must be >= 1");
    const int n = f.dim;
    const double h = 1e-6;
    const double grad_tol = 1e-5;
    const double hess_tol = 1e-4;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_real_distribution<double> tdist(0.0, 5.0);

    DerivativeReport rep;
    rep.samples = samples;
    rep.worst_gradient_point = Vec::Zero(n);
    rep.worst_hessian_point = Vec::Zero(n);

    for (int smp = 0; smp < samples; ++smp) {
        Vec x(n);
        for (int k = 0; k < n; ++k) x(k) = box.lo(k) + unif(rng) * (box.hi(k) - box.lo(k));
        double t = f.time_varying ? tdist(rng) : 0.0;

        Vec g = f.gradient(x, t);
        Mat hess = f.hessian(x, t);
        for (int k = 0; k < n; ++k) {
            Vec xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            double fd = (f.value(xp, t) - f.value(xm, t)) / (2.0 * h);
            double rel = std::abs(fd - g(k)) / std::max(1.0, std::abs(g(k)));
            if (rel > rep.max_gradient_rel_err) {
                rep.max_gradient_rel_err = rel;
                rep.worst_gradient_point = x;
            }
            if (rel > grad_tol) {
                std::ostringstream os;
                os << "check_derivatives(" << f.name << "): gradient component " << k
                   << " at x = [" << x.transpose() << "], t = " << t << " differs from FD by "
                   << rel << " (tol " << grad_tol << ")";
                throw DerivativeError(os.str());
            }

            Vec col_fd = (f.gradient(xp, t) - f.gradient(xm, t)) / (2.0 * h);
            for (int l = 0; l < n; ++l) {
                double relh =
                    std::abs(col_fd(l) - hess(l, k)) / std::max(1.0, std::abs(hess(l, k)));
                if (relh > rep.max_hessian_rel_err) {
                    rep.max_hessian_rel_err = relh;
                    rep.worst_hessian_point = x;
                }
                if (relh > hess_tol) {
                    std::ostringstream os;
                    os << "check_derivatives(" << f.name << "): hessian entry (" << l << ","
                       << k << ") at x = [" << x.transpose() << "], t = " << t
                       << " differs from FD by " << relh << " (tol " << hess_tol << ")";
                    throw DerivativeError(os.str());
                }
            }
        }

        if (f.time_varying) {
            Vec dg = f.dgrad_dt(x, t);
            Vec fd = (f.gradient(x, t + h) - f.gradient(x, t - h)) / (2.0 * h);
            for (int k = 0; k < n; ++k) {
                double rel = std::abs(fd(k) - dg(k)) / std::max(1.0, std::abs(dg(k)));
                rep.max_dgrad_dt_rel_err = std::max(rep.max_dgrad_dt_rel_err, rel);
                if (rel > grad_tol) {
                    std::ostringstream os;
                    os << "check_derivatives(" << f.name << "): dgrad_dt component " << k
                       << " at t = " << t << " differs from FD by " << rel;
                    throw DerivativeError(os.str());
                }
            }
        }
    }
    return rep;
}

ConvexityConstants estimate_constants(const CostFunction& f, const DomainBox& box,
                                      const ConstantsOptions& opts) {
    if (opts.grid_per_axis < 2) throw ValidationError("estimate_constants: grid must be >= 2");
    const int n = f.dim;

    std::vector<double> t_probes = {0.0};
    if (f.time_varying) {
        t_probes = {opts.t_lo, 0.5 * (opts.t_lo + opts.t_hi), opts.t_hi};
    }

    ConvexityConstants c;
    c.psi = std::numeric_limits<double>::infinity();

    // walk the tensor grid with a mixed-radix counter
    std::vector<int> idx(n, 0);
    const int g = opts.grid_per_axis;
    Vec x(n);
    bool done = false;
    while (!done) {
        for (int k = 0; k < n; ++k) {
            x(k) = box.lo(k) + (box.hi(k) - box.lo(k)) * idx[k] / (g - 1);
        }
        for (double t : t_probes) {
            Mat hess = f.hessian(x, t);
            Eigen::SelfAdjointEigenSolver<Mat> es(hess, Eigen::EigenvaluesOnly);
            double lmin = es.eigenvalues()(0);
            double lmax = es.eigenvalues()(n - 1);
            if (lmin <= 0.0) {
                std::ostringstream os;
                os << "estimate_constants(" << f.name << "): Hessian not positive definite "
                   << "at x = [" << x.transpose() << "], t = " << t
                   << " (min eigenvalue " << lmin << ")";
                throw ConvexityError(os.str());
            }
            c.psi = std::min(c.psi, lmin);
            c.Psi = std::max(c.Psi, lmax);
            c.hess_norm1 = std::max(c.hess_norm1, hess.cwiseAbs().colwise().sum().maxCoeff());
        }
        // advance counter
        int k = 0;
        while (k < n && ++idx[k] == g) idx[k++] = 0;
        done = (k == n);
    }

    if (f.time_varying) {
        // omega over a coarser space grid x full time grid
        const int gx = std::min(g, 9);
        std::vector<int> ix(n, 0);
        bool d2 = false;
        while (!d2) {
            for (int k = 0; k < n; ++k) {
                x(k) = box.lo(k) + (box.hi(k) - box.lo(k)) * ix[k] / (gx - 1);
            }
            for (int ti = 0; ti < opts.t_grid; ++ti) {
                double t = opts.t_lo + (opts.t_hi - opts.t_lo) * ti / (opts.t_grid - 1);
                c.omega = std::max(c.omega, f.dgrad_dt(x, t).cwiseAbs().maxCoeff());
            }
            int k = 0;
            while (k < n && ++ix[k] == gx) ix[k++] = 0;
            d2 = (k == n);
        }
    }
    return c;
}

ConvexityConstants aggregate_constants(std::span<const ConvexityConstants> per_agent) {
    if (per_agent.empty()) throw ValidationError("aggregate_constants: empty input");
    ConvexityConstants out = per_agent[0];
    for (const auto& c : per_agent.subspan(1)) {
        out.psi = std::min(out.psi, c.psi);
        out.Psi = std::max(out.Psi, c.Psi);
        out.omega = std::max(out.omega, c.omega);
        out.hess_norm1 = std::max(out.hess_norm1, c.hess_norm1);
    }
    return out;
}

}  // namespace zgs
