#pragma once
// Numerical utilities: Richardson-extrapolated limits, finite differences,
// Gauss-Legendre quadrature and a seeded random source.

#include "modelspace/common.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace modelspace {

namespace detail {
inline double norm_of(double v) { return std::abs(v); }
template <typename Derived>
double norm_of(const Eigen::MatrixBase<Derived>& v) { return v.norm(); }
}  // namespace detail

template <typename Value>
struct LimitResult {
    Value value;
    double error_estimate = 0.0;  // smallest difference between successive extrapolants
    bool converged = false;
};

// Default t-schedule for numeric limits: t = 2^-3, ..., 2^-12.
inline std::vector<double> default_schedule()
{
    std::vector<double> ts;
    for (int k = 3; k <= 12; ++k) ts.push_back(std::ldexp(1.0, -k));
    return ts;
}

// Estimates lim_{t->0} f(t) from samples on a halving schedule, assuming an
// expansion f(t) = f0 + c1 t + c2 t^2 + ... (or only even powers when `even`).
// The extrapolation table is built up to `order` eliminations; the returned
// value is the diagonal entry whose successive difference is smallest.
template <typename F>
auto richardson_limit(F&& f, int order = 2, double tol = 1e-8, bool even = false,
                      const std::vector<double>& schedule = default_schedule())
{
    using Value = std::decay_t<decltype(std::declval<F&>()(1.0))>;
    std::vector<std::vector<Value>> table;
    LimitResult<Value> out{f(schedule.front()), 1e300, false};
    const double base = even ? 4.0 : 2.0;
    Value previous{};
    bool have_previous = false;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        std::vector<Value> row;
        row.push_back(f(schedule[k]));
        const int depth = std::min<int>(order, static_cast<int>(k));
        for (int j = 1; j <= depth; ++j) {
            const double factor = std::pow(base, j) - 1.0;
            Value next = row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / factor;
            row.push_back(next);
        }
        if (depth == order) {
            const Value& current = row[order];
            if (have_previous) {
                const double diff = detail::norm_of(current - previous);
                if (diff < out.error_estimate) {
                    out.error_estimate = diff;
                    out.value = current;
                }
            }
            previous = current;
            have_previous = true;
        }
        table.push_back(std::move(row));
    }
    out.converged = out.error_estimate < tol;
    return out;
}

// Central difference derivative of f at t0 with one Richardson step.
template <typename F>
auto central_derivative(F&& f, double t0, double h)
{
    auto d = [&](double s) { return ((f(t0 + s) - f(t0 - s)) / (2.0 * s)).eval(); };
    auto coarse = d(h);
    auto fine = d(h / 2);
    return (fine + (fine - coarse) / 3.0).eval();
}

inline double central_derivative_scalar(const std::function<double(double)>& f, double t0, double h)
{
    const double coarse = (f(t0 + h) - f(t0 - h)) / (2 * h);
    const double fine = (f(t0 + h / 2) - f(t0 - h / 2)) / h;
    return fine + (fine - coarse) / 3.0;
}

// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
struct QuadratureRule {
    VectorXd nodes;
    VectorXd weights;
};
QuadratureRule gauss_legendre(int points);

// Integrates f over [a, b] with a Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double a, double b, int points = 48);

// Deterministic random source used by tests, the acceptance runner and the CLI.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}
    double uniform(double a = 0.0, double b = 1.0)
    {
        return std::uniform_real_distribution<double>(a, b)(engine_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    VectorXd gaussian(int n)
    {
        VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }
    MatrixXd gaussian(int rows, int cols)
    {
        MatrixXd m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = normal();
        return m;
    }
    VectorXd unit_vector(int n)
    {
        VectorXd v = gaussian(n);
        return v / v.norm();
    }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

// Quasi-uniform direction grids.
MatrixXd circle_grid(int count);           // 2 x count, equally spaced angles
MatrixXd sphere_grid(int count);           // 3 x count, Fibonacci lattice
MatrixXd direction_grid(int dim, int grid); // dim 2 -> grid points, dim 3 -> grid^2 points
MatrixXd disc_grid(int dim, int grid, double radius); // (dim) x N points in the open ball of R^dim

// Least-squares fit y = a + b x; returns (a, b, R^2).
Vector3d linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace modelspace
