#include "modelspace/numerics.hpp"

#include <Eigen/Eigenvalues>

namespace modelspace {

QuadratureRule gauss_legendre(int points)
{
    require(points >= 1, "gauss_legendre: need at least one node");
    MatrixXd jacobi = MatrixXd::Zero(points, points);
    for (int k = 1; k < points; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = beta;
        jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(jacobi);
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int points)
{
    const QuadratureRule rule = gauss_legendre(points);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < points; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

MatrixXd circle_grid(int count)
{
    MatrixXd g(2, count);
    for (int i = 0; i < count; ++i) {
        const double a = 2.0 * M_PI * (i + 0.5) / count;
        g.col(i) << std::cos(a), std::sin(a);
    }
    return g;
}

MatrixXd sphere_grid(int count)
{
    MatrixXd g(3, count);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(1.0 - z * z);
        const double a = golden * i;
        g.col(i) << r * std::cos(a), r * std::sin(a), z;
    }
    return g;
}

MatrixXd direction_grid(int dim, int grid)
{
    require(dim == 2 || dim == 3, "direction_grid: only dimensions 2 and 3 are supported");
    return dim == 2 ? circle_grid(grid) : sphere_grid(grid * grid);
}

MatrixXd disc_grid(int dim, int grid, double radius)
{
    require(dim == 1 || dim == 2, "disc_grid: only discs of dimension 1 and 2 are supported");
    std::vector<VectorXd> pts;
    for (int i = 0; i < grid; ++i) {
        const double s = -radius + 2.0 * radius * (i + 0.5) / grid;
        if (dim == 1) {
            pts.push_back((VectorXd(1) << s).finished());
            continue;
        }
        for (int j = 0; j < grid; ++j) {
            const double t = -radius + 2.0 * radius * (j + 0.5) / grid;
            if (s * s + t * t < radius * radius) pts.push_back(Vector2d(s, t));
        }
    }
    MatrixXd g(dim, static_cast<int>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) g.col(static_cast<int>(k)) = pts[k];
    return g;
}

Vector3d linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size() && x.size() >= 2, "linear_fit: need at least two samples");
    const int n = static_cast<int>(x.size());
    MatrixXd a(n, 2);
    VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = x[i];
        rhs[i] = y[i];
    }
    const Vector2d coef = a.colPivHouseholderQr().solve(rhs);
    const double mean = rhs.mean();
    const double ss_tot = (rhs.array() - mean).square().sum();
    const double ss_res = (a * coef - rhs).squaredNorm();
    const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {coef[0], coef[1], r2};
}

}  // namespace modelspace
