#include "eoconv/eigensolver.hpp"

#include "eoconv/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace eoconv
{

double generalized_residual(const SparseMatrix& a, const Eigen::VectorXd& b, double value, const Eigen::VectorXd& x)
{
    const Eigen::VectorXd bx = b.cwiseProduct(x);
    const double denom = std::abs(value) * bx.norm();
    const double num = (a * x - value * bx).norm();
    return denom > 0.0 ? num / denom : num;
}

std::vector<EigenPair> solve_generalized_nearest(const SparseMatrix& a, const Eigen::VectorXd& b, double shift,
                                                 const EigenOptions& opt)
{
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw PreconditionError("eigensolver: dimension mismatch");
    if (n == 0 || opt.n_eigen < 1)
        throw PreconditionError("eigensolver: empty problem");
    if ((b.array() <= 0.0).any())
        throw PreconditionError("eigensolver: B must be positive");
    const int want = static_cast<int>(std::min<Eigen::Index>(opt.n_eigen, n));

    const Eigen::VectorXd bs = b.cwiseSqrt();
    const Eigen::VectorXd bis = bs.cwiseInverse();

    SparseMatrix shifted = a;
    for (Eigen::Index k = 0; k < n; ++k)
        shifted.coeffRef(k, k) -= shift * b(k);
    shifted.makeCompressed();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
        throw SolverError("eigensolver: factorisation of (A - shift B) failed; shift may coincide with an eigenvalue",
                          1.0);

    // Symmetric operator (C - shift)^-1 = B^1/2 (A - shift B)^-1 B^1/2, C = B^-1/2 A B^-1/2.
    auto apply = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
        Eigen::VectorXd t = lu.solve(bs.cwiseProduct(y));
        return bs.cwiseProduct(t);
    };

    int kdim = opt.krylov_dim > 0 ? opt.krylov_dim : std::max(2 * want + 24, 40);
    kdim = static_cast<int>(std::min<Eigen::Index>(kdim, n));

    std::mt19937_64 gen(opt.seed);
    Eigen::VectorXd q(n);
    for (Eigen::Index k = 0; k < n; ++k)
        q(k) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    q.normalize();

    Eigen::MatrixXd basis(n, kdim);
    std::vector<double> alpha;
    std::vector<double> beta;
    int used = 0;
    for (int j = 0; j < kdim; ++j) {
        basis.col(j) = q;
        used = j + 1;
        Eigen::VectorXd w = apply(q);
        alpha.push_back(q.dot(w));
        // two passes of classical Gram-Schmidt against the whole basis
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd h = basis.leftCols(used).transpose() * w;
            w -= basis.leftCols(used) * h;
        }
        const double nb = w.norm();
        if (j + 1 == kdim)
            break;
        if (nb < 1e-13 * std::abs(alpha.back()) || nb == 0.0)
            break; // invariant subspace found
        beta.push_back(nb);
        q = w / nb;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (int j = 0; j < used; ++j) {
        t(j, j) = alpha[static_cast<std::size_t>(j)];
        if (j + 1 < used) {
            t(j, j + 1) = beta[static_cast<std::size_t>(j)];
            t(j + 1, j) = beta[static_cast<std::size_t>(j)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
    std::vector<int> order(static_cast<std::size_t>(used));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return std::abs(tri.eigenvalues()(x)) > std::abs(tri.eigenvalues()(y));
    });

    std::vector<EigenPair> out;
    std::vector<Eigen::VectorXd> accepted; // symmetrised, unit norm
    for (int r = 0; r < used && static_cast<int>(out.size()) < want; ++r) {
        const int idx = order[static_cast<std::size_t>(r)];
        if (tri.eigenvalues()(idx) == 0.0)
            continue;
        Eigen::VectorXd y = basis.leftCols(used) * tri.eigenvectors().col(idx);

        auto deflate = [&](Eigen::VectorXd& v) {
            for (const auto& u : accepted)
                v -= u.dot(v) * u;
        };
        deflate(y);
        if (y.norm() < 1e-8)
            continue;
        y.normalize();

        double value = 0.0;
        double res = 0.0;
        for (int it = 0;; ++it) {
            const Eigen::VectorXd x = bis.cwiseProduct(y);
            value = x.dot(a * x) / x.dot(b.cwiseProduct(x));
            res = generalized_residual(a, b, value, x);
            if (res <= opt.tolerance || it >= opt.max_refinements)
                break;
            y = apply(y);
            deflate(y);
            y.normalize();
        }
        if (!(res <= opt.tolerance))
            throw SolverError("eigensolver: eigenpair did not converge; residual " + std::to_string(res), res);

        accepted.push_back(y);
        EigenPair p;
        p.value = value;
        p.vector = bis.cwiseProduct(y); // x' B x = y' y = 1
        p.residual = res;
        out.push_back(std::move(p));
    }
    if (static_cast<int>(out.size()) < want)
        throw SolverError("eigensolver: Krylov space exhausted before the requested pairs converged", 1.0);

    std::stable_sort(out.begin(), out.end(), [&](const EigenPair& x, const EigenPair& y) {
        return std::abs(x.value - shift) < std::abs(y.value - shift);
    });
    // fix the sign so results are reproducible: largest-magnitude entry positive
    for (auto& p : out) {
        Eigen::Index imax = 0;
        p.vector.cwiseAbs().maxCoeff(&imax);
        if (p.vector(imax) < 0.0)
            p.vector = -p.vector;
    }
    return out;
}

} // namespace eoconv
