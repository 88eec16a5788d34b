#ifndef EOCONV_EIGENSOLVER_HPP
#define EOCONV_EIGENSOLVER_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <vector>

namespace eoconv
{

using SparseMatrix = Eigen::SparseMatrix<double>;

struct EigenOptions
{
    int n_eigen = 1;
    int krylov_dim = 0;          // 0: max(2 n_eigen + 24, 40), capped at the problem size
    double tolerance = 1e-8;     // |A x - l B x| / |l B x|
    int max_refinements = 400;   // inverse-iteration sweeps per pair after Lanczos
    std::uint64_t seed = 0x5eed5eedULL;
};

struct EigenPair
{
    double value = 0.0;
    Eigen::VectorXd vector; // B-normalised: x' B x = 1
    double residual = 0.0;
};

// Eigenpairs of A x = l B x nearest to `shift`, for symmetric A and positive
// diagonal B. Shift-invert Lanczos with full reorthogonalisation on the
// symmetrised operator, followed by inverse-iteration polishing.
// Pairs are ordered by |l - shift|. Throws SolverError when a pair misses the
// tolerance.
std::vector<EigenPair> solve_generalized_nearest(const SparseMatrix& a, const Eigen::VectorXd& b_diagonal, double shift,
                                                 const EigenOptions& options = {});

double generalized_residual(const SparseMatrix& a, const Eigen::VectorXd& b_diagonal, double value,
                            const Eigen::VectorXd& x);

} // namespace eoconv

#endif // EOCONV_EIGENSOLVER_HPP
