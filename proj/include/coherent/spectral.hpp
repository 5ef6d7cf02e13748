#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "coherent/operators.hpp"
#include "coherent/rng.hpp"

namespace coherent {

/// Eigen- or singular decomposition result. Eigenvalues are sorted
/// descending, eigenvector columns have unit 2-norm, and each column's
/// largest-magnitude entry is made positive so outputs are reproducible.
/// Eigenvalues closer than the degeneracy gap share a degeneracy_group id;
/// downstream consumers must treat such subspaces jointly.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors; // n x k
    Eigen::VectorXd residuals;    // ||M v - lambda v||_2 per pair
    std::vector<int> degeneracy_group;

    int count() const { return static_cast<int>(eigenvalues.size()); }
};

namespace detail {

constexpr int kDenseCrossover = 512;
constexpr double kDegeneracyGap = 1e-10;

inline void canonicalize(SpectralDecomposition& d) {
    for (int c = 0; c < d.eigenvectors.cols(); ++c) {
        Eigen::Index imax;
        d.eigenvectors.col(c).cwiseAbs().maxCoeff(&imax);
        if (d.eigenvectors(imax, c) < 0.0) d.eigenvectors.col(c) *= -1.0;
    }
    d.degeneracy_group.assign(static_cast<std::size_t>(d.count()), 0);
    int group = 0;
    for (int i = 1; i < d.count(); ++i) {
        if (d.eigenvalues[i - 1] - d.eigenvalues[i] > kDegeneracyGap) ++group;
        d.degeneracy_group[static_cast<std::size_t>(i)] = group;
    }
}

inline double sparse_asymmetry(const SparseMat& m) {
    SparseMat diff = SparseMat(m.transpose()) - m;
    double worst = 0.0;
    for (int i = 0; i < diff.outerSize(); ++i)
        for (SparseMat::InnerIterator it(diff, i); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

using MatVec = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Lanczos iteration with full reorthogonalization for the k largest
/// eigenvalues of a symmetric operator. Robustness over speed: every new
/// Krylov vector is reorthogonalized against the whole basis twice.
inline SpectralDecomposition lanczos_top_k(const MatVec& apply, int n, int k, std::uint64_t seed) {
    const int max_iter = std::min(n, 10 * k + 200);
    Rng rng(seed, /*stream=*/0x1a);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.next_double() - 0.5;
    v.normalize();

    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta; // tridiagonal coefficients
    basis.push_back(v);

    Eigen::VectorXd ritz_values;
    Eigen::MatrixXd ritz_vectors;
    double last_beta = 0.0;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        Eigen::VectorXd w = apply(basis.back());
        double a = basis.back().dot(w);
        alpha.push_back(a);
        w -= a * basis.back();
        if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
        for (int pass = 0; pass < 2; ++pass)
            for (const Eigen::VectorXd& q : basis) w -= q.dot(w) * q;

        const int j = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j, j);
        for (int i = 0; i < j; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < j) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        ritz_values = es.eigenvalues().reverse();
        ritz_vectors = es.eigenvectors().rowwise().reverse();

        last_beta = w.norm();
        bool converged = j >= k;
        if (j >= k) {
            for (int i = 0; i < k; ++i)
                if (std::abs(last_beta * ritz_vectors(j - 1, i)) >= Tolerances::residual) converged = false;
        }
        if (converged || last_beta < 1e-14 || j == n) break;
        beta.push_back(last_beta);
        basis.push_back(w / last_beta);
    }

    const int j = static_cast<int>(alpha.size());
    if (j < k)
        throw NoConvergence("lanczos: Krylov space exhausted at dimension " + std::to_string(j) + " before reaching k = " +
                            std::to_string(k));

    SpectralDecomposition d;
    d.eigenvalues = ritz_values.head(k);
    d.eigenvectors.resize(n, k);
    d.residuals.resize(k);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (int l = 0; l < j; ++l) y += ritz_vectors(l, i) * basis[static_cast<std::size_t>(l)];
        y.normalize();
        d.eigenvectors.col(i) = y;
        d.residuals[i] = (apply(y) - d.eigenvalues[i] * y).norm();
    }
    for (int i = 0; i < k; ++i)
        if (d.residuals[i] >= 1e-6)
            throw NoConvergence("lanczos: pair " + std::to_string(i) + " did not converge, residual = " +
                                std::to_string(d.residuals[i]));
    canonicalize(d);
    return d;
}

inline SpectralDecomposition dense_top_k(const Eigen::MatrixXd& m, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    SpectralDecomposition d;
    const int n = static_cast<int>(m.rows());
    d.eigenvalues = es.eigenvalues().reverse().head(k);
    d.eigenvectors = es.eigenvectors().rowwise().reverse().leftCols(k);
    d.residuals.resize(k);
    for (int i = 0; i < k; ++i) d.residuals[i] = (m * d.eigenvectors.col(i) - d.eigenvalues[i] * d.eigenvectors.col(i)).norm();
    (void)n;
    canonicalize(d);
    return d;
}

} // namespace detail

/// k largest eigenvalues and eigenvectors of a symmetric sparse matrix.
/// Dense solver up to n = 512, Lanczos with full reorthogonalization above.
inline SpectralDecomposition top_eigs_symmetric(const SparseMat& m, int k, std::uint64_t seed = 0) {
    const int n = static_cast<int>(m.rows());
    if (k < 1 || k > n) throw KTooLarge("top_eigs_symmetric: k = " + std::to_string(k) + " out of range for n = " + std::to_string(n));
    const double asym = detail::sparse_asymmetry(m);
    if (asym > 1e-10)
        throw NotSymmetric("top_eigs_symmetric: matrix is not symmetric, max |M - M^T| = " + std::to_string(asym));
    if (n <= detail::kDenseCrossover) return detail::dense_top_k(Eigen::MatrixXd(m), k);
    return detail::lanczos_top_k([&m](const Eigen::VectorXd& v) { return Eigen::VectorXd(m * v); }, n, k, seed);
}

/// k largest eigenvalues of P for an undirected graph, computed through the
/// symmetric similar matrix D^{1/2} P D^{-1/2} and mapped back. Equivalent
/// to the k smallest eigenvalues of the random-walk Laplacian.
inline SpectralDecomposition eigs_undirected_rw(const StochasticMatrix& p, const DegreeVector& degrees, int k,
                                                std::uint64_t seed = 0) {
    const int n = p.size();
    for (int i = 0; i < n; ++i)
        if (degrees[i] <= 0.0) throw ZeroDegree("eigs_undirected_rw: vertex " + std::to_string(i) + " has zero degree");
    SparseMat s = p.matrix;
    for (int i = 0; i < s.outerSize(); ++i)
        for (SparseMat::InnerIterator it(s, i); it; ++it)
            it.valueRef() *= std::sqrt(degrees[it.row()] / degrees[it.col()]);
    const double asym = detail::sparse_asymmetry(s);
    if (asym > 1e-8)
        throw NotSymmetrizable("eigs_undirected_rw: graph is not undirected, similarity residual = " + std::to_string(asym));
    // symmetrize away roundoff before solving
    s = 0.5 * (s + SparseMat(s.transpose()));
    SpectralDecomposition d = top_eigs_symmetric(s, k, seed);
    for (int c = 0; c < k; ++c) {
        for (int i = 0; i < n; ++i) d.eigenvectors(i, c) /= std::sqrt(degrees[i]);
        d.eigenvectors.col(c).normalize();
    }
    // residuals with respect to P itself
    for (int c = 0; c < k; ++c)
        d.residuals[c] = (p.matrix * d.eigenvectors.col(c) - d.eigenvalues[c] * d.eigenvectors.col(c)).norm();
    detail::canonicalize(d);
    return d;
}

/// First k right singular vectors of B = D_nu^{-1/2} P^T together with the
/// squared singular values (which equal the eigenvalues of Q). Independent
/// route from forward_backward_matrix: Q is never formed here.
inline SpectralDecomposition right_singular_vectors(const StochasticMatrix& p, const NuVector& nu, int k,
                                                    std::uint64_t seed = 0) {
    const int n = p.size();
    if (k < 1 || k > n) throw KTooLarge("right_singular_vectors: k = " + std::to_string(k) + " out of range");
    for (int j = 0; j < n; ++j)
        if (nu.values[j] <= Tolerances::nu_invertible)
            throw SingularNu("right_singular_vectors: nu[" + std::to_string(j) + "] is zero");
    SparseMat b = SparseMat(p.matrix.transpose());
    for (int i = 0; i < b.outerSize(); ++i)
        for (SparseMat::InnerIterator it(b, i); it; ++it) it.valueRef() /= std::sqrt(nu.values[it.row()]);

    SpectralDecomposition d;
    if (n <= detail::kDenseCrossover) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(b), Eigen::ComputeThinV);
        d.eigenvalues = svd.singularValues().head(k).array().square();
        d.eigenvectors = svd.matrixV().leftCols(k);
        d.residuals.resize(k);
        for (int i = 0; i < k; ++i) {
            Eigen::VectorXd v = d.eigenvectors.col(i);
            d.residuals[i] = (b.transpose() * (b * v) - d.eigenvalues[i] * v).norm();
        }
        detail::canonicalize(d);
        return d;
    }
    auto gram = [&b](const Eigen::VectorXd& v) { return Eigen::VectorXd(b.transpose() * (b * v)); };
    return detail::lanczos_top_k(gram, n, k, seed);
}

} // namespace coherent
