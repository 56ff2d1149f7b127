#pragma once

/* Marcinkiewicz-Zygmund systems: a node set with weights tau defines the
 * discrete semi-inner product <f,g>_n = sum tau f g on span{h_0..h_n}.
 * Its Gram matrix S_n is the frame operator in the h-basis, and
 * omega = tau * (S_n^{-1} W) gives quadrature weights exact on that span.
 */

#include "freudq/errors.hpp"
#include "freudq/gaussquad.hpp"
#include "freudq/kernels.hpp"
#include "freudq/orthopoly.hpp"
#include "freudq/spaces.hpp"
#include "freudq/summation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace freudq {

struct MZSystem {
    int n = 0;
    std::vector<double> nodes;
    std::vector<double> tau;
    Eigen::MatrixXd gram;
    double a_n = 0.0;
    double b_n = 0.0;
    Eigen::VectorXd sW; // coefficients of S_n^{-1} W

    double condition() const { return b_n / a_n; }
};

inline Eigen::MatrixXd gram_matrix(const FreudBasis& basis, int n, std::span<const double> nodes,
                                   std::span<const double> tau) {
    const auto dim = static_cast<std::size_t>(n) + 1;
    std::vector<CompensatedSum> acc(dim * dim);
    std::vector<double> h(dim);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        basis.eval(nodes[i], h);
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = j; k < dim; ++k) acc[j * dim + k].add(tau[i] * h[j] * h[k]);
    }
    Eigen::MatrixXd g(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = j; k < dim; ++k) {
            const double v = acc[j * dim + k].value();
            g(Eigen::Index(j), Eigen::Index(k)) = v;
            g(Eigen::Index(k), Eigen::Index(j)) = v;
        }
    return g;
}

/// Assembles S_n for span{h_0..h_n} and solves S_n g = W.
inline MZSystem build_system(const FreudBasis& basis, int n, std::vector<double> nodes,
                             std::vector<double> tau) {
    detail::require(n >= 0, ErrorKind::invalid_parameter, "n must be nonnegative");
    detail::require(!nodes.empty(), ErrorKind::invalid_parameter, "need at least one node");
    detail::require(nodes.size() == tau.size(), ErrorKind::dimension_mismatch,
                    "nodes and tau differ in length");
    basis.check_capacity(n);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        detail::require(std::isfinite(nodes[i]), ErrorKind::invalid_parameter, "node not finite",
                        static_cast<std::int64_t>(i));
        detail::require(tau[i] >= 0.0 && std::isfinite(tau[i]), ErrorKind::invalid_parameter,
                        "tau must be nonnegative", static_cast<std::int64_t>(i));
    }
    {
        auto sorted = nodes;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i)
            detail::require(sorted[i] > sorted[i - 1], ErrorKind::invalid_parameter,
                            "nodes must be distinct", static_cast<std::int64_t>(i));
    }

    MZSystem sys;
    sys.n = n;
    sys.gram = gram_matrix(basis, n, nodes, tau);
    sys.nodes = std::move(nodes);
    sys.tau = std::move(tau);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sys.gram);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorKind::eigensolver_failure, "Gram eigenproblem did not converge");
    sys.a_n = eig.eigenvalues()(0);
    sys.b_n = eig.eigenvalues()(eig.eigenvalues().size() - 1);
    if (!(sys.a_n > 1e-12 * sys.b_n)) {
        std::ostringstream msg;
        msg << "not an MZ family: a_n = " << sys.a_n << ", b_n = " << sys.b_n
            << ", near-null coefficients [";
        const Eigen::VectorXd v = eig.eigenvectors().col(0);
        for (Eigen::Index i = 0; i < v.size(); ++i) msg << (i ? " " : "") << v(i);
        msg << "]";
        throw Error(ErrorKind::not_a_frame, msg.str());
    }

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(0) = 1.0 / basis.c0();
    Eigen::LLT<Eigen::MatrixXd> llt(sys.gram);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorKind::solve_failure,
                    "Cholesky failed, condition b_n/a_n = " + std::to_string(sys.condition()));
    sys.sW = llt.solve(rhs);
    if (!sys.sW.allFinite())
        throw Error(ErrorKind::solve_failure,
                    "non-finite solution, condition b_n/a_n = " + std::to_string(sys.condition()));
    return sys;
}

/// omega_j = tau_j (S_n^{-1} W)(x_j).
inline std::vector<double> generalized_weights(const MZSystem& sys, const FreudBasis& basis) {
    std::vector<double> h(static_cast<std::size_t>(sys.n) + 1);
    std::vector<double> omega;
    omega.reserve(sys.nodes.size());
    for (std::size_t j = 0; j < sys.nodes.size(); ++j) {
        basis.eval(sys.nodes[j], h);
        CompensatedSum s;
        for (std::size_t k = 0; k < h.size(); ++k) s.add_product(sys.sW(Eigen::Index(k)), h[k]);
        omega.push_back(sys.tau[j] * s.value());
    }
    return omega;
}

enum class SignMode { random, alternating, positive };

inline std::string to_string(SignMode m) {
    switch (m) {
    case SignMode::random: return "random";
    case SignMode::alternating: return "alternating";
    case SignMode::positive: return "positive";
    }
    return "?";
}

struct PerturbedNodes {
    std::vector<double> nodes;
    std::vector<double> tau;
};

/// x_j + sigma_j eps. Random signs come from the top bit of mt19937_64(seed).
/// Modes that can reorder nodes require eps < gap/2.
inline PerturbedNodes perturb_nodes(const QuadratureRule& rule, double eps, SignMode mode,
                                    std::uint64_t seed) {
    detail::require(eps >= 0.0 && std::isfinite(eps), ErrorKind::invalid_parameter,
                    "eps must be nonnegative");
    const auto& x = rule.nodes;
    if (eps > 0.0 && mode != SignMode::positive && x.size() > 1) {
        double gap = x[1] - x[0];
        for (std::size_t i = 2; i < x.size(); ++i) gap = std::min(gap, x[i] - x[i - 1]);
        if (!(eps < 0.5 * gap))
            throw Error(ErrorKind::gap_violation,
                        "eps " + std::to_string(eps) + " is not below half the minimal gap " +
                            std::to_string(0.5 * gap));
    }
    std::mt19937_64 gen(seed);
    PerturbedNodes out{x, rule.tau};
    for (std::size_t j = 0; j < x.size(); ++j) {
        double sigma = 1.0;
        if (mode == SignMode::random) sigma = (gen() >> 63) ? 1.0 : -1.0;
        else if (mode == SignMode::alternating) sigma = (j % 2 == 0) ? 1.0 : -1.0;
        out.nodes[j] = x[j] + sigma * eps;
    }
    return out;
}

/// max |x| <= m_{n,alpha} (1 + L n^{-2/3}).
inline bool support_check(std::span<const double> nodes, double alpha, int n, double L = 3.0) {
    detail::require(n >= 1 && L > 0.0, ErrorKind::invalid_parameter, "need n >= 1 and L > 0");
    const double bound = mrs_number(alpha, n) * (1.0 + L * std::pow(double(n), -2.0 / 3.0));
    return std::all_of(nodes.begin(), nodes.end(),
                       [&](double x) { return std::abs(x) <= bound; });
}

/// sum_{k=n+1}^{K} lambda_k^{-1} sum_x tau h_k(x)^2.
inline double phi_lambda_to(const FreudBasis& basis, const SpaceWeight& space, const MZSystem& sys,
                            int K) {
    space.validate();
    if (K <= sys.n) return 0.0;
    basis.check_capacity(K);
    BasisWalker walk(basis, sys.nodes);
    CompensatedSum total;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) walk.advance();
        if (k <= sys.n) continue;
        const auto v = walk.values();
        CompensatedSum norm;
        for (std::size_t j = 0; j < v.size(); ++j) norm.add(sys.tau[j] * v[j] * v[j]);
        total.add(norm.value() / lambda_of(space, k));
    }
    return total.value();
}

/// phi_lambda(n) with the envelope tail below tol times the first retained
/// envelope term, scaled by sum tau.
inline double phi_lambda(const FreudBasis& basis, const SpaceWeight& space, const MZSystem& sys,
                         double tol = 1e-16) {
    const double tau_sum = compensated_sum(sys.tau);
    const double first = envelope_term(space, sys.n + 1, basis.alpha(), basis.sup_const());
    const int K = tail_index(space, sys.n + 1, tol * first * std::max(tau_sum, 1e-300),
                             basis.alpha(), basis.sup_const());
    return phi_lambda_to(basis, space, sys, K);
}

} // namespace freudq
