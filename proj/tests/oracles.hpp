// Independent reference computations used only by tests. None of these call
// into the code paths they are used to check.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Average rank by counting: 1 + #{smaller} + #{ties other than self} / 2.
inline std::vector<double> counting_ranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double smaller = 0.0;
        double ties = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j == i) continue;
            if (v[j] < v[i]) smaller += 1.0;
            if (v[j] == v[i]) ties += 1.0;
        }
        ranks[i] = 1.0 + smaller + ties / 2.0;
    }
    return ranks;
}

// O(n^2) Spearman: Pearson correlation of counting ranks.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = counting_ranks(x);
    const auto ry = counting_ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Largest-eigenvalue eigenvector of C^T C from a dense symmetric eigensolver.
inline Eigen::VectorXd top_eigenvector_of_gram(const Eigen::MatrixXd& c) {
    const Eigen::MatrixXd gram = c.transpose() * c;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    Eigen::Index best = 0;
    solver.eigenvalues().maxCoeff(&best);
    return solver.eigenvectors().col(best);
}

// Exhaustive argmax of cosine(query, row) skipping `excluded` tokens; ties go
// to the lowest row.
inline std::size_t brute_argmax_cosine(const std::vector<Eigen::VectorXd>& rows,
                                       const Eigen::VectorXd& query,
                                       const std::unordered_set<std::size_t>& excluded) {
    std::size_t best = rows.size();
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (excluded.contains(i)) continue;
        const double sim = rows[i].dot(query) / (rows[i].norm() * query.norm());
        if (sim > best_sim) {
            best_sim = sim;
            best = i;
        }
    }
    return best;
}

}  // namespace oracle
