#pragma once

#include <string>
#include <vector>

#include "marketstates/core.hpp"
#include "marketstates/corr.hpp"

namespace marketstates::similarity {

enum class Measure { Zeta, ZetaAlt };

Measure parse_measure(std::string_view name);
std::string to_string(Measure measure);

struct EigenSummary {
    double lambda_max = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

// Thrown when power iteration exhausts max_iter; carries the best estimate.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& message, EigenSummary best)
        : Error(ErrorKind::Numeric, message), best_(best) {}
    const EigenSummary& best() const noexcept { return best_; }

private:
    EigenSummary best_;
};

// Mean absolute elementwise difference over all K^2 components (the
// diagonal is included and contributes zero). Bounded by 2.
double zeta(const corr::CorrelationWindow& a, const corr::CorrelationWindow& b);

// Dominant eigenvalue via power iteration on C + K*I. The shift makes the
// target eigenvalue dominant in magnitude since all eigenvalues of C lie in
// [-K, K]. Start vector is all ones, normalized. Residual is ||Cv - lv||_inf.
EigenSummary power_lambda_max(const Matrix& c, double tol = 1e-10, int max_iter = 10000);
EigenSummary largest_eigenvalue(const corr::CorrelationWindow& c, double tol = 1e-10,
                                int max_iter = 10000);

// |lambda_max(a) - lambda_max(b)|: similarity through the collective mode
// only, which suppresses the noise carried by the small eigenvalues.
double zeta_alt(const corr::CorrelationWindow& a, const corr::CorrelationWindow& b,
                double tol = 1e-10, int max_iter = 10000);

struct SimilarityMatrix {
    Matrix values;  // W x W, symmetric, zero diagonal
    std::vector<Timestamp> labels;
    Measure measure = Measure::Zeta;

    void validate() const;
};

// All pairwise distances between the windows under the chosen measure.
// Pairs are evaluated in parallel; there is no cross-pair reduction, so the
// result does not depend on the schedule.
SimilarityMatrix similarity_matrix(const std::vector<corr::CorrelationWindow>& windows,
                                   Measure measure, double tol = 1e-10,
                                   int max_iter = 10000);

}  // namespace marketstates::similarity
