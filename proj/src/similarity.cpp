#include "marketstates/similarity.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "marketstates/kernels.hpp"

namespace marketstates::similarity {

Measure parse_measure(std::string_view name) {
    if (name == "zeta") return Measure::Zeta;
    if (name == "zeta_alt") return Measure::ZetaAlt;
    throw_validation("unknown similarity measure '" + std::string(name) +
                     "' (want zeta or zeta_alt)");
}

std::string to_string(Measure measure) {
    return measure == Measure::Zeta ? "zeta" : "zeta_alt";
}

namespace {

void require_same_universe(const corr::CorrelationWindow& a,
                           const corr::CorrelationWindow& b) {
    if (a.symbols != b.symbols) {
        throw_validation("incompatible universes: windows " + a.label_date.to_string() +
                         " and " + b.label_date.to_string() +
                         " hold different symbol lists");
    }
}

}  // namespace

double zeta(const corr::CorrelationWindow& a, const corr::CorrelationWindow& b) {
    require_same_universe(a, b);
    return kernels::l1_mean(a.values, b.values);
}

EigenSummary power_lambda_max(const Matrix& c, double tol, int max_iter) {
    const std::size_t k = c.rows();
    if (k == 0 || c.cols() != k) throw_validation("eigenvalue of a non-square matrix");
    const double shift = static_cast<double>(k);

    std::vector<double> v(k, 1.0 / std::sqrt(static_cast<double>(k)));
    std::vector<double> u(k);
    auto multiply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t i = 0; i < k; ++i) {
            const double* row = c.data() + i * k;
            double acc = 0.0;
            for (std::size_t j = 0; j < k; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
    };

    multiply(v, u);
    EigenSummary best;
    for (int iter = 0;; ++iter) {
        double lambda = 0.0;
        for (std::size_t i = 0; i < k; ++i) lambda += v[i] * u[i];
        double residual = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            residual = std::max(residual, std::abs(u[i] - lambda * v[i]));
        }
        best = {lambda, iter, residual};
        if (residual <= tol) return best;
        if (iter >= max_iter) break;

        double norm = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            v[i] = u[i] + shift * v[i];
            norm += v[i] * v[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            throw_numeric("power iteration collapsed to the zero vector");
        }
        for (std::size_t i = 0; i < k; ++i) v[i] /= norm;
        multiply(v, u);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "power iteration did not converge in %d iterations "
                  "(best lambda=%.17g, residual=%.3g)",
                  max_iter, best.lambda_max, best.residual);
    throw NonConvergenceError(buf, best);
}

EigenSummary largest_eigenvalue(const corr::CorrelationWindow& c, double tol, int max_iter) {
    return power_lambda_max(c.values, tol, max_iter);
}

double zeta_alt(const corr::CorrelationWindow& a, const corr::CorrelationWindow& b,
                double tol, int max_iter) {
    require_same_universe(a, b);
    const EigenSummary ea = power_lambda_max(a.values, tol, max_iter);
    const EigenSummary eb = power_lambda_max(b.values, tol, max_iter);
    return std::abs(ea.lambda_max - eb.lambda_max);
}

void SimilarityMatrix::validate() const {
    const std::size_t w = labels.size();
    if (values.rows() != w || values.cols() != w) {
        throw_validation("similarity matrix dimensions do not match label list");
    }
    const double bound = measure == Measure::Zeta ? 2.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w; ++i) {
        if (values(i, i) != 0.0) throw_validation("similarity diagonal must be zero");
        for (std::size_t j = 0; j < w; ++j) {
            const double v = values(i, j);
            if (!(v >= 0.0) || v > bound) {
                throw_validation("similarity value out of range at (" +
                                 labels[i].to_string() + ", " + labels[j].to_string() + ")");
            }
            if (v != values(j, i)) throw_validation("similarity matrix asymmetric");
        }
    }
}

SimilarityMatrix similarity_matrix(const std::vector<corr::CorrelationWindow>& windows,
                                   Measure measure, double tol, int max_iter) {
    if (windows.size() < 2) throw_validation("similarity matrix needs at least 2 windows");
    for (std::size_t i = 1; i < windows.size(); ++i) {
        require_same_universe(windows[0], windows[i]);
    }

    SimilarityMatrix sim;
    sim.measure = measure;
    sim.labels.reserve(windows.size());
    for (const corr::CorrelationWindow& w : windows) sim.labels.push_back(w.label_date);

    if (measure == Measure::Zeta) {
        kernels::MatrixRefs refs;
        refs.reserve(windows.size());
        for (const corr::CorrelationWindow& w : windows) refs.push_back(&w.values);
        sim.values = kernels::pairwise_l1_mean(refs);
        return sim;
    }

    // zeta_alt: one eigen-solve per window, then pairwise differences.
    const std::size_t n = windows.size();
    std::vector<double> lambda(n, 0.0);
    std::vector<std::unique_ptr<Error>> errors(n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            lambda[i] = power_lambda_max(windows[i].values, tol, max_iter).lambda_max;
        } catch (const Error& e) {
            errors[i] = std::make_unique<Error>(e);
        }
    }
    for (const auto& err : errors) {
        if (err) throw *err;
    }
    sim.values = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::abs(lambda[i] - lambda[j]);
            sim.values(i, j) = v;
            sim.values(j, i) = v;
        }
    }
    return sim;
}

}  // namespace marketstates::similarity
