#include "marketstates/corr.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "marketstates/kernels.hpp"

namespace marketstates::corr {

void WindowSpec::validate() const {
    if (length < 2) throw_validation("window length must be >= 2");
    if (stride < 1) throw_validation("window stride must be >= 1");
    if (mode == WindowMode::Disjoint && stride != length) {
        throw_validation("disjoint windows force stride == length");
    }
}

void CorrelationWindow::validate(double symmetry_tol) const {
    const std::size_t k = symbols.size();
    if (values.rows() != k || values.cols() != k) {
        throw_validation("correlation matrix dimensions do not match symbol list");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (values(i, i) != 1.0) {
            throw_validation("correlation matrix diagonal is not exactly 1 at '" +
                             symbols[i] + "'");
        }
        for (std::size_t j = 0; j < k; ++j) {
            const double v = values(i, j);
            if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
                throw_validation("correlation entry out of [-1,1] at (" + symbols[i] +
                                 ", " + symbols[j] + ")");
            }
            if (std::abs(v - values(j, i)) > symmetry_tol) {
                throw_validation("correlation matrix asymmetric at (" + symbols[i] +
                                 ", " + symbols[j] + ")");
            }
        }
    }
}

std::vector<IndexRange> rolling_windows(std::size_t sample_count, const WindowSpec& spec) {
    spec.validate();
    if (sample_count < spec.length) {
        throw_validation("window length " + std::to_string(spec.length) +
                         " exceeds panel size " + std::to_string(sample_count));
    }
    std::vector<IndexRange> ranges;
    if (spec.mode == WindowMode::Disjoint) {
        const std::size_t count = sample_count / spec.length;
        const std::size_t offset = sample_count - count * spec.length;
        for (std::size_t w = 0; w < count; ++w) {
            ranges.push_back({offset + w * spec.length, offset + (w + 1) * spec.length});
        }
    } else {
        for (std::size_t end = spec.length - 1; end < sample_count; end += spec.stride) {
            ranges.push_back({end + 1 - spec.length, end + 1});
        }
    }
    return ranges;
}

std::vector<IndexRange> rolling_windows(const ingest::ReturnPanel& panel,
                                        const WindowSpec& spec) {
    return rolling_windows(panel.sample_count(), spec);
}

CorrelationWindow pearson_matrix(const ingest::ReturnPanel& panel, IndexRange range) {
    const std::size_t k = panel.series_count();
    const std::size_t len = range.length();
    if (len < 2 || range.end > panel.sample_count()) {
        throw_validation("correlation window range invalid or shorter than 2 samples");
    }

    // Standardized rows scaled by 1/sqrt(L) turn the Pearson matrix into a
    // Gram matrix, which keeps it positive semidefinite up to rounding.
    Matrix z(k, len);
    for (std::size_t i = 0; i < k; ++i) {
        const double* row = panel.values.data() + i * panel.sample_count() + range.begin;
        const auto [lo, hi] = std::minmax_element(row, row + len);
        if (*lo == *hi) {
            throw_numeric("series '" + panel.symbols[i] + "' has zero variance in window " +
                          panel.timestamps[range.begin].to_string() + " .. " +
                          panel.timestamps[range.end - 1].to_string());
        }
        double mean = 0.0;
        for (std::size_t t = 0; t < len; ++t) mean += row[t];
        mean /= static_cast<double>(len);
        double var = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            const double d = row[t] - mean;
            var += d * d;
        }
        var /= static_cast<double>(len);
        if (var == 0.0) {
            throw_numeric("series '" + panel.symbols[i] + "' has zero variance in window " +
                          panel.timestamps[range.begin].to_string() + " .. " +
                          panel.timestamps[range.end - 1].to_string());
        }
        const double scale = 1.0 / (std::sqrt(var) * std::sqrt(static_cast<double>(len)));
        for (std::size_t t = 0; t < len; ++t) {
            z(i, t) = (row[t] - mean) * scale;
        }
    }

    CorrelationWindow window;
    window.values = kernels::gram_correlation(z);
    window.symbols = panel.symbols;
    window.window_start = panel.timestamps[range.begin];
    window.window_end = panel.timestamps[range.end - 1];
    window.label_date = window.window_end;
    window.sample_count = len;
    return window;
}

std::vector<CorrelationWindow> window_matrices(const ingest::ReturnPanel& panel,
                                               const WindowSpec& spec) {
    const std::vector<IndexRange> ranges = rolling_windows(panel, spec);
    std::vector<CorrelationWindow> out(ranges.size());
    std::vector<std::unique_ptr<Error>> errors(ranges.size());
#pragma omp parallel for schedule(static)
    for (std::size_t w = 0; w < ranges.size(); ++w) {
        try {
            out[w] = pearson_matrix(panel, ranges[w]);
        } catch (const Error& e) {
            errors[w] = std::make_unique<Error>(e);
        } catch (const std::exception& e) {
            errors[w] = std::make_unique<Error>(ErrorKind::Numeric, e.what());
        }
    }
    for (const auto& err : errors) {
        if (err) throw *err;
    }
    return out;
}

CorrelationWindow average_matrix(const std::vector<CorrelationWindow>& windows,
                                 const std::vector<std::size_t>& members) {
    if (members.empty()) throw_validation("average of zero correlation matrices");
    const CorrelationWindow& first = windows[members.front()];
    kernels::MatrixRefs refs;
    refs.reserve(members.size());
    Timestamp min_label = first.label_date, max_label = first.label_date;
    Timestamp min_start = first.window_start, max_end = first.window_end;
    std::size_t samples = 0;
    for (std::size_t idx : members) {
        const CorrelationWindow& w = windows[idx];
        if (w.symbols != first.symbols) {
            throw_validation("average over incompatible universes ('" + w.symbols.front() +
                             "...' vs '" + first.symbols.front() + "...')");
        }
        refs.push_back(&w.values);
        min_label = std::min(min_label, w.label_date);
        max_label = std::max(max_label, w.label_date);
        min_start = std::min(min_start, w.window_start);
        max_end = std::max(max_end, w.window_end);
        samples += w.sample_count;
    }

    CorrelationWindow avg;
    avg.values = kernels::elementwise_mean(refs);
    for (std::size_t i = 0; i < first.size(); ++i) avg.values(i, i) = 1.0;
    avg.symbols = first.symbols;
    avg.window_start = min_start;
    avg.window_end = max_end;
    avg.label_date = Timestamp((min_label.seconds() + max_label.seconds()) / 2);
    avg.sample_count = samples;
    return avg;
}

CorrelationWindow average_matrix(const std::vector<CorrelationWindow>& matrices) {
    std::vector<std::size_t> all(matrices.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return average_matrix(matrices, all);
}

}  // namespace marketstates::corr
