#include "marketstates/normalize.hpp"

#include <algorithm>
#include <cmath>

namespace marketstates::normalize {

ingest::ReturnSeries local_normalize(const ingest::ReturnSeries& series,
                                     const LocalNormConfig& cfg) {
    const std::size_t n = cfg.window;
    if (n < 2) throw_validation("local normalization window must be >= 2");
    if (series.values.size() < n) {
        throw_validation("series '" + series.symbol + "' shorter than normalization window (" +
                         std::to_string(series.values.size()) + " < " + std::to_string(n) + ")");
    }

    ingest::ReturnSeries out;
    out.symbol = series.symbol;
    out.normalized = true;
    const std::size_t count = series.values.size() - (n - 1);
    out.timestamps.reserve(count);
    out.values.reserve(count);

    for (std::size_t i = n - 1; i < series.values.size(); ++i) {
        const double* w = series.values.data() + (i - (n - 1));
        const auto [lo, hi] = std::minmax_element(w, w + n);
        double value;
        if (*lo == *hi) {
            // Exactly constant window: zero local variance.
            if (cfg.degenerate_policy == DegeneratePolicy::Error) {
                throw_numeric("degenerate normalization window for '" + series.symbol +
                              "' at " + series.timestamps[i].to_string() +
                              " (zero local variance)");
            }
            value = 0.0;
        } else {
            double mean = 0.0;
            for (std::size_t k = 0; k < n; ++k) mean += w[k];
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = w[k] - mean;
                var += d * d;
            }
            var /= static_cast<double>(n);
            value = (w[n - 1] - mean) / std::sqrt(var);
        }
        out.timestamps.push_back(series.timestamps[i]);
        out.values.push_back(value);
    }
    return out;
}

}  // namespace marketstates::normalize
