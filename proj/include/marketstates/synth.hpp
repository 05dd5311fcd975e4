#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "marketstates/core.hpp"
#include "marketstates/ingest.hpp"

namespace marketstates::synth {

// Deterministic standard-normal draws (Marsaglia polar on mt19937_64).
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}
    explicit GaussianSampler(std::mt19937_64 engine) : engine_(engine) {}

    double next();
    double uniform01();  // [0, 1)

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class Innovations { Gaussian, StudentT };

struct SegmentSpec {
    std::size_t length = 0;
    double uniform_level = 0.0;     // used when target is absent
    std::optional<Matrix> target;   // explicit correlation target
    double noise = 0.0;             // independent noise mixed into each draw
};

// Regime-switching panel recipe. Every segment draws zero-mean returns with
// the segment's target correlation; the whole panel is deterministic in the
// seed.
struct RegimeSpec {
    std::size_t series_count = 0;
    std::uint64_t seed = 1;
    double volatility = 0.01;  // per-step return scale; correlations unaffected
    Innovations innovations = Innovations::Gaussian;
    int student_t_dof = 3;
    std::vector<SegmentSpec> segments;

    void validate() const;
    static RegimeSpec from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir = {});
    nlohmann::json to_json() const;
};

struct GeneratedPanel {
    ingest::ReturnPanel panel;
    std::vector<int> segment_labels;  // segment ordinal per timestamp
};

GeneratedPanel generate_regime_panel(const RegimeSpec& spec);

// Correlation matrix with constant off-diagonal level c.
Matrix uniform_correlation(std::size_t k, double c);

// Spectral square root of a symmetric PSD matrix; negative eigenvalues
// beyond tolerance raise a validation error.
Matrix symmetric_sqrt(const Matrix& psd);

// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

// Prices that reproduce the panel's returns when differenced: S0 = initial,
// S_{t+1} = S_t * (1 + r_t). One extra trailing timestamp carries the final
// price.
std::vector<ingest::PriceSeries> integrate_prices(const ingest::ReturnPanel& panel,
                                                  double initial_price = 100.0);

// Standalone heavy-tailed series for normalization studies.
std::vector<double> student_t_series(std::size_t n, int dof, std::uint64_t seed);

}  // namespace marketstates::synth
