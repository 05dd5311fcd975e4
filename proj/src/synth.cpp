#include "marketstates/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "marketstates/io.hpp"

namespace marketstates::synth {

double GaussianSampler::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

namespace {

// Cyclic Jacobi sweeps; a is destroyed. Eigenvectors land in columns of v.
void jacobi_eigen(Matrix& a, std::vector<double>& eigenvalues, Matrix& v) {
    const std::size_t n = a.rows();
    v = Matrix::identity(n);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (off < 1e-26 * static_cast<double>(n * n)) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a(p, i);
                    const double aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a(i, i);
}

void require_correlation_target(const Matrix& target) {
    const std::size_t k = target.rows();
    if (k < 2 || target.cols() != k) {
        throw_validation("correlation target must be square with K >= 2");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (std::abs(target(i, i) - 1.0) > 1e-12) {
            throw_validation("correlation target diagonal must be 1");
        }
        for (std::size_t j = 0; j < k; ++j) {
            const double v = target(i, j);
            if (!std::isfinite(v) || v < -1.0 - 1e-12 || v > 1.0 + 1e-12) {
                throw_validation("correlation target entry out of [-1,1]");
            }
            if (std::abs(v - target(j, i)) > 1e-12) {
                throw_validation("correlation target must be symmetric");
            }
        }
    }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
    Matrix a = m;
    Matrix v;
    std::vector<double> eig;
    jacobi_eigen(a, eig, v);
    std::sort(eig.begin(), eig.end());
    return eig;
}

Matrix symmetric_sqrt(const Matrix& psd) {
    const std::size_t n = psd.rows();
    Matrix a = psd;
    Matrix v;
    std::vector<double> eig;
    jacobi_eigen(a, eig, v);
    double max_eig = 0.0;
    for (double e : eig) max_eig = std::max(max_eig, e);
    const double tol = 1e-9 * std::max(1.0, max_eig);
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (eig[i] < -tol) {
            char buf[96];
            std::snprintf(buf, sizeof(buf),
                          "matrix is not positive semidefinite (eigenvalue %.6g)", eig[i]);
            throw_validation(buf);
        }
        root[i] = std::sqrt(std::max(eig[i], 0.0));
    }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < n; ++l) acc += v(i, l) * root[l] * v(j, l);
            out(i, j) = acc;
            out(j, i) = acc;
        }
    }
    return out;
}

Matrix uniform_correlation(std::size_t k, double c) {
    Matrix m(k, k, c);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
    return m;
}

void RegimeSpec::validate() const {
    if (series_count < 2) throw_validation("regime spec needs K >= 2 series");
    if (segments.empty()) throw_validation("regime spec needs at least one segment");
    if (!(volatility > 0.0)) throw_validation("regime spec volatility must be positive");
    if (innovations == Innovations::StudentT && student_t_dof < 1) {
        throw_validation("student-t degrees of freedom must be >= 1");
    }
    for (const SegmentSpec& seg : segments) {
        if (seg.length < 2) throw_validation("regime segment length must be >= 2");
        if (seg.noise < 0.0) throw_validation("regime segment noise must be >= 0");
        if (seg.target && seg.target->rows() != series_count) {
            throw_validation("regime segment target size does not match K");
        }
    }
}

RegimeSpec RegimeSpec::from_json(const nlohmann::json& j,
                                 const std::filesystem::path& base_dir) {
    RegimeSpec spec;
    try {
        spec.series_count = j.at("K").get<std::size_t>();
        spec.seed = j.value("seed", std::uint64_t{1});
        spec.volatility = j.value("volatility", 0.01);
        if (j.contains("innovations")) {
            const std::string name = j.at("innovations").get<std::string>();
            if (name == "gaussian") {
                spec.innovations = Innovations::Gaussian;
            } else if (name == "student_t") {
                spec.innovations = Innovations::StudentT;
            } else {
                throw_validation("unknown innovations '" + name + "'");
            }
        }
        spec.student_t_dof = j.value("dof", 3);
        for (const nlohmann::json& js : j.at("segments")) {
            SegmentSpec seg;
            seg.length = js.at("length").get<std::size_t>();
            seg.noise = js.value("noise", 0.0);
            if (js.contains("matrix_file")) {
                const std::filesystem::path file =
                    base_dir / js.at("matrix_file").get<std::string>();
                seg.target = io::read_matrix_csv(file).values;
            } else {
                seg.uniform_level = js.at("c").get<double>();
            }
            spec.segments.push_back(std::move(seg));
        }
    } catch (const nlohmann::json::exception& e) {
        throw_validation(std::string("invalid regime spec JSON: ") + e.what());
    }
    spec.validate();
    return spec;
}

nlohmann::json RegimeSpec::to_json() const {
    nlohmann::json j;
    j["K"] = series_count;
    j["seed"] = seed;
    j["volatility"] = volatility;
    j["innovations"] = innovations == Innovations::Gaussian ? "gaussian" : "student_t";
    if (innovations == Innovations::StudentT) j["dof"] = student_t_dof;
    j["segments"] = nlohmann::json::array();
    for (const SegmentSpec& seg : segments) {
        nlohmann::json js;
        js["length"] = seg.length;
        js["noise"] = seg.noise;
        if (!seg.target) js["c"] = seg.uniform_level;
        j["segments"].push_back(js);
    }
    return j;
}

namespace {

std::vector<Timestamp> weekday_grid(std::size_t count) {
    std::vector<Timestamp> out;
    out.reserve(count);
    std::int64_t day = Timestamp::parse("2000-01-03").days_since_epoch();  // a Monday
    while (out.size() < count) {
        const std::int64_t weekday = ((day % 7) + 7 + 4) % 7;  // epoch day 0 is a Thursday
        if (weekday != 6 && weekday != 0) {  // skip Sat/Sun
            out.push_back(Timestamp(day * 86400));
        }
        ++day;
    }
    return out;
}

}  // namespace

GeneratedPanel generate_regime_panel(const RegimeSpec& spec) {
    spec.validate();
    const std::size_t k = spec.series_count;

    std::size_t total = 0;
    for (const SegmentSpec& seg : spec.segments) total += seg.length;

    GeneratedPanel out;
    out.panel.values = Matrix(k, total);
    out.panel.timestamps = weekday_grid(total);
    out.panel.normalized = false;
    for (std::size_t i = 0; i < k; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "S%03zu", i);
        out.panel.symbols.push_back(buf);
    }
    out.segment_labels.reserve(total);

    GaussianSampler rng(spec.seed);
    std::vector<double> g(k), x(k);
    std::size_t t0 = 0;
    for (std::size_t s = 0; s < spec.segments.size(); ++s) {
        const SegmentSpec& seg = spec.segments[s];
        const Matrix target =
            seg.target ? *seg.target : uniform_correlation(k, seg.uniform_level);
        require_correlation_target(target);
        const Matrix root = symmetric_sqrt(target);

        for (std::size_t t = 0; t < seg.length; ++t) {
            for (std::size_t i = 0; i < k; ++i) g[i] = rng.next();
            double mix = 1.0;
            if (spec.innovations == Innovations::StudentT) {
                double chi2 = 0.0;
                for (int d = 0; d < spec.student_t_dof; ++d) {
                    const double z = rng.next();
                    chi2 += z * z;
                }
                mix = 1.0 / std::sqrt(chi2 / static_cast<double>(spec.student_t_dof));
            }
            for (std::size_t i = 0; i < k; ++i) {
                double acc = 0.0;
                for (std::size_t l = 0; l < k; ++l) acc += root(i, l) * g[l];
                x[i] = acc * mix;
            }
            if (seg.noise > 0.0) {
                for (std::size_t i = 0; i < k; ++i) x[i] += seg.noise * rng.next();
            }
            for (std::size_t i = 0; i < k; ++i) {
                out.panel.values(i, t0 + t) = spec.volatility * x[i];
            }
            out.segment_labels.push_back(static_cast<int>(s));
        }
        t0 += seg.length;
    }
    out.panel.validate();
    return out;
}

std::vector<ingest::PriceSeries> integrate_prices(const ingest::ReturnPanel& panel,
                                                  double initial_price) {
    if (!(initial_price > 0.0)) throw_validation("initial price must be positive");
    const std::size_t t_count = panel.sample_count();
    std::vector<Timestamp> grid = panel.timestamps;
    // One trailing instant to carry the final price.
    std::vector<Timestamp> extended = weekday_grid(t_count + 1);
    if (grid == std::vector<Timestamp>(extended.begin(), extended.end() - 1)) {
        grid.push_back(extended.back());
    } else {
        grid.push_back(Timestamp(panel.timestamps.back().seconds() + 86400));
    }

    std::vector<ingest::PriceSeries> out;
    out.reserve(panel.series_count());
    for (std::size_t i = 0; i < panel.series_count(); ++i) {
        ingest::PriceSeries series;
        series.symbol = panel.symbols[i];
        series.timestamps = grid;
        series.prices.reserve(t_count + 1);
        double price = initial_price;
        series.prices.push_back(price);
        for (std::size_t t = 0; t < t_count; ++t) {
            price *= 1.0 + panel.values(i, t);
            if (!(price > 0.0) || !std::isfinite(price)) {
                throw_numeric("integrated price for '" + series.symbol +
                              "' left the positive range at " +
                              panel.timestamps[t].to_string());
            }
            series.prices.push_back(price);
        }
        series.validate();
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<double> student_t_series(std::size_t n, int dof, std::uint64_t seed) {
    if (dof < 1) throw_validation("student-t degrees of freedom must be >= 1");
    GaussianSampler rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.next();
        double chi2 = 0.0;
        for (int d = 0; d < dof; ++d) {
            const double w = rng.next();
            chi2 += w * w;
        }
        out.push_back(z / std::sqrt(chi2 / static_cast<double>(dof)));
    }
    return out;
}

}  // namespace marketstates::synth
