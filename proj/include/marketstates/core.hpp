#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace marketstates {

// Error category, mapped to process exit codes by the CLI.
enum class ErrorKind {
    Validation,  // exit 2: bad input data, config or preconditions
    Numeric,     // exit 3: non-convergence, non-finite values
    Io           // exit 4: file system and stream failures
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
            case ErrorKind::Validation: return 2;
            case ErrorKind::Numeric: return 3;
            case ErrorKind::Io: return 4;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_validation(const std::string& msg) {
    throw Error(ErrorKind::Validation, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
    throw Error(ErrorKind::Numeric, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
    throw Error(ErrorKind::Io, msg);
}

// Instant in time, stored as seconds since the Unix epoch (UTC).
// Parses and formats ISO-8601 "YYYY-MM-DD" and "YYYY-MM-DDTHH:MM:SS".
class Timestamp {
public:
    Timestamp() = default;
    explicit Timestamp(std::int64_t epoch_seconds) : seconds_(epoch_seconds) {}

    static Timestamp parse(std::string_view iso);

    // Shortest faithful form: date-only when the time of day is 00:00:00.
    std::string to_string() const;
    // Label safe for file names (':' removed from the time part).
    std::string to_file_label() const;

    std::int64_t seconds() const noexcept { return seconds_; }
    std::int64_t days_since_epoch() const noexcept;
    int minute_of_day() const noexcept;
    Timestamp start_of_day() const noexcept;
    Timestamp end_of_day() const noexcept;
    bool has_time_of_day() const noexcept;

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

private:
    std::int64_t seconds_ = 0;
};

// Inclusive interval of instants.
struct DateRange {
    Timestamp start;
    Timestamp end;

    bool contains(const Timestamp& t) const noexcept {
        return start <= t && t <= end;
    }
};

// Dense row-major matrix of doubles. Value semantics throughout.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::size_t size() const noexcept { return data_.size(); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Half-open index range [begin, end) into a panel's timestamp axis.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - begin; }
    bool operator==(const IndexRange&) const = default;
};

}  // namespace marketstates
