#pragma once

#include <string>
#include <vector>

#include "marketstates/core.hpp"
#include "marketstates/ingest.hpp"

namespace marketstates::corr {

enum class WindowMode { Disjoint, Sliding };

struct WindowSpec {
    std::size_t length = 42;  // two months at 21 trading days per month
    std::size_t stride = 42;
    WindowMode mode = WindowMode::Disjoint;

    static WindowSpec disjoint(std::size_t length) {
        return {length, length, WindowMode::Disjoint};
    }
    static WindowSpec sliding(std::size_t length, std::size_t stride = 1) {
        return {length, stride, WindowMode::Sliding};
    }
    void validate() const;
};

// Pearson correlation matrix over one panel slice, plus window metadata.
// Symmetric with exact unit diagonal; entries in [-1, 1]. Singular matrices
// (window shorter than the universe) are legal.
struct CorrelationWindow {
    Matrix values;  // K x K
    std::vector<std::string> symbols;
    Timestamp window_start;
    Timestamp window_end;
    Timestamp label_date;  // windows are labeled by their end date
    std::size_t sample_count = 0;

    std::size_t size() const noexcept { return symbols.size(); }
    void validate(double symmetry_tol = 1e-12) const;
};

// Window start/end index ranges over a panel of T timestamps. Disjoint
// windows are anchored so the last one ends at the final timestamp;
// sliding windows end at every stride-th index from length-1 on.
std::vector<IndexRange> rolling_windows(std::size_t sample_count, const WindowSpec& spec);
std::vector<IndexRange> rolling_windows(const ingest::ReturnPanel& panel,
                                        const WindowSpec& spec);

// Population-moment Pearson matrix of the panel rows over [range.begin,
// range.end). A zero-variance series inside the window aborts with an
// error naming the symbol.
CorrelationWindow pearson_matrix(const ingest::ReturnPanel& panel, IndexRange range);

// All windows of the spec in one call; windows are evaluated in parallel.
std::vector<CorrelationWindow> window_matrices(const ingest::ReturnPanel& panel,
                                               const WindowSpec& spec);

// Elementwise mean of the members' matrices. label_date is the midpoint of
// the member label dates, sample_count the sum of member counts.
CorrelationWindow average_matrix(const std::vector<CorrelationWindow>& matrices);

// Subset variant used by the clustering stage; indices select members.
CorrelationWindow average_matrix(const std::vector<CorrelationWindow>& windows,
                                 const std::vector<std::size_t>& members);

}  // namespace marketstates::corr
