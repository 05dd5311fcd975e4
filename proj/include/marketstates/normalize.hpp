#pragma once

#include "marketstates/ingest.hpp"

namespace marketstates::normalize {

enum class DegeneratePolicy { EmitZero, Error };

struct LocalNormConfig {
    std::size_t window = 13;  // n most recent points, current one included
    DegeneratePolicy degenerate_policy = DegeneratePolicy::Error;
};

// Standardizes each return by the mean and population standard deviation of
// its trailing window, removing slow drift and volatility. The first n-1
// points carry no full window and are dropped from the output.
ingest::ReturnSeries local_normalize(const ingest::ReturnSeries& series,
                                     const LocalNormConfig& cfg);

}  // namespace marketstates::normalize
