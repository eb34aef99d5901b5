#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "annorate/scoring.hpp"

namespace annorate
{
    struct CorpusStats
    {
        std::size_t n = 0;
        double mean = 0.0;
        double std_dev = 0.0;  // sample estimator (n - 1); 0 for a single entry
        double max = 0.0;
        std::optional<double> min_annotated;  // over entries with at least one annotation
        double pct_above_mean = 0.0;          // strictly greater than the mean
    };

    /// Five-number summary; quartiles use the median-exclusive (Tukey) method.
    struct BoxStats
    {
        std::size_t n = 0;
        double min = 0.0;
        double q1 = 0.0;
        double median = 0.0;
        double q3 = 0.0;
        double max = 0.0;
    };

    struct Distribution
    {
        std::vector<std::pair<double, std::size_t>> histogram;  // (bin lower bound, count), 10 bins of width 10
        std::map<AnnotationType, BoxStats> per_type_boxplot;    // by_annotations over entries annotated in that type
        std::map<AnnotationType, double> avg_weighting_gap;     // percent, over entries with any annotation
    };

    /// Throws Error(EmptyCorpus) when `entries` is empty.
    CorpusStats corpus_stats(std::span<const EntryScore> entries, ScoreColumn column);

    Distribution distribution(std::span<const EntryScore> entries, ScoreColumn column);

    /// Throws Error(EmptyCorpus) when `values` is empty.
    BoxStats box_stats(std::vector<double> values);

    /// Histogram bin index for a score: [lo, lo + 10) bins, the last bin closed at 100.
    std::size_t histogram_bin(double value);
}
