#include "annorate/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annorate/error.hpp"

namespace annorate
{
    namespace
    {
        constexpr std::size_t bin_count = 10;
        constexpr double bin_width = 10.0;

        double median_of(std::span<const double> sorted)
        {
            const std::size_t n = sorted.size();
            return n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
        }
    }

    CorpusStats corpus_stats(std::span<const EntryScore> entries, ScoreColumn column)
    {
        if (entries.empty())
        {
            throw Error(ErrorKind::EmptyCorpus, "no entries to summarize");
        }

        std::vector<double> values;
        values.reserve(entries.size());
        for (const auto& e : entries)
        {
            values.push_back(column_value(e, column));
        }
        // Summing in sorted order makes the result independent of input order.
        std::sort(values.begin(), values.end());

        CorpusStats stats;
        stats.n = values.size();
        const auto n = static_cast<double>(stats.n);
        stats.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
        if (stats.n > 1)
        {
            double squares = 0.0;
            for (double v : values)
            {
                squares += (v - stats.mean) * (v - stats.mean);
            }
            stats.std_dev = std::sqrt(squares / (n - 1.0));
        }
        stats.max = values.back();

        for (const auto& e : entries)
        {
            if (e.total_annotations >= 1)
            {
                const double v = column_value(e, column);
                stats.min_annotated = stats.min_annotated ? std::min(*stats.min_annotated, v) : v;
            }
        }

        const auto above = std::count_if(values.begin(), values.end(), [&](double v) { return v > stats.mean; });
        stats.pct_above_mean = 100.0 * static_cast<double>(above) / n;
        return stats;
    }

    BoxStats box_stats(std::vector<double> values)
    {
        if (values.empty())
        {
            throw Error(ErrorKind::EmptyCorpus, "no values for a box plot");
        }
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();

        BoxStats box;
        box.n = n;
        box.min = values.front();
        box.max = values.back();
        box.median = median_of(values);
        if (n == 1)
        {
            box.q1 = box.q3 = box.median;
            return box;
        }
        // Halves exclude the median element when n is odd.
        const std::size_t half = n / 2;
        const std::span<const double> all(values);
        box.q1 = median_of(all.first(half));
        box.q3 = median_of(all.last(half));
        return box;
    }

    std::size_t histogram_bin(double value)
    {
        if (!(value > 0.0))
        {
            return 0;
        }
        const auto bin = static_cast<std::size_t>(std::floor(value / bin_width));
        return std::min(bin, bin_count - 1);
    }

    Distribution distribution(std::span<const EntryScore> entries, ScoreColumn column)
    {
        if (entries.empty())
        {
            throw Error(ErrorKind::EmptyCorpus, "no entries to summarize");
        }

        Distribution dist;
        dist.histogram.reserve(bin_count);
        for (std::size_t b = 0; b < bin_count; ++b)
        {
            dist.histogram.emplace_back(static_cast<double>(b) * bin_width, 0);
        }
        for (const auto& e : entries)
        {
            ++dist.histogram[histogram_bin(column_value(e, column))].second;
        }

        for (auto type : scored_annotation_types)
        {
            std::vector<double> values;
            double gap_sum = 0.0;
            std::size_t gap_n = 0;
            for (const auto& e : entries)
            {
                const auto& t = e.type(type);
                if (t.annotation_count >= 1)
                {
                    values.push_back(t.by_annotations);
                }
                if (e.total_annotations >= 1)
                {
                    gap_sum += t.by_annotations - t.by_terms;
                    ++gap_n;
                }
            }
            if (!values.empty())
            {
                dist.per_type_boxplot[type] = box_stats(std::move(values));
            }
            dist.avg_weighting_gap[type] = gap_n == 0 ? 0.0 : 100.0 * gap_sum / static_cast<double>(gap_n);
        }
        return dist;
    }
}
