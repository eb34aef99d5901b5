#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "annorate/audit.hpp"
#include "annorate/corpus.hpp"
#include "annorate/scoring.hpp"

namespace annorate
{
    /// Entries ordered by log_terms descending, then study id ascending (natural order).
    std::vector<EntryScore> sorted_for_report(std::span<const EntryScore> entries);

    /// Six-column table: study_id, total_annotations, score_terms,
    /// log_score_terms, score_annotations, log_score_annotations. Seven
    /// decimals, '.' separator, LF endings, with one header line.
    std::string format_scores_tsv(std::span<const EntryScore> entries);

    nlohmann::json scores_to_json(std::span<const EntryScore> entries);

    /// Reads a scores table. Decimal commas are accepted; a header line is
    /// detected and skipped. per_type is left empty.
    std::vector<EntryScore> parse_scores_tsv(const std::string& content);

    /// Copies per_type tallies from a scores.json document onto matching entries.
    void merge_type_detail(std::vector<EntryScore>& entries, const nlohmann::json& scores_json);

    std::string format_stats_tsv(const CorpusStats& log_terms, const CorpusStats& log_annotations);
    std::string format_histogram_tsv(const Distribution& dist);
    std::string format_boxplot_tsv(const Distribution& dist);
    std::string format_gaps_tsv(const Distribution& dist);

    nlohmann::json irregularities_to_json(std::span<const Irregularity> findings);

    void write_text_file(const std::filesystem::path& path, const std::string& content);
    std::string read_text_file(const std::filesystem::path& path);
}
