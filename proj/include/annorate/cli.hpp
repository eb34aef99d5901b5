#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "annorate/audit.hpp"
#include "annorate/scoring.hpp"

namespace annorate::cli
{
    namespace exit_code
    {
        inline constexpr int ok = 0;
        inline constexpr int failure = 1;
        inline constexpr int all_fetches_failed = 2;
        inline constexpr int findings = 3;
        inline constexpr int usage = 64;
        inline constexpr int no_input = 65;
    }

    struct RunConfig
    {
        std::filesystem::path corpus_dir;
        std::filesystem::path ontology_catalog;  // empty: no catalog
        std::filesystem::path output_dir;
        std::filesystem::path ids_file;     // fetch: identifier list
        std::string list_url;               // fetch: listing endpoint when no ids file
        std::filesystem::path scores_file;  // stats: defaults to <out>/scores.tsv
        std::string base_url;               // fetch: empty means the built-in default
        std::optional<std::string> probe_base;
        ScoreColumn score_column = ScoreColumn::LogTerms;
        double near_dup_threshold = default_near_duplicate_threshold;
        bool probe_network = false;
        bool use_cache = true;
        bool log_base_check = false;
        bool fail_on_findings = false;
        std::size_t concurrency = 4;
    };

    int cmd_fetch(const RunConfig& config);
    int cmd_score(const RunConfig& config);
    int cmd_stats(const RunConfig& config);
    int cmd_audit(const RunConfig& config);

    /// Parses argv and dispatches. Usage errors return exit_code::usage.
    int run(int argc, const char* const* argv);
}
