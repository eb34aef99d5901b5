#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annorate/accession.hpp"

namespace annorate
{
    inline constexpr std::string_view default_study_pattern = "MTBLS[0-9]+";

    struct RetryPolicy
    {
        int max_attempts = 3;
        std::chrono::milliseconds initial_backoff{200};
        double multiplier = 2.0;
    };

    struct HttpOptions
    {
        std::chrono::milliseconds timeout{30000};
        RetryPolicy retry;
    };

    struct HttpResponse
    {
        int status = 0;
        std::string body;
    };

    /// GET with redirects followed. Retries transport errors, 429 and 5xx with
    /// exponential backoff; throws Error(NetworkError) once attempts run out on a
    /// transport error. HTTP error statuses are returned, not thrown.
    HttpResponse http_get(const std::string& url, const HttpOptions& options);

    /// Extracts study identifiers from a listing body: a JSON array, a JSON
    /// object with a "content" array, or one identifier per line. Returns them
    /// sorted (natural order) and unique. Throws Error(ParseError) when a
    /// non-empty body holds no identifiers.
    std::vector<std::string> parse_study_listing(std::string_view body, std::string_view pattern = default_study_pattern);

    std::vector<std::string> list_studies(
        const std::string& base_url,
        const HttpOptions& options = {},
        std::string_view pattern = default_study_pattern
    );

    std::vector<std::string> list_studies_from_file(const std::filesystem::path& path, std::string_view pattern = default_study_pattern);

    struct ManifestEntry
    {
        std::string study_id;
        std::string path;
        std::string url;
        std::string fetched_at;  // ISO-8601 UTC
        std::string sha256;
        std::string status;      // "ok", "cached" or "FetchFailed: <reason>"

        bool ok() const
        {
            return status == "ok" || status == "cached";
        }
    };

    struct CorpusManifest
    {
        std::vector<ManifestEntry> entries;

        const ManifestEntry* find(std::string_view study_id) const;
        std::size_t success_count() const;
    };

    inline constexpr std::string_view manifest_file_name = "manifest.tsv";

    CorpusManifest read_manifest(const std::filesystem::path& path);
    void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

    /// Ids of successful entries whose file is missing or no longer matches its hash.
    std::vector<std::string> stale_entries(const CorpusManifest& manifest);

    struct FetchOptions
    {
        std::string base_url = "https://ftp.ebi.ac.uk/pub/databases/metabolights/studies/public";
        std::string url_template = "{base}/{id}/i_Investigation.txt";
        std::size_t concurrency = 4;
        bool use_cache = true;
        HttpOptions http;
    };

    std::string study_url(const FetchOptions& options, std::string_view study_id);

    /// Downloads each study's investigation file to dest_dir/<id>/ and writes
    /// dest_dir/manifest.tsv. Per-study failures are recorded, never thrown;
    /// only an unwritable dest_dir throws Error(IoError).
    CorpusManifest fetch_corpus(const std::vector<std::string>& ids, const std::filesystem::path& dest_dir, const FetchOptions& options = {});

    struct ProbeOptions
    {
        std::vector<std::string> error_signatures{
            "Ontology not specified or not supported",
            "The page you are looking for wasn't found",
        };
        /// Replaces scheme and host of the accession URL, e.g. to target a mirror.
        std::optional<std::string> base_override;
        HttpOptions http{std::chrono::milliseconds{10000}, RetryPolicy{2, std::chrono::milliseconds{100}, 2.0}};
    };

    struct ProbeResult
    {
        Resolution resolution = Resolution::Resolved;
        std::string note;
    };

    /// Resolved on a 2xx/3xx final status whose body carries no error
    /// signature; Broken otherwise, including after a network failure.
    ProbeResult probe_accession(const AccessionRef& ref, const ProbeOptions& options = {});

    std::string sha256_hex(std::string_view data);
    std::string utc_timestamp();
}
