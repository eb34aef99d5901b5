#include "annorate/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "annorate/error.hpp"
#include "annorate/text.hpp"

namespace annorate
{
    namespace fs = std::filesystem;

    namespace
    {
        struct SplitUrl
        {
            std::string origin;  // scheme://host[:port]
            std::string target;  // path and query, at least "/"
        };

        SplitUrl split_url(const std::string& url)
        {
            static const std::regex pattern(R"(^([A-Za-z][A-Za-z0-9+.\-]*://[^/?#]+)(.*)$)");
            std::smatch m;
            if (!std::regex_match(url, m, pattern))
            {
                throw Error(ErrorKind::NetworkError, "not an absolute URL: " + url);
            }
            SplitUrl out{m[1].str(), m[2].str()};
            if (out.target.empty())
            {
                out.target = "/";
            }
            return out;
        }

        bool retryable_status(int status)
        {
            return status == 429 || status >= 500;
        }

        std::string read_file(const fs::path& path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
            {
                throw Error(ErrorKind::IoError, "cannot open " + path.string());
            }
            std::ostringstream buffer;
            buffer << in.rdbuf();
            return buffer.str();
        }
    }

    std::string sha256_hex(std::string_view data)
    {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int length = 0;
        if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        {
            throw Error(ErrorKind::IoError, "SHA-256 digest failed");
        }
        static constexpr char hex[] = "0123456789abcdef";
        std::string out;
        out.reserve(length * 2);
        for (unsigned int i = 0; i < length; ++i)
        {
            out.push_back(hex[digest[i] >> 4]);
            out.push_back(hex[digest[i] & 0x0F]);
        }
        return out;
    }

    std::string utc_timestamp()
    {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buffer[32];
        std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buffer;
    }

    HttpResponse http_get(const std::string& url, const HttpOptions& options)
    {
        const auto parts = split_url(url);
        auto backoff = options.retry.initial_backoff;
        const int attempts = std::max(1, options.retry.max_attempts);

        for (int attempt = 1;; ++attempt)
        {
            httplib::Client client(parts.origin);
            client.set_follow_location(true);
            client.set_connection_timeout(options.timeout);
            client.set_read_timeout(options.timeout);
            client.set_write_timeout(options.timeout);

            auto result = client.Get(parts.target);
            if (result && !(retryable_status(result->status) && attempt < attempts))
            {
                return {result->status, result->body};
            }
            if (attempt >= attempts)
            {
                throw Error(
                    ErrorKind::NetworkError,
                    url + ": " + httplib::to_string(result.error()) + " after " + std::to_string(attempts) + " attempt(s)"
                );
            }
            spdlog::debug("GET {} failed (attempt {}), retrying in {} ms", url, attempt, backoff.count());
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<std::chrono::milliseconds::rep>(static_cast<double>(backoff.count()) * options.retry.multiplier)
            );
        }
    }

    std::vector<std::string> parse_study_listing(std::string_view body, std::string_view pattern)
    {
        const std::regex id_pattern{std::string(pattern)};
        std::vector<std::string> ids;
        auto take = [&](std::string_view candidate)
        {
            const std::string text(trim(candidate));
            if (!text.empty() && std::regex_match(text, id_pattern))
            {
                ids.push_back(text);
                return true;
            }
            return false;
        };

        const auto trimmed = trim(body);
        if (trimmed.empty())
        {
            spdlog::warn("study listing is empty");
            return ids;
        }

        if (trimmed.front() == '[' || trimmed.front() == '{')
        {
            const auto doc = nlohmann::json::parse(trimmed, nullptr, false);
            if (doc.is_discarded())
            {
                throw Error(ErrorKind::ParseError, "listing looks like JSON but does not parse");
            }
            const nlohmann::json* array = &doc;
            if (doc.is_object())
            {
                auto it = doc.find("content");
                if (it == doc.end() || !it->is_array())
                {
                    throw Error(ErrorKind::ParseError, "JSON listing has no \"content\" array");
                }
                array = &*it;
            }
            for (const auto& item : *array)
            {
                if (item.is_string())
                {
                    take(item.get<std::string>());
                }
            }
        }
        else
        {
            std::istringstream lines{std::string(trimmed)};
            std::string line;
            while (std::getline(lines, line))
            {
                if (!trim(line).empty() && !take(line))
                {
                    spdlog::warn("ignoring listing line '{}'", std::string(trim(line)));
                }
            }
        }

        if (ids.empty())
        {
            throw Error(ErrorKind::ParseError, "listing holds no identifiers matching " + std::string(pattern));
        }
        std::sort(ids.begin(), ids.end(), [](const auto& a, const auto& b) { return natural_less(a, b); });
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }

    std::vector<std::string> list_studies(const std::string& base_url, const HttpOptions& options, std::string_view pattern)
    {
        const auto response = http_get(base_url, options);
        if (response.status < 200 || response.status >= 300)
        {
            throw Error(ErrorKind::NetworkError, base_url + " returned HTTP " + std::to_string(response.status));
        }
        return parse_study_listing(response.body, pattern);
    }

    std::vector<std::string> list_studies_from_file(const fs::path& path, std::string_view pattern)
    {
        return parse_study_listing(read_file(path), pattern);
    }

    const ManifestEntry* CorpusManifest::find(std::string_view study_id) const
    {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.study_id == study_id; });
        return it == entries.end() ? nullptr : &*it;
    }

    std::size_t CorpusManifest::success_count() const
    {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.ok(); }));
    }

    CorpusManifest read_manifest(const fs::path& path)
    {
        CorpusManifest manifest;
        std::istringstream lines(read_file(path));
        std::string line;
        bool header = true;
        while (std::getline(lines, line))
        {
            if (header)
            {
                header = false;
                continue;
            }
            if (line.empty())
            {
                continue;
            }
            std::vector<std::string> cells;
            std::size_t pos = 0;
            while (true)
            {
                auto tab = line.find('\t', pos);
                cells.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
                if (tab == std::string::npos)
                {
                    break;
                }
                pos = tab + 1;
            }
            if (cells.size() != 6)
            {
                throw Error(ErrorKind::ParseError, path.string() + ": manifest row has " + std::to_string(cells.size()) + " columns");
            }
            manifest.entries.push_back({cells[0], cells[1], cells[2], cells[3], cells[4], cells[5]});
        }
        return manifest;
    }

    void write_manifest(const CorpusManifest& manifest, const fs::path& path)
    {
        const auto tmp = fs::path(path.string() + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
            {
                throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
            }
            out << "study_id\tpath\turl\tfetched_at\tsha256\tstatus\n";
            for (const auto& e : manifest.entries)
            {
                out << e.study_id << '\t' << e.path << '\t' << e.url << '\t' << e.fetched_at << '\t' << e.sha256 << '\t'
                    << e.status << '\n';
            }
        }
        fs::rename(tmp, path);
    }

    std::vector<std::string> stale_entries(const CorpusManifest& manifest)
    {
        std::vector<std::string> stale;
        for (const auto& e : manifest.entries)
        {
            if (!e.ok())
            {
                continue;
            }
            std::error_code ec;
            if (!fs::is_regular_file(e.path, ec) || sha256_hex(read_file(e.path)) != e.sha256)
            {
                stale.push_back(e.study_id);
            }
        }
        return stale;
    }

    std::string study_url(const FetchOptions& options, std::string_view study_id)
    {
        std::string url = options.url_template;
        std::string base = options.base_url;
        while (!base.empty() && base.back() == '/')
        {
            base.pop_back();
        }
        for (auto [key, value] : {std::pair<std::string_view, std::string_view>{"{base}", base}, {"{id}", study_id}})
        {
            for (auto pos = url.find(key); pos != std::string::npos; pos = url.find(key, pos + value.size()))
            {
                url.replace(pos, key.size(), value);
            }
        }
        return url;
    }

    CorpusManifest fetch_corpus(const std::vector<std::string>& ids, const fs::path& dest_dir, const FetchOptions& options)
    {
        std::error_code ec;
        fs::create_directories(dest_dir, ec);
        const auto manifest_path = dest_dir / manifest_file_name;
        {
            std::ofstream probe(dest_dir / ".annorate-write-test", std::ios::trunc);
            if (ec || !probe)
            {
                throw Error(ErrorKind::IoError, "destination not writable: " + dest_dir.string());
            }
        }
        fs::remove(dest_dir / ".annorate-write-test", ec);

        CorpusManifest previous;
        if (fs::exists(manifest_path))
        {
            previous = read_manifest(manifest_path);
        }

        std::vector<ManifestEntry> results(ids.size());
        std::atomic<std::size_t> next{0};

        auto worker = [&]
        {
            for (std::size_t i = next++; i < ids.size(); i = next++)
            {
                const auto& id = ids[i];
                ManifestEntry entry;
                entry.study_id = id;
                entry.url = study_url(options, id);
                entry.path = (dest_dir / id / "i_Investigation.txt").string();

                if (options.use_cache)
                {
                    const auto* cached = previous.find(id);
                    std::error_code exists_ec;
                    if (cached != nullptr && cached->ok() && cached->url == entry.url && fs::is_regular_file(cached->path, exists_ec)
                        && sha256_hex(read_file(cached->path)) == cached->sha256)
                    {
                        entry = *cached;
                        entry.status = "cached";
                        results[i] = std::move(entry);
                        continue;
                    }
                }

                entry.fetched_at = utc_timestamp();
                try
                {
                    const auto response = http_get(entry.url, options.http);
                    if (response.status < 200 || response.status >= 300)
                    {
                        entry.status = "FetchFailed: HTTP " + std::to_string(response.status);
                    }
                    else
                    {
                        fs::create_directories(fs::path(entry.path).parent_path());
                        std::ofstream out(entry.path, std::ios::binary | std::ios::trunc);
                        out << response.body;
                        if (!out)
                        {
                            entry.status = "FetchFailed: cannot write " + entry.path;
                        }
                        else
                        {
                            entry.sha256 = sha256_hex(response.body);
                            entry.status = "ok";
                        }
                    }
                }
                catch (const std::exception& e)
                {
                    entry.status = std::string("FetchFailed: ") + e.what();
                }
                if (!entry.ok())
                {
                    spdlog::warn("{}: {}", id, entry.status);
                }
                results[i] = std::move(entry);
            }
        };

        const auto workers = std::clamp<std::size_t>(options.concurrency, 1, std::max<std::size_t>(1, ids.size()));
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
        {
            pool.emplace_back(worker);
        }
        pool.clear();

        // Rows for studies outside this run are kept; this run's rows replace
        // older ones so ids stay unique.
        CorpusManifest run;
        run.entries = results;
        CorpusManifest merged;
        for (const auto& e : previous.entries)
        {
            if (run.find(e.study_id) == nullptr)
            {
                merged.entries.push_back(e);
            }
        }
        for (auto& e : results)
        {
            merged.entries.push_back(std::move(e));
        }
        write_manifest(merged, manifest_path);
        return run;
    }

    ProbeResult probe_accession(const AccessionRef& ref, const ProbeOptions& options)
    {
        if (!ref.is_purl())
        {
            return {Resolution::Broken, "not a PURL"};
        }

        std::string url(trim(ref.raw));
        if (options.base_override)
        {
            const auto parts = split_url(url);
            std::string base = *options.base_override;
            while (!base.empty() && base.back() == '/')
            {
                base.pop_back();
            }
            url = base + parts.target;
        }

        // Transport failures get one extra try before counting as Broken.
        HttpResponse response;
        for (int attempt = 0;; ++attempt)
        {
            try
            {
                response = http_get(url, options.http);
                break;
            }
            catch (const Error& e)
            {
                if (attempt >= 1)
                {
                    return {Resolution::Broken, std::string("network error (transient?): ") + e.what()};
                }
            }
        }

        if (response.status >= 400 || response.status < 200)
        {
            return {Resolution::Broken, "HTTP " + std::to_string(response.status)};
        }
        for (const auto& signature : options.error_signatures)
        {
            if (!signature.empty() && response.body.find(signature) != std::string::npos)
            {
                return {Resolution::Broken, "error signature: " + signature};
            }
        }
        return {Resolution::Resolved, "HTTP " + std::to_string(response.status)};
    }
}
