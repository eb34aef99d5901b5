#include "annorate/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "annorate/error.hpp"
#include "annorate/text.hpp"

namespace annorate
{
    namespace fs = std::filesystem;

    OntologyCatalog OntologyCatalog::load(const fs::path& catalog_path)
    {
        std::ifstream in(catalog_path);
        if (!in)
        {
            throw Error(ErrorKind::IoError, "cannot open catalog " + catalog_path.string());
        }
        OntologyCatalog catalog;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
            {
                line.pop_back();
            }
            if (trim(line).empty() || trim(line).front() == '#')
            {
                continue;
            }
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
            {
                throw Error(
                    ErrorKind::ParseError,
                    catalog_path.string() + ":" + std::to_string(line_no) + ": expected prefix<TAB>path"
                );
            }
            const std::string prefix(trim(std::string_view(line).substr(0, tab)));
            fs::path path(std::string(trim(std::string_view(line).substr(tab + 1))));
            if (path.is_relative())
            {
                path = catalog_path.parent_path() / path;
            }
            catalog.add(load_obo_file(path.string(), prefix));
            spdlog::debug("loaded ontology {} from {}", prefix, path.string());
        }
        return catalog;
    }

    void OntologyCatalog::add(OntologyGraph graph)
    {
        auto prefix = graph.prefix();
        m_graphs.insert_or_assign(std::move(prefix), std::move(graph));
    }

    const OntologyGraph* OntologyCatalog::find(std::string_view prefix) const
    {
        if (auto it = m_graphs.find(prefix); it != m_graphs.end())
        {
            return &it->second;
        }
        for (const auto& [key, graph] : m_graphs)
        {
            if (iequals(key, prefix))
            {
                return &graph;
            }
        }
        return nullptr;
    }

    std::vector<std::string> OntologyCatalog::prefixes() const
    {
        std::vector<std::string> out;
        for (const auto& [key, graph] : m_graphs)
        {
            out.push_back(key);
        }
        return out;
    }

    CatalogResolver::CatalogResolver(const OntologyCatalog& catalog, ResolverOptions options)
        : m_catalog(&catalog)
        , m_options(std::move(options))
    {
    }

    AnnotationScore CatalogResolver::score(const AccessionRef& ref) const
    {
        const std::string key(trim(ref.raw));
        {
            std::lock_guard lock(m_mutex);
            if (auto it = m_cache.find(key); it != m_cache.end())
            {
                return it->second;
            }
        }
        // Computed outside the lock so slow probes do not serialize workers;
        // a racing duplicate computation yields the same value.
        auto result = compute(ref);
        std::lock_guard lock(m_mutex);
        return m_cache.emplace(key, std::move(result)).first->second;
    }

    AnnotationScore CatalogResolver::compute(const AccessionRef& ref) const
    {
        AnnotationScore result;
        result.score = 0.0;
        if (!ref.is_purl())
        {
            result.resolution = Resolution::Broken;
            result.note = "not a PURL";
            return result;
        }

        if (m_options.probe_network)
        {
            const auto probe = probe_accession(ref, m_options.probe);
            if (probe.resolution == Resolution::Broken)
            {
                result.resolution = Resolution::Broken;
                result.note = probe.note;
                return result;
            }
        }

        const auto* graph = m_catalog->find(*ref.ontology_prefix);
        if (graph == nullptr)
        {
            result.resolution = Resolution::NotInCatalog;
            result.note = "no ontology loaded for prefix " + *ref.ontology_prefix;
            return result;
        }
        const auto term = graph->prefix() + ":" + *ref.local_id;
        if (!graph->contains(term))
        {
            result.resolution = Resolution::Broken;
            result.note = term + " not found in ontology " + graph->prefix();
            return result;
        }
        const auto metrics = graph->specificity(term);
        result.resolution = Resolution::Resolved;
        result.metrics = metrics;
        result.score = metrics.score;
        return result;
    }

    AccessionScorer CatalogResolver::scorer() const
    {
        return [this](const AccessionRef& ref) { return score(ref); };
    }

    AccessionResolver CatalogResolver::resolver() const
    {
        return [this](const AccessionRef& ref) { return resolve(ref); };
    }

    std::vector<fs::path> find_investigation_files(const fs::path& dir)
    {
        std::vector<fs::path> files;
        if (!fs::is_directory(dir))
        {
            throw Error(ErrorKind::IoError, "not a directory: " + dir.string());
        }
        for (const auto& entry : fs::recursive_directory_iterator(dir))
        {
            const auto name = entry.path().filename().string();
            if (entry.is_regular_file() && name.rfind("i_", 0) == 0 && entry.path().extension() == ".txt")
            {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        return files;
    }

    LoadedCorpus load_corpus(const fs::path& dir)
    {
        LoadedCorpus corpus;
        for (const auto& path : find_investigation_files(dir))
        {
            try
            {
                auto parsed = parse_investigation_file(path.string());
                for (auto& w : parsed.warnings)
                {
                    spdlog::warn("{}: line {}: {}", path.string(), w.line, w.message);
                    corpus.warnings.push_back(std::move(w));
                }
                for (auto& study : parsed.studies)
                {
                    corpus.studies.push_back(std::move(study));
                }
            }
            catch (const Error& e)
            {
                spdlog::warn("skipping {}: {}", path.string(), e.what());
                corpus.failures.push_back(path.string() + ": " + e.what());
            }
        }
        return corpus;
    }

    std::vector<EntryScore> score_corpus(std::span<const StudyMetadata> studies, const AccessionScorer& scorer, std::size_t concurrency)
    {
        std::vector<EntryScore> scores(studies.size());
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto worker = [&]
        {
            for (std::size_t i = next++; i < studies.size(); i = next++)
            {
                try
                {
                    scores[i] = score_entry(studies[i], scorer);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!first_error)
                    {
                        first_error = std::current_exception();
                    }
                }
            }
        };
        const auto workers = std::clamp<std::size_t>(concurrency, 1, std::max<std::size_t>(1, studies.size()));
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w)
            {
                pool.emplace_back(worker);
            }
        }
        if (first_error)
        {
            std::rethrow_exception(first_error);
        }
        return scores;
    }
}
