#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annorate/audit.hpp"
#include "annorate/ingest.hpp"
#include "annorate/isatab.hpp"
#include "annorate/ontology.hpp"
#include "annorate/scoring.hpp"

namespace annorate
{
    /// Ontology graphs keyed by accession prefix.
    class OntologyCatalog
    {
    public:
        /// Reads a `prefix<TAB>path` TSV and loads every listed OBO file.
        /// Relative paths resolve against the catalog file's directory.
        static OntologyCatalog load(const std::filesystem::path& catalog_path);

        void add(OntologyGraph graph);

        /// Exact prefix match first, then a case-insensitive one.
        const OntologyGraph* find(std::string_view prefix) const;

        std::vector<std::string> prefixes() const;

    private:
        std::map<std::string, OntologyGraph, std::less<>> m_graphs;
    };

    struct ResolverOptions
    {
        bool probe_network = false;
        ProbeOptions probe;
    };

    /// Scores and resolves PURLs against a catalog, optionally probing the
    /// network first. Results are memoized per accession; safe to share
    /// across threads.
    class CatalogResolver
    {
    public:
        CatalogResolver(const OntologyCatalog& catalog, ResolverOptions options = {});

        AnnotationScore score(const AccessionRef& ref) const;

        Resolution resolve(const AccessionRef& ref) const
        {
            return score(ref).resolution;
        }

        AccessionScorer scorer() const;
        AccessionResolver resolver() const;

    private:
        AnnotationScore compute(const AccessionRef& ref) const;

        const OntologyCatalog* m_catalog;
        ResolverOptions m_options;
        mutable std::mutex m_mutex;
        mutable std::map<std::string, AnnotationScore> m_cache;
    };

    struct LoadedCorpus
    {
        std::vector<StudyMetadata> studies;
        std::vector<std::string> failures;  // "path: reason" for files that did not parse
        std::vector<ParseWarning> warnings;
    };

    /// `i_*.txt` files under `dir`, recursively, in sorted path order.
    std::vector<std::filesystem::path> find_investigation_files(const std::filesystem::path& dir);

    LoadedCorpus load_corpus(const std::filesystem::path& dir);

    /// Scores entries on up to `concurrency` threads; output order matches input order.
    std::vector<EntryScore> score_corpus(std::span<const StudyMetadata> studies, const AccessionScorer& scorer, std::size_t concurrency = 1);
}
