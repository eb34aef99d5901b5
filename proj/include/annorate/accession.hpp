#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace annorate
{
    enum class AccessionKind
    {
        OboPurl,
        BioportalPurl,
        NonPurl,
        Malformed,
    };

    std::string_view to_string(AccessionKind kind);

    /// Outcome of resolving a PURL against the ontology catalog or the network.
    enum class Resolution
    {
        Resolved,
        Broken,
        NotInCatalog,
    };

    std::string_view to_string(Resolution resolution);

    struct AccessionRef
    {
        std::string raw;
        AccessionKind kind = AccessionKind::Malformed;
        std::optional<std::string> ontology_prefix;
        std::optional<std::string> local_id;

        /// True for the two PURL kinds that take part in scoring.
        bool is_purl() const
        {
            return kind == AccessionKind::OboPurl || kind == AccessionKind::BioportalPurl;
        }

        /// "PREFIX:LOCAL" identifier used to look the term up in an ontology graph.
        std::optional<std::string> term_id() const;
    };

    /// Classifies an accession URL. Total: problems are encoded in the kind.
    AccessionRef classify_accession(std::string_view raw);
}
