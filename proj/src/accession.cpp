#include "annorate/accession.hpp"

#include <regex>

#include "annorate/text.hpp"

namespace annorate
{
    std::string_view to_string(AccessionKind kind)
    {
        switch (kind)
        {
            case AccessionKind::OboPurl:
                return "OboPurl";
            case AccessionKind::BioportalPurl:
                return "BioportalPurl";
            case AccessionKind::NonPurl:
                return "NonPurl";
            case AccessionKind::Malformed:
                return "Malformed";
        }
        return "";
    }

    std::string_view to_string(Resolution resolution)
    {
        switch (resolution)
        {
            case Resolution::Resolved:
                return "Resolved";
            case Resolution::Broken:
                return "Broken";
            case Resolution::NotInCatalog:
                return "NotInCatalog";
        }
        return "";
    }

    std::optional<std::string> AccessionRef::term_id() const
    {
        if (!is_purl())
        {
            return std::nullopt;
        }
        return *ontology_prefix + ":" + *local_id;
    }

    AccessionRef classify_accession(std::string_view raw)
    {
        // The OBO prefix is alphanumeric; the local id is everything after the
        // first underscore that follows it (NCBITaxon_223283, CHMO_0000497).
        static const std::regex obo_pattern(
            R"(^https?://purl\.obolibrary\.org/obo/([A-Za-z][A-Za-z0-9]*)_([A-Za-z0-9_]+)$)",
            std::regex::icase
        );
        static const std::regex bioportal_pattern(
            R"(^https?://purl\.bioontology\.org/ontology/([A-Za-z0-9][A-Za-z0-9_\-]*)/([A-Za-z0-9_.\-]+)$)",
            std::regex::icase
        );
        static const std::regex absolute_url(R"(^[A-Za-z][A-Za-z0-9+.\-]*://[^\s/?#]+[^\s]*$)");

        AccessionRef ref;
        ref.raw = std::string(raw);
        const std::string text(trim(raw));

        std::smatch m;
        if (std::regex_match(text, m, obo_pattern))
        {
            ref.kind = AccessionKind::OboPurl;
            ref.ontology_prefix = m[1].str();
            ref.local_id = m[2].str();
        }
        else if (std::regex_match(text, m, bioportal_pattern))
        {
            ref.kind = AccessionKind::BioportalPurl;
            ref.ontology_prefix = m[1].str();
            ref.local_id = m[2].str();
        }
        else if (std::regex_match(text, absolute_url))
        {
            ref.kind = AccessionKind::NonPurl;
        }
        else
        {
            ref.kind = AccessionKind::Malformed;
        }
        return ref;
    }
}
