#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annorate/accession.hpp"
#include "annorate/isatab.hpp"

namespace annorate
{
    enum class IrregularityKind
    {
        BrokenAccession,
        NonPurlAccession,
        RepeatedAnnotation,
        CrossTypeUnannotatedDuplicate,
        NearDuplicateEntry,
        OntologyUnavailable,
        EmptyLabelAnnotation,
    };

    std::string_view to_string(IrregularityKind kind);

    struct Irregularity
    {
        std::string study_id;
        IrregularityKind kind;
        std::string evidence;

        bool operator==(const Irregularity&) const = default;
    };

    using AccessionResolver = std::function<Resolution(const AccessionRef&)>;

    inline constexpr double default_near_duplicate_threshold = 0.10;

    /// Per-entry structural checks over the four scored types. Findings are
    /// sorted by kind then evidence; per-accession findings are reported once
    /// per distinct accession.
    std::vector<Irregularity> audit_entry(const StudyMetadata& metadata, const AccessionResolver& resolver);

    /// Number of slots by which two entries differ: the larger slot count minus
    /// the size of the multiset intersection of (type, label, accession) slots.
    std::size_t slot_difference(const StudyMetadata& a, const StudyMetadata& b);

    /// Reports each unordered pair of entries whose slot difference is at most
    /// `threshold` times the larger entry's slot count, once per pair.
    std::vector<Irregularity> audit_corpus(std::span<const StudyMetadata> entries, double threshold = default_near_duplicate_threshold);
}
