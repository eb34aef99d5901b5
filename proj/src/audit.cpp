#include "annorate/audit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "annorate/text.hpp"

namespace annorate
{
    std::string_view to_string(IrregularityKind kind)
    {
        switch (kind)
        {
            case IrregularityKind::BrokenAccession:
                return "BrokenAccession";
            case IrregularityKind::NonPurlAccession:
                return "NonPurlAccession";
            case IrregularityKind::RepeatedAnnotation:
                return "RepeatedAnnotation";
            case IrregularityKind::CrossTypeUnannotatedDuplicate:
                return "CrossTypeUnannotatedDuplicate";
            case IrregularityKind::NearDuplicateEntry:
                return "NearDuplicateEntry";
            case IrregularityKind::OntologyUnavailable:
                return "OntologyUnavailable";
            case IrregularityKind::EmptyLabelAnnotation:
                return "EmptyLabelAnnotation";
        }
        return "";
    }

    namespace
    {
        struct LabelUse
        {
            std::string first_label;
            std::set<AnnotationType> annotated;
            std::set<AnnotationType> present;
        };

        std::string join_types(const std::set<AnnotationType>& types)
        {
            std::string out;
            for (auto t : types)
            {
                if (!out.empty())
                {
                    out += ", ";
                }
                out += to_string(t);
            }
            return out;
        }

        using SlotKey = std::tuple<AnnotationType, std::string, std::string>;

        std::map<SlotKey, std::size_t> slot_multiset(const StudyMetadata& m)
        {
            std::map<SlotKey, std::size_t> out;
            for (auto type : all_annotation_types)
            {
                for (const auto& slot : m.slots(type))
                {
                    ++out[{type, normalize_label(slot.label), std::string(trim(slot.accession))}];
                }
            }
            return out;
        }

        std::size_t slot_total(const std::map<SlotKey, std::size_t>& multiset)
        {
            std::size_t n = 0;
            for (const auto& [key, count] : multiset)
            {
                n += count;
            }
            return n;
        }

        std::size_t difference(const std::map<SlotKey, std::size_t>& a, const std::map<SlotKey, std::size_t>& b)
        {
            std::size_t common = 0;
            for (const auto& [key, count] : a)
            {
                if (auto it = b.find(key); it != b.end())
                {
                    common += std::min(count, it->second);
                }
            }
            return std::max(slot_total(a), slot_total(b)) - common;
        }
    }

    std::vector<Irregularity> audit_entry(const StudyMetadata& metadata, const AccessionResolver& resolver)
    {
        std::vector<Irregularity> findings;
        std::set<std::pair<IrregularityKind, std::string>> reported;
        auto report = [&](IrregularityKind kind, std::string evidence)
        {
            if (reported.emplace(kind, evidence).second)
            {
                findings.push_back({metadata.study_id, kind, std::move(evidence)});
            }
        };

        // (normalized label, accession) -> (first label seen, occurrences)
        std::map<std::pair<std::string, std::string>, std::pair<std::string, std::size_t>> annotation_counts;
        std::map<std::string, LabelUse> label_uses;

        for (auto type : scored_annotation_types)
        {
            for (const auto& slot : metadata.slots(type))
            {
                const auto label_key = normalize_label(slot.label);
                if (!label_key.empty())
                {
                    auto& use = label_uses[label_key];
                    if (use.first_label.empty())
                    {
                        use.first_label = slot.label;
                    }
                    use.present.insert(type);
                    if (slot.is_annotation())
                    {
                        use.annotated.insert(type);
                    }
                }

                if (!slot.is_annotation())
                {
                    continue;
                }
                const std::string accession(trim(slot.accession));
                auto& count = annotation_counts[{label_key, accession}];
                if (count.second++ == 0)
                {
                    count.first = slot.label;
                }

                if (label_key.empty())
                {
                    report(IrregularityKind::EmptyLabelAnnotation, accession);
                }

                const auto ref = classify_accession(accession);
                if (!ref.is_purl())
                {
                    report(IrregularityKind::NonPurlAccession, accession);
                    continue;
                }
                switch (resolver(ref))
                {
                    case Resolution::Resolved:
                        break;
                    case Resolution::Broken:
                        report(IrregularityKind::BrokenAccession, accession);
                        break;
                    case Resolution::NotInCatalog:
                        report(IrregularityKind::OntologyUnavailable, accession);
                        break;
                }
            }
        }

        for (const auto& [key, value] : annotation_counts)
        {
            if (value.second > 1)
            {
                report(
                    IrregularityKind::RepeatedAnnotation,
                    "'" + value.first + "' " + key.second + " x" + std::to_string(value.second)
                );
            }
        }

        for (const auto& [key, use] : label_uses)
        {
            std::set<AnnotationType> unannotated;
            std::set_difference(
                use.present.begin(),
                use.present.end(),
                use.annotated.begin(),
                use.annotated.end(),
                std::inserter(unannotated, unannotated.end())
            );
            if (!use.annotated.empty() && !unannotated.empty())
            {
                report(
                    IrregularityKind::CrossTypeUnannotatedDuplicate,
                    "'" + use.first_label + "' annotated under " + join_types(use.annotated)
                        + "; unannotated under " + join_types(unannotated)
                );
            }
        }

        std::sort(
            findings.begin(),
            findings.end(),
            [](const Irregularity& a, const Irregularity& b)
            { return std::tie(a.kind, a.evidence) < std::tie(b.kind, b.evidence); }
        );
        return findings;
    }

    std::size_t slot_difference(const StudyMetadata& a, const StudyMetadata& b)
    {
        return difference(slot_multiset(a), slot_multiset(b));
    }

    std::vector<Irregularity> audit_corpus(std::span<const StudyMetadata> entries, double threshold)
    {
        std::vector<std::size_t> order(entries.size());
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            order[i] = i;
        }
        std::stable_sort(
            order.begin(),
            order.end(),
            [&](std::size_t a, std::size_t b) { return natural_less(entries[a].study_id, entries[b].study_id); }
        );

        std::vector<std::map<SlotKey, std::size_t>> multisets;
        multisets.reserve(entries.size());
        for (auto i : order)
        {
            multisets.push_back(slot_multiset(entries[i]));
        }

        std::vector<Irregularity> findings;
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            for (std::size_t j = i + 1; j < order.size(); ++j)
            {
                const auto larger = std::max(slot_total(multisets[i]), slot_total(multisets[j]));
                if (larger == 0)
                {
                    continue;
                }
                const auto diff = difference(multisets[i], multisets[j]);
                // Small epsilon so an exact boundary (1 of 10 at 0.10) is not lost to rounding.
                if (static_cast<double>(diff) <= threshold * static_cast<double>(larger) + 1e-9)
                {
                    findings.push_back(
                        {entries[order[i]].study_id,
                         IrregularityKind::NearDuplicateEntry,
                         entries[order[j]].study_id + " (" + std::to_string(diff) + " of "
                             + std::to_string(larger) + " slots differ)"}
                    );
                }
            }
        }
        return findings;
    }
}
