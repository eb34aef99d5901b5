#include "annorate/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "annorate/error.hpp"
#include "annorate/text.hpp"

namespace annorate
{
    const TypeScore& EntryScore::type(AnnotationType t) const
    {
        static const TypeScore empty{};
        auto it = per_type.find(t);
        return it == per_type.end() ? empty : it->second;
    }

    std::string_view to_string(ScoreColumn column)
    {
        switch (column)
        {
            case ScoreColumn::GlobalTerms:
                return "global_terms";
            case ScoreColumn::GlobalAnnotations:
                return "global_annotations";
            case ScoreColumn::LogTerms:
                return "log_terms";
            case ScoreColumn::LogAnnotations:
                return "log_annotations";
        }
        return "";
    }

    std::optional<ScoreColumn> score_column_from_string(std::string_view name)
    {
        for (auto c : {ScoreColumn::GlobalTerms, ScoreColumn::GlobalAnnotations, ScoreColumn::LogTerms, ScoreColumn::LogAnnotations})
        {
            if (iequals(to_string(c), name))
            {
                return c;
            }
        }
        return std::nullopt;
    }

    double column_value(const EntryScore& entry, ScoreColumn column)
    {
        switch (column)
        {
            case ScoreColumn::GlobalTerms:
                return entry.global_terms;
            case ScoreColumn::GlobalAnnotations:
                return entry.global_annotations;
            case ScoreColumn::LogTerms:
                return entry.log_terms;
            case ScoreColumn::LogAnnotations:
                return entry.log_annotations;
        }
        return 0.0;
    }

    double log_transform(double score)
    {
        if (!(score >= 0.0 && score <= 100.0))
        {
            throw Error(ErrorKind::DomainError, "log_transform expects a score in [0, 100], got " + format_fixed(score));
        }
        return 100.0 * std::log2(1.0 + score / 100.0);
    }

    TypeScore make_type_score(std::size_t annotation_count, std::size_t term_count, double score_sum)
    {
        TypeScore t;
        t.annotation_count = annotation_count;
        t.term_count = term_count;
        t.score_sum = score_sum;
        // Clamped so rounding in long sums cannot push a mean past 1.
        t.by_annotations = annotation_count == 0 ? 0.0 : std::min(1.0, score_sum / static_cast<double>(annotation_count));
        t.by_terms = term_count == 0 ? 0.0 : std::min(1.0, score_sum / static_cast<double>(term_count));
        return t;
    }

    namespace
    {
        TypeScore tally(
            AnnotationType type,
            std::span<const TermSlot> slots,
            const AccessionScorer& scorer,
            std::vector<AnnotationDetail>* details
        )
        {
            std::size_t annotations = 0;
            double sum = 0.0;
            for (const auto& slot : slots)
            {
                if (!slot.is_annotation())
                {
                    continue;
                }
                auto ref = classify_accession(slot.accession);
                if (!ref.is_purl())
                {
                    continue;
                }
                AnnotationScore result = scorer(ref);
                if (!(result.score >= 0.0 && result.score <= 1.0))
                {
                    throw Error(ErrorKind::DomainError, "scorer returned " + format_fixed(result.score) + " for " + ref.raw);
                }
                ++annotations;
                sum += result.score;
                if (details != nullptr)
                {
                    details->push_back({type, slot.label, std::move(ref), std::move(result)});
                }
            }
            return make_type_score(annotations, slots.size(), sum);
        }
    }

    TypeScore type_tally(std::span<const TermSlot> slots, const AccessionScorer& scorer)
    {
        return tally(AnnotationType::Design, slots, scorer, nullptr);
    }

    void finalize_entry(EntryScore& entry)
    {
        double sum_terms = 0.0;
        double sum_annotations = 0.0;
        entry.total_annotations = 0;
        for (auto type : scored_annotation_types)
        {
            const auto& t = entry.per_type[type];
            sum_terms += t.by_terms;
            sum_annotations += t.by_annotations;
            entry.total_annotations += t.annotation_count;
        }
        const auto denominator = static_cast<double>(scored_annotation_types.size());
        entry.global_terms = 100.0 * sum_terms / denominator;
        entry.global_annotations = 100.0 * sum_annotations / denominator;
        entry.log_terms = log_transform(entry.global_terms);
        entry.log_annotations = log_transform(entry.global_annotations);
    }

    EntryScore score_entry(const StudyMetadata& metadata, const AccessionScorer& scorer)
    {
        EntryScore entry;
        entry.study_id = metadata.study_id;
        for (auto type : scored_annotation_types)
        {
            entry.per_type[type] = tally(type, metadata.slots(type), scorer, &entry.annotations);
        }
        finalize_entry(entry);
        return entry;
    }
}
