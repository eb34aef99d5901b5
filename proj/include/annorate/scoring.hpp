#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annorate/accession.hpp"
#include "annorate/isatab.hpp"
#include "annorate/ontology.hpp"

namespace annorate
{
    /// Per-accession result produced by a scorer.
    struct AnnotationScore
    {
        double score = 0.0;  // in [0, 1]
        Resolution resolution = Resolution::Resolved;
        std::optional<DepthMetrics> metrics;
        std::string note;
    };

    /// Called once per PURL slot; never called for non-PURL or malformed accessions.
    using AccessionScorer = std::function<AnnotationScore(const AccessionRef&)>;

    struct AnnotationDetail
    {
        AnnotationType type;
        std::string label;
        AccessionRef ref;
        AnnotationScore result;
    };

    struct TypeScore
    {
        std::size_t annotation_count = 0;
        std::size_t term_count = 0;
        double score_sum = 0.0;
        double by_annotations = 0.0;
        double by_terms = 0.0;

        bool has_unannotated() const
        {
            return term_count > annotation_count;
        }
    };

    struct EntryScore
    {
        std::string study_id;
        std::map<AnnotationType, TypeScore> per_type;  // always the four scored types
        double global_terms = 0.0;
        double global_annotations = 0.0;
        double log_terms = 0.0;
        double log_annotations = 0.0;
        std::size_t total_annotations = 0;
        std::vector<AnnotationDetail> annotations;

        const TypeScore& type(AnnotationType t) const;
    };

    enum class ScoreColumn
    {
        GlobalTerms,
        GlobalAnnotations,
        LogTerms,
        LogAnnotations,
    };

    std::string_view to_string(ScoreColumn column);
    std::optional<ScoreColumn> score_column_from_string(std::string_view name);
    double column_value(const EntryScore& entry, ScoreColumn column);

    /// 100 * log2(1 + score / 100). Throws Error(DomainError) outside [0, 100].
    double log_transform(double score);

    /// Tallies one type's slots. PURL accessions are annotations; every slot is a term.
    TypeScore type_tally(std::span<const TermSlot> slots, const AccessionScorer& scorer);

    /// Derives the weighted type scores from counts and a score sum.
    TypeScore make_type_score(std::size_t annotation_count, std::size_t term_count, double score_sum);

    /// Fills globals, logs and total_annotations from `per_type`. The global
    /// mean always divides by the four scored types.
    void finalize_entry(EntryScore& entry);

    EntryScore score_entry(const StudyMetadata& metadata, const AccessionScorer& scorer);
}
