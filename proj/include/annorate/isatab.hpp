#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace annorate
{
    enum class AnnotationType
    {
        Design,
        Factor,
        Assay,
        Protocol,
        Person,
    };

    inline constexpr std::array<AnnotationType, 5> all_annotation_types{
        AnnotationType::Design,
        AnnotationType::Factor,
        AnnotationType::Assay,
        AnnotationType::Protocol,
        AnnotationType::Person,
    };

    // Person is parsed but never contributes to global scores.
    inline constexpr std::array<AnnotationType, 4> scored_annotation_types{
        AnnotationType::Design,
        AnnotationType::Factor,
        AnnotationType::Assay,
        AnnotationType::Protocol,
    };

    std::string_view to_string(AnnotationType type);
    std::optional<AnnotationType> annotation_type_from_string(std::string_view name);

    /// ISA-Tab field name of the label row for a type, e.g. "Study Design Type".
    std::string_view field_name(AnnotationType type);

    struct TermSlot
    {
        std::string label;
        std::string accession;  // empty when the term is unannotated
        std::optional<std::string> source_ref;

        bool is_annotation() const
        {
            return !accession.empty();
        }

        bool operator==(const TermSlot&) const = default;
    };

    class StudyMetadata
    {
    public:
        std::string study_id;
        std::string source_path;

        const std::vector<TermSlot>& slots(AnnotationType type) const
        {
            return m_slots[index(type)];
        }

        std::vector<TermSlot>& slots(AnnotationType type)
        {
            return m_slots[index(type)];
        }

        std::size_t term_count(AnnotationType type) const
        {
            return slots(type).size();
        }

        /// Slots carrying a non-empty accession (regardless of its kind).
        std::size_t annotation_count(AnnotationType type) const;

    private:
        static std::size_t index(AnnotationType type)
        {
            return static_cast<std::size_t>(type);
        }

        std::array<std::vector<TermSlot>, all_annotation_types.size()> m_slots;
    };

    struct ParseWarning
    {
        enum class Kind
        {
            DuplicateFieldRow,
            InvalidUtf8,
        };

        Kind kind;
        std::size_t line;  // 1-based; 0 when not tied to one line
        std::string message;
    };

    std::string_view to_string(ParseWarning::Kind kind);

    struct ParsedInvestigation
    {
        std::vector<StudyMetadata> studies;  // one per STUDY block, in file order
        std::vector<ParseWarning> warnings;
    };

    /// Parses an ISA-Tab investigation file.
    ///
    /// Each STUDY block becomes one StudyMetadata; a file without STUDY
    /// section headers is treated as a single study. Slot i of a type pairs
    /// cell i of the label row with cell i of its Term Accession Number and
    /// Term Source REF rows. Throws Error(MalformedFile) when no investigation
    /// field rows are present.
    ParsedInvestigation parse_investigation(std::string_view content, std::string_view source_name);

    ParsedInvestigation parse_investigation_file(const std::string& path);

    /// Splits one line on tabs, trimming whitespace and stripping one pair of
    /// surrounding double quotes per cell.
    std::vector<std::string> split_isatab_row(std::string_view line);

    /// Replaces invalid UTF-8 sequences with U+FFFD. Returns the number of
    /// replacements made.
    std::size_t sanitize_utf8(std::string& text);
}
