#include "annorate/isatab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "annorate/error.hpp"
#include "annorate/text.hpp"

namespace annorate
{
    std::string_view to_string(AnnotationType type)
    {
        switch (type)
        {
            case AnnotationType::Design:
                return "Design";
            case AnnotationType::Factor:
                return "Factor";
            case AnnotationType::Assay:
                return "Assay";
            case AnnotationType::Protocol:
                return "Protocol";
            case AnnotationType::Person:
                return "Person";
        }
        return "";
    }

    std::optional<AnnotationType> annotation_type_from_string(std::string_view name)
    {
        for (auto type : all_annotation_types)
        {
            if (iequals(to_string(type), name))
            {
                return type;
            }
        }
        return std::nullopt;
    }

    std::string_view field_name(AnnotationType type)
    {
        switch (type)
        {
            case AnnotationType::Design:
                return "Study Design Type";
            case AnnotationType::Factor:
                return "Study Factor Type";
            case AnnotationType::Assay:
                return "Study Assay Measurement Type";
            case AnnotationType::Protocol:
                return "Study Protocol Type";
            case AnnotationType::Person:
                return "Study Person Roles";
        }
        return "";
    }

    std::string_view to_string(ParseWarning::Kind kind)
    {
        switch (kind)
        {
            case ParseWarning::Kind::DuplicateFieldRow:
                return "DuplicateFieldRow";
            case ParseWarning::Kind::InvalidUtf8:
                return "InvalidUtf8";
        }
        return "";
    }

    std::size_t StudyMetadata::annotation_count(AnnotationType type) const
    {
        const auto& list = slots(type);
        return static_cast<std::size_t>(
            std::count_if(list.begin(), list.end(), [](const TermSlot& s) { return s.is_annotation(); })
        );
    }

    std::size_t sanitize_utf8(std::string& text)
    {
        static constexpr std::string_view replacement = "\xEF\xBF\xBD";
        std::string out;
        std::size_t replaced = 0;
        std::size_t i = 0;
        const std::size_t n = text.size();
        auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
        auto is_cont = [&](std::size_t k) { return k < n && (byte(k) & 0xC0) == 0x80; };

        while (i < n)
        {
            const unsigned char c = byte(i);
            std::size_t len = 0;
            if (c < 0x80)
            {
                len = 1;
            }
            else if (c >= 0xC2 && c <= 0xDF && is_cont(i + 1))
            {
                len = 2;
            }
            else if (c >= 0xE0 && c <= 0xEF && is_cont(i + 1) && is_cont(i + 2))
            {
                const unsigned char c1 = byte(i + 1);
                const bool overlong = c == 0xE0 && c1 < 0xA0;
                const bool surrogate = c == 0xED && c1 >= 0xA0;
                len = (overlong || surrogate) ? 0 : 3;
            }
            else if (c >= 0xF0 && c <= 0xF4 && is_cont(i + 1) && is_cont(i + 2) && is_cont(i + 3))
            {
                const unsigned char c1 = byte(i + 1);
                const bool overlong = c == 0xF0 && c1 < 0x90;
                const bool too_big = c == 0xF4 && c1 >= 0x90;
                len = (overlong || too_big) ? 0 : 4;
            }

            if (len == 0)
            {
                if (replaced == 0)
                {
                    out.assign(text, 0, i);
                }
                out.append(replacement);
                ++replaced;
                ++i;
                continue;
            }
            if (replaced > 0)
            {
                out.append(text, i, len);
            }
            i += len;
        }
        if (replaced > 0)
        {
            text = std::move(out);
        }
        return replaced;
    }

    std::vector<std::string> split_isatab_row(std::string_view line)
    {
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true)
        {
            // A quoted cell may contain tabs; it ends at a quote followed by a tab or EOL.
            std::size_t start = pos;
            while (start < line.size() && (line[start] == ' '))
            {
                ++start;
            }
            std::size_t end = std::string_view::npos;
            if (start < line.size() && line[start] == '"')
            {
                std::size_t q = start + 1;
                while ((q = line.find('"', q)) != std::string_view::npos)
                {
                    std::size_t after = q + 1;
                    while (after < line.size() && line[after] == ' ')
                    {
                        ++after;
                    }
                    if (after == line.size() || line[after] == '\t')
                    {
                        end = after;
                        break;
                    }
                    ++q;
                }
            }
            if (end == std::string_view::npos)
            {
                end = line.find('\t', pos);
                if (end == std::string_view::npos)
                {
                    end = line.size();
                }
            }

            std::string_view cell = trim(line.substr(pos, end - pos));
            if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"')
            {
                cell = trim(cell.substr(1, cell.size() - 2));
            }
            cells.emplace_back(cell);

            if (end >= line.size())
            {
                break;
            }
            pos = end + 1;
        }
        return cells;
    }

    namespace
    {
        using FieldRows = std::map<std::string, std::vector<std::string>>;  // lower-cased name -> cells

        struct Block
        {
            FieldRows fields;
        };

        bool is_section_header(std::string_view first_cell, std::size_t cell_count)
        {
            if (first_cell.empty() || cell_count > 1)
            {
                return false;
            }
            return std::all_of(
                first_cell.begin(),
                first_cell.end(),
                [](char c) { return std::isupper(static_cast<unsigned char>(c)) || c == ' ' || c == '_'; }
            );
        }

        bool is_recognized_field(std::string_view name)
        {
            return starts_with_icase(name, "Study ") || starts_with_icase(name, "Investigation ")
                   || starts_with_icase(name, "Term Source ") || starts_with_icase(name, "Comment[");
        }

        std::vector<std::string> cells_of(const FieldRows& fields, std::string_view name)
        {
            auto it = fields.find(to_lower(name));
            return it == fields.end() ? std::vector<std::string>{} : it->second;
        }

        StudyMetadata build_study(const Block& block, std::string_view source_name, std::size_t ordinal)
        {
            StudyMetadata study;
            study.source_path = std::string(source_name);

            for (const auto& cell : cells_of(block.fields, "Study Identifier"))
            {
                if (!cell.empty())
                {
                    study.study_id = cell;
                    break;
                }
            }
            if (study.study_id.empty())
            {
                study.study_id = std::string(source_name);
                if (ordinal > 0)
                {
                    study.study_id += "#" + std::to_string(ordinal + 1);
                }
            }

            for (auto type : all_annotation_types)
            {
                const std::string base(field_name(type));
                const auto labels = cells_of(block.fields, base);
                const auto accessions = cells_of(block.fields, base + " Term Accession Number");
                const auto sources = cells_of(block.fields, base + " Term Source REF");

                const std::size_t n = std::max(labels.size(), accessions.size());
                auto& out = study.slots(type);
                for (std::size_t i = 0; i < n; ++i)
                {
                    TermSlot slot;
                    slot.label = i < labels.size() ? labels[i] : std::string{};
                    slot.accession = i < accessions.size() ? accessions[i] : std::string{};
                    if (slot.label.empty() && slot.accession.empty())
                    {
                        continue;
                    }
                    if (i < sources.size() && !sources[i].empty())
                    {
                        slot.source_ref = sources[i];
                    }
                    out.push_back(std::move(slot));
                }
            }
            return study;
        }
    }

    ParsedInvestigation parse_investigation(std::string_view raw_content, std::string_view source_name)
    {
        ParsedInvestigation result;

        std::string content(raw_content);
        if (const auto replaced = sanitize_utf8(content); replaced > 0)
        {
            result.warnings.push_back(
                {ParseWarning::Kind::InvalidUtf8,
                 0,
                 std::to_string(replaced) + " invalid UTF-8 byte(s) replaced in " + std::string(source_name)}
            );
        }

        std::vector<Block> studies;
        std::optional<Block> preamble = Block{};
        Block* current = &*preamble;
        bool saw_field = false;
        bool saw_study_field_before_header = false;

        std::size_t line_no = 0;
        std::istringstream stream(content);
        std::string line;
        while (std::getline(stream, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
            {
                line.pop_back();
            }
            if (trim(line).empty() || line.front() == '#')
            {
                continue;
            }

            auto cells = split_isatab_row(line);
            const std::string& name = cells.front();
            if (is_section_header(name, cells.size()))
            {
                if (name == "STUDY")
                {
                    studies.emplace_back();
                    current = &studies.back();
                }
                continue;
            }
            if (name.empty() || !is_recognized_field(name))
            {
                continue;
            }
            saw_field = true;
            if (studies.empty() && starts_with_icase(name, "Study "))
            {
                saw_study_field_before_header = true;
            }

            auto key = to_lower(name);
            cells.erase(cells.begin());
            // Drop trailing empty cells so row lengths reflect real values.
            while (!cells.empty() && cells.back().empty())
            {
                cells.pop_back();
            }
            auto [it, inserted] = current->fields.try_emplace(std::move(key), std::move(cells));
            if (!inserted)
            {
                result.warnings.push_back(
                    {ParseWarning::Kind::DuplicateFieldRow,
                     line_no,
                     "field '" + name + "' repeated in one block; keeping the first occurrence"}
                );
            }
        }

        if (!saw_field)
        {
            throw Error(
                ErrorKind::MalformedFile,
                "no investigation field rows found in " + std::string(source_name)
            );
        }

        // Files without STUDY headers carry their study fields in the preamble.
        if (studies.empty() || saw_study_field_before_header)
        {
            studies.insert(studies.begin(), std::move(*preamble));
        }

        for (std::size_t i = 0; i < studies.size(); ++i)
        {
            result.studies.push_back(build_study(studies[i], source_name, i));
        }
        return result;
    }

    ParsedInvestigation parse_investigation_file(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
        {
            throw Error(ErrorKind::IoError, "cannot open " + path);
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return parse_investigation(buffer.str(), path);
    }
}
