#include "annorate/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "annorate/error.hpp"
#include "annorate/text.hpp"

namespace annorate
{
    namespace fs = std::filesystem;

    std::vector<EntryScore> sorted_for_report(std::span<const EntryScore> entries)
    {
        std::vector<EntryScore> sorted(entries.begin(), entries.end());
        std::stable_sort(
            sorted.begin(),
            sorted.end(),
            [](const EntryScore& a, const EntryScore& b)
            {
                if (a.log_terms != b.log_terms)
                {
                    return a.log_terms > b.log_terms;
                }
                return natural_less(a.study_id, b.study_id);
            }
        );
        return sorted;
    }

    std::string format_scores_tsv(std::span<const EntryScore> entries)
    {
        std::string out = "study_id\ttotal_annotations\tscore_terms\tlog_score_terms\tscore_annotations\tlog_score_annotations\n";
        for (const auto& e : sorted_for_report(entries))
        {
            out += e.study_id + '\t' + std::to_string(e.total_annotations) + '\t' + format_fixed(e.global_terms) + '\t'
                   + format_fixed(e.log_terms) + '\t' + format_fixed(e.global_annotations) + '\t'
                   + format_fixed(e.log_annotations) + '\n';
        }
        return out;
    }

    nlohmann::json scores_to_json(std::span<const EntryScore> entries)
    {
        auto array = nlohmann::json::array();
        for (const auto& e : sorted_for_report(entries))
        {
            nlohmann::json per_type = nlohmann::json::object();
            for (const auto& [type, t] : e.per_type)
            {
                per_type[std::string(to_string(type))] = {
                    {"annotation_count", t.annotation_count},
                    {"term_count", t.term_count},
                    {"score_sum", t.score_sum},
                    {"by_annotations", t.by_annotations},
                    {"by_terms", t.by_terms},
                };
            }
            auto annotations = nlohmann::json::array();
            for (const auto& a : e.annotations)
            {
                nlohmann::json item = {
                    {"type", to_string(a.type)},
                    {"label", a.label},
                    {"accession", a.ref.raw},
                    {"kind", to_string(a.ref.kind)},
                    {"resolution", to_string(a.result.resolution)},
                    {"score", a.result.score},
                    {"note", a.result.note},
                };
                if (a.ref.ontology_prefix)
                {
                    item["prefix"] = *a.ref.ontology_prefix;
                    item["local_id"] = *a.ref.local_id;
                }
                if (a.result.metrics)
                {
                    item["depth"] = a.result.metrics->depth;
                    item["branch_length"] = a.result.metrics->branch_length;
                }
                annotations.push_back(std::move(item));
            }
            array.push_back({
                {"study_id", e.study_id},
                {"total_annotations", e.total_annotations},
                {"global_terms", e.global_terms},
                {"log_terms", e.log_terms},
                {"global_annotations", e.global_annotations},
                {"log_annotations", e.log_annotations},
                {"per_type", std::move(per_type)},
                {"annotations", std::move(annotations)},
            });
        }
        return array;
    }

    namespace
    {
        std::vector<std::string> split_tabs(const std::string& line)
        {
            std::vector<std::string> cells;
            std::size_t pos = 0;
            while (true)
            {
                const auto tab = line.find('\t', pos);
                cells.emplace_back(trim(std::string_view(line).substr(pos, tab == std::string::npos ? std::string::npos : tab - pos)));
                if (tab == std::string::npos)
                {
                    return cells;
                }
                pos = tab + 1;
            }
        }

        double parse_number(std::string text, std::size_t line_no)
        {
            if (text.find(',') != std::string::npos && text.find('.') == std::string::npos)
            {
                std::replace(text.begin(), text.end(), ',', '.');
            }
            std::size_t used = 0;
            double value = 0.0;
            try
            {
                value = std::stod(text, &used);
            }
            catch (const std::exception&)
            {
                used = 0;
            }
            if (used == 0 || used != text.size())
            {
                throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": not a number: '" + text + "'");
            }
            return value;
        }
    }

    std::vector<EntryScore> parse_scores_tsv(const std::string& content)
    {
        std::vector<EntryScore> entries;
        std::istringstream lines(content);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(lines, line))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
            {
                line.pop_back();
            }
            if (trim(line).empty())
            {
                continue;
            }
            auto cells = split_tabs(line);
            if (cells.size() != 6)
            {
                throw Error(
                    ErrorKind::ParseError,
                    "line " + std::to_string(line_no) + ": expected 6 columns, found " + std::to_string(cells.size())
                );
            }
            if (line_no == 1 && iequals(cells[0], "study_id"))
            {
                continue;
            }
            EntryScore e;
            e.study_id = cells[0];
            e.total_annotations = static_cast<std::size_t>(parse_number(cells[1], line_no));
            e.global_terms = parse_number(cells[2], line_no);
            e.log_terms = parse_number(cells[3], line_no);
            e.global_annotations = parse_number(cells[4], line_no);
            e.log_annotations = parse_number(cells[5], line_no);
            entries.push_back(std::move(e));
        }
        return entries;
    }

    void merge_type_detail(std::vector<EntryScore>& entries, const nlohmann::json& scores_json)
    {
        std::map<std::string, const nlohmann::json*> by_id;
        for (const auto& item : scores_json)
        {
            by_id[item.at("study_id").get<std::string>()] = &item;
        }
        for (auto& e : entries)
        {
            auto it = by_id.find(e.study_id);
            if (it == by_id.end())
            {
                continue;
            }
            for (const auto& [name, t] : it->second->at("per_type").items())
            {
                if (auto type = annotation_type_from_string(name))
                {
                    e.per_type[*type] = make_type_score(
                        t.at("annotation_count").get<std::size_t>(),
                        t.at("term_count").get<std::size_t>(),
                        t.at("score_sum").get<double>()
                    );
                }
            }
        }
    }

    std::string format_stats_tsv(const CorpusStats& log_terms, const CorpusStats& log_annotations)
    {
        auto optional_cell = [](const std::optional<double>& v) { return v ? format_fixed(*v) : std::string("NA"); };
        std::string out = "statistic\tlog_terms\tlog_annotations\n";
        out += "Mean\t" + format_fixed(log_terms.mean) + '\t' + format_fixed(log_annotations.mean) + '\n';
        out += "Standard Deviation\t" + format_fixed(log_terms.std_dev) + '\t' + format_fixed(log_annotations.std_dev) + '\n';
        out += "Maximum\t" + format_fixed(log_terms.max) + '\t' + format_fixed(log_annotations.max) + '\n';
        out += "Minimum(annotated)\t" + optional_cell(log_terms.min_annotated) + '\t'
               + optional_cell(log_annotations.min_annotated) + '\n';
        out += "% above Mean\t" + format_fixed(log_terms.pct_above_mean) + '\t'
               + format_fixed(log_annotations.pct_above_mean) + '\n';
        return out;
    }

    std::string format_histogram_tsv(const Distribution& dist)
    {
        std::string out = "bin\tcount\n";
        for (const auto& [lower, count] : dist.histogram)
        {
            out += std::to_string(static_cast<int>(lower)) + '\t' + std::to_string(count) + '\n';
        }
        return out;
    }

    std::string format_boxplot_tsv(const Distribution& dist)
    {
        std::string out = "type\tmin\tq1\tmedian\tq3\tmax\n";
        for (const auto& [type, box] : dist.per_type_boxplot)
        {
            out += std::string(to_string(type)) + '\t' + format_fixed(box.min) + '\t' + format_fixed(box.q1) + '\t'
                   + format_fixed(box.median) + '\t' + format_fixed(box.q3) + '\t' + format_fixed(box.max) + '\n';
        }
        return out;
    }

    std::string format_gaps_tsv(const Distribution& dist)
    {
        std::string out = "type\tavg_gap_pct\n";
        for (const auto& [type, gap] : dist.avg_weighting_gap)
        {
            out += std::string(to_string(type)) + '\t' + format_fixed(gap) + '\n';
        }
        return out;
    }

    nlohmann::json irregularities_to_json(std::span<const Irregularity> findings)
    {
        auto array = nlohmann::json::array();
        for (const auto& f : findings)
        {
            array.push_back({{"study_id", f.study_id}, {"kind", to_string(f.kind)}, {"evidence", f.evidence}});
        }
        return array;
    }

    void write_text_file(const fs::path& path, const std::string& content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out)
        {
            throw Error(ErrorKind::IoError, "cannot write " + path.string());
        }
    }

    std::string read_text_file(const fs::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
        {
            throw Error(ErrorKind::IoError, "cannot open " + path.string());
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }
}
