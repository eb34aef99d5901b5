#include "annorate/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "annorate/corpus.hpp"
#include "annorate/error.hpp"
#include "annorate/ingest.hpp"
#include "annorate/pipeline.hpp"
#include "annorate/report.hpp"
#include "annorate/text.hpp"

namespace annorate::cli
{
    namespace fs = std::filesystem;

    namespace
    {
        void ensure_output_dir(const fs::path& dir)
        {
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec)
            {
                throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
            }
        }

        OntologyCatalog load_catalog(const RunConfig& config)
        {
            if (config.ontology_catalog.empty())
            {
                return {};
            }
            return OntologyCatalog::load(config.ontology_catalog);
        }

        ResolverOptions resolver_options(const RunConfig& config)
        {
            ResolverOptions options;
            options.probe_network = config.probe_network;
            options.probe.base_override = config.probe_base;
            return options;
        }

        void warn_on_stale_manifest(const fs::path& corpus_dir)
        {
            const auto manifest_path = corpus_dir / manifest_file_name;
            if (!fs::exists(manifest_path))
            {
                return;
            }
            for (const auto& id : stale_entries(read_manifest(manifest_path)))
            {
                spdlog::warn("{}: file missing or changed since it was fetched", id);
            }
        }
    }

    int cmd_fetch(const RunConfig& config)
    {
        std::vector<std::string> ids;
        if (!config.ids_file.empty())
        {
            ids = list_studies_from_file(config.ids_file);
        }
        else if (!config.list_url.empty())
        {
            ids = list_studies(config.list_url);
        }
        else
        {
            std::cerr << "fetch: one of --ids or --list-url is required\n";
            return exit_code::usage;
        }
        if (ids.empty())
        {
            spdlog::error("no study identifiers to fetch");
            return exit_code::no_input;
        }

        FetchOptions options;
        if (!config.base_url.empty())
        {
            options.base_url = config.base_url;
        }
        options.concurrency = config.concurrency;
        options.use_cache = config.use_cache;

        const auto manifest = fetch_corpus(ids, config.output_dir, options);
        const auto fetched = manifest.success_count();
        spdlog::info("fetched {}/{} studies into {}", fetched, manifest.entries.size(), config.output_dir.string());
        return fetched == 0 ? exit_code::all_fetches_failed : exit_code::ok;
    }

    int cmd_score(const RunConfig& config)
    {
        const auto corpus = load_corpus(config.corpus_dir);
        if (corpus.studies.empty())
        {
            spdlog::error("no parseable investigation files under {}", config.corpus_dir.string());
            return exit_code::no_input;
        }
        warn_on_stale_manifest(config.corpus_dir);

        const auto catalog = load_catalog(config);
        const CatalogResolver resolver(catalog, resolver_options(config));
        const auto scores = score_corpus(corpus.studies, resolver.scorer(), config.concurrency);

        ensure_output_dir(config.output_dir);
        write_text_file(config.output_dir / "scores.tsv", format_scores_tsv(scores));
        write_text_file(config.output_dir / "scores.json", scores_to_json(scores).dump(2) + "\n");
        spdlog::info("scored {} studies", scores.size());
        return exit_code::ok;
    }

    int cmd_stats(const RunConfig& config)
    {
        const auto scores_path = config.scores_file.empty() ? config.output_dir / "scores.tsv" : config.scores_file;
        if (!fs::is_regular_file(scores_path))
        {
            spdlog::error("{} not found", scores_path.string());
            return exit_code::no_input;
        }
        auto entries = parse_scores_tsv(read_text_file(scores_path));
        if (entries.empty())
        {
            spdlog::error("{} holds no score rows", scores_path.string());
            return exit_code::no_input;
        }

        const auto json_path = scores_path.parent_path() / "scores.json";
        if (fs::exists(json_path))
        {
            merge_type_detail(entries, nlohmann::json::parse(read_text_file(json_path)));
        }
        else
        {
            spdlog::warn("{} not found; box plot and gap tables will be empty", json_path.string());
        }

        if (config.log_base_check)
        {
            std::size_t mismatches = 0;
            for (const auto& e : entries)
            {
                if (std::abs(log_transform(e.global_terms) - e.log_terms) > 1e-6
                    || std::abs(log_transform(e.global_annotations) - e.log_annotations) > 1e-6)
                {
                    ++mismatches;
                    spdlog::warn("{}: log columns do not match 100*log2(1+score/100)", e.study_id);
                }
            }
            spdlog::info("log check: {} of {} rows mismatch", mismatches, entries.size());
        }

        const auto terms = corpus_stats(entries, ScoreColumn::LogTerms);
        const auto annotations = corpus_stats(entries, ScoreColumn::LogAnnotations);
        const auto dist = distribution(entries, config.score_column);

        ensure_output_dir(config.output_dir);
        write_text_file(config.output_dir / "stats.tsv", format_stats_tsv(terms, annotations));
        write_text_file(config.output_dir / "hist.tsv", format_histogram_tsv(dist));
        write_text_file(config.output_dir / "boxplot.tsv", format_boxplot_tsv(dist));
        write_text_file(config.output_dir / "gaps.tsv", format_gaps_tsv(dist));
        return exit_code::ok;
    }

    int cmd_audit(const RunConfig& config)
    {
        const auto corpus = load_corpus(config.corpus_dir);
        if (corpus.studies.empty())
        {
            spdlog::error("no parseable investigation files under {}", config.corpus_dir.string());
            return exit_code::no_input;
        }

        const auto catalog = load_catalog(config);
        const CatalogResolver resolver(catalog, resolver_options(config));

        std::vector<const StudyMetadata*> ordered;
        for (const auto& s : corpus.studies)
        {
            ordered.push_back(&s);
        }
        std::stable_sort(
            ordered.begin(),
            ordered.end(),
            [](const auto* a, const auto* b) { return natural_less(a->study_id, b->study_id); }
        );

        std::vector<Irregularity> findings;
        for (const auto* study : ordered)
        {
            auto entry_findings = audit_entry(*study, resolver.resolver());
            findings.insert(findings.end(), entry_findings.begin(), entry_findings.end());
        }
        auto pairs = audit_corpus(corpus.studies, config.near_dup_threshold);
        findings.insert(findings.end(), pairs.begin(), pairs.end());

        ensure_output_dir(config.output_dir);
        write_text_file(config.output_dir / "audit.json", irregularities_to_json(findings).dump(2) + "\n");
        spdlog::info("{} finding(s)", findings.size());
        return config.fail_on_findings && !findings.empty() ? exit_code::findings : exit_code::ok;
    }

    int run(int argc, const char* const* argv)
    {
        CLI::App app{"Rate ontology annotation quality in ISA-Tab study metadata", "annorate"};
        app.require_subcommand(1);

        RunConfig config;
        if (const char* base = std::getenv("ANNORATE_BASE_URL"); base != nullptr && *base != '\0')
        {
            config.base_url = base;
        }
        bool verbose = false;
        app.add_flag("-v,--verbose", verbose, "Debug logging");

        auto add_concurrency = [&](CLI::App* cmd)
        { cmd->add_option("--concurrency", config.concurrency, "Worker threads")->check(CLI::Range(1, 256)); };
        auto add_probe = [&](CLI::App* cmd)
        {
            cmd->add_flag("--probe,!--no-probe", config.probe_network, "Probe PURLs over the network");
            cmd->add_option("--probe-base", config.probe_base, "Send probes to this scheme://host instead");
        };

        auto* fetch = app.add_subcommand("fetch", "Download investigation files and write manifest.tsv");
        fetch->add_option("--ids", config.ids_file, "File with one study identifier per line")->check(CLI::ExistingFile);
        fetch->add_option("--list-url", config.list_url, "Listing endpoint used when --ids is absent");
        fetch->add_option("--out", config.output_dir, "Corpus directory")->required();
        fetch->add_option("--base-url", config.base_url, "Download base URL (env ANNORATE_BASE_URL)");
        fetch->add_flag("--cache,!--no-cache", config.use_cache, "Skip studies whose cached file still matches");
        add_concurrency(fetch);

        auto* score = app.add_subcommand("score", "Write scores.tsv and scores.json");
        score->add_option("--corpus", config.corpus_dir, "Directory of i_*.txt files")->required()->check(CLI::ExistingDirectory);
        score->add_option("--catalog", config.ontology_catalog, "prefix<TAB>path ontology catalog")->required()->check(CLI::ExistingFile);
        score->add_option("--out", config.output_dir, "Output directory")->required();
        add_concurrency(score);
        add_probe(score);

        std::string column_name = "log_terms";
        auto* stats = app.add_subcommand("stats", "Corpus statistics and figure data from scores.tsv");
        stats->add_option("--scores", config.scores_file, "scores.tsv (default <out>/scores.tsv)");
        stats->add_option("--out", config.output_dir, "Output directory")->required();
        stats->add_option("--column", column_name, "Histogram column")
            ->check(CLI::IsMember({"log_terms", "log_annotations", "global_terms", "global_annotations"}));
        stats->add_flag("--log-base-check", config.log_base_check, "Verify log columns against the score columns");

        auto* audit = app.add_subcommand("audit", "Write audit.json with metadata irregularities");
        audit->add_option("--corpus", config.corpus_dir, "Directory of i_*.txt files")->required()->check(CLI::ExistingDirectory);
        audit->add_option("--catalog", config.ontology_catalog, "prefix<TAB>path ontology catalog")->check(CLI::ExistingFile);
        audit->add_option("--out", config.output_dir, "Output directory")->required();
        audit->add_option("--near-dup-threshold", config.near_dup_threshold, "Fraction of slots allowed to differ")
            ->check(CLI::Range(0.0, 0.5))
            ->check(CLI::Validator(
                [](std::string& value) { return std::stod(value) > 0.0 ? std::string{} : std::string("must be > 0"); },
                "(0, 0.5]"
            ));
        audit->add_flag("--fail-on-findings", config.fail_on_findings, "Exit 3 when findings exist");
        add_probe(audit);

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp& e)
        {
            return app.exit(e);
        }
        catch (const CLI::CallForAllHelp& e)
        {
            return app.exit(e);
        }
        catch (const CLI::ParseError& e)
        {
            app.exit(e);
            return exit_code::usage;
        }

        spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
        config.score_column = *score_column_from_string(column_name);

        try
        {
            if (*fetch)
            {
                return cmd_fetch(config);
            }
            if (*score)
            {
                return cmd_score(config);
            }
            if (*stats)
            {
                return cmd_stats(config);
            }
            return cmd_audit(config);
        }
        catch (const Error& e)
        {
            spdlog::error("{}", e.what());
            const bool no_input = e.kind() == ErrorKind::EmptyCorpus || e.kind() == ErrorKind::MalformedFile;
            return no_input ? exit_code::no_input : exit_code::failure;
        }
        catch (const std::exception& e)
        {
            spdlog::error("{}", e.what());
            return exit_code::failure;
        }
    }
}
