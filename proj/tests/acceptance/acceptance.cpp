// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "annorate/audit.hpp"
#include "annorate/corpus.hpp"
#include "annorate/error.hpp"
#include "annorate/ingest.hpp"
#include "annorate/pipeline.hpp"
#include "annorate/scoring.hpp"
#include "../support.hpp"

using namespace annorate;

namespace
{
    struct Outcome
    {
        bool pass = true;
        std::string detail;

        void require(bool ok, const std::string& what)
        {
            if (!ok)
            {
                pass = false;
                if (!detail.empty())
                {
                    detail += "; ";
                }
                detail += what;
            }
        }
    };

    struct PublishedRow
    {
        std::string id;
        std::size_t annotations;
        double score_terms;
        double log_terms;
        double score_annotations;
        double log_annotations;
    };

    double parse_number(std::string cell)
    {
        for (auto& c : cell)
        {
            if (c == ',')
            {
                c = '.';
            }
        }
        return std::stod(cell);
    }

    std::vector<PublishedRow> published_scores()
    {
        std::vector<PublishedRow> rows;
        std::istringstream in(testing::read_file(testing::data_dir() / "published_scores.tsv"));
        std::string line;
        while (std::getline(in, line))
        {
            std::istringstream cells(line);
            std::vector<std::string> c;
            std::string cell;
            while (std::getline(cells, cell, '\t'))
            {
                c.push_back(cell);
            }
            if (c.size() != 6)
            {
                continue;
            }
            rows.push_back({c[0], static_cast<std::size_t>(std::stoul(c[1])), parse_number(c[2]), parse_number(c[3]),
                            parse_number(c[4]), parse_number(c[5])});
        }
        return rows;
    }

    std::vector<EntryScore> as_entries(const std::vector<PublishedRow>& rows)
    {
        std::vector<EntryScore> entries;
        for (const auto& r : rows)
        {
            EntryScore e;
            e.study_id = r.id;
            e.total_annotations = r.annotations;
            e.global_terms = r.score_terms;
            e.log_terms = r.log_terms;
            e.global_annotations = r.score_annotations;
            e.log_annotations = r.log_annotations;
            entries.push_back(e);
        }
        return entries;
    }

    std::vector<EntryScore> reconciled_corpus()
    {
        auto rows = published_scores();
        rows.push_back({"MISSING", 0, 0.0, 0.0, 0.0, 0.0});
        return as_entries(rows);
    }

    bool near(double a, double b, double tol)
    {
        return std::abs(a - b) <= tol;
    }

    std::string fmt(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return buf;
    }

    const OntologyCatalog& fixture_catalog()
    {
        static const auto catalog = OntologyCatalog::load(testing::fixture_dir() / "ontologies/catalog.tsv");
        return catalog;
    }

    StudyMetadata fixture_study(const std::string& relative)
    {
        return parse_investigation_file(testing::fixture_dir() / relative).studies.at(0);
    }

    Outcome log_transform_regression()
    {
        Outcome out;
        std::size_t pairs = 0;
        double worst = 0.0;
        for (const auto& r : published_scores())
        {
            for (const auto& [score, log] : {std::pair{r.score_terms, r.log_terms}, std::pair{r.score_annotations, r.log_annotations}})
            {
                if (score == 0.0)
                {
                    continue;
                }
                ++pairs;
                const double err = std::abs(log_transform(score) - log);
                worst = std::max(worst, err);
                out.require(err <= 1e-6, "mismatch in " + r.id);
            }
        }
        out.require(pairs == 128, "expected 128 nonzero pairs, found " + std::to_string(pairs));
        out.detail = std::to_string(pairs) + " pairs, max error " + fmt(worst) + (out.detail.empty() ? "" : "; " + out.detail);
        return out;
    }

    Outcome mtbls95_end_to_end()
    {
        Outcome out;
        const CatalogResolver resolver(fixture_catalog());
        const auto e = score_entry(fixture_study("corpus/MTBLS95/i_Investigation.txt"), resolver.scorer());
        const auto& design = e.type(AnnotationType::Design);
        const auto& assay = e.type(AnnotationType::Assay);
        out.require(near(design.score_sum, 5.53, 1e-9), "design sum " + fmt(design.score_sum));
        out.require(near(assay.score_sum, 1.75, 1e-9), "assay sum " + fmt(assay.score_sum));
        out.require(near(design.by_annotations, 0.9216667, 1e-6), "design by_annotations " + fmt(design.by_annotations));
        out.require(near(design.by_terms, 0.79, 1e-6), "design by_terms " + fmt(design.by_terms));
        out.require(near(assay.by_annotations, 0.875, 1e-6), "assay by_annotations");
        out.require(near(assay.by_terms, 0.875, 1e-6), "assay by_terms");
        out.require(near(e.global_terms, 41.625, 1e-6), "global_terms " + fmt(e.global_terms));
        out.require(near(e.log_terms, 50.2075956, 1e-6), "log_terms " + fmt(e.log_terms));
        out.require(near(e.global_annotations, 44.9166667, 1e-6), "global_annotations " + fmt(e.global_annotations));
        out.require(near(e.log_annotations, 53.5223527, 1e-6), "log_annotations " + fmt(e.log_annotations));
        out.require(e.total_annotations == 8, "total annotations");
        if (out.pass)
        {
            out.detail = "all published MTBLS95 cells within 1e-6";
        }
        return out;
    }

    Outcome corpus_statistics()
    {
        Outcome out;
        const auto printed = as_entries(published_scores());
        out.require(printed.size() == 94, "expected 94 printed rows");

        const auto t94 = corpus_stats(printed, ScoreColumn::LogTerms);
        const auto a94 = corpus_stats(printed, ScoreColumn::LogAnnotations);
        out.require(near(t94.mean, 29.31230073, 0.35), "94-row terms mean " + fmt(t94.mean));
        out.require(near(t94.std_dev, 22.62573092, 0.35), "94-row terms sd " + fmt(t94.std_dev));
        out.require(near(a94.mean, 35.18072123, 0.35), "94-row annotations mean " + fmt(a94.mean));
        out.require(near(a94.std_dev, 27.43255409, 0.35), "94-row annotations sd " + fmt(a94.std_dev));
        out.require(t94.max == 80.73549221 && a94.max == 80.73549221, "max");
        // The printed minimum is rounded to two decimals; the underlying row is 28.54022189.
        out.require(t94.min_annotated && *t94.min_annotated == 28.54022189, "terms min_annotated");
        out.require(a94.min_annotated && *a94.min_annotated == 28.54022189, "annotations min_annotated");
        out.require(t94.min_annotated && near(*t94.min_annotated, 28.54, 0.005), "min rounds to 28.54");

        const auto full = reconciled_corpus();
        const auto t95 = corpus_stats(full, ScoreColumn::LogTerms);
        const auto a95 = corpus_stats(full, ScoreColumn::LogAnnotations);
        out.require(t95.n == 95, "reconciled n");
        out.require(near(t95.mean, 29.31230073, 0.01), "95-row terms mean " + fmt(t95.mean));
        out.require(near(t95.std_dev, 22.62573092, 0.01), "95-row terms sd " + fmt(t95.std_dev));
        out.require(near(a95.mean, 35.18072123, 0.01), "95-row annotations mean " + fmt(a95.mean));
        out.require(near(a95.std_dev, 27.43255409, 0.01), "95-row annotations sd " + fmt(a95.std_dev));
        out.require(near(t95.pct_above_mean, 58.9473684, 1e-4), "terms pct " + fmt(t95.pct_above_mean));
        out.require(near(a95.pct_above_mean, 53.6842105, 1e-4), "annotations pct " + fmt(a95.pct_above_mean));
        out.require(t95.max == 80.73549221 && t95.min_annotated && *t95.min_annotated == 28.54022189, "95-row max/min");
        if (out.pass)
        {
            out.detail = "95 rows: mean " + fmt(t95.mean) + "/" + fmt(a95.mean) + ", sample sd " + fmt(t95.std_dev) + "/" + fmt(a95.std_dev)
                         + ", pct " + fmt(t95.pct_above_mean) + "/" + fmt(a95.pct_above_mean);
        }
        return out;
    }

    Outcome histogram_check()
    {
        Outcome out;
        const auto full = reconciled_corpus();
        const auto dist = distribution(full, ScoreColumn::LogTerms);
        out.require(dist.histogram.size() == 10, "ten bins");
        const std::size_t first = dist.histogram.empty() ? 0 : dist.histogram.front().second;
        out.require(first == 31, "[0,10) holds " + std::to_string(first));
        for (const auto& e : full)
        {
            if (histogram_bin(e.log_terms) != 0)
            {
                out.require(e.log_terms >= 28.54022189, e.study_id + " scores " + fmt(e.log_terms));
            }
            else
            {
                out.require(e.log_terms == 0.0 && e.total_annotations == 0, e.study_id + " in first bin with a nonzero score");
            }
        }
        std::size_t total = 0;
        for (const auto& [lo, count] : dist.histogram)
        {
            total += count;
        }
        out.require(total == 95, "bins sum to " + std::to_string(total));
        if (out.pass)
        {
            out.detail = "31 entries in [0,10); every other entry >= 28.54";
        }
        return out;
    }

    Outcome ontology_oracle()
    {
        Outcome out;
        std::mt19937 rng(20150601);
        std::size_t terms_checked = 0;
        for (int i = 0; i < 200; ++i)
        {
            const auto dag = testing::random_dag(rng, 15);
            const auto graph = OntologyGraph::from_edges("T", dag.terms, dag.edges);
            const testing::PathOracle oracle(dag);
            for (const auto& t : dag.terms)
            {
                ++terms_checked;
                const auto m = graph.specificity(t);
                if (m.depth != oracle.depth(t) || m.branch_length != oracle.branch_length(t) || m.score != oracle.score(t))
                {
                    out.require(false, "DAG " + std::to_string(i) + " term " + t);
                }
            }
            for (const auto& path : oracle.paths())
            {
                for (std::size_t k = 1; k < path.size(); ++k)
                {
                    if (!(graph.specificity(path[k - 1]).score <= graph.specificity(path[k]).score))
                    {
                        out.require(false, "monotonicity in DAG " + std::to_string(i));
                    }
                }
            }
        }
        if (out.pass)
        {
            out.detail = "200 DAGs, " + std::to_string(terms_checked) + " terms match the path oracle; scores monotone on every path";
        }
        return out;
    }

    /// Random entry whose typed slots are PURL-annotated or free text. Every
    /// non-empty type carries at least one annotation with a positive score.
    struct SyntheticEntry
    {
        StudyMetadata metadata;
        std::map<std::string, double> scores;
    };

    SyntheticEntry synthetic_entry(std::mt19937& rng, int index)
    {
        std::uniform_int_distribution<int> annotated(0, 6);
        std::uniform_int_distribution<int> free_text(0, 4);
        std::uniform_real_distribution<double> spec(0.05, 1.0);
        std::bernoulli_distribution empty_type(0.15);

        SyntheticEntry s;
        s.metadata.study_id = "E" + std::to_string(index);
        int serial = 0;
        for (auto type : scored_annotation_types)
        {
            if (empty_type(rng))
            {
                continue;
            }
            const int a = 1 + annotated(rng);
            const int u = free_text(rng) == 0 ? 0 : free_text(rng);
            auto& slots = s.metadata.slots(type);
            for (int k = 0; k < a; ++k)
            {
                const std::string id = std::to_string(1000000 + ++serial);
                const std::string url = "http://purl.obolibrary.org/obo/SYN_" + id;
                s.scores["SYN:" + id] = spec(rng);
                slots.push_back({"term " + id, url, std::nullopt});
            }
            for (int k = 0; k < u; ++k)
            {
                slots.push_back({"free " + std::to_string(++serial), "", std::nullopt});
            }
            std::shuffle(slots.begin(), slots.end(), rng);
        }
        return s;
    }

    Outcome weighting_inequality()
    {
        Outcome out;
        std::mt19937 rng(7);
        std::size_t equal_entries = 0;
        for (int i = 0; i < 1000; ++i)
        {
            const auto s = synthetic_entry(rng, i);
            const AccessionScorer scorer = [&](const AccessionRef& ref) {
                return AnnotationScore{s.scores.at(ref.term_id().value()), Resolution::Resolved, std::nullopt, ""};
            };
            const auto e = score_entry(s.metadata, scorer);
            bool any_unannotated = false;
            for (auto type : scored_annotation_types)
            {
                const auto& ts = e.type(type);
                const bool has_free = ts.term_count > ts.annotation_count;
                any_unannotated = any_unannotated || has_free;
                out.require(ts.by_terms <= ts.by_annotations, s.metadata.study_id + " type inequality");
                out.require((ts.by_terms == ts.by_annotations) == !has_free, s.metadata.study_id + " type equality");
            }
            out.require(e.global_terms <= e.global_annotations, s.metadata.study_id + " global inequality");
            out.require((e.global_terms == e.global_annotations) == !any_unannotated, s.metadata.study_id + " global equality");
            equal_entries += any_unannotated ? 0 : 1;
            if (!out.pass)
            {
                break;
            }
        }
        if (out.pass)
        {
            out.detail = "1000 entries, " + std::to_string(equal_entries) + " without free-text terms";
        }
        return out;
    }

    Outcome audit_fixtures()
    {
        Outcome out;
        const CatalogResolver resolver(fixture_catalog());
        const auto audit = [&](const std::string& id) { return audit_entry(fixture_study("audit/" + id + "/i_Investigation.txt"), resolver.resolver()); };

        const auto m81 = audit("MTBLS81");
        out.require(m81.size() == 2, "MTBLS81 finding count " + std::to_string(m81.size()));
        out.require(m81.size() == 2 && m81[0].kind == IrregularityKind::RepeatedAnnotation && m81[0].evidence.find("lipid droplets") != std::string::npos,
                    "MTBLS81 repeated annotation");
        out.require(m81.size() == 2 && m81[1].kind == IrregularityKind::CrossTypeUnannotatedDuplicate && m81[1].evidence.find("lipid droplets") != std::string::npos,
                    "MTBLS81 cross-type duplicate");

        const auto m147 = audit("MTBLS147");
        out.require(m147.size() == 1 && m147[0].kind == IrregularityKind::CrossTypeUnannotatedDuplicate
                        && m147[0].evidence.find("NMR spectroscopy") != std::string::npos,
                    "MTBLS147 findings");

        const auto m200 = audit("MTBLS200");
        out.require(m200.size() == 2 && m200[0].kind == IrregularityKind::RepeatedAnnotation && m200[1].kind == IrregularityKind::RepeatedAnnotation,
                    "duplicated-link findings");

        std::vector<StudyMetadata> quintet;
        for (int id = 107; id <= 111; ++id)
        {
            const auto s = fixture_study("audit/MTBLS" + std::to_string(id) + "/i_Investigation.txt");
            out.require(audit_entry(s, resolver.resolver()).empty(), s.study_id + " has entry-level findings");
            quintet.push_back(s);
        }
        const auto pairs = audit_corpus(quintet);
        out.require(pairs.size() == 10, "MTBLS107-111 pairs " + std::to_string(pairs.size()));
        for (const auto& p : pairs)
        {
            out.require(p.kind == IrregularityKind::NearDuplicateEntry, "pair kind");
        }

        const auto clean = load_corpus(testing::fixture_dir() / "corpus");
        std::size_t clean_findings = audit_corpus(clean.studies).size();
        for (const auto& s : clean.studies)
        {
            clean_findings += audit_entry(s, resolver.resolver()).size();
        }
        out.require(clean_findings == 0, "clean corpus findings " + std::to_string(clean_findings));
        if (out.pass)
        {
            out.detail = "MTBLS81 2, MTBLS147 1, duplicated links 2, quintet 10 pairs, clean corpus 0";
        }
        return out;
    }

    Outcome broken_purl_signature()
    {
        Outcome out;
        testing::MockServer server([](httplib::Server& s) {
            s.Get(R"(/ontology/XYZ/.*)", [](const httplib::Request&, httplib::Response& res) {
                res.set_content("<html><body>Ontology not specified or not supported</body></html>", "text/html");
            });
            s.Get(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.set_content("<html>term page</html>", "text/html"); });
        });

        const auto broken = classify_accession("http://purl.bioontology.org/ontology/XYZ/0001");
        ProbeOptions probe;
        probe.base_override = server.url();
        out.require(probe_accession(broken, probe).resolution == Resolution::Broken, "probe did not report Broken");

        const CatalogResolver offline(fixture_catalog());
        const auto offline_score = offline.score(broken);
        out.require(offline_score.resolution == Resolution::NotInCatalog && offline_score.score == 0.0, "offline resolution/score");
        StudyMetadata s;
        s.study_id = "PROBE";
        s.slots(AnnotationType::Design).push_back({"unsupported", broken.raw, std::nullopt});
        const auto findings = audit_entry(s, offline.resolver());
        out.require(findings.size() == 1 && findings[0].kind == IrregularityKind::OntologyUnavailable, "offline audit did not report OntologyUnavailable");

        const CatalogResolver online(fixture_catalog(), ResolverOptions{true, probe});
        out.require(online.resolve(broken) == Resolution::Broken, "probing resolver did not report Broken");

        const auto study = fixture_study("corpus/MTBLS95/i_Investigation.txt");
        const auto a = score_entry(study, offline.scorer());
        const auto b = score_entry(study, online.scorer());
        out.require(a.global_terms == b.global_terms && a.global_annotations == b.global_annotations && a.log_terms == b.log_terms
                        && a.log_annotations == b.log_annotations,
                    "MTBLS95 totals change with probing");
        out.require(near(b.log_terms, 50.2075956, 1e-6), "probed MTBLS95 log_terms " + fmt(b.log_terms));
        if (out.pass)
        {
            out.detail = "error body -> Broken; offline -> OntologyUnavailable, score 0; MTBLS95 unchanged with probing";
        }
        return out;
    }

    EntryScore synthetic_score(std::mt19937& rng, int index, bool allow_free_text)
    {
        std::uniform_int_distribution<int> annotated(0, 5);
        std::uniform_int_distribution<int> free_text(0, 3);
        std::uniform_real_distribution<double> spec(0.05, 1.0);
        EntryScore e;
        e.study_id = "G" + std::to_string(index);
        for (auto type : scored_annotation_types)
        {
            const int a = annotated(rng);
            const int u = (allow_free_text && a > 0) ? free_text(rng) : 0;
            double sum = 0.0;
            for (int k = 0; k < a; ++k)
            {
                sum += spec(rng);
            }
            e.per_type[type] = make_type_score(static_cast<std::size_t>(a), static_cast<std::size_t>(a + u), sum);
        }
        finalize_entry(e);
        return e;
    }

    Outcome gap_property()
    {
        Outcome out;
        std::mt19937 rng(95);
        std::uniform_int_distribution<int> corpus_size(1, 12);
        std::bernoulli_distribution free_text_corpus(0.5);
        for (int round = 0; round < 300; ++round)
        {
            const bool allow = free_text_corpus(rng);
            std::vector<EntryScore> corpus;
            const int n = corpus_size(rng);
            for (int i = 0; i < n; ++i)
            {
                corpus.push_back(synthetic_score(rng, i, allow));
            }
            const auto gaps = distribution(corpus, ScoreColumn::LogTerms).avg_weighting_gap;
            for (auto type : scored_annotation_types)
            {
                bool any_free = false;
                for (const auto& e : corpus)
                {
                    any_free = any_free || e.type(type).has_unannotated();
                }
                const double gap = gaps.count(type) ? gaps.at(type) : 0.0;
                out.require((gap == 0.0) == !any_free, "gap zero-iff in round " + std::to_string(round));

                // Adding a free-text term to an entry with a positive sum widens the gap.
                for (std::size_t i = 0; i < corpus.size(); ++i)
                {
                    const auto& ts = corpus[i].type(type);
                    if (ts.score_sum <= 0.0)
                    {
                        continue;
                    }
                    auto grown = corpus;
                    grown[i].per_type[type] = make_type_score(ts.annotation_count, ts.term_count + 1, ts.score_sum);
                    finalize_entry(grown[i]);
                    const auto widened = distribution(grown, ScoreColumn::LogTerms).avg_weighting_gap.at(type);
                    out.require(widened > gap, "gap did not increase in round " + std::to_string(round));
                    break;
                }
            }
            if (!out.pass)
            {
                break;
            }
        }
        if (out.pass)
        {
            out.detail = "300 synthetic corpora: zero gap exactly without free text; adding free text widens the gap";
        }
        return out;
    }

    struct Criterion
    {
        int number;
        const char* name;
        std::function<Outcome()> run;
        double time_limit_s;  // 0: unbounded
    };
}

int main()
{
    const std::vector<Criterion> criteria{
        {1, "log-transform regression", log_transform_regression, 1.0},
        {2, "MTBLS95 end-to-end", mtbls95_end_to_end, 0.0},
        {3, "corpus statistics regression", corpus_statistics, 1.0},
        {4, "histogram check", histogram_check, 0.0},
        {5, "ontology oracle equivalence", ontology_oracle, 10.0},
        {6, "weighting inequality property", weighting_inequality, 0.0},
        {7, "audit fixtures", audit_fixtures, 0.0},
        {8, "broken-PURL signature", broken_purl_signature, 0.0},
        {9, "weighting gap property", gap_property, 0.0},
    };

    int failures = 0;
    for (const auto& c : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try
        {
            outcome = c.run();
        }
        catch (const std::exception& e)
        {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && elapsed >= c.time_limit_s)
        {
            outcome.require(false, "took " + fmt(elapsed) + " s");
        }
        std::printf("%s criterion %d: %s (%s) [%.3f s]\n", outcome.pass ? "PASS" : "FAIL", c.number, c.name, outcome.detail.c_str(), elapsed);
        failures += outcome.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
