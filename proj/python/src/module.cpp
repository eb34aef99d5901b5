#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "annorate/audit.hpp"
#include "annorate/corpus.hpp"
#include "annorate/error.hpp"
#include "annorate/pipeline.hpp"
#include "annorate/report.hpp"

namespace py = pybind11;
using namespace annorate;

namespace
{
    /// Adapts a Python callable `f(AccessionRef) -> float` to a scorer.
    AccessionScorer python_scorer(py::function fn)
    {
        return [fn = std::move(fn)](const AccessionRef& ref) {
            py::gil_scoped_acquire gil;
            return AnnotationScore{fn(ref).cast<double>(), Resolution::Resolved, std::nullopt, ""};
        };
    }

    AccessionResolver python_resolver(py::function fn)
    {
        return [fn = std::move(fn)](const AccessionRef& ref) {
            py::gil_scoped_acquire gil;
            return fn(ref).cast<Resolution>();
        };
    }
}

PYBIND11_MODULE(_annorate, m)
{
    m.doc() = "Ontology annotation quality scoring for ISA-Tab metadata";

    static py::exception<Error> annorate_error(m, "AnnorateError");
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
            {
                std::rethrow_exception(p);
            }
        }
        catch (const Error& e)
        {
            py::set_error(annorate_error, e.what());
        }
    });

    py::enum_<AnnotationType>(m, "AnnotationType")
        .value("Design", AnnotationType::Design)
        .value("Factor", AnnotationType::Factor)
        .value("Assay", AnnotationType::Assay)
        .value("Protocol", AnnotationType::Protocol)
        .value("Person", AnnotationType::Person);

    py::enum_<AccessionKind>(m, "AccessionKind")
        .value("OboPurl", AccessionKind::OboPurl)
        .value("BioportalPurl", AccessionKind::BioportalPurl)
        .value("NonPurl", AccessionKind::NonPurl)
        .value("Malformed", AccessionKind::Malformed);

    py::enum_<Resolution>(m, "Resolution")
        .value("Resolved", Resolution::Resolved)
        .value("Broken", Resolution::Broken)
        .value("NotInCatalog", Resolution::NotInCatalog);

    py::enum_<ScoreColumn>(m, "ScoreColumn")
        .value("GlobalTerms", ScoreColumn::GlobalTerms)
        .value("GlobalAnnotations", ScoreColumn::GlobalAnnotations)
        .value("LogTerms", ScoreColumn::LogTerms)
        .value("LogAnnotations", ScoreColumn::LogAnnotations);

    py::enum_<IrregularityKind>(m, "IrregularityKind")
        .value("BrokenAccession", IrregularityKind::BrokenAccession)
        .value("NonPurlAccession", IrregularityKind::NonPurlAccession)
        .value("RepeatedAnnotation", IrregularityKind::RepeatedAnnotation)
        .value("CrossTypeUnannotatedDuplicate", IrregularityKind::CrossTypeUnannotatedDuplicate)
        .value("NearDuplicateEntry", IrregularityKind::NearDuplicateEntry)
        .value("OntologyUnavailable", IrregularityKind::OntologyUnavailable)
        .value("EmptyLabelAnnotation", IrregularityKind::EmptyLabelAnnotation);

    py::class_<TermSlot>(m, "TermSlot")
        .def(py::init([](std::string label, std::string accession) { return TermSlot{std::move(label), std::move(accession), std::nullopt}; }),
             py::arg("label"), py::arg("accession") = "")
        .def_readwrite("label", &TermSlot::label)
        .def_readwrite("accession", &TermSlot::accession)
        .def_readwrite("source_ref", &TermSlot::source_ref)
        .def("is_annotation", &TermSlot::is_annotation)
        .def("__repr__", [](const TermSlot& s) { return "TermSlot('" + s.label + "', '" + s.accession + "')"; });

    py::class_<StudyMetadata>(m, "StudyMetadata")
        .def(py::init<>())
        .def_readwrite("study_id", &StudyMetadata::study_id)
        .def_readwrite("source_path", &StudyMetadata::source_path)
        .def("slots", [](const StudyMetadata& s, AnnotationType t) { return s.slots(t); }, py::arg("type"))
        .def("set_slots", [](StudyMetadata& s, AnnotationType t, std::vector<TermSlot> slots) { s.slots(t) = std::move(slots); },
             py::arg("type"), py::arg("slots"))
        .def("term_count", &StudyMetadata::term_count)
        .def("annotation_count", &StudyMetadata::annotation_count);

    m.def(
        "parse_investigation",
        [](std::string_view content, std::string_view source_name) { return parse_investigation(content, source_name).studies; },
        py::arg("content"), py::arg("source_name") = "", "Studies of an ISA-Tab investigation file's text.");
    m.def(
        "parse_investigation_file", [](const std::string& path) { return parse_investigation_file(path).studies; }, py::arg("path"));

    py::class_<AccessionRef>(m, "AccessionRef")
        .def_readonly("raw", &AccessionRef::raw)
        .def_readonly("kind", &AccessionRef::kind)
        .def_readonly("ontology_prefix", &AccessionRef::ontology_prefix)
        .def_readonly("local_id", &AccessionRef::local_id)
        .def("is_purl", &AccessionRef::is_purl)
        .def("term_id", &AccessionRef::term_id);
    m.def("classify_accession", &classify_accession, py::arg("raw"));

    py::class_<DepthMetrics>(m, "DepthMetrics")
        .def_readonly("depth", &DepthMetrics::depth)
        .def_readonly("branch_length", &DepthMetrics::branch_length)
        .def_readonly("score", &DepthMetrics::score);

    py::class_<OntologyGraph>(m, "OntologyGraph")
        .def_static("from_edges", &OntologyGraph::from_edges, py::arg("prefix"), py::arg("terms"), py::arg("edges"))
        .def_property_readonly("prefix", &OntologyGraph::prefix)
        .def("__len__", &OntologyGraph::size)
        .def("__contains__", &OntologyGraph::contains)
        .def("terms", &OntologyGraph::terms)
        .def("roots", &OntologyGraph::roots)
        .def("parents", &OntologyGraph::parents)
        .def("children", &OntologyGraph::children)
        .def("depth", &OntologyGraph::depth)
        .def("branch_length", &OntologyGraph::branch_length)
        .def("specificity", &OntologyGraph::specificity);
    m.def("load_obo", &load_obo, py::arg("content"), py::arg("prefix"));
    m.def("load_obo_file", &load_obo_file, py::arg("path"), py::arg("prefix"));

    m.def("log_transform", &log_transform, py::arg("score"));

    py::class_<TypeScore>(m, "TypeScore")
        .def_readonly("annotation_count", &TypeScore::annotation_count)
        .def_readonly("term_count", &TypeScore::term_count)
        .def_readonly("score_sum", &TypeScore::score_sum)
        .def_readonly("by_annotations", &TypeScore::by_annotations)
        .def_readonly("by_terms", &TypeScore::by_terms);

    py::class_<EntryScore>(m, "EntryScore")
        .def_readonly("study_id", &EntryScore::study_id)
        .def_readonly("per_type", &EntryScore::per_type)
        .def_readonly("global_terms", &EntryScore::global_terms)
        .def_readonly("global_annotations", &EntryScore::global_annotations)
        .def_readonly("log_terms", &EntryScore::log_terms)
        .def_readonly("log_annotations", &EntryScore::log_annotations)
        .def_readonly("total_annotations", &EntryScore::total_annotations);

    m.def(
        "score_entry", [](const StudyMetadata& s, py::function scorer) { return score_entry(s, python_scorer(std::move(scorer))); },
        py::arg("metadata"), py::arg("scorer"), "Scores one entry; `scorer(ref)` returns a specificity in [0, 1].");

    py::class_<OntologyCatalog>(m, "OntologyCatalog")
        .def(py::init<>())
        .def_static("load", &OntologyCatalog::load, py::arg("path"))
        .def("add", &OntologyCatalog::add)
        .def("prefixes", &OntologyCatalog::prefixes);

    py::class_<CatalogResolver>(m, "CatalogResolver")
        .def(py::init([](const OntologyCatalog& catalog) { return std::make_unique<CatalogResolver>(catalog); }), py::arg("catalog"),
             py::keep_alive<1, 2>())
        .def("score", [](const CatalogResolver& r, const AccessionRef& ref) { return r.score(ref).score; })
        .def("resolve", &CatalogResolver::resolve)
        .def(
            "score_entry", [](const CatalogResolver& r, const StudyMetadata& s) { return score_entry(s, r.scorer()); }, py::arg("metadata"))
        .def(
            "score_corpus",
            [](const CatalogResolver& r, const std::vector<StudyMetadata>& studies, std::size_t concurrency) {
                py::gil_scoped_release release;
                return score_corpus(studies, r.scorer(), concurrency);
            },
            py::arg("studies"), py::arg("concurrency") = 1)
        .def(
            "audit_entry", [](const CatalogResolver& r, const StudyMetadata& s) { return audit_entry(s, r.resolver()); }, py::arg("metadata"));

    m.def(
        "load_corpus", [](const std::filesystem::path& dir) { return load_corpus(dir).studies; }, py::arg("dir"));

    py::class_<CorpusStats>(m, "CorpusStats")
        .def_readonly("n", &CorpusStats::n)
        .def_readonly("mean", &CorpusStats::mean)
        .def_readonly("std_dev", &CorpusStats::std_dev)
        .def_readonly("max", &CorpusStats::max)
        .def_readonly("min_annotated", &CorpusStats::min_annotated)
        .def_readonly("pct_above_mean", &CorpusStats::pct_above_mean);

    py::class_<BoxStats>(m, "BoxStats")
        .def_readonly("n", &BoxStats::n)
        .def_readonly("min", &BoxStats::min)
        .def_readonly("q1", &BoxStats::q1)
        .def_readonly("median", &BoxStats::median)
        .def_readonly("q3", &BoxStats::q3)
        .def_readonly("max", &BoxStats::max);

    py::class_<Distribution>(m, "Distribution")
        .def_readonly("histogram", &Distribution::histogram)
        .def_readonly("per_type_boxplot", &Distribution::per_type_boxplot)
        .def_readonly("avg_weighting_gap", &Distribution::avg_weighting_gap);

    m.def(
        "corpus_stats", [](const std::vector<EntryScore>& e, ScoreColumn c) { return corpus_stats(e, c); }, py::arg("entries"),
        py::arg("column") = ScoreColumn::LogTerms);
    m.def(
        "distribution", [](const std::vector<EntryScore>& e, ScoreColumn c) { return distribution(e, c); }, py::arg("entries"),
        py::arg("column") = ScoreColumn::LogTerms);
    m.def("format_scores_tsv", [](const std::vector<EntryScore>& e) { return format_scores_tsv(e); }, py::arg("entries"));

    py::class_<Irregularity>(m, "Irregularity")
        .def_readonly("study_id", &Irregularity::study_id)
        .def_readonly("kind", &Irregularity::kind)
        .def_readonly("evidence", &Irregularity::evidence)
        .def("__repr__", [](const Irregularity& i) { return "Irregularity(" + i.study_id + ", " + std::string(to_string(i.kind)) + ", " + i.evidence + ")"; });

    m.def(
        "audit_entry", [](const StudyMetadata& s, py::function resolver) { return audit_entry(s, python_resolver(std::move(resolver))); },
        py::arg("metadata"), py::arg("resolver"));
    m.def(
        "audit_corpus", [](const std::vector<StudyMetadata>& e, double threshold) { return audit_corpus(e, threshold); }, py::arg("entries"),
        py::arg("threshold") = default_near_duplicate_threshold);
}
