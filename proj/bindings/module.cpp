#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cwemap/corpus.hpp"
#include "cwemap/errors.hpp"
#include "cwemap/eval.hpp"
#include "cwemap/groundtruth.hpp"
#include "cwemap/lsa.hpp"
#include "cwemap/pipeline.hpp"
#include "cwemap/porter.hpp"
#include "cwemap/preprocess.hpp"
#include "cwemap/report.hpp"
#include "cwemap/similarity.hpp"
#include "cwemap/weights.hpp"

namespace py = pybind11;
using namespace cwemap;

namespace {

std::vector<std::vector<double>> matrix_rows(const DenseMatrix& m) {
  std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) rows[r][c] = m.at(r, c);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_cwemap, m) {
  m.doc() = "vulnerability-to-weakness mapping with k-gram weighting and cosine similarity";
  m.attr("__version__") = "0.1.0";

  py::register_exception<UserError>(m, "UserError");

  py::enum_<DocumentKind>(m, "DocumentKind")
      .value("WEAKNESS", DocumentKind::Weakness)
      .value("VULNERABILITY", DocumentKind::Vulnerability);
  py::enum_<Repository>(m, "Repository")
      .value("MAVEN", Repository::Maven)
      .value("PIP", Repository::Pip)
      .value("NPM", Repository::Npm)
      .value("RUBYGEMS", Repository::RubyGems)
      .value("NONE", Repository::None);
  py::enum_<SegmentOrigin>(m, "SegmentOrigin")
      .value("FIRST_ORDER", SegmentOrigin::FirstOrder)
      .value("SECOND_ORDER", SegmentOrigin::SecondOrder)
      .value("WEAKNESS_ENTRY", SegmentOrigin::WeaknessEntry);

  py::class_<TextSegment>(m, "TextSegment")
      .def(py::init([](SegmentOrigin origin, std::string content, std::string label) {
             return TextSegment{origin, std::move(content), std::move(label)};
           }),
           py::arg("origin"), py::arg("content"), py::arg("source_label") = "")
      .def_readonly("origin", &TextSegment::origin)
      .def_readonly("content", &TextSegment::content)
      .def_readonly("source_label", &TextSegment::source_label);

  py::class_<RawDocument>(m, "RawDocument")
      .def(py::init([](std::string id, DocumentKind kind, Repository repository,
                       std::vector<TextSegment> segments) {
             return RawDocument{std::move(id), kind, repository, std::move(segments)};
           }),
           py::arg("id"), py::arg("kind"), py::arg("repository"), py::arg("segments"))
      .def_readonly("id", &RawDocument::id)
      .def_readonly("kind", &RawDocument::kind)
      .def_readonly("repository", &RawDocument::repository)
      .def_readonly("segments", &RawDocument::segments);

  py::class_<Corpus>(m, "Corpus")
      .def_readonly("documents", &Corpus::documents)
      .def_readonly("n1", &Corpus::n1)
      .def_readonly("n2", &Corpus::n2);

  m.def("strip_markup", &strip_markup, py::arg("raw"));
  m.def("extract_first_order", &extract_first_order, py::arg("report"));
  m.def("extract_links", &extract_links, py::arg("report"));
  m.def(
      "load_corpus",
      [](const std::filesystem::path& manifest, std::optional<std::set<std::string>> allowed) {
        return load_corpus(manifest, allowed);
      },
      py::arg("manifest_path"), py::arg("allowed_weakness_ids") = py::none());

  py::enum_<IdentifierKind>(m, "IdentifierKind")
      .value("CWE", IdentifierKind::Cwe)
      .value("CVE", IdentifierKind::Cve);
  py::class_<IdentifierMatch>(m, "IdentifierMatch")
      .def_readonly("kind", &IdentifierMatch::kind)
      .def_readonly("normalized_id", &IdentifierMatch::normalized_id)
      .def_readonly("offset", &IdentifierMatch::offset)
      .def("__repr__", [](const IdentifierMatch& match) {
        return "IdentifierMatch(" + match.normalized_id + ")";
      });

  py::class_<NvdMapping>(m, "NvdMapping")
      .def_readonly("cve_to_cwe", &NvdMapping::cve_to_cwe)
      .def_readonly("rejected", &NvdMapping::rejected);
  py::class_<AllowedCweSet>(m, "AllowedCweSet")
      .def_readonly("cwe_ids", &AllowedCweSet::cwe_ids)
      .def("contains", &AllowedCweSet::contains);

  py::enum_<LabelRoute>(m, "LabelRoute")
      .value("DIRECT_CWE", LabelRoute::DirectCwe)
      .value("VIA_CVE", LabelRoute::ViaCve);
  py::class_<GroundTruthLabel>(m, "GroundTruthLabel")
      .def_readonly("vulnerability_id", &GroundTruthLabel::vulnerability_id)
      .def_readonly("cwe_id", &GroundTruthLabel::cwe_id)
      .def_readonly("route", &GroundTruthLabel::route)
      .def_readonly("via_cve", &GroundTruthLabel::via_cve);
  py::enum_<DisqualifyReason>(m, "DisqualifyReason")
      .value("NO_MATCH", DisqualifyReason::NoMatch)
      .value("MULTIPLE_DISTINCT", DisqualifyReason::MultipleDistinct)
      .value("UNRESOLVABLE_CVE", DisqualifyReason::UnresolvableCve)
      .value("CWE_NOT_ALLOWED", DisqualifyReason::CweNotAllowed)
      .value("REJECTED_CVE", DisqualifyReason::RejectedCve);
  py::class_<QualificationResult>(m, "QualificationResult")
      .def_readonly("label", &QualificationResult::label)
      .def_readonly("reason", &QualificationResult::reason)
      .def("qualified", &QualificationResult::qualified);

  m.def("scan_identifiers", &scan_identifiers, py::arg("text"));
  m.def("distinct_identifiers", &distinct_identifiers, py::arg("text"));
  m.def("load_nvd_mapping", &load_nvd_mapping, py::arg("path"));
  m.def("allowed_cwe_set", &allowed_cwe_set, py::arg("mapping"));
  m.def("qualify", &qualify, py::arg("document"), py::arg("mapping"), py::arg("allowed"));

  py::class_<StopWordList>(m, "StopWordList")
      .def_static("load", &StopWordList::load, py::arg("path"))
      .def_static("from_words", &StopWordList::from_words, py::arg("words"))
      .def("contains", &StopWordList::contains)
      .def("__len__", &StopWordList::size);

  py::class_<Vocabulary>(m, "Vocabulary")
      .def_readonly("k", &Vocabulary::k)
      .def_readonly("grams", &Vocabulary::grams)
      .def_readonly("totals", &Vocabulary::totals)
      .def("m", &Vocabulary::m);

  py::class_<DocumentTermCounts>(m, "DocumentTermCounts")
      .def_readonly("doc_index", &DocumentTermCounts::doc_index)
      .def_readonly("counts", &DocumentTermCounts::counts)
      .def_readonly("length", &DocumentTermCounts::length);

  m.def("normalize", &normalize, py::arg("text"));
  m.def("tokenize", &tokenize, py::arg("text"));
  m.def("trim", &trim, py::arg("tokens"), py::arg("stops"));
  m.def("porter_stem", &porter_stem, py::arg("token"));
  m.def("kgrams", &kgrams, py::arg("stems"), py::arg("k"));
  m.def("build_vocabulary", &build_vocabulary, py::arg("corpus"), py::arg("k"), py::arg("stops"));
  m.def("count_terms", &count_terms, py::arg("document"), py::arg("vocab"), py::arg("stops"));
  m.def("count_corpus", &count_corpus, py::arg("corpus"), py::arg("vocab"), py::arg("stops"));

  py::enum_<WeightScheme>(m, "WeightScheme")
      .value("TF", WeightScheme::Tf)
      .value("TF_LOG", WeightScheme::TfLog)
      .value("TF_BOOL", WeightScheme::TfBool)
      .value("TF_IDF", WeightScheme::TfIdf)
      .value("DLM_IDF", WeightScheme::DlmIdf);

  py::class_<CorpusStats>(m, "CorpusStats")
      .def_readonly("total_documents", &CorpusStats::total_documents)
      .def_readonly("doc_freq", &CorpusStats::doc_freq)
      .def_readonly("lengths", &CorpusStats::lengths)
      .def_readonly("avg_length", &CorpusStats::avg_length)
      .def_readonly("beta", &CorpusStats::beta);

  py::class_<WeightMatrix>(m, "WeightMatrix")
      .def_readonly("k", &WeightMatrix::k)
      .def_readonly("scheme", &WeightMatrix::scheme)
      .def_readonly("rows", &WeightMatrix::rows)
      .def_readonly("cols", &WeightMatrix::cols)
      .def_readonly("row_entries", &WeightMatrix::row_entries);

  m.def("compute_stats", &compute_stats, py::arg("counts"), py::arg("vocab"),
        py::arg("beta") = 0.2);
  m.def("idf_factor", &idf_factor, py::arg("total_documents"), py::arg("doc_freq"));
  m.def("weigh", &weigh, py::arg("counts"), py::arg("stats"), py::arg("scheme"),
        py::arg("k") = 1);

  py::class_<DenseMatrix>(m, "DenseMatrix")
      .def_readonly("rows", &DenseMatrix::rows)
      .def_readonly("cols", &DenseMatrix::cols)
      .def_readonly("row_labels", &DenseMatrix::row_labels)
      .def_readonly("col_labels", &DenseMatrix::col_labels)
      .def("at", py::overload_cast<std::size_t, std::size_t>(&DenseMatrix::at, py::const_))
      .def("to_rows", &matrix_rows);

  py::class_<MappingMatrix>(m, "MappingMatrix")
      .def_readonly("vulnerability_ids", &MappingMatrix::vulnerability_ids)
      .def_readonly("weakness_ids", &MappingMatrix::weakness_ids)
      .def("rows", &MappingMatrix::rows)
      .def("cols", &MappingMatrix::cols)
      .def("at", &MappingMatrix::at);

  py::enum_<TieResolution>(m, "TieResolution")
      .value("NONE", TieResolution::None)
      .value("GROUND_TRUTH_PREFERENCE", TieResolution::GroundTruthPreference)
      .value("LOWEST_CWE_ID", TieResolution::LowestCweId);

  py::class_<VulnMapping>(m, "VulnMapping")
      .def_readonly("vulnerability_id", &VulnMapping::vulnerability_id)
      .def_readonly("predicted_cwe", &VulnMapping::predicted_cwe)
      .def_readonly("score", &VulnMapping::score)
      .def_readonly("tied", &VulnMapping::tied)
      .def_readonly("tie_resolved_by", &VulnMapping::tie_resolved_by);

  m.def("cosine_matrix", &cosine_matrix, py::arg("weights"),
        py::arg("labels") = std::vector<std::string>{}, py::arg("threads") = 1);
  m.def("jaccard_matrix", &jaccard_matrix, py::arg("weights"),
        py::arg("labels") = std::vector<std::string>{}, py::arg("threads") = 1);
  m.def("extract_vuln_by_weakness", &extract_vuln_by_weakness, py::arg("doc_similarity"),
        py::arg("corpus"));
  m.def("map_vulnerabilities", &map_vulnerabilities, py::arg("matrix"), py::arg("labels"));

  py::class_<SvdResult>(m, "SvdResult")
      .def_readonly("order", &SvdResult::order)
      .def_readonly("singular_values", &SvdResult::singular_values)
      .def_readonly("u", &SvdResult::u)
      .def_readonly("v", &SvdResult::v);
  py::class_<ReductionPolicy>(m, "ReductionPolicy")
      .def(py::init<>())
      .def(py::init([](double threshold) { return ReductionPolicy{threshold}; }),
           py::arg("threshold"))
      .def_readwrite("threshold", &ReductionPolicy::threshold);
  py::class_<ReducedSpectrum>(m, "ReducedSpectrum")
      .def_readonly("values", &ReducedSpectrum::values)
      .def_readonly("zeroed_count", &ReducedSpectrum::zeroed_count)
      .def("zeroed_fraction", &ReducedSpectrum::zeroed_fraction);
  py::class_<LsaOutput>(m, "LsaOutput")
      .def_readonly("reduced", &LsaOutput::reduced)
      .def_readonly("spectrum", &LsaOutput::spectrum)
      .def_readonly("zeroed_fraction", &LsaOutput::zeroed_fraction);

  m.def("svd", &svd, py::arg("matrix"));
  m.def("reduce", &reduce, py::arg("singular_values"), py::arg("policy"));
  m.def("lsa_pipeline", &lsa_pipeline, py::arg("doc_similarity"), py::arg("policy"));

  py::class_<PrecisionCell>(m, "PrecisionCell")
      .def_readonly("scheme", &PrecisionCell::scheme)
      .def_readonly("k", &PrecisionCell::k)
      .def_readonly("lsa", &PrecisionCell::lsa)
      .def_readonly("repository", &PrecisionCell::repository)
      .def_readonly("same", &PrecisionCell::same)
      .def_readonly("different", &PrecisionCell::different)
      .def("precision", &PrecisionCell::precision);
  py::class_<DescriptiveStatsRow>(m, "DescriptiveStatsRow")
      .def_readonly("k", &DescriptiveStatsRow::k)
      .def_readonly("unique_kgrams", &DescriptiveStatsRow::unique_kgrams)
      .def_readonly("avg_document_length", &DescriptiveStatsRow::avg_document_length)
      .def_readonly("avg_weakness_length", &DescriptiveStatsRow::avg_weakness_length)
      .def_readonly("avg_vulnerability_length", &DescriptiveStatsRow::avg_vulnerability_length);

  m.def("precision", &precision, py::arg("mappings"), py::arg("labels"));
  m.def("per_repository_precision", &per_repository_precision, py::arg("mappings"),
        py::arg("labels"), py::arg("corpus"));
  m.def("descriptive_stats", &descriptive_stats, py::arg("corpus"), py::arg("vocab"),
        py::arg("counts"));
  m.def("similarity_distribution", &similarity_distribution, py::arg("matrix"));
  m.def("weakness_similarity_grid", &weakness_similarity_grid, py::arg("doc_similarity"),
        py::arg("corpus"));

  py::enum_<LsaMode>(m, "LsaMode")
      .value("OFF", LsaMode::Off)
      .value("ON", LsaMode::On)
      .value("BOTH", LsaMode::Both);
  py::enum_<SimilarityKind>(m, "SimilarityKind")
      .value("COSINE", SimilarityKind::Cosine)
      .value("JACCARD", SimilarityKind::Jaccard);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("manifest", &RunConfig::manifest)
      .def_readwrite("nvd_mapping", &RunConfig::nvd_mapping)
      .def_readwrite("stopwords", &RunConfig::stopwords)
      .def_readwrite("out", &RunConfig::out)
      .def_readwrite("schemes", &RunConfig::schemes)
      .def_readwrite("gram_orders", &RunConfig::gram_orders)
      .def_readwrite("lsa", &RunConfig::lsa)
      .def_readwrite("beta", &RunConfig::beta)
      .def_readwrite("lsa_threshold", &RunConfig::lsa_threshold)
      .def_readwrite("similarity", &RunConfig::similarity)
      .def_readwrite("threads", &RunConfig::threads)
      .def_readwrite("dump_vocab", &RunConfig::dump_vocab)
      .def_readwrite("dump_weights", &RunConfig::dump_weights);

  m.def("load_config_file", &load_config_file, py::arg("path"));
  m.def("cmd_ingest", &cmd_ingest, py::arg("config"));
  m.def("cmd_run", &cmd_run, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<ReportOutput>(m, "ReportOutput")
      .def_readonly("table", &ReportOutput::table)
      .def_readonly("precision_csv", &ReportOutput::precision_csv);
  m.def("build_report", &build_report, py::arg("out_dir"));
}
