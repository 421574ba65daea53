#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "lexaudit/analyze.hpp"
#include "lexaudit/config.hpp"
#include "lexaudit/corpus.hpp"
#include "lexaudit/errors.hpp"
#include "lexaudit/lexicon.hpp"
#include "lexaudit/pipeline.hpp"
#include "lexaudit/regress.hpp"
#include "lexaudit/scorer.hpp"
#include "lexaudit/synth.hpp"
#include "lexaudit/tokenize.hpp"

namespace py = pybind11;
using namespace lexaudit;

namespace {

TokenCounts counts_from_dict(const std::map<std::string, std::size_t>& counts) {
  TokenCounts tc;
  tc.counts = counts;
  for (const auto& [word, count] : counts) tc.total += count;
  return tc;
}

DesignMatrix design_from_rows(const std::vector<std::vector<double>>& rows,
                              const std::vector<std::string>& labels,
                              const std::vector<double>& response) {
  DesignMatrix design;
  design.rows = rows.size();
  design.cols = labels.size();
  design.column_labels = labels;
  design.response = response;
  if (response.size() != rows.size()) raise(Errc::row_mismatch, "response length != row count");
  design.values.assign(design.rows * design.cols, 0.0);
  for (std::size_t r = 0; r < design.rows; ++r) {
    if (rows[r].size() != design.cols) raise(Errc::row_mismatch, "ragged design matrix");
    for (std::size_t c = 0; c < design.cols; ++c) design.at(r, c) = rows[r][c];
  }
  return design;
}

}  // namespace

PYBIND11_MODULE(_native, m) {
  m.doc() = "lexicon sentiment audit toolkit (native core)";

  py::register_exception<Error>(m, "LexauditError");

  py::class_<Lexicon>(m, "Lexicon")
      .def(py::init([](const std::map<std::string, double>& entries, const std::string& name) {
             return Lexicon(entries, name);
           }),
           py::arg("entries"), py::arg("source_name") = "lexicon")
      .def_property_readonly("entries", &Lexicon::entries)
      .def_property_readonly("source_name", &Lexicon::source_name)
      .def("__len__", &Lexicon::size)
      .def("find", [](const Lexicon& lex, const std::string& word) -> std::optional<double> {
        const double* h = lex.find(word);
        if (h == nullptr) return std::nullopt;
        return *h;
      });

  m.def("load_lexicon", [](const std::filesystem::path& path) {
    return load_lexicon_file(path).lexicon;
  });
  m.def("unit_rescale", &unit_rescale, py::arg("happiness"));
  m.def("apply_lens", &apply_lens, py::arg("lexicon"), py::arg("exclude_low"),
        py::arg("exclude_high"));

  py::class_<TokenCounts>(m, "TokenCounts")
      .def_readonly("counts", &TokenCounts::counts)
      .def_readonly("total", &TokenCounts::total);

  m.def("tokenize", [](const std::string& text) { return tokenize(text); });
  m.def("count_text", [](const std::string& text) { return count_text(text); });

  py::class_<DocumentScore>(m, "DocumentScore")
      .def_readonly("raw", &DocumentScore::raw)
      .def_readonly("unit", &DocumentScore::unit)
      .def_readonly("matched_tokens", &DocumentScore::matched_tokens)
      .def_readonly("total_tokens", &DocumentScore::total_tokens);

  m.def("hedonometer_score",
        [](const std::map<std::string, std::size_t>& counts, const Lexicon& lex) {
          return hedonometer_score(counts_from_dict(counts), lex);
        },
        py::arg("counts"), py::arg("lexicon"));
  m.def("score_document", [](const std::string& text, const Lexicon& lex) {
    return score_document(text, lex);
  });
  m.def("score_difference", &score_difference, py::arg("hedonometer_unit"),
        py::arg("reference_unit"));

  py::class_<Document>(m, "Document")
      .def(py::init<std::string, std::string, std::string>(), py::arg("id"), py::arg("domain"),
           py::arg("text"))
      .def_readonly("id", &Document::id)
      .def_readonly("domain", &Document::domain)
      .def_readonly("text", &Document::text);

  m.def("load_corpus", [](const std::filesystem::path& path) { return load_corpus_file(path); });

  py::class_<CoverageStats>(m, "CoverageStats")
      .def_readonly("per_domain", &CoverageStats::per_domain)
      .def_readonly("overlap", &CoverageStats::overlap)
      .def_readonly("total_distinct", &CoverageStats::total_distinct);

  m.def("coverage_stats", &coverage_stats, py::arg("corpus"), py::arg("lexicon"));
  m.def("select_vocabulary", &select_vocabulary, py::arg("corpus"), py::arg("lexicon"),
        py::arg("min_domains"));

  py::class_<OlsResult>(m, "OlsResult")
      .def_readonly("column_labels", &OlsResult::column_labels)
      .def_readonly("coefficients", &OlsResult::coefficients)
      .def_readonly("standard_errors", &OlsResult::standard_errors)
      .def_readonly("t_statistics", &OlsResult::t_statistics)
      .def_readonly("p_values", &OlsResult::p_values)
      .def_readonly("dropped", &OlsResult::dropped)
      .def_readonly("dropped_columns", &OlsResult::dropped_columns)
      .def_readonly("rows", &OlsResult::rows)
      .def_readonly("retained", &OlsResult::retained)
      .def_readonly("degrees_of_freedom", &OlsResult::degrees_of_freedom)
      .def_readonly("residual_variance", &OlsResult::residual_variance)
      .def_readonly("r_squared", &OlsResult::r_squared)
      .def_readonly("exact_fit", &OlsResult::exact_fit)
      .def_readonly("zero_variance", &OlsResult::zero_variance);

  m.def("ols_fit",
        [](const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels,
           const std::vector<double>& response) {
          return ols_fit(design_from_rows(rows, labels, response));
        },
        py::arg("matrix"), py::arg("labels"), py::arg("response"),
        "Least squares over row-major `matrix`; include the intercept column yourself.");
  m.def("student_t_sf", &student_t_sf, py::arg("t"), py::arg("df"));
  m.def("bh_adjust", [](const std::vector<double>& ps) { return bh_adjust(ps); });
  m.def("spearman", [](const std::vector<double>& xs, const std::vector<double>& ys) {
    return spearman(xs, ys);
  });

  py::class_<ScorePair>(m, "ScorePair")
      .def(py::init([](std::string doc_id, double hed, double ref) {
             return make_score_pair(std::move(doc_id), hed, ref);
           }),
           py::arg("doc_id"), py::arg("hedonometer_unit"), py::arg("reference_unit"))
      .def_readonly("doc_id", &ScorePair::doc_id)
      .def_readonly("hedonometer_unit", &ScorePair::hedonometer_unit)
      .def_readonly("reference_unit", &ScorePair::reference_unit)
      .def_readonly("difference", &ScorePair::difference);

  m.def("difference_curve", [](const std::vector<ScorePair>& pairs) {
    std::vector<std::tuple<std::size_t, std::string, double, double, double>> out;
    for (const auto& point : difference_curve(pairs)) {
      out.emplace_back(point.rank, point.doc_id, point.hedonometer_unit, point.reference_unit,
                       point.difference);
    }
    return out;
  });

  // config-file driven pipeline entry points; return the CLI exit code
  m.def("run_audit", [](const std::filesystem::path& config_file) {
    return run_audit(load_config_file(config_file)).exit_code;
  });
  m.def("run_score", [](const std::filesystem::path& config_file) {
    return run_score(load_config_file(config_file));
  });
  m.def("run_synth", [](const std::filesystem::path& config_file) {
    return run_synth(load_config_file(config_file));
  });
}
