#pragma once

// Report emission. CSV uses a fixed header, "." decimal separator and four
// decimal places; JSON nests framework/package rows and round-trips through
// read_report_json; the plain-text tables mirror the comparison layout
// (MRR column first, then one column per prefix length, values x100).

#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scopecomplete/bench.hpp"

namespace scopecomplete {

struct MalformedReport : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Locale-independent fixed-point rendering.
inline std::string format_double(double v, int decimals = 4) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string prefix_label(int prefixLength) {
  return prefixLength == 0 ? std::string("all") : std::to_string(prefixLength);
}

}  // namespace detail

// --- corpus statistics table (framework overview layout) -----------------------

inline std::string render_stats_table(std::string_view repoName, const CorpusStats& st) {
  std::ostringstream out;
  out << std::left << std::setw(20) << "framework" << std::right << std::setw(10) << "packages"
      << std::setw(9) << "classes" << std::setw(17) << "defined_classes" << std::setw(9)
      << "methods" << std::setw(16) << "rho_int_global" << std::setw(14) << "rho_int_mean"
      << std::setw(8) << "r_int" << std::setw(8) << "r_ext" << '\n';
  out << std::left << std::setw(20) << repoName << std::right << std::setw(10) << st.packageCount
      << std::setw(9) << st.classCount << std::setw(17) << st.definedClassCount << std::setw(9)
      << st.methodCount << std::setw(16) << format_double(st.rhoIntGlobal, 2) << std::setw(14)
      << format_double(st.rhoIntMean, 2) << std::setw(8) << st.rInt << std::setw(8) << st.rExt
      << '\n';
  out << "unresolved references: " << st.rUnresolved << '\n';
  return out.str();
}

// --- bench report: CSV ----------------------------------------------------------

inline constexpr std::string_view kReportCsvHeader =
    "strategy,scope_kind,scope,prefix_length,queries,full_name_queries,accuracy_at_10,mrr,"
    "ndcg_at_10,r1,r2,r3,r4,r5,r6,r7,r8,r9,r10,pulled_total,mean_elapsed_ns,total_elapsed_ns";

inline void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << kReportCsvHeader << '\n';
  auto emit = [&](std::string_view kind, const MetricRow& r) {
    out << report.strategyName << ',' << kind << ',' << detail::csv_field(r.scope) << ','
        << detail::prefix_label(r.prefixLength) << ',' << r.queryCount << ',' << r.fullNameQueries
        << ',' << format_double(r.accuracyAt10) << ',' << format_double(r.mrr) << ','
        << format_double(r.ndcgAt10);
    for (const std::uint64_t c : r.rankHistogram) out << ',' << c;
    out << ',' << r.pulledTotal << ',' << r.meanElapsed.count() << ',' << r.totalElapsed.count()
        << '\n';
  };
  for (const MetricRow& r : report.frameworkRows) emit("framework", r);
  for (const auto& [pkg, rows] : report.packageRows)
    for (const MetricRow& r : rows) emit("package", r);
}

inline std::string report_csv(const BenchReport& report) {
  std::ostringstream out;
  write_report_csv(report, out);
  return out.str();
}

// --- bench report: JSON ---------------------------------------------------------

namespace detail {

using nlohmann::json;

inline json row_to_json(const MetricRow& r) {
  json j;
  j["prefix_length"] = r.prefixLength;  // 0 = all
  j["queries"] = r.queryCount;
  j["full_name_queries"] = r.fullNameQueries;
  j["accuracy_at_10"] = r.accuracyAt10;
  j["mrr"] = r.mrr;
  j["ndcg_at_10"] = r.ndcgAt10;
  j["histogram"] = r.rankHistogram;
  j["pulled_total"] = r.pulledTotal;
  j["mean_elapsed_ns"] = r.meanElapsed.count();
  j["total_elapsed_ns"] = r.totalElapsed.count();
  return j;
}

inline MetricRow row_from_json(const json& j, const std::string& scope) {
  MetricRow r;
  r.scope = scope;
  r.prefixLength = j.at("prefix_length").get<int>();
  r.queryCount = j.at("queries").get<std::uint64_t>();
  r.fullNameQueries = j.at("full_name_queries").get<std::uint64_t>();
  r.accuracyAt10 = j.at("accuracy_at_10").get<double>();
  r.mrr = j.at("mrr").get<double>();
  r.ndcgAt10 = j.at("ndcg_at_10").get<double>();
  const auto& hist = j.at("histogram");
  if (!hist.is_array() || hist.size() != r.rankHistogram.size())
    throw MalformedReport("histogram must have 10 entries");
  for (std::size_t i = 0; i < r.rankHistogram.size(); ++i)
    r.rankHistogram[i] = hist[i].get<std::uint64_t>();
  r.pulledTotal = j.at("pulled_total").get<std::uint64_t>();
  r.meanElapsed = std::chrono::nanoseconds(j.at("mean_elapsed_ns").get<long long>());
  r.totalElapsed = std::chrono::nanoseconds(j.at("total_elapsed_ns").get<long long>());
  return r;
}

inline json config_to_json(const BenchConfig& cfg) {
  json j;
  j["k"] = cfg.k;
  j["prefix_min"] = cfg.prefixRange.min;
  j["prefix_max"] = cfg.prefixRange.max;
  j["case_sensitive"] = cfg.caseSensitive;
  switch (cfg.filter.mode) {
    case CaseFilter::Mode::all: j["filter_mode"] = "all"; break;
    case CaseFilter::Mode::named: j["filter_mode"] = "named"; break;
    case CaseFilter::Mode::testOnly: j["filter_mode"] = "test-only"; break;
    case CaseFilter::Mode::nonTestOnly: j["filter_mode"] = "non-test-only"; break;
  }
  j["filter_packages"] = cfg.filter.packages;
  j["filter_test_marker"] = cfg.filter.testMarker;
  j["test_marker"] = cfg.testMarker;
  return j;
}

inline BenchConfig config_from_json(const json& j) {
  BenchConfig cfg;
  cfg.k = j.at("k").get<int>();
  cfg.prefixRange.min = j.at("prefix_min").get<int>();
  cfg.prefixRange.max = j.at("prefix_max").get<int>();
  cfg.caseSensitive = j.at("case_sensitive").get<bool>();
  const std::string mode = j.at("filter_mode").get<std::string>();
  if (mode == "all") cfg.filter.mode = CaseFilter::Mode::all;
  else if (mode == "named") cfg.filter.mode = CaseFilter::Mode::named;
  else if (mode == "test-only") cfg.filter.mode = CaseFilter::Mode::testOnly;
  else if (mode == "non-test-only") cfg.filter.mode = CaseFilter::Mode::nonTestOnly;
  else throw MalformedReport("unknown filter mode: " + mode);
  cfg.filter.packages = j.at("filter_packages").get<std::vector<std::string>>();
  cfg.filter.testMarker = j.at("filter_test_marker").get<std::string>();
  cfg.testMarker = j.at("test_marker").get<std::string>();
  if (cfg.k < 1 || !cfg.prefixRange.valid())
    throw MalformedReport("report config has an invalid k or prefix range");
  return cfg;
}

}  // namespace detail

inline void write_report_json(const BenchReport& report, std::ostream& out) {
  using detail::json;
  json j;
  j["kind"] = "bench_report";
  j["strategy"] = report.strategyName;
  j["corpus"] = report.corpusName;
  j["config"] = detail::config_to_json(report.config);
  j["index_build_ns"] = report.indexBuildTime.count();
  j["peak_rss_bytes"] = report.peakRssBytes;
  json frameworkRows = json::array();
  for (const MetricRow& r : report.frameworkRows) frameworkRows.push_back(detail::row_to_json(r));
  j["framework"] = {{"name", report.corpusName}, {"rows", std::move(frameworkRows)}};
  json packages = json::object();
  for (const auto& [pkg, rows] : report.packageRows) {
    json arr = json::array();
    for (const MetricRow& r : rows) arr.push_back(detail::row_to_json(r));
    packages[pkg] = std::move(arr);
  }
  j["packages"] = std::move(packages);
  out << j.dump(2) << '\n';
}

inline BenchReport read_report_json(std::istream& in) {
  using detail::json;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw MalformedReport(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("kind", "") != std::string("bench_report"))
      throw MalformedReport("not a bench report (missing kind)");
    BenchReport report;
    report.strategyName = j.at("strategy").get<std::string>();
    report.corpusName = j.at("corpus").get<std::string>();
    report.config = detail::config_from_json(j.at("config"));
    report.indexBuildTime = std::chrono::nanoseconds(j.at("index_build_ns").get<long long>());
    report.peakRssBytes = j.at("peak_rss_bytes").get<std::uint64_t>();
    for (const auto& rj : j.at("framework").at("rows"))
      report.frameworkRows.push_back(detail::row_from_json(rj, report.corpusName));
    for (const auto& [pkg, rows] : j.at("packages").items())
      for (const auto& rj : rows) report.packageRows[pkg].push_back(detail::row_from_json(rj, pkg));
    return report;
  } catch (const json::exception& e) {
    throw MalformedReport(std::string("malformed bench report: ") + e.what());
  }
}

// --- bench report: plain-text table ---------------------------------------------

namespace detail {

inline void write_matrix_header(std::ostream& out, std::string_view firstCol, const BenchConfig& cfg) {
  out << std::left << std::setw(24) << "scope" << std::right << std::setw(9) << firstCol;
  for (int L = cfg.prefixRange.min; L <= cfg.prefixRange.max; ++L) out << std::setw(8) << L;
  out << '\n';
}

}  // namespace detail

inline void write_report_table(const BenchReport& report, std::ostream& out) {
  out << "corpus: " << report.corpusName << "  strategy: " << report.strategyName
      << "  k: " << report.config.k << "  queries: "
      << (report.frameworkRows.empty() ? 0 : report.frameworkRows.front().queryCount) << '\n';
  out << "index build: " << report.indexBuildTime.count() << " ns";
  if (report.peakRssBytes) out << "  peak rss: " << report.peakRssBytes << " bytes (best effort)";
  out << '\n';
  auto matrix = [&](std::string_view title, std::string_view firstCol, auto&& value) {
    out << '\n' << title << '\n';
    detail::write_matrix_header(out, firstCol, report.config);
    auto line = [&](const std::vector<MetricRow>& rows) {
      out << std::left << std::setw(24) << rows.front().scope << std::right;
      const MetricRow* overall = detail::find_row(rows, 0);
      out << std::setw(9) << (overall ? format_double(value(*overall) * 100.0, 2) : std::string("-"));
      for (int L = report.config.prefixRange.min; L <= report.config.prefixRange.max; ++L) {
        const MetricRow* r = detail::find_row(rows, L);
        out << std::setw(8) << (r ? format_double(value(*r) * 100.0, 2) : std::string("-"));
      }
      out << '\n';
    };
    line(report.frameworkRows);
    for (const auto& [pkg, rows] : report.packageRows) line(rows);
  };
  matrix("per-prefix-length MRR (x100)", "MRR", [](const MetricRow& r) { return r.mrr; });
  matrix("per-prefix-length accuracy@10 (x100)", "Acc", [](const MetricRow& r) { return r.accuracyAt10; });
}

// --- delta report ---------------------------------------------------------------

inline constexpr std::string_view kDeltaCsvHeader =
    "scope_kind,scope,metric,prefix_length,without,with,delta";

inline void write_delta_csv(const DeltaReport& report, std::ostream& out) {
  out << kDeltaCsvHeader << '\n';
  auto emit = [&](std::string_view kind, const DeltaBlock& block) {
    auto rows = [&](const std::map<int, DeltaCell>& cells, std::string_view metric) {
      for (const auto& [L, cell] : cells) {
        out << kind << ',' << detail::csv_field(block.scope) << ',' << metric << ','
            << detail::prefix_label(L) << ',' << format_double(cell.without) << ','
            << format_double(cell.with) << ',' << format_double(cell.delta) << '\n';
      }
    };
    rows(block.mrr, "mrr");
    rows(block.accuracy, "accuracy_at_10");
  };
  for (const DeltaBlock& b : report.aggregates) emit("aggregate", b);
  for (const DeltaBlock& b : report.packages) emit("package", b);
}

inline std::string delta_csv(const DeltaReport& report) {
  std::ostringstream out;
  write_delta_csv(report, out);
  return out.str();
}

inline void write_delta_json(const DeltaReport& report, std::ostream& out) {
  using detail::json;
  json j;
  j["kind"] = "delta_report";
  j["corpus"] = report.corpusName;
  j["config"] = detail::config_to_json(report.config);
  j["without_strategy"] = report.withoutStrategy;
  j["with_strategy"] = report.withStrategy;
  auto block_to_json = [](const DeltaBlock& b) {
    json bj;
    bj["scope"] = b.scope;
    bj["aggregate"] = b.aggregate;
    auto cells = [](const std::map<int, DeltaCell>& m) {
      json cj = json::object();
      for (const auto& [L, cell] : m)
        cj[detail::prefix_label(L)] = {{"without", cell.without}, {"with", cell.with},
                                       {"delta", cell.delta}};
      return cj;
    };
    bj["mrr"] = cells(b.mrr);
    bj["accuracy_at_10"] = cells(b.accuracy);
    return bj;
  };
  j["aggregates"] = json::array();
  for (const DeltaBlock& b : report.aggregates) j["aggregates"].push_back(block_to_json(b));
  j["packages"] = json::array();
  for (const DeltaBlock& b : report.packages) j["packages"].push_back(block_to_json(b));
  out << j.dump(2) << '\n';
}

// Comparison layout: MRR column, then prefix-length columns; Without/With/
// Delta lines per scope; values x100. Both per-prefix matrices are printed
// and labeled since either reading of the columns is defensible.
inline void write_delta_table(const DeltaReport& report, std::ostream& out) {
  out << "corpus: " << report.corpusName << "  without: " << report.withoutStrategy
      << "  with: " << report.withStrategy << '\n';
  out << "aggregate rows are means over package cells; zero cells omitted per side\n";
  auto matrix = [&](std::string_view title, std::string_view firstCol, auto&& pick) {
    out << '\n' << title << '\n';
    out << std::left << std::setw(24) << "scope" << std::setw(9) << "variant" << std::right
        << std::setw(9) << firstCol;
    for (int L = report.config.prefixRange.min; L <= report.config.prefixRange.max; ++L)
      out << std::setw(8) << L;
    out << '\n';
    auto body = [&](const DeltaBlock& block) {
      const std::map<int, DeltaCell>& cells = pick(block);
      auto line = [&](std::string_view variant, auto&& value) {
        out << std::left << std::setw(24) << (variant == "Without" ? block.scope : "")
            << std::setw(9) << variant << std::right;
        auto cell_at = [&](int L) -> std::string {
          auto it = cells.find(L);
          return it == cells.end() ? std::string("-") : format_double(value(it->second) * 100.0, 2);
        };
        out << std::setw(9) << cell_at(0);
        for (int L = report.config.prefixRange.min; L <= report.config.prefixRange.max; ++L)
          out << std::setw(8) << cell_at(L);
        out << '\n';
      };
      line("Without", [](const DeltaCell& c) { return c.without; });
      line("With", [](const DeltaCell& c) { return c.with; });
      line("Delta", [](const DeltaCell& c) { return c.delta; });
    };
    for (const DeltaBlock& b : report.aggregates) body(b);
    for (const DeltaBlock& b : report.packages) body(b);
  };
  matrix("per-prefix-length MRR (x100)", "MRR", [](const DeltaBlock& b) -> const auto& { return b.mrr; });
  matrix("per-prefix-length accuracy@10 (x100)", "Acc",
         [](const DeltaBlock& b) -> const auto& { return b.accuracy; });
}

}  // namespace scopecomplete
