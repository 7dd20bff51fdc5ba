#include "trustconnect/report_io.hpp"

#include <json.hpp>

#include "trustconnect/errors.hpp"
#include "trustconnect/text_format.hpp"

namespace trustconnect {

namespace {

std::string params_line(const TrustParams& p) {
  return "k " + format_double(p.k) + " alpha " + format_double(p.alpha) + " c0 " + format_double(p.c0) +
         " mode " + to_string(p.mode) + " max_iterations " + std::to_string(p.max_iterations) +
         " tolerance " + format_double(p.tolerance);
}

}  // namespace

std::string report_to_text(const TrustReport& report) {
  std::string out = "trustconnect-report v1\n";
  out += "# row <id> <label> <epsilon> <btv> <trust> <eatv>\n";
  for (const auto& r : report.rows) {
    out += "row " + std::to_string(r.id) + " " + r.label + " " + format_double(r.epsilon) + " " +
           format_double(r.btv) + " " + format_double(r.trust) + " " + format_double(r.eatv) + "\n";
  }
  out += "network_trust " + format_double(report.network_trust) + "\n";
  out += "params " + params_line(report.params) + "\n";
  out += std::string("converged ") + (report.converged ? "true" : "false") + "\n";
  out += std::string("baseline_converged ") + (report.baseline_converged ? "true" : "false") + "\n";
  out += "iterations " + std::to_string(report.iterations) + "\n";
  out += "seed " + std::to_string(report.provenance.seed) + "\n";
  out += "graph_hash " + hex64(report.provenance.graph_hash) + "\n";
  return out;
}

std::string report_to_csv(const TrustReport& report) {
  std::string out = "id,label,epsilon,btv,trust,eatv\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.id) + "," + r.label + "," + format_double(r.epsilon) + "," + format_double(r.btv) +
           "," + format_double(r.trust) + "," + format_double(r.eatv) + "\n";
  }
  return out;
}

std::string report_to_json(const TrustReport& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "trustconnect-report v1";
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"id", r.id}, {"label", r.label}, {"epsilon", r.epsilon},
                    {"btv", r.btv}, {"trust", r.trust}, {"eatv", r.eatv}});
  }
  doc["network_trust"] = report.network_trust;
  doc["params"] = {{"k", report.params.k},
                   {"alpha", report.params.alpha},
                   {"c0", report.params.c0},
                   {"mode", to_string(report.params.mode)},
                   {"max_iterations", report.params.max_iterations},
                   {"tolerance", report.params.tolerance}};
  doc["converged"] = report.converged;
  doc["baseline_converged"] = report.baseline_converged;
  doc["iterations"] = report.iterations;
  doc["seed"] = report.provenance.seed;
  doc["graph_hash"] = hex64(report.provenance.graph_hash);
  return doc.dump(2) + "\n";
}

std::vector<TrustRow> parse_report_csv(std::string_view text, const std::string& source) {
  std::vector<TrustRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "id,label,epsilon,btv,trust,eatv") throw ParseError(source, line_no, "unexpected CSV header");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 6) throw ParseError(source, line_no, "expected 6 columns");
    try {
      TrustRow r;
      r.id = static_cast<NodeId>(parse_u64(cells[0]));
      r.label = std::string(cells[1]);
      r.epsilon = parse_double(cells[2]);
      r.btv = parse_double(cells[3]);
      r.trust = parse_double(cells[4]);
      r.eatv = parse_double(cells[5]);
      rows.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!header_seen) throw ParseError(source, 1, "missing CSV header");
  return rows;
}

}  // namespace trustconnect
