#include "document.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <stdexcept>

namespace kfwer::cli {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return buf;
}

std::string cell_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void render_csv(const Document& doc, std::ostream& out) {
  out << "# manifest " << doc.manifest.dump() << '\n';
  for (std::size_t i = 0; i < doc.columns.size(); ++i) {
    out << (i ? "," : "") << csv_escape(doc.columns[i]);
  }
  out << '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    out << '\n';
  }
}

void render_table(const Document& doc, std::ostream& out) {
  std::vector<std::size_t> width(doc.columns.size());
  std::vector<std::vector<std::string>> text;
  for (std::size_t i = 0; i < doc.columns.size(); ++i) width[i] = doc.columns[i].size();
  for (const auto& row : doc.rows) {
    auto& line = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(cell_text(row[i]));
      if (i < width.size()) width[i] = std::max(width[i], line.back().size());
    }
  }

  out << doc.title << '\n';
  out << "  " << doc.manifest.value("tool", "kfwer") << ' ' << doc.manifest.value("version", "")
      << "  " << doc.manifest.value("timestamp", "") << '\n';
  if (doc.manifest.contains("seed") && !doc.manifest["seed"].is_null()) {
    out << "  seed " << doc.manifest["seed"].dump() << '\n';
  }
  out << "  " << doc.manifest.value("command", "") << "\n\n";

  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t pad = width[i] - cells[i].size();
      if (i == 0) {
        out << cells[i] << std::string(pad, ' ');
      } else {
        out << std::string(pad, ' ') << cells[i];
      }
      out << (i + 1 < cells.size() ? "  " : "");
    }
    out << '\n';
  };
  emit(doc.columns);
  std::size_t rule = 0;
  for (std::size_t w : width) rule += w + 2;
  out << std::string(rule > 2 ? rule - 2 : rule, '-') << '\n';
  for (const auto& line : text) emit(line);
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  if (text == "table") return OutputFormat::table;
  throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

Json number(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return std::strtod(format_double(value).c_str(), nullptr);
}

void render(const Document& doc, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::json: {
      Json full = Json::object();
      full["manifest"] = doc.manifest;
      full["result"] = doc.result;
      out << full.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      render_csv(doc, out);
      break;
    case OutputFormat::table:
      render_table(doc, out);
      break;
  }
}

std::string manifest_timestamp() {
  std::time_t when = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0' && v >= 0) when = static_cast<std::time_t>(v);
  }
  std::tm utc{};
  gmtime_r(&when, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace kfwer::cli
