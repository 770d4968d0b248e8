#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace kfwer::cli {

using Json = nlohmann::ordered_json;

enum class OutputFormat { json, csv, table };

OutputFormat parse_output_format(std::string_view text);

// Every floating-point value is rounded to this many significant digits
// before it enters a document, so all three formats carry the same numbers.
inline constexpr int kSignificantDigits = 12;

/// Rounded number; ±infinity become the strings "inf"/"-inf", NaN becomes null.
Json number(double value);

struct Document {
  std::string title;
  Json manifest = Json::object();
  Json result = Json::object();
  // Flat view used by the csv and table renderers.
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

void render(const Document& doc, OutputFormat format, std::ostream& out);

/// ISO-8601 UTC time; SOURCE_DATE_EPOCH, when set, replaces the clock.
std::string manifest_timestamp();

}  // namespace kfwer::cli
