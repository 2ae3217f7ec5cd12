#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace failprop {

/// One significant line of a sectioned text file, comments and surrounding
/// whitespace removed.
struct TextLine {
  std::size_t number = 0;
  std::string text;
};

struct Section {
  std::string name;  // empty for lines before the first header
  std::size_t header_line = 0;
  std::vector<TextLine> lines;
};

/// The `[section]` / `#comment` text format shared by edge lists, scenario
/// files and experiment configs.
class SectionedText {
 public:
  static SectionedText parse(std::string_view text);

  const std::vector<Section>& sections() const noexcept { return sections_; }
  bool has(std::string_view name) const;
  /// Lines of every section called `name`, in file order.
  std::vector<TextLine> lines(std::string_view name) const;

 private:
  std::vector<Section> sections_;
};

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);

/// Splits `key = value`; nullopt if there is no '='.
std::optional<std::pair<std::string, std::string>> split_key_value(std::string_view line);

std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Shortest decimal text that round-trips; "inf" for +infinity.
std::string format_double(double v);

}  // namespace failprop
