#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dcsrepair {

// Half-open byte region of a source file. Lines and columns are 1-based;
// tokens never span lines, so a single (line, col, len) triple suffices.
struct Span {
  int line = 1;
  int col = 1;
  int len = 0;
  std::size_t offset = 0;

  std::size_t end_offset() const { return offset + static_cast<std::size_t>(len); }
  bool operator==(const Span&) const = default;
};

// A model file as text plus its line decomposition. The text is the single
// source of truth; lines are views computed from recorded line starts.
class SourceModel {
 public:
  SourceModel() = default;
  explicit SourceModel(std::string text);

  static SourceModel from_text(std::string text) { return SourceModel(std::move(text)); }
  static SourceModel from_file(const std::string& path);

  const std::string& text() const { return text_; }
  int line_count() const { return static_cast<int>(line_starts_.size()); }

  // 1-based line access, without the trailing newline.
  std::string_view line(int line_no) const;
  std::vector<std::string> lines() const;

  // Byte offset of (line, col), both 1-based.
  std::size_t offset_of(int line_no, int col) const;

  // Returns a new model with [span.offset, span.end_offset()) replaced.
  SourceModel with_replacement(const Span& span, std::string_view replacement) const;
  SourceModel with_replacement(std::size_t offset, std::size_t len,
                               std::string_view replacement) const;

  bool operator==(const SourceModel& other) const { return text_ == other.text_; }

 private:
  std::string text_;
  std::vector<std::size_t> line_starts_;
};

}  // namespace dcsrepair
