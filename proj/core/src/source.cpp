#include "dcsrepair/source.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcsrepair {

SourceModel::SourceModel(std::string text) : text_(std::move(text)) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if (text_[i] == '\n' && i + 1 < text_.size()) line_starts_.push_back(i + 1);
  }
  // An empty file still has one (empty) line; a file ending in '\n' does not
  // get a phantom extra line.
}

SourceModel SourceModel::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return SourceModel(buf.str());
}

std::string_view SourceModel::line(int line_no) const {
  if (line_no < 1 || line_no > line_count()) return {};
  std::size_t start = line_starts_[static_cast<std::size_t>(line_no - 1)];
  std::size_t end = line_no < line_count() ? line_starts_[static_cast<std::size_t>(line_no)]
                                           : text_.size();
  std::string_view v(text_.data() + start, end - start);
  while (!v.empty() && (v.back() == '\n' || v.back() == '\r')) v.remove_suffix(1);
  return v;
}

std::vector<std::string> SourceModel::lines() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(line_count()));
  for (int i = 1; i <= line_count(); ++i) out.emplace_back(line(i));
  return out;
}

std::size_t SourceModel::offset_of(int line_no, int col) const {
  if (line_no < 1) return 0;
  if (line_no > line_count()) return text_.size();
  return line_starts_[static_cast<std::size_t>(line_no - 1)] + static_cast<std::size_t>(col - 1);
}

SourceModel SourceModel::with_replacement(const Span& span, std::string_view replacement) const {
  return with_replacement(span.offset, static_cast<std::size_t>(span.len), replacement);
}

SourceModel SourceModel::with_replacement(std::size_t offset, std::size_t len,
                                          std::string_view replacement) const {
  if (offset > text_.size() || offset + len > text_.size())
    throw std::out_of_range("replacement outside source text");
  std::string next = text_.substr(0, offset);
  next.append(replacement);
  next.append(text_.substr(offset + len));
  return SourceModel(std::move(next));
}

}  // namespace dcsrepair
