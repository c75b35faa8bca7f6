#include "dcsrepair/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "dcsrepair/lexer.hpp"

namespace dcsrepair {

Ratio Ratio::of(long long num, long long den) {
  if (den == 0) return Ratio{0, 1};
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Ratio{num, den};
}

Ratio Ratio::operator+(const Ratio& other) const {
  return Ratio::of(num * other.den + other.num * den, den * other.den);
}

Ratio Ratio::operator/(long long divisor) const { return Ratio::of(num, den * divisor); }

Metrics compute_metrics(const Counts& c) {
  Metrics m;
  long long total = c.total();
  if (total > 0) m.accuracy = Ratio::of(c.tp + c.tn, total);
  if (c.tp + c.fp > 0) m.precision = Ratio::of(c.tp, c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = Ratio::of(c.tp, c.tp + c.fn);
  if (m.precision && m.recall && c.tp + c.tp + c.fp + c.fn > 0 &&
      (m.precision->num != 0 || m.recall->num != 0)) {
    // 2PR/(P+R) collapses to 2TP / (2TP + FP + FN) on raw counts.
    m.f1 = Ratio::of(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  }
  return m;
}

MetricValue f1_from(const MetricValue& precision, const MetricValue& recall) {
  if (!precision || !recall) return std::nullopt;
  // 2PR/(P+R)
  long long pn = precision->num, pd = precision->den;
  long long rn = recall->num, rd = recall->den;
  long long sum_num = pn * rd + rn * pd;
  if (sum_num == 0) return std::nullopt;
  return Ratio::of(2 * pn * rn, sum_num);
}

std::string render_percent(const MetricValue& value) {
  if (!value) return "--";
  double pct = value->value() * 100.0;
  std::ostringstream out;
  out << static_cast<long long>(std::llround(pct)) << "%";
  return out.str();
}

std::string render_fraction(const MetricValue& value) {
  if (!value) return "--";
  double v = value->value();
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << v;
  return out.str();
}

// ---------------------------------------------------------------------------

std::string normalize_line(std::string_view line) {
  std::string out;
  bool in_space = true;  // also trims leading whitespace
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!in_space) out += ' ';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

bool lines_token_equivalent(std::string_view a, std::string_view b) {
  LexResult la = tokenize(a);
  LexResult lb = tokenize(b);
  if (la.stream.tokens.size() != lb.stream.tokens.size()) return false;
  for (std::size_t i = 0; i < la.stream.tokens.size(); ++i) {
    if (la.stream.tokens[i].kind != lb.stream.tokens[i].kind) return false;
    if (la.stream.tokens[i].lexeme != lb.stream.tokens[i].lexeme) return false;
  }
  return true;
}

std::optional<int> LineAlignment::repaired_for(int erroneous_index) const {
  for (const AlignedPair& p : pairs)
    if (p.erroneous && *p.erroneous == erroneous_index) return p.repaired;
  return std::nullopt;
}

LineAlignment align_lines(const SourceModel& erroneous, const SourceModel& repaired) {
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (int i = 1; i <= erroneous.line_count(); ++i) a.push_back(normalize_line(erroneous.line(i)));
  for (int i = 1; i <= repaired.line_count(); ++i) b.push_back(normalize_line(repaired.line(i)));
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());

  // L[i][j] = LCS length of suffixes a[i:], b[j:]
  std::vector<std::vector<int>> L(n + 1, std::vector<int>(m + 1, 0));
  for (int i = n - 1; i >= 0; --i)
    for (int j = m - 1; j >= 0; --j)
      L[i][j] = a[i] == b[j] ? L[i + 1][j + 1] + 1 : std::max(L[i + 1][j], L[i][j + 1]);

  // Canonical reconstruction: take a match whenever it is optimal, otherwise
  // advance on the erroneous side first.
  std::vector<std::pair<int, int>> anchors;
  int i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j] && L[i][j] == L[i + 1][j + 1] + 1) {
      anchors.emplace_back(i, j);
      ++i;
      ++j;
    } else if (L[i + 1][j] >= L[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }

  // Between anchors, pair the unmatched runs positionally; leftovers are
  // deletions/insertions.
  LineAlignment alignment;
  int prev_i = 0, prev_j = 0;
  auto emit_segment = [&](int end_i, int end_j) {
    int len_a = end_i - prev_i;
    int len_b = end_j - prev_j;
    int paired = std::min(len_a, len_b);
    for (int k = 0; k < paired; ++k)
      alignment.pairs.push_back(AlignedPair{prev_i + k, prev_j + k});
    for (int k = paired; k < len_a; ++k)
      alignment.pairs.push_back(AlignedPair{prev_i + k, std::nullopt});
    for (int k = paired; k < len_b; ++k)
      alignment.pairs.push_back(AlignedPair{std::nullopt, prev_j + k});
  };
  for (const auto& [ai, bj] : anchors) {
    emit_segment(ai, bj);
    alignment.pairs.push_back(AlignedPair{ai, bj});
    prev_i = ai + 1;
    prev_j = bj + 1;
  }
  emit_segment(n, m);
  return alignment;
}

const char* scoring_mode_name(ScoringMode mode) {
  return mode == ScoringMode::Identification ? "identification" : "correction";
}

LineClassificationReport classify(const SourceModel& erroneous, const SourceModel& repaired,
                                  const std::vector<MutationRecord>& records,
                                  const SourceModel& clean_ground_truth, ScoringMode mode) {
  const int n = erroneous.line_count();
  std::set<int> erroneous_lines;
  for (const MutationRecord& r : records) {
    if (r.line < 1 || r.line > n) throw RecordOutOfRange(r.line);
    erroneous_lines.insert(r.line);
  }

  LineAlignment alignment = align_lines(erroneous, repaired);

  LineClassificationReport report;
  report.mode = mode;
  report.per_line.reserve(static_cast<std::size_t>(n));

  for (int line = 1; line <= n; ++line) {
    bool is_erroneous = erroneous_lines.count(line) > 0;
    std::optional<int> counterpart = alignment.repaired_for(line - 1);
    bool modified;
    if (!counterpart) {
      modified = true;  // the line vanished: deletion counts as modification
    } else {
      modified = normalize_line(erroneous.line(line)) !=
                 normalize_line(repaired.line(*counterpart + 1));
    }
    bool fixed = false;
    if (counterpart && line <= clean_ground_truth.line_count()) {
      fixed = lines_token_equivalent(repaired.line(*counterpart + 1),
                                     clean_ground_truth.line(line));
    }

    LineLabel label;
    if (mode == ScoringMode::Identification) {
      if (is_erroneous) label = modified ? LineLabel::TP : LineLabel::FN;
      else label = modified ? LineLabel::FP : LineLabel::TN;
    } else {
      if (is_erroneous) label = (modified && fixed) ? LineLabel::TP : LineLabel::FN;
      else label = modified ? LineLabel::FP : LineLabel::TN;
    }
    switch (label) {
      case LineLabel::TP: ++report.counts.tp; break;
      case LineLabel::FP: ++report.counts.fp; break;
      case LineLabel::FN: ++report.counts.fn; break;
      case LineLabel::TN: ++report.counts.tn; break;
    }
    report.per_line.push_back(label);
  }
  report.metrics = compute_metrics(report.counts);
  return report;
}

bool line_fixed(const SourceModel& erroneous, const SourceModel& repaired,
                const SourceModel& clean_ground_truth, int line) {
  if (line < 1 || line > erroneous.line_count() || line > clean_ground_truth.line_count())
    return false;
  LineAlignment alignment = align_lines(erroneous, repaired);
  std::optional<int> counterpart = alignment.repaired_for(line - 1);
  if (!counterpart) return false;
  return lines_token_equivalent(repaired.line(*counterpart + 1), clean_ground_truth.line(line));
}

}  // namespace dcsrepair
