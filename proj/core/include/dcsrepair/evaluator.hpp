#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcsrepair/mutation.hpp"
#include "dcsrepair/source.hpp"

namespace dcsrepair {

// Exact rational, so metrics stay precise until render time.
struct Ratio {
  long long num = 0;
  long long den = 1;

  static Ratio of(long long num, long long den);
  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
  Ratio operator+(const Ratio& other) const;
  Ratio operator/(long long divisor) const;
  bool operator==(const Ratio& other) const { return num == other.num && den == other.den; }
};

using MetricValue = std::optional<Ratio>;  // nullopt renders as "--"

struct Counts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;
  long long total() const { return tp + fp + fn + tn; }
};

struct Metrics {
  MetricValue accuracy;
  MetricValue precision;  // undefined iff TP+FP = 0
  MetricValue recall;     // undefined iff TP+FN = 0
  MetricValue f1;         // undefined if either factor is, or P+R = 0
};

Metrics compute_metrics(const Counts& counts);
MetricValue f1_from(const MetricValue& precision, const MetricValue& recall);

// "82%" / "0.82" / "--"
std::string render_percent(const MetricValue& value);
std::string render_fraction(const MetricValue& value);

// ---------------------------------------------------------------------------
// Line alignment

struct AlignedPair {
  std::optional<int> erroneous;  // 0-based line index, nullopt = gap
  std::optional<int> repaired;
};

struct LineAlignment {
  std::vector<AlignedPair> pairs;
  // repaired counterpart of an erroneous line, nullopt when deleted
  std::optional<int> repaired_for(int erroneous_index) const;
};

std::string normalize_line(std::string_view line);
bool lines_token_equivalent(std::string_view a, std::string_view b);

// LCS over whitespace-normalized lines anchors unchanged lines; the runs
// between anchors pair up positionally, and leftovers pair with gaps.
LineAlignment align_lines(const SourceModel& erroneous, const SourceModel& repaired);

// ---------------------------------------------------------------------------
// Classification

enum class ScoringMode { Identification, Correction };
const char* scoring_mode_name(ScoringMode mode);

enum class LineLabel { TP, FP, FN, TN };

struct LineClassificationReport {
  ScoringMode mode = ScoringMode::Identification;
  Counts counts;
  std::vector<LineLabel> per_line;  // one label per erroneous-model line
  Metrics metrics;
};

class RecordOutOfRange : public std::runtime_error {
 public:
  explicit RecordOutOfRange(int line)
      : std::runtime_error("mutation record line " + std::to_string(line) +
                           " outside the erroneous model") {}
};

// Per line of the erroneous model: erroneous := hosts a record; modified :=
// aligned counterpart differs after normalization (or the line vanished);
// fixed := aligned counterpart is token-equivalent to the clean ground-truth
// line. Identification scores erroneous vs modified; correction additionally
// requires fixed for a TP.
LineClassificationReport classify(const SourceModel& erroneous, const SourceModel& repaired,
                                  const std::vector<MutationRecord>& records,
                                  const SourceModel& clean_ground_truth, ScoringMode mode);

// Whether `line` (1-based, shared by erroneous/clean) ends up token-equal to
// the clean ground truth in the repaired text.
bool line_fixed(const SourceModel& erroneous, const SourceModel& repaired,
                const SourceModel& clean_ground_truth, int line);

}  // namespace dcsrepair
