#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nfold/augment.hpp"

namespace nfold {

/// Identifies one solver run of the experiment grid.
struct RunKey {
  std::string run_id;
  std::string instance_id;
  std::size_t nt = 0;
  Int delta = 0;
  Int gc = 0;
  std::string gamma;

  friend bool operator==(const RunKey&, const RunKey&) = default;
};

enum class GapKind { exact, relative };

struct SummaryRow {
  RunKey key;
  Int final_objective = 0;
  Int reference_optimum = 0;
  Int gap = 0;
  GapKind gap_kind = GapKind::relative;
  std::size_t outer_iters = 0;
  std::size_t inner_iters = 0;
  double total_ms = 0;
};

extern const char* const kTraceHeader;
extern const char* const kSummaryHeader;

void write_trace_csv(std::ostream& out, const RunKey& key, const RunLog& log);
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const SummaryRow& row);

struct ParsedTrace {
  RunKey key;
  std::vector<InnerRecord> inner;
};

/// Reads back a trace written by write_trace_csv. Outer records can be
/// recovered with outer_records_from_trace.
ParsedTrace read_trace_csv(std::istream& in);
std::vector<OuterRecord> outer_records_from_trace(
    const std::vector<InnerRecord>& inner);

std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// Plain-text run log mirroring the trace rows.
void write_text_log(std::ostream& out, const RunKey& key, Int raw_max_coef,
                    const RunLog& log);

std::string gap_kind_name(GapKind kind);

}  // namespace nfold
