#include "nfold/run_log.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace nfold {

const char* const kTraceHeader =
    "run_id,instance_id,Nt,delta,gc,gamma,outer_iter,inner_iter,lambda,"
    "lambda_exhausted,step_cost,objective,chosen,elapsed_ms,early_terminated";
const char* const kSummaryHeader =
    "run_id,instance_id,Nt,delta,gc,gamma,final_objective,reference_optimum,"
    "gap,gap_kind,outer_iters,inner_iters,total_ms";

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Identifiers are written verbatim, so they must not need quoting.
void check_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos) {
    throw FormatError("CSV field \"" + s + "\" contains a reserved character");
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

bool getline_lf(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

Int to_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("expected integer, got \"" + s + "\"");
  }
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw FormatError("expected number, got \"" + s + "\"");
  }
}

void write_key(std::ostream& out, const RunKey& key) {
  check_field(key.run_id);
  check_field(key.instance_id);
  check_field(key.gamma);
  out << key.run_id << ',' << key.instance_id << ',' << key.nt << ','
      << key.delta << ',' << key.gc << ',' << key.gamma;
}

RunKey read_key(const std::vector<std::string>& f) {
  RunKey key;
  key.run_id = f[0];
  key.instance_id = f[1];
  key.nt = static_cast<std::size_t>(to_int(f[2]));
  key.delta = to_int(f[3]);
  key.gc = to_int(f[4]);
  key.gamma = f[5];
  return key;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!getline_lf(in, line) || line != header) {
    throw FormatError("unexpected CSV header: \"" + line + "\"");
  }
}

}  // namespace

std::string gap_kind_name(GapKind kind) {
  return kind == GapKind::exact ? "exact" : "relative";
}

void write_trace_csv(std::ostream& out, const RunKey& key, const RunLog& log) {
  out << kTraceHeader << '\n';
  for (const InnerRecord& rec : log.inner) {
    write_key(out, key);
    out << ',' << rec.outer_iter << ',' << rec.inner_iter << ',' << rec.lambda
        << ',' << rec.lambda_exhausted << ',' << rec.step_cost << ','
        << rec.objective << ',' << (rec.chosen ? 1 : 0) << ','
        << fixed3(rec.elapsed_ms) << ',' << (rec.early_terminated ? 1 : 0)
        << '\n';
  }
}

void write_summary_header(std::ostream& out) { out << kSummaryHeader << '\n'; }

void write_summary_row(std::ostream& out, const SummaryRow& row) {
  write_key(out, row.key);
  out << ',' << row.final_objective << ',' << row.reference_optimum << ','
      << row.gap << ',' << gap_kind_name(row.gap_kind) << ','
      << row.outer_iters << ',' << row.inner_iters << ','
      << fixed3(row.total_ms) << '\n';
}

ParsedTrace read_trace_csv(std::istream& in) {
  expect_header(in, kTraceHeader);
  ParsedTrace out;
  std::string line;
  bool first = true;
  while (getline_lf(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 15) {
      throw FormatError("trace row has " + std::to_string(f.size()) +
                        " fields, expected 15");
    }
    RunKey key = read_key(f);
    if (first) {
      out.key = key;
      first = false;
    } else if (!(key == out.key)) {
      throw FormatError("trace mixes several runs");
    }
    InnerRecord rec;
    rec.outer_iter = static_cast<std::size_t>(to_int(f[6]));
    rec.inner_iter = static_cast<std::size_t>(to_int(f[7]));
    rec.lambda = to_int(f[8]);
    rec.lambda_exhausted = to_int(f[9]);
    rec.step_cost = to_int(f[10]);
    rec.objective = to_int(f[11]);
    rec.chosen = to_int(f[12]) != 0;
    rec.elapsed_ms = to_double(f[13]);
    rec.early_terminated = to_int(f[14]) != 0;
    out.inner.push_back(rec);
  }
  return out;
}

std::vector<OuterRecord> outer_records_from_trace(
    const std::vector<InnerRecord>& inner) {
  std::vector<OuterRecord> out;
  for (const InnerRecord& rec : inner) {
    if (rec.chosen) out.push_back({rec.outer_iter, rec.objective});
  }
  return out;
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  expect_header(in, kSummaryHeader);
  std::vector<SummaryRow> out;
  std::string line;
  while (getline_lf(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 13) {
      throw FormatError("summary row has " + std::to_string(f.size()) +
                        " fields, expected 13");
    }
    SummaryRow row;
    row.key = read_key(f);
    row.final_objective = to_int(f[6]);
    row.reference_optimum = to_int(f[7]);
    row.gap = to_int(f[8]);
    if (f[9] == "exact") {
      row.gap_kind = GapKind::exact;
    } else if (f[9] == "relative") {
      row.gap_kind = GapKind::relative;
    } else {
      throw FormatError("unknown gap_kind \"" + f[9] + "\"");
    }
    row.outer_iters = static_cast<std::size_t>(to_int(f[10]));
    row.inner_iters = static_cast<std::size_t>(to_int(f[11]));
    row.total_ms = to_double(f[12]);
    out.push_back(row);
  }
  return out;
}

void write_text_log(std::ostream& out, const RunKey& key, Int raw_max_coef,
                    const RunLog& log) {
  out << "run " << key.run_id << "\n";
  out << "instance " << key.instance_id << " Nt=" << key.nt
      << " delta=" << key.delta << " max_coefficient=" << raw_max_coef
      << " gc=" << key.gc << " gamma=" << key.gamma << "\n";
  out << "start objective " << log.summary.start_objective << "\n";
  for (const InnerRecord& rec : log.inner) {
    out << "outer " << rec.outer_iter << " inner " << rec.inner_iter
        << " lambda " << rec.lambda;
    if (rec.lambda_exhausted == 0) {
      out << " no augmenting step";
    } else {
      out << " exhausted " << rec.lambda_exhausted << " cost "
          << rec.step_cost << " objective " << rec.objective;
    }
    if (rec.chosen) out << " [chosen]";
    if (rec.early_terminated) out << " [early termination]";
    out << "\n";
  }
  out << "final objective " << log.summary.final_objective << " after "
      << log.summary.outer_iters << " outer / " << log.summary.inner_iters
      << " inner iterations (" << to_string(log.summary.stop) << ")\n";
}

}  // namespace nfold
