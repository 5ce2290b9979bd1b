#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hetkc/experiments.hpp"

namespace hetkc {

namespace {

constexpr const char* kSweepHeader = "experiment,sweep_value,k,trials,successes,prob";
constexpr const char* kReliabilityHeader = "experiment,deletions,k_design,trials,successes,prob";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::size_t parse_count(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s.front() == '-') {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_csv(std::ostream& os, const SweepSummary& s) {
  if (s.experiment.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument("experiment name may not contain commas or newlines");
  }
  os << (s.kind == SummaryKind::Sweep ? kSweepHeader : kReliabilityHeader) << '\n';
  for (const auto& r : s.rows) {
    os << s.experiment << ',';
    if (s.kind == SummaryKind::Sweep) {
      os << format_real(r.sweep_value);
    } else {
      os << static_cast<std::size_t>(r.sweep_value);
    }
    os << ',' << r.k << ',' << r.trials << ',' << r.successes << ',' << format_real(r.prob())
       << '\n';
  }
}

void emit_csv(const SweepSummary& summary, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(out, summary);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

SweepSummary parse_csv(std::istream& is) {
  SweepSummary s;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: missing header");
  if (line == kSweepHeader) {
    s.kind = SummaryKind::Sweep;
  } else if (line == kReliabilityHeader) {
    s.kind = SummaryKind::Reliability;
  } else {
    throw std::runtime_error("csv: unrecognized header '" + line + "'");
  }

  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 6 columns, got " +
                               std::to_string(f.size()));
    }
    if (s.rows.empty()) {
      s.experiment = f[0];
    } else if (f[0] != s.experiment) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": mixed experiment names");
    }
    SweepRow r;
    r.sweep_value = s.kind == SummaryKind::Sweep ? parse_real(f[1], line_no)
                                                  : static_cast<double>(parse_count(f[1], line_no));
    r.k = parse_count(f[2], line_no);
    r.trials = parse_count(f[3], line_no);
    r.successes = parse_count(f[4], line_no);
    parse_real(f[5], line_no);
    if (r.successes > r.trials) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": successes exceed trials");
    }
    s.rows.push_back(r);
  }
  return s;
}

}  // namespace hetkc
