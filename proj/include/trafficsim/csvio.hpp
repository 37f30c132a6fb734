#pragma once

#include <string>
#include <vector>

#include "trafficsim/lagrangian.hpp"
#include "trafficsim/montecarlo.hpp"

namespace traffic {

struct AccidentLogEntry {
  double t = 0.0;
  int event = 0;  // +1 birth, -1 dissolution
  int index = 0;  // 1-based accident slot
  double p = 0.0, s = 0.0, c = 0.0;
};

// Minimal deterministic CSV writer: '\n' newlines, shortest round-trip
// number formatting, no locale.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);  // throws std::runtime_error
  ~CsvWriter();

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& s);
  void end_row();

 private:
  struct Impl;
  Impl* impl_;
};

void write_accident_log(const std::string& path, const std::vector<AccidentLogEntry>& log);
void write_error_report(const std::string& path, const ErrorReport& rep);
void write_rates(const std::string& path,
                 const std::vector<std::tuple<double, std::string, double>>& rates);
void write_series(const std::string& path, const std::vector<SeriesRow>& series);
void write_bounds_report(const std::string& path, const std::vector<BoundReport>& reports);

}  // namespace traffic
