#include "trafficsim/csvio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace traffic {

struct CsvWriter::Impl {
  std::ofstream out;
  bool first = true;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
}

CsvWriter::~CsvWriter() { delete impl_; }

CsvWriter& CsvWriter::cell(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return cell(std::string(buf, res.ptr));
}

CsvWriter& CsvWriter::cell(long long v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return cell(std::string(buf, res.ptr));
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (!impl_->first) impl_->out << ',';
  impl_->out << s;
  impl_->first = false;
  return *this;
}

void CsvWriter::end_row() {
  impl_->out << '\n';
  impl_->first = true;
}

void write_accident_log(const std::string& path, const std::vector<AccidentLogEntry>& log) {
  CsvWriter w(path);
  w.cell("t").cell("event").cell("j").cell("p").cell("s").cell("c");
  w.end_row();
  for (const auto& e : log) {
    w.cell(e.t).cell(e.event).cell(e.index).cell(e.p).cell(e.s).cell(e.c);
    w.end_row();
  }
}

void write_error_report(const std::string& path, const ErrorReport& rep) {
  CsvWriter w(path);
  w.cell("n").cell("dx").cell("err1").cell("err2").cell("err3").cell("err4");
  w.cell("se1").cell("se2").cell("se3").cell("se4");
  w.end_row();
  for (const auto& r : rep.rows) {
    w.cell(r.n).cell(r.dx).cell(r.err1).cell(r.err2).cell(r.err3).cell(r.err4);
    w.cell(r.se1).cell(r.se2).cell(r.se3).cell(r.se4);
    w.end_row();
  }
}

void write_rates(const std::string& path,
                 const std::vector<std::tuple<double, std::string, double>>& rates) {
  CsvWriter w(path);
  w.cell("dx").cell("metric").cell("rate");
  w.end_row();
  for (const auto& [dx, metric, rate] : rates) {
    w.cell(dx).cell(metric).cell(rate);
    w.end_row();
  }
}

void write_series(const std::string& path, const std::vector<SeriesRow>& series) {
  CsvWriter w(path);
  w.cell("n").cell("t").cell("log_err1").cell("log_err2").cell("log_err3").cell("log_err4");
  w.end_row();
  for (const auto& s : series) {
    auto log_or_nan = [](double v) { return v > 0.0 ? std::log10(v) : std::nan(""); };
    w.cell(s.n).cell(s.t);
    w.cell(log_or_nan(s.err1)).cell(log_or_nan(s.err2));
    w.cell(log_or_nan(s.err3)).cell(log_or_nan(s.err4));
    w.end_row();
  }
}

void write_bounds_report(const std::string& path, const std::vector<BoundReport>& reports) {
  nlohmann::json root = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json item;
    item["n"] = r.n_vehicles;
    item["T"] = r.T;
    item["dt"] = r.dt;
    item["L"] = r.L;
    item["eps"] = r.eps;
    item["eps_tilde"] = r.eps_tilde;
    item["lipschitz"] = r.lipschitz;
    item["w0_max"] = r.w0_max;
    item["max_w"] = r.max_w;
    item["min_w"] = r.min_w;
    item["violations"] = nlohmann::json::array();
    for (const auto& v : r.violations) {
      item["violations"].push_back({{"t", v.t},
                                    {"index", v.index},
                                    {"value", v.value},
                                    {"bound", v.bound},
                                    {"which", v.which}});
    }
    root.push_back(item);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << root.dump(2) << '\n';
}

}  // namespace traffic
