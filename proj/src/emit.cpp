#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "towbandit/harness.hpp"

namespace towbandit {

namespace {

void write_file(const std::filesystem::path& dest, const std::string& body) {
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + dest.string());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("write failed: " + dest.string());
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void emit_csv(const AggregateCurve& curve, const std::filesystem::path& dest) {
  std::string body = "play,mean_cumulative_reward,mean_n_b\n";
  for (std::size_t t = 0; t < curve.mean_cum.size(); ++t) {
    body += std::to_string(t + 1);
    body += ',';
    body += format_double(curve.mean_cum[t]);
    body += ',';
    body += format_double(curve.mean_sub[t]);
    body += '\n';
  }
  write_file(dest, body);
}

void emit_csv(const RunTrace& trace, const std::filesystem::path& dest) {
  std::string body = "t,machine,reward,cum_reward,n_a,n_b,x_a\n";
  for (const PlayRecord& row : trace.rows) {
    body += std::to_string(row.t);
    body += ',';
    body += std::to_string(row.machine);
    body += ',';
    body += format_double(row.reward);
    body += ',';
    body += format_double(row.cum_reward);
    body += ',';
    body += std::to_string(row.n_a);
    body += ',';
    body += std::to_string(row.n_b);
    body += ',';
    body += format_double(row.x_a);
    body += '\n';
  }
  write_file(dest, body);
}

void emit_voltage_csv(const std::vector<VoltageRecord>& rows,
                      const std::filesystem::path& dest) {
  std::string body = "t,machine,reward,delta_v,v_k\n";
  for (const VoltageRecord& row : rows) {
    body += std::to_string(row.t);
    body += ',';
    body += std::to_string(row.machine);
    body += ',';
    body += format_double(row.reward);
    body += ',';
    body += format_double(row.delta_v);
    body += ',';
    body += format_double(row.v_k);
    body += '\n';
  }
  write_file(dest, body);
}

void emit_compare_csv(const CompareTable& table,
                      const std::filesystem::path& dest) {
  std::string body = "play";
  for (const std::string& name : table.names) {
    body += ',';
    body += name;
  }
  body += '\n';
  for (std::uint64_t t = 0; t < table.plays; ++t) {
    body += std::to_string(t + 1);
    for (const auto& column : table.columns) {
      body += ',';
      body += format_double(column[t]);
    }
    body += '\n';
  }
  write_file(dest, body);
}

AggregateCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  AggregateCurve curve;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty curve file: " + path.string());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');  // play index
    std::getline(row, field, ',');
    curve.mean_cum.push_back(std::strtod(field.c_str(), nullptr));
    std::getline(row, field, ',');
    curve.mean_sub.push_back(std::strtod(field.c_str(), nullptr));
  }
  return curve;
}

void emit_plot_script(const std::vector<std::string>& csv_paths,
                      const std::vector<std::string>& titles,
                      const std::filesystem::path& dest) {
  if (csv_paths.size() != titles.size()) {
    throw std::invalid_argument("emit_plot_script: one title per csv path");
  }
  std::string body;
  body += "# reward curves (gnuplot)\n";
  body += "set datafile separator ','\n";
  body += "set xlabel 'play'\n";
  body += "set ylabel 'mean cumulative reward'\n";
  body += "set key left top\n";
  body += "plot ";
  for (std::size_t i = 0; i < csv_paths.size(); ++i) {
    if (i > 0) body += ", \\\n     ";
    body += "'" + csv_paths[i] + "' skip 1 using 1:2 with lines title '" +
            titles[i] + "'";
  }
  body += '\n';
  write_file(dest, body);
}

}  // namespace towbandit
