#include "nashlq/io.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nashlq {
namespace {

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, end);
}

double ParseDouble(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string JoinRow(const Eigen::VectorXd& v) {
  std::string row;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) row += ',';
    row += FormatDouble(v(i));
  }
  return row;
}

void WriteHistoryCsv(std::ostream& out,
                     const std::vector<StageRecord>& history) {
  const int n = history.empty() ? 0 : history.front().k.size();
  out << "stage";
  for (const char* prefix : {"k_", "J_", "g_"}) {
    for (int i = 1; i <= n; ++i) out << ',' << prefix << i;
  }
  out << '\n';
  for (const StageRecord& rec : history) {
    out << rec.stage << ',' << JoinRow(rec.k.k) << ',' << JoinRow(rec.J) << ','
        << JoinRow(rec.g) << '\n';
  }
}

std::vector<StageRecord> ReadHistoryCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty history");
  const auto header = SplitCommas(StripCr(line));
  if (header.empty() || header.front() != "stage" ||
      (header.size() - 1) % 3 != 0) {
    throw std::invalid_argument("malformed history header");
  }
  const int n = static_cast<int>((header.size() - 1) / 3);

  std::vector<StageRecord> history;
  while (std::getline(in, line)) {
    const std::string_view row = StripCr(line);
    if (row.empty()) continue;
    const auto fields = SplitCommas(row);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("history row has wrong field count");
    }
    StageRecord rec;
    rec.stage = static_cast<int>(ParseDouble(fields[0]));
    Eigen::VectorXd k(n);
    rec.J.resize(n);
    rec.g.resize(n);
    for (int i = 0; i < n; ++i) {
      k(i) = ParseDouble(fields[1 + i]);
      rec.J(i) = ParseDouble(fields[1 + n + i]);
      rec.g(i) = ParseDouble(fields[1 + 2 * n + i]);
    }
    rec.k = ActionProfile(std::move(k));
    history.push_back(std::move(rec));
  }
  return history;
}

void WriteMatrixCsv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << JoinRow(m.row(r).transpose()) << '\n';
  }
}

Eigen::MatrixXd ReadMatrixCsv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view row = StripCr(line);
    if (row.empty()) continue;
    std::vector<double> values;
    for (std::string_view field : SplitCommas(row)) {
      values.push_back(ParseDouble(field));
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw std::invalid_argument("ragged matrix rows");
    }
    rows.push_back(std::move(values));
  }
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace nashlq
