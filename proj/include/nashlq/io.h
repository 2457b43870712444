#ifndef NASHLQ_IO_H_
#define NASHLQ_IO_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nashlq/learning.h"

namespace nashlq {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

// Strict full-string parse; throws std::invalid_argument.
double ParseDouble(std::string_view text);

// Header: stage,k_1..k_n,J_1..J_n,g_1..g_n. LF line endings.
void WriteHistoryCsv(std::ostream& out, const std::vector<StageRecord>& history);
std::vector<StageRecord> ReadHistoryCsv(std::istream& in);

// One row per matrix row, no header.
void WriteMatrixCsv(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd ReadMatrixCsv(std::istream& in);

// Comma-joined FormatDouble of each entry.
std::string JoinRow(const Eigen::VectorXd& v);

}  // namespace nashlq

#endif  // NASHLQ_IO_H_
