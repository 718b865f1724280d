#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace topicnet {

/// Shortest-safe round-trip form: 17 significant digits, `%.17g`.
std::string format_double(double value);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(std::string_view raw);

/// Splits one CSV record; understands double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

/// Matrix file: a header row `corner,col_1,...` then one `row_label,v,...`
/// row per matrix row, values written with format_double.
struct LabeledMatrix {
  std::string corner = "topic";
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Eigen::MatrixXd values;
};

std::string to_csv(const LabeledMatrix& m);
/// Throws ParseError naming `source` and the line.
LabeledMatrix parse_matrix_csv(std::string_view text, std::string_view source = "<matrix>");

/// `topic_1` .. `topic_n`.
std::vector<std::string> topic_labels(Eigen::Index n);
/// `dim_1` .. `dim_n`.
std::vector<std::string> dim_labels(Eigen::Index n);

std::string read_file(const std::filesystem::path& path);
/// Writes through `<path>.tmp` and renames into place; creates parent dirs.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

void write_matrix_csv(const std::filesystem::path& path, const LabeledMatrix& m);
LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace topicnet
