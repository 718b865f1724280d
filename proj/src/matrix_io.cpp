#include "topicnet/matrix_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "topicnet/error.hpp"

namespace topicnet {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::string csv_field(std::string_view raw) {
  if (raw.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(raw);
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string to_csv(const LabeledMatrix& m) {
  std::string out = csv_field(m.corner);
  for (const auto& c : m.col_labels) {
    out += ',';
    out += csv_field(c);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    out += csv_field(m.row_labels.at(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      out += ',';
      out += format_double(m.values(i, j));
    }
    out += '\n';
  }
  return out;
}

LabeledMatrix parse_matrix_csv(std::string_view text, std::string_view source) {
  LabeledMatrix m;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    auto fields = split_csv_line(line);
    if (!header_seen) {
      m.corner = fields.front();
      m.col_labels.assign(fields.begin() + 1, fields.end());
      header_seen = true;
      continue;
    }
    if (fields.size() != m.col_labels.size() + 1)
      throw ParseError(std::string(source), line_no,
                       fmt::format("expected {} fields, found {}", m.col_labels.size() + 1, fields.size()));
    m.row_labels.push_back(fields.front());
    std::vector<double> row;
    row.reserve(m.col_labels.size());
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const char* begin = fields[f].c_str();
      char* stop = nullptr;
      errno = 0;
      const double v = std::strtod(begin, &stop);
      if (stop == begin || *stop != '\0')
        throw ParseError(std::string(source), line_no, "not a number: `" + fields[f] + "`");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(std::string(source), 1, "missing header row");

  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.col_labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

std::vector<std::string> topic_labels(Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(fmt::format("topic_{}", i + 1));
  return out;
}

std::vector<std::string> dim_labels(Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(fmt::format("dim_{}", i + 1));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write on " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_matrix_csv(const std::filesystem::path& path, const LabeledMatrix& m) { write_file_atomic(path, to_csv(m)); }

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) { return parse_matrix_csv(read_file(path), path.string()); }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw NumericError("sha256 digest failed");
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

}  // namespace topicnet
