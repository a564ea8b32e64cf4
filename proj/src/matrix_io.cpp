//
// Project     : pivotal
// Module      : matcore
// Description : binary and CSV matrix readers and writers
//

#include "pivotal/matrix_io.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace pivotal {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'D', 'M'};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>(v >> (8 * b));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& is, const std::string& name,
                      std::uint64_t offset) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8))
    throw ParseError(name + ": truncated header at byte " +
                     std::to_string(offset));
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | buf[b];
  return v;
}

void put_f64(std::ostream& os, double d) {
  put_u64(os, std::bit_cast<std::uint64_t>(d));
}

std::string fname(const std::filesystem::path& p) { return p.string(); }

[[noreturn]] void fail_open(const std::filesystem::path& p) {
  throw ParseError(fname(p) + ": cannot open file");
}

void write_binary(const DenseMatrix& A, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail_open(path);
  os.write(kMagic, 4);
  put_u64(os, A.rows());
  put_u64(os, A.cols());
  for (double v : A.data()) put_f64(os, v);
  if (!os) throw ParseError(fname(path) + ": write failed");
}

DenseMatrix read_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_open(path);
  const std::string name = fname(path);

  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError(name + ": bad magic at byte 0");
  const std::uint64_t rows = get_u64(is, name, 4);
  const std::uint64_t cols = get_u64(is, name, 12);
  if (rows != 0 && cols > std::numeric_limits<std::uint64_t>::max() / rows / 8)
    throw ParseError(name + ": header shape overflows payload size");

  DenseMatrix A(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t q = 0; q < A.data().size(); ++q) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8))
      throw ParseError(name + ": truncated payload at byte " +
                       std::to_string(20 + 8 * q));
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | buf[b];
    A.data()[q] = std::bit_cast<double>(v);
  }
  return A;
}

void write_csv(const DenseMatrix& A, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail_open(path);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (j) os << ',';
      os << format_full(A(i, j));
    }
    os << '\n';
  }
  if (!os) throw ParseError(fname(path) + ": write failed");
}

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

double parse_double(const std::string& token, const std::string& name,
                    std::size_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || (end && *end))
    throw ParseError(name + ":" + std::to_string(line_no) +
                     ": expected number, got '" + token + "'");
  return v;
}

DenseMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail_open(path);
  const std::string name = fname(path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line) || line[0] == '#') continue;

    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ','))
      row.push_back(parse_double(token, name, line_no));
    if (rows.empty())
      width = row.size();
    else if (row.size() != width)
      throw ParseError(name + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " fields, got " +
                       std::to_string(row.size()));
    rows.push_back(std::move(row));
  }

  DenseMatrix A(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) A(i, j) = rows[i][j];
  return A;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(const DenseMatrix& A, const std::filesystem::path& path,
                  MatrixFileFormat format) {
  if (format == MatrixFileFormat::Binary)
    write_binary(A, path);
  else
    write_csv(A, path);
}

DenseMatrix read_matrix(const std::filesystem::path& path,
                        MatrixFileFormat format) {
  return format == MatrixFileFormat::Binary ? read_binary(path)
                                            : read_csv(path);
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_open(path);
  char magic[4] = {0, 0, 0, 0};
  is.read(magic, 4);
  is.close();
  const bool binary = std::memcmp(magic, kMagic, 4) == 0;
  return read_matrix(path, binary ? MatrixFileFormat::Binary
                                  : MatrixFileFormat::Csv);
}

void write_permutation(const PermutationIndex& p,
                       const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail_open(path);
  for (std::size_t i = 0; i < p.size(); ++i) os << p[i] << '\n';
  if (!os) throw ParseError(fname(path) + ": write failed");
}

PermutationIndex read_permutation(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail_open(path);
  const std::string name = fname(path);

  std::vector<std::size_t> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line) || line[0] == '#') continue;
    const char* begin = line.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == begin || (end && *end) || line.find('-') != std::string::npos)
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": expected index, got '" + line + "'");
    entries.push_back(static_cast<std::size_t>(v));
  }
  try {
    return PermutationIndex(std::move(entries));
  } catch (const ParameterError& e) {
    throw ParseError(name + ": " + e.what());
  }
}

void write_vector(std::span<const double> v, const std::filesystem::path& path,
                  MatrixFileFormat format) {
  DenseMatrix A(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) A(i, 0) = v[i];
  write_matrix(A, path, format);
}

std::vector<double> read_vector(const std::filesystem::path& path) {
  const DenseMatrix A = read_matrix(path);
  if (A.cols() != 1)
    throw ParseError(fname(path) + ": expected a single column, got " +
                     std::to_string(A.cols()));
  return A.data();
}

}  // namespace pivotal
