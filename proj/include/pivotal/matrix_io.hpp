//
// Project     : pivotal
// Module      : matcore
// Description : matrix, vector and permutation file formats
//
// Binary layout: magic "PCDM", then rows and cols as little-endian uint64,
// then rows*cols IEEE binary64 values, little-endian, column-major.
// CSV layout: one matrix row per line, comma separated, 17 significant
// digits on write; lines starting with '#' are skipped on read.
// Permutations: one 0-based index per line.
//

#ifndef PIVOTAL_MATRIX_IO_HPP
#define PIVOTAL_MATRIX_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pivotal/dense_matrix.hpp"

namespace pivotal {

enum class MatrixFileFormat { Binary, Csv };

void write_matrix(const DenseMatrix& A, const std::filesystem::path& path,
                  MatrixFileFormat format);

DenseMatrix read_matrix(const std::filesystem::path& path,
                        MatrixFileFormat format);

// Sniffs the format: files opening with the binary magic are binary,
// everything else is parsed as CSV.
DenseMatrix read_matrix(const std::filesystem::path& path);

void write_permutation(const PermutationIndex& p,
                       const std::filesystem::path& path);
PermutationIndex read_permutation(const std::filesystem::path& path);

// Column vectors ride on the matrix formats as n-by-1 matrices.
void write_vector(std::span<const double> v, const std::filesystem::path& path,
                  MatrixFileFormat format);
std::vector<double> read_vector(const std::filesystem::path& path);

// 17 significant digits, shortest-form exponent ("%.17g").
std::string format_full(double v);

}  // namespace pivotal

#endif  // PIVOTAL_MATRIX_IO_HPP
