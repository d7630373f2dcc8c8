#include "rnla/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rnla {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty matrix file: " + path);
  bool coordinate = line.find("coordinate") != std::string::npos;
  if (line.rfind("%%MatrixMarket", 0) != 0)
    throw IoError("not a MatrixMarket file: " + path);
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream header(line);
  Index rows = 0, cols = 0;
  long long nnz = 0;
  header >> rows >> cols;
  if (coordinate) header >> nnz;
  Matrix A = Matrix::Zero(rows, cols);
  if (coordinate) {
    for (long long t = 0; t < nnz; ++t) {
      Index i, j;
      double v;
      in >> i >> j >> v;
      A(i - 1, j - 1) = v;
    }
  } else {
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) in >> A(i, j);
  }
  if (!in) throw IoError("truncated matrix file: " + path);
  return A;
}

void write_matrix_market(const std::string& path, const Matrix& A) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix file: " + path);
  out << "%%MatrixMarket matrix array real general\n";
  out << A.rows() << " " << A.cols() << "\n";
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i)
      out << format_double(A(i, j)) << "\n";
}

Vector read_csv_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vector file: " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    bool numeric = false;
    for (char c : line)
      if (std::isdigit(static_cast<unsigned char>(c))) numeric = true;
    if (!numeric) continue;  // header line
    vals.push_back(std::stod(line));
  }
  Vector v(static_cast<Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    v(static_cast<Index>(i)) = vals[i];
  return v;
}

void write_csv_vector(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write vector file: " + path);
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << "\n";
}

void write_csv_matrix(const std::string& path, const Matrix& A) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write csv file: " + path);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (j) out << ",";
      out << format_double(A(i, j));
    }
    out << "\n";
  }
}

}  // namespace rnla
