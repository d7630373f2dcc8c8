#pragma once

#include <string>

#include "rnla/types.hpp"

namespace rnla {

// MatrixMarket array/coordinate, general real, written with 17 significant
// digits so write-then-read round-trips bit-exactly.
Matrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const Matrix& A);

// One value per line (a header line "x" is tolerated); plain CSV.
Vector read_csv_vector(const std::string& path);
void write_csv_vector(const std::string& path, const Vector& v);

void write_csv_matrix(const std::string& path, const Matrix& A);

}  // namespace rnla
