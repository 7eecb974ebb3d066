#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "specshift/spectral.hpp"

namespace specshift {

/// Matrix file format: {"n": integer, "re": n x n array, "im": n x n array};
/// a missing "im" means zero imaginary part. Hermitianity is validated on
/// load per the HermitianOperator tolerance.
HermitianOperator matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const HermitianOperator& H);
HermitianOperator load_matrix(const std::string& path);
void save_matrix(const HermitianOperator& H, const std::string& path);

/// Piecewise polynomial format: {"breakpoints": [...], "pieces": [[...]],
/// "left_value": v, "right_value": v} with complex values encoded as
/// [re, im] and bare numbers accepted as real.
nlohmann::json pp_to_json(const PiecewisePolynomial& P);
PiecewisePolynomial pp_from_json(const nlohmann::json& j);
PiecewisePolynomial load_pp(const std::string& path);
void save_pp(const PiecewisePolynomial& P, const std::string& path);

/// CSV emission: header t,eta_re,eta_im and m uniform samples on [a, b].
void write_density_csv(const PiecewisePolynomial& P, double a, double b, int m,
                       std::ostream& out);

/// Writes through a temp file in the same directory, renaming on success, so
/// failure paths leave no partial output.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace specshift
