#include "specshift/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "specshift/errors.hpp"

namespace specshift {

namespace {

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ParseError("expected a number or [re, im] pair");
}

nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

HermitianOperator matrix_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("re"))
      throw ParseError("matrix record needs fields 'n' and 're'");
    const int n = j.at("n").get<int>();
    if (n < 1) throw ParseError("matrix dimension must be >= 1");
    const auto read_grid = [n](const nlohmann::json& grid, const char* name) {
      if (!grid.is_array() || int(grid.size()) != n)
        throw ParseError(std::string("field '") + name + "' must be an n x n array");
      std::vector<std::vector<double>> rows;
      for (const auto& row : grid) {
        if (!row.is_array() || int(row.size()) != n)
          throw ParseError(std::string("field '") + name + "' must be an n x n array");
        rows.push_back(row.get<std::vector<double>>());
      }
      return rows;
    };
    const auto re = read_grid(j.at("re"), "re");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = Complex(re[r][c], 0.0);
    if (j.contains("im")) {
      const auto im = read_grid(j.at("im"), "im");
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) += Complex(0.0, im[r][c]);
    }
    return HermitianOperator(std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed matrix record: ") + e.what());
  }
}

nlohmann::json matrix_to_json(const HermitianOperator& H) {
  const int n = H.dim();
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int r = 0; r < n; ++r) {
    nlohmann::json re_row = nlohmann::json::array(), im_row = nlohmann::json::array();
    for (int c = 0; c < n; ++c) {
      re_row.push_back(H.matrix()(r, c).real());
      im_row.push_back(H.matrix()(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return nlohmann::json{{"n", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

HermitianOperator load_matrix(const std::string& path) {
  return matrix_from_json(parse_json_file(path));
}

void save_matrix(const HermitianOperator& H, const std::string& path) {
  write_file_atomic(path, matrix_to_json(H).dump(2) + "\n");
}

nlohmann::json pp_to_json(const PiecewisePolynomial& P) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& piece : P.pieces()) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const Complex& c : piece) coeffs.push_back(complex_to_json(c));
    pieces.push_back(std::move(coeffs));
  }
  return nlohmann::json{{"breakpoints", std::vector<double>(P.breakpoints().begin(),
                                                            P.breakpoints().end())},
                        {"pieces", std::move(pieces)},
                        {"left_value", complex_to_json(P.left_value())},
                        {"right_value", complex_to_json(P.right_value())}};
}

PiecewisePolynomial pp_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("pieces") ||
        !j.contains("left_value") || !j.contains("right_value"))
      throw ParseError(
          "density record needs breakpoints, pieces, left_value and right_value");
    auto breakpoints = j.at("breakpoints").get<std::vector<double>>();
    std::vector<std::vector<Complex>> pieces;
    for (const auto& piece : j.at("pieces")) {
      std::vector<Complex> coeffs;
      for (const auto& c : piece) coeffs.push_back(complex_from_json(c));
      if (coeffs.empty()) throw ParseError("empty piece coefficient list");
      pieces.push_back(std::move(coeffs));
    }
    return PiecewisePolynomial(std::move(breakpoints), std::move(pieces),
                               complex_from_json(j.at("left_value")),
                               complex_from_json(j.at("right_value")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed density record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid density record: ") + e.what());
  }
}

PiecewisePolynomial load_pp(const std::string& path) {
  return pp_from_json(parse_json_file(path));
}

void save_pp(const PiecewisePolynomial& P, const std::string& path) {
  write_file_atomic(path, pp_to_json(P).dump(2) + "\n");
}

void write_density_csv(const PiecewisePolynomial& P, double a, double b, int m,
                       std::ostream& out) {
  if (m < 2 || !(a < b)) throw std::invalid_argument("grid needs m >= 2 and a < b");
  out << "t,eta_re,eta_im\n";
  char buf[128];
  for (int i = 0; i < m; ++i) {
    const double t = a + (b - a) * double(i) / double(m - 1);
    const Complex v = P(t);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", t, v.real(), v.imag());
    out << buf;
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw EvalError("cannot open output file: " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw EvalError("failed writing output file: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw EvalError("failed to move output into place: " + path);
  }
}

}  // namespace specshift
