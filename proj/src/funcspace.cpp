#include "specshift/funcspace.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "specshift/errors.hpp"

namespace specshift {

namespace {

constexpr int kUnlimitedOrder = std::numeric_limits<int>::max() / 2;

// Falling factorial j (j-1) ... (j-k+1) as a double.
double falling(int j, int k) {
  double r = 1.0;
  for (int m = 0; m < k; ++m) r *= double(j - m);
  return r;
}

double factorial(int k) { return falling(k, k); }

}  // namespace

struct SmoothFunction::Impl {
  FunctionFamily family;
  unsigned tags = 0;
  int max_order = kUnlimitedOrder;
  std::string spec;

  // polynomial
  std::vector<Complex> coeffs;
  // exponential
  Complex frequency;
  // gaussian
  double center = 0.0, width = 1.0;
  // rational
  std::vector<std::pair<Complex, Complex>> pole_residues;
  // combination
  std::vector<std::pair<Complex, SmoothFunction>> terms;

  Complex eval(double t, int k) const;
};

Complex SmoothFunction::Impl::eval(double t, int k) const {
  switch (family) {
    case FunctionFamily::Polynomial: {
      // k-th derivative: sum_{j>=k} c_j * j!/(j-k)! * t^{j-k}, Horner form.
      const int d = int(coeffs.size()) - 1;
      if (k > d) return 0.0;
      Complex acc = coeffs[d] * falling(d, k);
      for (int j = d - 1; j >= k; --j) acc = acc * t + coeffs[j] * falling(j, k);
      return acc;
    }
    case FunctionFamily::Exponential: {
      const Complex is = Complex(0, 1) * frequency;
      Complex scale = 1.0;
      for (int m = 0; m < k; ++m) scale *= is;
      return scale * std::exp(is * t);
    }
    case FunctionFamily::Gaussian: {
      // d^k/dt^k e^{-z^2} = (-1/w)^k H_k(z) e^{-z^2},  z = (t-c)/w,
      // with H_k the physicists' Hermite polynomials.
      const double z = (t - center) / width;
      double hk = 1.0, hkm1 = 0.0;
      for (int m = 0; m < k; ++m) {
        const double next = 2.0 * z * hk - 2.0 * double(m) * hkm1;
        hkm1 = hk;
        hk = next;
      }
      double scale = 1.0;
      for (int m = 0; m < k; ++m) scale *= -1.0 / width;
      return scale * hk * std::exp(-z * z);
    }
    case FunctionFamily::Rational: {
      // d^k/dt^k r/(t-q) = r * (-1)^k k! (t-q)^{-(k+1)}
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double kfac = factorial(k);
      Complex acc = 0.0;
      for (const auto& [pole, residue] : pole_residues) {
        const Complex d = t - pole;
        Complex dpow = d;
        for (int m = 0; m < k; ++m) dpow *= d;
        acc += residue * sign * kfac / dpow;
      }
      return acc;
    }
    case FunctionFamily::Combination: {
      Complex acc = 0.0;
      for (const auto& [scalar, fn] : terms) acc += scalar * fn.eval_derivative(t, k);
      return acc;
    }
  }
  return 0.0;
}

SmoothFunction::SmoothFunction(std::shared_ptr<const Impl> impl, int shift)
    : impl_(std::move(impl)), order_shift_(shift) {}

Complex SmoothFunction::eval_derivative(double t, int order) const {
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (order + order_shift_ > impl_->max_order)
    throw std::invalid_argument("derivative order exceeds max_order of the function");
  return impl_->eval(t, order + order_shift_);
}

SmoothFunction SmoothFunction::derivative(int shift) const {
  if (shift < 0) throw std::invalid_argument("derivative shift must be nonnegative");
  return SmoothFunction(impl_, order_shift_ + shift);
}

int SmoothFunction::max_order() const {
  const int m = impl_->max_order - order_shift_;
  return m < 0 ? 0 : m;
}

SmoothFunction SmoothFunction::with_max_order(int cap) const {
  if (cap < 0) throw std::invalid_argument("max_order cap must be nonnegative");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->max_order = cap;
  return SmoothFunction(std::move(impl), order_shift_);
}

FunctionFamily SmoothFunction::family() const { return impl_->family; }
unsigned SmoothFunction::class_tags() const { return impl_->tags; }
const std::string& SmoothFunction::spec() const { return impl_->spec; }

std::string format_complex(Complex z) {
  char buf[64];
  auto fmt = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  if (z.imag() == 0.0) return fmt(z.real());
  std::string im = fmt(z.imag()) + "i";
  if (z.real() == 0.0) return im;
  if (z.imag() > 0.0) return fmt(z.real()) + "+" + im;
  return fmt(z.real()) + im;  // sign carried by the imaginary literal
}

SmoothFunction SmoothFunction::polynomial(std::vector<Complex> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  auto impl = std::make_shared<Impl>();
  impl->family = FunctionFamily::Polynomial;
  impl->tags = 0;  // unbounded, not in Wp/R
  impl->coeffs = std::move(coefficients);
  std::string s = "poly:";
  for (size_t i = 0; i < impl->coeffs.size(); ++i) {
    if (i) s += ',';
    s += format_complex(impl->coeffs[i]);
  }
  impl->spec = std::move(s);
  return SmoothFunction(std::move(impl), 0);
}

SmoothFunction SmoothFunction::exponential(Complex frequency) {
  auto impl = std::make_shared<Impl>();
  impl->family = FunctionFamily::Exponential;
  impl->tags = (frequency.imag() == 0.0) ? kClassWp : 0u;
  impl->frequency = frequency;
  impl->spec = "exp:" + format_complex(frequency);
  return SmoothFunction(std::move(impl), 0);
}

SmoothFunction SmoothFunction::gaussian(double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  auto impl = std::make_shared<Impl>();
  impl->family = FunctionFamily::Gaussian;
  impl->tags = kClassWp;
  impl->center = center;
  impl->width = width;
  impl->spec = "gauss:" + format_complex(center) + "," + format_complex(width);
  return SmoothFunction(std::move(impl), 0);
}

SmoothFunction SmoothFunction::rational(std::vector<std::pair<Complex, Complex>> pole_residues) {
  if (pole_residues.empty()) throw std::invalid_argument("rational needs at least one pole");
  for (const auto& [pole, residue] : pole_residues) {
    (void)residue;
    if (pole.imag() == 0.0) throw std::invalid_argument("rational poles must be nonreal");
  }
  auto impl = std::make_shared<Impl>();
  impl->family = FunctionFamily::Rational;
  impl->tags = kClassR | kClassRb;
  impl->pole_residues = std::move(pole_residues);
  if (impl->pole_residues.size() == 1 && impl->pole_residues[0].second == Complex(1.0)) {
    impl->spec = "rat:" + format_complex(impl->pole_residues[0].first);
  } else {
    std::string s = "sum:(";
    for (size_t i = 0; i < impl->pole_residues.size(); ++i) {
      if (i) s += ';';
      s += format_complex(impl->pole_residues[i].second) + "*rat:" +
           format_complex(impl->pole_residues[i].first);
    }
    impl->spec = s + ")";
  }
  return SmoothFunction(std::move(impl), 0);
}

SmoothFunction SmoothFunction::combination(std::vector<std::pair<Complex, SmoothFunction>> terms) {
  if (terms.empty()) throw std::invalid_argument("combination needs at least one term");
  auto impl = std::make_shared<Impl>();
  impl->family = FunctionFamily::Combination;
  unsigned tags = ~0u;
  int max_order = kUnlimitedOrder;
  std::string s = "sum:(";
  for (size_t i = 0; i < terms.size(); ++i) {
    tags &= terms[i].second.class_tags();
    max_order = std::min(max_order, terms[i].second.max_order());
    if (i) s += ';';
    s += format_complex(terms[i].first) + "*" + terms[i].second.spec();
  }
  impl->tags = tags;
  impl->max_order = max_order;
  impl->terms = std::move(terms);
  impl->spec = s + ")";
  return SmoothFunction(std::move(impl), 0);
}

// ---------------------------------------------------------------------------
// Mini-language parser
// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real_literal(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);  // from_chars rejects it
  if (s.empty()) throw ParseError("empty numeric literal");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad numeric literal: '" + std::string(s) + "'");
  return value;
}

// Accepts 1, -2.5, i, -i, 2i, 1+2i, 1.5-0.5i, 1e-3+2e2i.
Complex parse_complex_literal(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw ParseError("empty complex literal");
  // Find a '+'/'-' that separates real and imaginary parts: not the leading
  // sign and not part of an exponent.
  size_t split = std::string_view::npos;
  for (size_t i = 1; i < s.size(); ++i) {
    const char c = s[i];
    if ((c == '+' || c == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  }
  auto parse_imag = [](std::string_view part) {
    part = trim(part);
    if (part.empty() || part.back() != 'i')
      throw ParseError("imaginary part must end in 'i': '" + std::string(part) + "'");
    part.remove_suffix(1);
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real_literal(part);
  };
  if (split != std::string_view::npos) {
    const double re = parse_real_literal(s.substr(0, split));
    std::string_view rest = s.substr(split);  // keeps the sign
    return Complex(re, parse_imag(rest));
  }
  if (s.back() == 'i') return Complex(0.0, parse_imag(s));
  return Complex(parse_real_literal(s), 0.0);
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

SmoothFunction parse_base_spec(std::string_view s);

SmoothFunction parse_term(std::string_view s) {
  s = trim(s);
  // Optional complex scalar prefix a*spec. A '*' is a prefix separator only
  // when it occurs before the family's ':'.
  const size_t star = s.find('*');
  const size_t colon = s.find(':');
  if (star != std::string_view::npos && (colon == std::string_view::npos || star < colon)) {
    const Complex scalar = parse_complex_literal(s.substr(0, star));
    SmoothFunction fn = parse_base_spec(s.substr(star + 1));
    return SmoothFunction::combination({{scalar, std::move(fn)}});
  }
  return parse_base_spec(s);
}

SmoothFunction parse_base_spec(std::string_view s) {
  s = trim(s);
  const size_t colon = s.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("function spec needs a family tag: '" + std::string(s) + "'");
  const std::string_view tag = s.substr(0, colon);
  const std::string_view body = s.substr(colon + 1);
  try {
    if (tag == "poly") {
      std::vector<Complex> coeffs;
      for (auto part : split_top_level(body, ',')) coeffs.push_back(parse_complex_literal(part));
      return SmoothFunction::polynomial(std::move(coeffs));
    }
    if (tag == "exp") return SmoothFunction::exponential(parse_complex_literal(body));
    if (tag == "gauss") {
      const auto parts = split_top_level(body, ',');
      if (parts.size() != 2) throw ParseError("gauss spec needs center,width");
      return SmoothFunction::gaussian(parse_real_literal(parts[0]), parse_real_literal(parts[1]));
    }
    if (tag == "rat") {
      return SmoothFunction::rational({{parse_complex_literal(body), Complex(1.0)}});
    }
    if (tag == "sum") {
      std::string_view inner = trim(body);
      if (inner.size() < 2 || inner.front() != '(' || inner.back() != ')')
        throw ParseError("sum spec needs a parenthesized list");
      inner = inner.substr(1, inner.size() - 2);
      std::vector<std::pair<Complex, SmoothFunction>> terms;
      for (auto part : split_top_level(inner, ';')) {
        part = trim(part);
        if (part.empty()) throw ParseError("empty term in sum spec");
        const size_t star = part.find('*');
        const size_t tcolon = part.find(':');
        if (star != std::string_view::npos &&
            (tcolon == std::string_view::npos || star < tcolon)) {
          terms.emplace_back(parse_complex_literal(part.substr(0, star)),
                             parse_base_spec(part.substr(star + 1)));
        } else {
          terms.emplace_back(Complex(1.0), parse_base_spec(part));
        }
      }
      return SmoothFunction::combination(std::move(terms));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid function spec: ") + e.what());
  }
  throw ParseError("unknown function family: '" + std::string(tag) + "'");
}

}  // namespace

SmoothFunction parse_function_spec(std::string_view spec) { return parse_term(spec); }

}  // namespace specshift
