#include "widom/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "widom/error.hpp"

namespace widom {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs.begin(), coeffs.end()) {
  trim();
}

Polynomial Polynomial::monomial(int k, Complex c) {
  std::vector<Complex> v(static_cast<size_t>(k) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
}

Complex Polynomial::coefficient(int k) const {
  return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Complex(0.0);
}

Complex Polynomial::leading() const { return coeffs_.empty() ? Complex(0.0) : coeffs_.back(); }

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::scale(Complex z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

bool Polynomial::is_real(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](Complex c) { return std::abs(c.imag()) <= tol; });
}

Polynomial Polynomial::deflate(Complex root) const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> q(coeffs_.size() - 1);
  Complex carry = 0.0;
  for (size_t k = coeffs_.size() - 1; k >= 1; --k) {
    carry = carry * root + coeffs_[k];
    q[k - 1] = carry;
  }
  return Polynomial(std::move(q));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Complex> r(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (size_t k = 0; k < coeffs_.size(); ++k) r[k] += coeffs_[k];
  for (size_t k = 0; k < o.coeffs_.size(); ++k) r[k] += o.coeffs_[k];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Complex(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Complex> r(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(Complex c) const {
  std::vector<Complex> r = coeffs_;
  for (auto& x : r) x *= c;
  return Polynomial(std::move(r));
}

std::string Polynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    if (k) out += ",";
    const Complex c = coeffs_[k];
    if (c.imag() == 0.0) {
      out += fmt::format("{:.15g}", c.real());
    } else {
      out += fmt::format("{:.15g}{:+.15g}i", c.real(), c.imag());
    }
  }
  return out;
}

Polynomial compose(const Polynomial& outer, const Polynomial& inner) {
  Polynomial acc;
  const auto& c = outer.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * inner + Polynomial::constant(*it);
  return acc;
}

MonicPoly::MonicPoly(std::vector<Complex> coeffs) : poly_(std::move(coeffs)) {
  if (poly_.is_zero() || poly_.leading() != Complex(1.0))
    throw InvalidArgument("monic polynomial must have leading coefficient exactly 1");
}

MonicPoly MonicPoly::power(int n) { return MonicPoly(Polynomial::monomial(n)); }

MonicPoly MonicPoly::normalized(const Polynomial& p) {
  if (p.is_zero()) throw InvalidArgument("cannot normalize the zero polynomial");
  std::vector<Complex> c = p.coefficients();
  const Complex lead = c.back();
  for (auto& x : c) x /= lead;
  c.back() = 1.0;
  return MonicPoly(Polynomial(std::move(c)));
}

MonicPoly MonicPoly::with_node_values(std::vector<Complex> values) const {
  MonicPoly copy = *this;
  copy.node_values_ = std::move(values);
  return copy;
}

Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InvalidArgument("empty coefficient");
  auto parse_real = [&](const std::string& t) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad number '" + t + "' in '" + raw + "'");
    }
    if (used != t.size()) throw InvalidArgument("bad number '" + t + "' in '" + raw + "'");
    return v;
  };
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s), 0.0};
  s.pop_back();
  // Split "a+bi" at the last sign that is not part of an exponent.
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {parse_real(s.substr(0, split)), imag_part(s.substr(split))};
}

Polynomial parse_polynomial(const std::string& text) {
  std::vector<Complex> coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) coeffs.push_back(parse_complex(item));
  if (coeffs.empty()) throw InvalidArgument("empty coefficient list");
  return Polynomial(std::move(coeffs));
}

}  // namespace widom
