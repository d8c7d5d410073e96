#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace widom {

using Complex = std::complex<double>;

/// Dense polynomial with complex coefficients, constant term first.
/// Trailing zero coefficients are trimmed so degree() is exact; the zero
/// polynomial has degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial monomial(int k, Complex c = 1.0);
  static Polynomial constant(Complex c) { return Polynomial(std::vector<Complex>{c}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  Complex coefficient(int k) const;
  Complex leading() const;

  Complex operator()(Complex z) const;
  /// sum_k |c_k| |z|^k, the natural magnitude for residuals of p(z).
  double scale(Complex z) const;

  Polynomial derivative() const;
  bool is_real(double tol = 0.0) const;

  /// Quotient of division by (z - root); the remainder is dropped.
  Polynomial deflate(Complex root) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(Complex c) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

/// outer(inner(z)) as a polynomial.
Polynomial compose(const Polynomial& outer, const Polynomial& inner);

/// Polynomial with leading coefficient exactly 1.
class MonicPoly {
 public:
  /// Throws InvalidArgument unless the last coefficient is exactly 1.
  explicit MonicPoly(std::vector<Complex> coeffs);
  /// z^n.
  static MonicPoly power(int n);
  /// p / lead(p).
  static MonicPoly normalized(const Polynomial& p);

  int degree() const { return poly_.degree(); }
  const std::vector<Complex>& coefficients() const { return poly_.coefficients(); }
  const Polynomial& polynomial() const { return poly_; }
  Complex operator()(Complex z) const { return poly_(z); }

  /// Values on the nodes of the measure this polynomial was computed for.
  const std::optional<std::vector<Complex>>& node_values() const { return node_values_; }
  MonicPoly with_node_values(std::vector<Complex> values) const;

 private:
  explicit MonicPoly(Polynomial p) : poly_(std::move(p)) {}
  Polynomial poly_;
  std::optional<std::vector<Complex>> node_values_;
};

/// Parses "1,-2.5,3+4i,-i" (constant term first).
Polynomial parse_polynomial(const std::string& text);
Complex parse_complex(const std::string& text);

}  // namespace widom
