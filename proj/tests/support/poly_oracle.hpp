#pragma once

// Independent B-spline oracle: builds every basis function as explicit
// piecewise polynomials (monomials in t - span_left) by multiplying out the
// recursion symbolically, then evaluates with Horner's rule.

#include <algorithm>
#include <cstddef>
#include <vector>

namespace freeknot::testing {

class PiecewiseBasisOracle {
 public:
  PiecewiseBasisOracle(std::vector<double> expanded, int degree)
      : knots_(std::move(expanded)), degree_(degree) {
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
      if (knots_[k + 1] > knots_[k]) {
        spans_.push_back(k);
      }
    }
    const std::size_t n = knots_.size() - degree_ - 1;
    pieces_.assign(n, std::vector<Poly>(spans_.size()));
    for (std::size_t s = 0; s < spans_.size(); ++s) {
      const double c = knots_[spans_[s]];
      for (std::size_t q = 0; q < n; ++q) {
        pieces_[q][s] = build(q, degree_, spans_[s], c);
      }
    }
  }

  double value(std::size_t q, double t) const {
    // Span containing t, last span closed on the right.
    std::size_t s = spans_.size() - 1;
    for (std::size_t k = 0; k < spans_.size(); ++k) {
      if (t >= knots_[spans_[k]] && t < knots_[spans_[k] + 1]) {
        s = k;
        break;
      }
    }
    const Poly& p = pieces_[q][s];
    const double u = t - knots_[spans_[s]];
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) {
      acc = acc * u + p[k];
    }
    return acc;
  }

 private:
  using Poly = std::vector<double>;  // coefficients of u^0, u^1, ...

  // (alpha + beta u) * p
  static Poly times_linear(const Poly& p, double alpha, double beta) {
    Poly out(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      out[k] += alpha * p[k];
      out[k + 1] += beta * p[k];
    }
    return out;
  }

  static Poly add(Poly a, const Poly& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t k = 0; k < b.size(); ++k) a[k] += b[k];
    return a;
  }

  // Polynomial of B_{q,p} on the span starting at expanded index `span`, in u = t - c.
  Poly build(std::size_t q, int p, std::size_t span, double c) const {
    if (p == 0) {
      return Poly{q == span ? 1.0 : 0.0};
    }
    Poly out{0.0};
    const double lw = knots_[q + p] - knots_[q];
    if (lw > 0.0) {
      // (t - xi_q) / lw = ((c - xi_q) + u) / lw
      out = add(out, times_linear(build(q, p - 1, span, c), (c - knots_[q]) / lw, 1.0 / lw));
    }
    const double rw = knots_[q + p + 1] - knots_[q + 1];
    if (rw > 0.0) {
      // (xi_{q+p+1} - t) / rw = ((xi_{q+p+1} - c) - u) / rw
      out = add(out, times_linear(build(q + 1, p - 1, span, c), (knots_[q + p + 1] - c) / rw, -1.0 / rw));
    }
    return out;
  }

  std::vector<double> knots_;
  int degree_;
  std::vector<std::size_t> spans_;
  std::vector<std::vector<Poly>> pieces_;
};

}  // namespace freeknot::testing
