#include "omv/matrix.hpp"

#include <sstream>

namespace omv {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

Integer bareiss_determinant(const IntMatrix& m) {
  if (!m.is_square()) throw Error("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      a.swap_rows(k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = v;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

RatMatrix rational_inverse(const IntMatrix& m) {
  if (!m.is_square()) throw Error("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix a = to_rational(m);
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) throw Error("matrix is singular");
    a.swap_rows(c, piv);
    inv.swap_rows(c, piv);
    const Rational p = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= p;
      inv(c, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      const Rational f = -a(i, c);
      a.add_row(i, c, f);
      inv.add_row(i, c, f);
    }
  }
  return inv;
}

namespace {

// Floor division keeping remainders in [0, |d|).
Integer floor_div(const Integer& a, const Integer& d) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
  return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  IntMatrix left = IntMatrix::identity(r);
  IntMatrix left_inv = IntMatrix::identity(r);
  IntMatrix right = IntMatrix::identity(c);

  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    a.add_row(dst, src, f);
    left.add_row(dst, src, f);
    left_inv.add_col(src, dst, -f);
  };
  auto row_swap = [&](std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    left.swap_rows(x, y);
    left_inv.swap_cols(x, y);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    a.add_col(dst, src, f);
    right.add_col(dst, src, f);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    right.swap_cols(x, y);
  };

  const std::size_t steps = std::min(r, c);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      bool found = false;
      std::size_t pi = t, pj = t;
      Integer best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j) {
          if (a(i, j) == 0) continue;
          Integer v = abs(a(i, j));
          if (!found || v < best) {
            best = v;
            pi = i;
            pj = j;
            found = true;
          }
        }
      if (!found) break;
      row_swap(t, pi);
      col_swap(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (a(i, t) == 0) continue;
        row_add(i, t, -floor_div(a(i, t), a(t, t)));
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (a(t, j) == 0) continue;
        col_add(j, t, -floor_div(a(t, j), a(t, t)));
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // divisibility condition on the rest of the block
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == r) break;
      row_add(t, bad, Integer(1));
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < c; ++j) a(t, j) = -a(t, j);
      for (std::size_t j = 0; j < r; ++j) left(t, j) = -left(t, j);
      for (std::size_t i = 0; i < r; ++i) left_inv(i, t) = -left_inv(i, t);
    }
  }

  SmithForm out;
  out.diagonal.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) out.diagonal.push_back(a(t, t));
  out.left = std::move(left);
  out.left_inverse = std::move(left_inv);
  out.right = std::move(right);
  return out;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ",";
    os << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      os << m(i, j).get_str();
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace omv
