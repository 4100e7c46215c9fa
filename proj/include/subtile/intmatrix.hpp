#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <string>
#include <vector>

// Square nonnegative integer matrices with exact arithmetic. Column j of
// a substitution matrix records how many copies of each prototile the
// subdivision of prototile j produces, so powers count tiles in
// supertiles and must never overflow or round.

namespace subtile {

using bigint = boost::multiprecision::cpp_int;

class intmatrix {
  public:
    explicit intmatrix(int n);
    static intmatrix identity(int n);
    static intmatrix from_rows(const std::vector<std::vector<long long>>& rows);

    int size() const { return n_; }
    bigint& at(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
    const bigint& at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

    intmatrix pow(unsigned l) const;
    std::vector<bigint> column(int j) const;
    bigint column_sum(int j) const;
    bigint one_norm() const;  // max column sum
    std::vector<double> to_doubles() const;  // row-major

    bool operator==(const intmatrix& o) const = default;

    // Positive power of the adjacency pattern within the Wielandt bound
    // (n-1)^2 + 1; true iff some power is entrywise positive.
    bool is_primitive() const;

    // Text form: first line n, then n rows of n entries.
    static intmatrix parse(std::istream& in);
    static intmatrix parse_file(const std::string& path);
    std::string to_text() const;

  private:
    int n_;
    std::vector<bigint> e_;
};

intmatrix operator*(const intmatrix& a, const intmatrix& b);

// Column j of M^l: per-type tile counts of an l-times subdivided type-j tile.
std::vector<bigint> power_column(const intmatrix& m, unsigned l, int j);

// Exact rank over the rationals by fraction-free (Bareiss) elimination.
int exact_rank(const std::vector<std::vector<bigint>>& m);

// p(M) for an integer-coefficient polynomial, lowest degree first.
intmatrix poly_eval(const intmatrix& m, const std::vector<long long>& coeffs_low_first);

}  // namespace subtile
