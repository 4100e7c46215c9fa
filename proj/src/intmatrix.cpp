#include "subtile/intmatrix.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subtile {

intmatrix::intmatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {
    if (n <= 0) throw std::invalid_argument("matrix size must be positive");
}

intmatrix intmatrix::identity(int n) {
    intmatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

intmatrix intmatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    int n = static_cast<int>(rows.size());
    intmatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("matrix must be square");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

intmatrix operator*(const intmatrix& a, const intmatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
    int n = a.size();
    intmatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const bigint& aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

intmatrix intmatrix::pow(unsigned l) const {
    intmatrix r = identity(n_);
    intmatrix base = *this;
    while (l > 0) {
        if (l & 1u) r = r * base;
        l >>= 1u;
        if (l > 0) base = base * base;
    }
    return r;
}

std::vector<bigint> intmatrix::column(int j) const {
    std::vector<bigint> c(n_);
    for (int i = 0; i < n_; ++i) c[i] = at(i, j);
    return c;
}

std::vector<bigint> power_column(const intmatrix& m, unsigned l, int j) {
    if (j < 0 || j >= m.size()) throw std::invalid_argument("column index out of range");
    // iterate M * column instead of forming M^l
    std::vector<bigint> c(m.size());
    c[j] = 1;
    std::vector<bigint> next(m.size());
    for (unsigned step = 0; step < l; ++step) {
        for (int i = 0; i < m.size(); ++i) {
            bigint acc = 0;
            for (int k = 0; k < m.size(); ++k)
                if (c[k] != 0 && m.at(i, k) != 0) acc += m.at(i, k) * c[k];
            next[i] = std::move(acc);
        }
        c.swap(next);
    }
    return c;
}

bigint intmatrix::column_sum(int j) const {
    bigint s = 0;
    for (int i = 0; i < n_; ++i) s += at(i, j);
    return s;
}

bigint intmatrix::one_norm() const {
    bigint best = 0;
    for (int j = 0; j < n_; ++j) {
        bigint s = 0;
        for (int i = 0; i < n_; ++i) {
            const bigint& v = at(i, j);
            s += v < 0 ? bigint(-v) : v;
        }
        if (s > best) best = s;
    }
    return best;
}

std::vector<double> intmatrix::to_doubles() const {
    std::vector<double> d;
    d.reserve(e_.size());
    for (const bigint& v : e_) d.push_back(v.convert_to<double>());
    return d;
}

bool intmatrix::is_primitive() const {
    int n = n_;
    using boolrow = std::vector<char>;
    std::vector<boolrow> b(n, boolrow(n, 0)), cur;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i][j] = at(i, j) > 0 ? 1 : 0;
    auto allpos = [n](const std::vector<boolrow>& m) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!m[i][j]) return false;
        return true;
    };
    cur = b;
    // Wielandt: a primitive pattern turns positive by power (n-1)^2 + 1.
    long bound = static_cast<long>(n - 1) * (n - 1) + 1;
    for (long k = 1; k <= bound; ++k) {
        if (allpos(cur)) return true;
        std::vector<boolrow> nxt(n, boolrow(n, 0));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                if (cur[i][l])
                    for (int j = 0; j < n; ++j)
                        if (b[l][j]) nxt[i][j] = 1;
        cur.swap(nxt);
    }
    return allpos(cur);
}

intmatrix intmatrix::parse(std::istream& in) {
    long long n = 0;
    if (!(in >> n)) throw std::invalid_argument("expected matrix size");
    if (n <= 0 || n > 4096) throw std::invalid_argument("matrix size out of range");
    intmatrix m(static_cast<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bigint v;
            if (!(in >> v))
                throw std::invalid_argument("matrix entry missing or malformed at row " +
                                            std::to_string(i) + " col " + std::to_string(j));
            if (v < 0)
                throw std::invalid_argument("matrix entries must be nonnegative");
            m.at(i, j) = v;
        }
    return m;
}

intmatrix intmatrix::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    try {
        return parse(in);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string intmatrix::to_text() const {
    std::ostringstream out;
    out << n_ << "\n";
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) out << (j ? " " : "") << at(i, j);
        out << "\n";
    }
    return out.str();
}

int exact_rank(const std::vector<std::vector<bigint>>& m) {
    if (m.empty()) return 0;
    std::vector<std::vector<bigint>> a = m;
    size_t rows = a.size(), cols = a[0].size();
    // Bareiss fraction-free elimination: every division below is exact.
    bigint prev = 1;
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rank;
        while (piv < rows && a[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[rank], a[piv]);
        for (size_t i = rank + 1; i < rows; ++i) {
            for (size_t j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return static_cast<int>(rank);
}

intmatrix poly_eval(const intmatrix& m, const std::vector<long long>& coeffs_low_first) {
    int n = m.size();
    intmatrix r(n);
    if (coeffs_low_first.empty()) return r;
    // Horner from the top coefficient down.
    for (int i = 0; i < n; ++i) r.at(i, i) = coeffs_low_first.back();
    for (size_t k = coeffs_low_first.size() - 1; k-- > 0;) {
        r = r * m;
        for (int i = 0; i < n; ++i) r.at(i, i) += coeffs_low_first[k];
    }
    return r;
}

}  // namespace subtile
