#include "subtile/perron.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subtile {

namespace {

Eigen::MatrixXd to_eigen(const intmatrix& m) {
    int n = m.size();
    Eigen::MatrixXd a(n, n);
    std::vector<double> d = m.to_doubles();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = d[static_cast<size_t>(i) * n + j];
    return a;
}

// Right eigenvector for the dominant real eigenvalue, sign-fixed positive.
std::vector<double> dominant_vector(const Eigen::MatrixXd& a, double mu) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    int n = static_cast<int>(a.rows());
    int best = -1;
    double bestdist = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(es.eigenvalues()(i) - std::complex<double>(mu, 0.0));
        if (best < 0 || d < bestdist) {
            best = i;
            bestdist = d;
        }
    }
    std::vector<double> v(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = es.eigenvectors()(i, best).real();
        s += v[i];
    }
    if (s < 0.0)
        for (double& x : v) x = -x;
    return v;
}

int matrix_rank(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (top == 0.0) return 0;
    double thresh = 1e-8 * top;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++r;
    return r;
}

}  // namespace

perron_data analyze_matrix(const intmatrix& m) {
    if (!m.is_primitive())
        throw std::domain_error("matrix is not primitive");
    int n = m.size();
    Eigen::MatrixXd a = to_eigen(m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge");

    perron_data pd;
    std::vector<std::complex<double>> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = es.eigenvalues()(i);
    double mu = 0.0;
    for (auto z : vals) mu = std::max(mu, z.real());
    pd.mu = mu;

    // Cluster numerically equal eigenvalues to report multiplicities.
    double ctol = 1e-8 * std::max(1.0, mu);
    std::vector<char> used(n, 0);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        eigen_cluster c{vals[i], 1};
        std::complex<double> sum = vals[i];
        used[i] = 1;
        for (int j = i + 1; j < n; ++j)
            if (!used[j] && std::abs(vals[j] - c.value) <= ctol) {
                used[j] = 1;
                sum += vals[j];
                ++c.multiplicity;
                c.value = sum / static_cast<double>(c.multiplicity);
            }
        pd.spectrum.push_back(c);
    }
    std::sort(pd.spectrum.begin(), pd.spectrum.end(),
              [](const eigen_cluster& a2, const eigen_cluster& b2) {
                  if (std::abs(a2.value) != std::abs(b2.value))
                      return std::abs(a2.value) > std::abs(b2.value);
                  if (a2.value.real() != b2.value.real())
                      return a2.value.real() > b2.value.real();
                  return a2.value.imag() > b2.value.imag();
              });

    double r = 0.0;
    for (const eigen_cluster& c : pd.spectrum)
        if (std::abs(c.value - std::complex<double>(mu, 0.0)) > ctol)
            r = std::max(r, std::abs(c.value));
    pd.second_modulus = r;

    pd.right = dominant_vector(a, mu);
    pd.left = dominant_vector(a.transpose(), mu);
    // Perron vectors of a primitive matrix are strictly positive.
    for (double x : pd.right)
        if (!(x > 0.0)) throw std::runtime_error("dominant right eigenvector not positive");
    for (double x : pd.left)
        if (!(x > 0.0)) throw std::runtime_error("dominant left eigenvector not positive");
    double ip = 0.0;
    for (int i = 0; i < n; ++i) ip += pd.right[i] * pd.left[i];
    for (double& x : pd.left) x /= ip;
    double vs = 0.0;
    for (double x : pd.right) vs += x;
    pd.nu.resize(n);
    for (int i = 0; i < n; ++i) pd.nu[i] = pd.right[i] / vs;
    return pd;
}

bool semisimple_at_modulus(const intmatrix& m, double target_modulus) {
    int n = m.size();
    Eigen::MatrixXd a = to_eigen(m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    double tol = 1e-6 * std::max(1.0, target_modulus);
    // Deduplicate eigenvalues on the circle before the rank tests.
    std::vector<std::complex<double>> todo;
    for (int i = 0; i < n; ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        if (std::fabs(std::abs(z) - target_modulus) > tol) continue;
        bool dup = false;
        for (auto w : todo)
            if (std::abs(w - z) <= tol) dup = true;
        if (!dup) todo.push_back(z);
    }
    if (todo.empty())
        throw std::domain_error("no eigenvalue at the requested modulus");
    Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
    for (auto z : todo) {
        Eigen::MatrixXcd shifted = ac - z * Eigen::MatrixXcd::Identity(n, n);
        // Equal ranks of A and A^2 mean no Jordan block at this eigenvalue.
        if (matrix_rank(shifted) != matrix_rank(shifted * shifted)) return false;
    }
    return true;
}

bool semisimple_by_polynomial(const intmatrix& m, const std::vector<long long>& p) {
    if (p.size() < 2)
        throw std::invalid_argument("polynomial must have positive degree");
    intmatrix pm = poly_eval(m, p);
    int n = m.size();
    auto to_rows = [n](const intmatrix& x) {
        std::vector<std::vector<bigint>> rows(n, std::vector<bigint>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rows[i][j] = x.at(i, j);
        return rows;
    };
    int r1 = exact_rank(to_rows(pm));
    int r2 = exact_rank(to_rows(pm * pm));
    return r1 == r2;
}

regime_report classify_regime(const intmatrix& m, double lambda) {
    regime_report rep;
    rep.lambda = lambda;
    if (!(lambda > 1.0))
        throw std::domain_error("inflation factor must exceed 1");
    if (!m.is_primitive()) {
        rep.kind = regime::unsupported;
        rep.witness = "matrix is not primitive";
        return rep;
    }
    perron_data pd = analyze_matrix(m);
    rep.mu = pd.mu;
    rep.second_modulus = pd.second_modulus;
    double rtol = 1e-8 * lambda;
    std::ostringstream w;
    w.precision(12);
    if (pd.second_modulus < lambda - rtol) {
        rep.kind = regime::linear;
        w << "second modulus " << pd.second_modulus << " < lambda " << lambda;
    } else if (std::fabs(pd.second_modulus - lambda) <= rtol) {
        rep.semisimple = semisimple_at_modulus(m, pd.second_modulus);
        if (rep.semisimple) {
            rep.kind = regime::linear_log;
            w << "second modulus equals lambda and the modulus-" << lambda
              << " eigenvalues are semisimple";
        } else {
            rep.kind = regime::unsupported;
            w << "second modulus equals lambda but a modulus-" << lambda
              << " eigenvalue has a nontrivial Jordan block";
        }
    } else {
        rep.kind = regime::unsupported;
        w << "second modulus " << pd.second_modulus << " > lambda " << lambda;
    }
    rep.witness = w.str();
    return rep;
}

const char* regime_name(regime k) {
    switch (k) {
        case regime::linear: return "Linear";
        case regime::linear_log: return "LinearLog";
        default: return "Unsupported";
    }
}

double frequency_deviation(const intmatrix& m, unsigned l) {
    perron_data pd = analyze_matrix(m);
    intmatrix ml = m.pow(l);
    int n = m.size();
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double cs = ml.column_sum(j).convert_to<double>();
        for (int i = 0; i < n; ++i) {
            double mij = ml.at(i, j).convert_to<double>();
            worst = std::max(worst, std::fabs(mij - pd.nu[i] * cs));
        }
    }
    return worst;
}

}  // namespace subtile
