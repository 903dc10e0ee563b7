#include "artinperv/intmat.hpp"

#include <algorithm>
#include <sstream>

namespace artinperv {

/* ---------------------------------------------------------------- ZMat -- */

ZMat ZMat::identity(long n) {
    ZMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

ZMat ZMat::scalar(long n, const mpz_class& s) {
    ZMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = s;
    return m;
}

ZMat ZMat::hstack(const ZMat& a, const ZMat& b) {
    if (a.rows() != b.rows()) throw error("hstack: row mismatch");
    ZMat m(a.rows(), a.cols() + b.cols());
    for (long i = 0; i < a.rows(); ++i) {
        for (long j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        for (long j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
    }
    return m;
}

ZMat ZMat::vstack(const ZMat& a, const ZMat& b) {
    if (a.cols() != b.cols()) throw error("vstack: column mismatch");
    ZMat m(a.rows() + b.rows(), a.cols());
    for (long j = 0; j < a.cols(); ++j) {
        for (long i = 0; i < a.rows(); ++i) m.at(i, j) = a.at(i, j);
        for (long i = 0; i < b.rows(); ++i) m.at(a.rows() + i, j) = b.at(i, j);
    }
    return m;
}

ZMat ZMat::block_diag(const ZMat& a, const ZMat& b) {
    ZMat m(a.rows() + b.rows(), a.cols() + b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (long i = 0; i < b.rows(); ++i)
        for (long j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return m;
}

ZMat ZMat::operator*(const ZMat& o) const {
    if (cols_ != o.rows_) throw error("ZMat: dimension mismatch in product");
    ZMat m(rows_, o.cols_);
    for (long i = 0; i < rows_; ++i)
        for (long k = 0; k < cols_; ++k) {
            const mpz_class& aik = at(i, k);
            if (aik == 0) continue;
            for (long j = 0; j < o.cols_; ++j) m.at(i, j) += aik * o.at(k, j);
        }
    return m;
}

ZMat ZMat::operator+(const ZMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("ZMat: dimension mismatch in sum");
    ZMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = a_[t] + o.a_[t];
    return m;
}

ZMat ZMat::operator-(const ZMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("ZMat: dimension mismatch in difference");
    ZMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = a_[t] - o.a_[t];
    return m;
}

ZMat ZMat::operator-() const {
    ZMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = -a_[t];
    return m;
}

ZMat ZMat::scaled(const mpz_class& s) const {
    ZMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = s * a_[t];
    return m;
}

ZMat ZMat::transpose() const {
    ZMat m(cols_, rows_);
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

ZMat ZMat::column(long j) const {
    ZMat m(rows_, 1);
    for (long i = 0; i < rows_; ++i) m.at(i, 0) = at(i, j);
    return m;
}

ZMat ZMat::columns(const std::vector<long>& js) const {
    ZMat m(rows_, static_cast<long>(js.size()));
    for (long k = 0; k < static_cast<long>(js.size()); ++k)
        for (long i = 0; i < rows_; ++i) m.at(i, k) = at(i, js[static_cast<size_t>(k)]);
    return m;
}

ZMat ZMat::submatrix(long i0, long j0, long r, long c) const {
    ZMat m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
    return m;
}

bool ZMat::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

bool ZMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

ZMat ZMat::mod(const mpz_class& m) const {
    if (m <= 0) throw error("ZMat::mod: modulus must be positive");
    ZMat r(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) {
        mpz_class q = a_[t] % m;
        if (q < 0) q += m;
        r.a_[t] = q;
    }
    return r;
}

std::string ZMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (long i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (long j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
}

void ZMat::swap_rows(long i, long k) {
    if (i == k) return;
    for (long j = 0; j < cols_; ++j) std::swap(at(i, j), at(k, j));
}

void ZMat::swap_cols(long i, long k) {
    if (i == k) return;
    for (long r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, k));
}

void ZMat::addmul_row(long i, long k, const mpz_class& q) {
    if (q == 0) return;
    for (long j = 0; j < cols_; ++j) at(i, j) -= q * at(k, j);
}

void ZMat::addmul_col(long i, long k, const mpz_class& q) {
    if (q == 0) return;
    for (long r = 0; r < rows_; ++r) at(r, i) -= q * at(r, k);
}

void ZMat::negate_row(long i) {
    for (long j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
}

void ZMat::negate_col(long j) {
    for (long i = 0; i < rows_; ++i) at(i, j) = -at(i, j);
}

/* ---------------------------------------------------------------- QMat -- */

QMat QMat::identity(long n) {
    QMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMat QMat::hstack(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows()) throw error("hstack: row mismatch");
    QMat m(a.rows(), a.cols() + b.cols());
    for (long i = 0; i < a.rows(); ++i) {
        for (long j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        for (long j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
    }
    return m;
}

QMat QMat::vstack(const QMat& a, const QMat& b) {
    if (a.cols() != b.cols()) throw error("vstack: column mismatch");
    QMat m(a.rows() + b.rows(), a.cols());
    for (long j = 0; j < a.cols(); ++j) {
        for (long i = 0; i < a.rows(); ++i) m.at(i, j) = a.at(i, j);
        for (long i = 0; i < b.rows(); ++i) m.at(a.rows() + i, j) = b.at(i, j);
    }
    return m;
}

QMat QMat::block_diag(const QMat& a, const QMat& b) {
    QMat m(a.rows() + b.rows(), a.cols() + b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (long i = 0; i < b.rows(); ++i)
        for (long j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return m;
}

QMat QMat::operator*(const QMat& o) const {
    if (cols_ != o.rows_) throw error("QMat: dimension mismatch in product");
    QMat m(rows_, o.cols_);
    for (long i = 0; i < rows_; ++i)
        for (long k = 0; k < cols_; ++k) {
            const mpq_class& aik = at(i, k);
            if (aik == 0) continue;
            for (long j = 0; j < o.cols_; ++j) m.at(i, j) += aik * o.at(k, j);
        }
    return m;
}

QMat QMat::operator+(const QMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("QMat: dimension mismatch in sum");
    QMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = a_[t] + o.a_[t];
    return m;
}

QMat QMat::operator-(const QMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("QMat: dimension mismatch in difference");
    QMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = a_[t] - o.a_[t];
    return m;
}

QMat QMat::operator-() const {
    QMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = -a_[t];
    return m;
}

QMat QMat::scaled(const mpq_class& s) const {
    QMat m(rows_, cols_);
    for (size_t t = 0; t < a_.size(); ++t) m.a_[t] = s * a_[t];
    return m;
}

QMat QMat::transpose() const {
    QMat m(cols_, rows_);
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

QMat QMat::column(long j) const {
    QMat m(rows_, 1);
    for (long i = 0; i < rows_; ++i) m.at(i, 0) = at(i, j);
    return m;
}

QMat QMat::columns(const std::vector<long>& js) const {
    QMat m(rows_, static_cast<long>(js.size()));
    for (long k = 0; k < static_cast<long>(js.size()); ++k)
        for (long i = 0; i < rows_; ++i) m.at(i, k) = at(i, js[static_cast<size_t>(k)]);
    return m;
}

QMat QMat::submatrix(long i0, long j0, long r, long c) const {
    QMat m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
    return m;
}

bool QMat::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

bool QMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

mpq_class QMat::trace() const {
    if (rows_ != cols_) throw error("QMat::trace: square matrix required");
    mpq_class t = 0;
    for (long i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

std::string QMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (long i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (long j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
}

/* ----------------------------------------------------------------- SNF -- */

namespace {

struct SnfWork {
    ZMat a, u, uinv, v, vinv;

    void swap_rows(long i, long k) {
        a.swap_rows(i, k);
        u.swap_rows(i, k);
        uinv.swap_cols(i, k);
    }
    void swap_cols(long i, long k) {
        a.swap_cols(i, k);
        v.swap_cols(i, k);
        vinv.swap_rows(i, k);
    }
    /* row_i -= q row_k; inverse elementary op adds q * col_i to col_k of uinv */
    void addmul_row(long i, long k, const mpz_class& q) {
        a.addmul_row(i, k, q);
        u.addmul_row(i, k, q);
        for (long r = 0; r < uinv.rows(); ++r) uinv.at(r, k) += q * uinv.at(r, i);
    }
    void addmul_col(long i, long k, const mpz_class& q) {
        a.addmul_col(i, k, q);
        v.addmul_col(i, k, q);
        for (long c = 0; c < vinv.cols(); ++c) vinv.at(k, c) += q * vinv.at(i, c);
    }
    void negate_row(long i) {
        a.negate_row(i);
        u.negate_row(i);
        uinv.negate_col(i);
    }
};

} // namespace

SnfResult smith_normal_form(const ZMat& a0) {
    const long r = a0.rows(), c = a0.cols();
    SnfWork w{a0, ZMat::identity(r), ZMat::identity(r), ZMat::identity(c), ZMat::identity(c)};

    long t = 0;
    const long limit = std::min(r, c);
    while (t < limit) {
        /* choose the nonzero entry of smallest absolute value as pivot */
        long pi = -1, pj = -1;
        mpz_class best;
        for (long i = t; i < r; ++i)
            for (long j = t; j < c; ++j) {
                const mpz_class& x = w.a.at(i, j);
                if (x == 0) continue;
                mpz_class ax = abs(x);
                if (pi < 0 || ax < best) {
                    pi = i;
                    pj = j;
                    best = ax;
                }
            }
        if (pi < 0) break; /* remaining block is zero */
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        for (;;) {
            bool restart = false;
            /* clear column t: reduce, swapping any nonzero remainder into the pivot */
            for (long i = t + 1; i < r && !restart; ++i) {
                if (w.a.at(i, t) == 0) continue;
                mpz_class q = w.a.at(i, t) / w.a.at(t, t); /* truncated */
                w.addmul_row(i, t, q);
                if (w.a.at(i, t) != 0) {
                    w.swap_rows(t, i);
                    restart = true;
                }
            }
            if (restart) continue;
            /* clear row t similarly */
            for (long j = t + 1; j < c && !restart; ++j) {
                if (w.a.at(t, j) == 0) continue;
                mpz_class q = w.a.at(t, j) / w.a.at(t, t);
                w.addmul_col(j, t, q);
                if (w.a.at(t, j) != 0) {
                    w.swap_cols(t, j);
                    restart = true;
                }
            }
            if (restart) continue;
            /* divisibility sweep: pivot must divide the whole trailing block */
            bool fixed = false;
            for (long i = t + 1; i < r && !fixed; ++i)
                for (long j = t + 1; j < c && !fixed; ++j)
                    if (w.a.at(i, j) % w.a.at(t, t) != 0) {
                        w.addmul_row(t, i, mpz_class(-1)); /* row_t += row_i */
                        fixed = true;
                    }
            if (!fixed) break;
        }
        if (w.a.at(t, t) < 0) w.negate_row(t);
        ++t;
    }

    SnfResult res;
    res.u = std::move(w.u);
    res.uinv = std::move(w.uinv);
    res.v = std::move(w.v);
    res.vinv = std::move(w.vinv);
    res.d = std::move(w.a);
    res.diag.resize(static_cast<size_t>(limit));
    for (long i = 0; i < limit; ++i) {
        res.diag[static_cast<size_t>(i)] = res.d.at(i, i);
        if (res.d.at(i, i) != 0) res.rank = i + 1;
    }
    return res;
}

ZMat z_kernel_basis(const ZMat& a) {
    SnfResult s = smith_normal_form(a);
    /* a x = 0  <=>  d (vinv x) = 0  <=>  (vinv x)_i = 0 for i < rank */
    std::vector<long> free_cols;
    for (long j = s.rank; j < a.cols(); ++j) free_cols.push_back(j);
    return s.v.columns(free_cols);
}

ZMat z_column_lattice_basis(const ZMat& a) {
    /* colspan(a) = colspan(a v) = colspan(uinv d): basis d_i * col_i(uinv) */
    SnfResult s = smith_normal_form(a);
    ZMat basis(a.rows(), s.rank);
    for (long k = 0; k < s.rank; ++k)
        for (long i = 0; i < a.rows(); ++i)
            basis.at(i, k) = s.diag[static_cast<size_t>(k)] * s.uinv.at(i, k);
    return basis;
}

bool z_solve(const ZMat& a, const ZMat& b, ZMat& x) {
    if (a.rows() != b.rows()) throw error("z_solve: dimension mismatch");
    SnfResult s = smith_normal_form(a);
    ZMat ub = s.u * b;
    const long limit = std::min(a.rows(), a.cols());
    ZMat y(a.cols(), b.cols());
    for (long col = 0; col < b.cols(); ++col) {
        for (long i = 0; i < a.rows(); ++i) {
            const mpz_class& rhs = ub.at(i, col);
            if (i < limit && s.d.at(i, i) != 0) {
                if (rhs % s.d.at(i, i) != 0) return false;
                y.at(i, col) = rhs / s.d.at(i, i);
            } else if (rhs != 0) {
                return false;
            }
        }
    }
    x = s.v * y;
    return true;
}

bool z_solve_denominators(const ZMat& a, const ZMat& b, std::vector<mpz_class>& denoms) {
    if (a.rows() != b.rows()) throw error("z_solve_denominators: dimension mismatch");
    denoms.clear();
    SnfResult s = smith_normal_form(a);
    ZMat ub = s.u * b;
    const long limit = std::min(a.rows(), a.cols());
    for (long col = 0; col < b.cols(); ++col) {
        mpz_class k = 1;
        for (long i = 0; i < a.rows(); ++i) {
            const mpz_class& rhs = ub.at(i, col);
            if (i < limit && s.d.at(i, i) != 0) {
                mpz_class g = gcd(rhs, s.d.at(i, i));
                mpz_class need = s.d.at(i, i) / g; /* minimal k for this row */
                k = lcm(k, need);
            } else if (rhs != 0) {
                denoms.clear();
                return false;
            }
        }
        denoms.push_back(k);
    }
    return true;
}

mpz_class z_det(const ZMat& a) {
    if (a.rows() != a.cols()) throw error("z_det: square matrix required");
    /* fraction-free Gaussian elimination (Bareiss) */
    long n = a.rows();
    if (n == 0) return 1;
    ZMat m = a;
    mpz_class prev = 1;
    int sign = 1;
    for (long k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            long piv = -1;
            for (long i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            m.swap_rows(k, piv);
            sign = -sign;
        }
        for (long i = k + 1; i < n; ++i)
            for (long j = k + 1; j < n; ++j) {
                mpz_class num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = num / prev; /* exact by Bareiss */
            }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

/* --------------------------------------------------------- conversions -- */

QMat q_from_z(const ZMat& a) {
    QMat m(a.rows(), a.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) m.at(i, j) = mpq_class(a.at(i, j));
    return m;
}

bool q_is_integral(const QMat& a) {
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            if (a.at(i, j).get_den() != 1) return false;
    return true;
}

ZMat z_from_q(const QMat& a) {
    ZMat m(a.rows(), a.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) {
            if (a.at(i, j).get_den() != 1) throw error("z_from_q: non-integral entry");
            m.at(i, j) = a.at(i, j).get_num();
        }
    return m;
}

mpz_class q_denominator(const QMat& a) {
    mpz_class d = 1;
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) d = lcm(d, a.at(i, j).get_den());
    return d;
}

/* ------------------------------------------------------------ Q linear -- */

QMat q_rref(const QMat& a, std::vector<long>* pivot_cols) {
    QMat m = a;
    if (pivot_cols) pivot_cols->clear();
    long row = 0;
    for (long col = 0; col < m.cols() && row < m.rows(); ++col) {
        long piv = -1;
        for (long i = row; i < m.rows(); ++i)
            if (m.at(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (long j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        mpq_class inv = 1 / m.at(row, col);
        for (long j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (long i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            mpq_class f = m.at(i, col);
            for (long j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++row;
    }
    return m;
}

long q_rank(const QMat& a) {
    std::vector<long> piv;
    q_rref(a, &piv);
    return static_cast<long>(piv.size());
}

QMat q_kernel_basis(const QMat& a) {
    std::vector<long> piv;
    QMat r = q_rref(a, &piv);
    std::vector<bool> is_piv(static_cast<size_t>(a.cols()), false);
    for (long p : piv) is_piv[static_cast<size_t>(p)] = true;
    std::vector<long> free_cols;
    for (long j = 0; j < a.cols(); ++j)
        if (!is_piv[static_cast<size_t>(j)]) free_cols.push_back(j);
    QMat k(a.cols(), static_cast<long>(free_cols.size()));
    for (long t = 0; t < static_cast<long>(free_cols.size()); ++t) {
        long fc = free_cols[static_cast<size_t>(t)];
        k.at(fc, t) = 1;
        for (long p = 0; p < static_cast<long>(piv.size()); ++p)
            k.at(piv[static_cast<size_t>(p)], t) = -r.at(p, fc);
    }
    return k;
}

bool q_solve(const QMat& a, const QMat& b, QMat& x) {
    if (a.rows() != b.rows()) throw error("q_solve: dimension mismatch");
    QMat aug = QMat::hstack(a, b);
    std::vector<long> piv;
    QMat r = q_rref(aug, &piv);
    for (long p : piv)
        if (p >= a.cols()) return false; /* pivot in the rhs block: inconsistent */
    x = QMat(a.cols(), b.cols());
    for (long t = 0; t < static_cast<long>(piv.size()); ++t)
        for (long col = 0; col < b.cols(); ++col)
            x.at(piv[static_cast<size_t>(t)], col) = r.at(t, a.cols() + col);
    return true;
}

QMat q_inverse(const QMat& a) {
    if (a.rows() != a.cols()) throw error("q_inverse: square matrix required");
    QMat x;
    if (!q_solve(a, QMat::identity(a.rows()), x) || q_rank(a) != a.rows())
        throw error("q_inverse: singular matrix");
    return x;
}

QMat q_column_space_basis(const QMat& a) {
    std::vector<long> piv;
    q_rref(a, &piv);
    return a.columns(piv);
}

/* ------------------------------------------------------------- numbers -- */

bool is_prime_ul(unsigned long p) {
    if (p < 2) return false;
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int p_valuation(const mpz_class& n, unsigned long p) {
    if (n == 0) throw error("p_valuation: zero argument");
    if (p < 2) throw error("p_valuation: invalid prime");
    mpz_class m = abs(n);
    int v = 0;
    while (m % p == 0) {
        m /= static_cast<unsigned long>(p);
        ++v;
    }
    return v;
}

mpz_class p_power_part(const mpz_class& n, unsigned long p) {
    mpz_class q = 1;
    int v = p_valuation(n, p);
    for (int i = 0; i < v; ++i) q *= static_cast<unsigned long>(p);
    return q;
}

mpz_class strip_prime(const mpz_class& n, unsigned long p) {
    if (n == 0 || p < 2) return n;
    mpz_class m = n;
    while (m % p == 0) m /= static_cast<unsigned long>(p);
    return m;
}

mpz_class strip_primes(const mpz_class& n, const std::set<unsigned long>& ps) {
    mpz_class m = n;
    for (unsigned long p : ps) m = strip_prime(m, p);
    return m;
}

std::vector<std::pair<unsigned long, int>> factorize_ul(unsigned long n) {
    std::vector<std::pair<unsigned long, int>> out;
    for (unsigned long d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

} // namespace artinperv
