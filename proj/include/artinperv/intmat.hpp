/* Exact dense matrices over Z (mpz) and Q (mpq), Smith normal form with
 * unimodular transforms and their inverses, integer/rational solvers and
 * kernel bases.  This is the arithmetic substrate for the whole library:
 * everything downstream (module presentations, equivariant homological
 * algebra) reduces to the routines in this header. */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace artinperv {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ZMat {
  public:
    ZMat() : rows_(0), cols_(0) {}
    ZMat(long r, long c) : rows_(r), cols_(c), a_(static_cast<size_t>(r * c)) {
        if (r < 0 || c < 0) throw error("ZMat: negative dimension");
    }

    static ZMat identity(long n);
    static ZMat zero(long r, long c) { return ZMat(r, c); }
    static ZMat scalar(long n, const mpz_class& s);
    static ZMat hstack(const ZMat& a, const ZMat& b);
    static ZMat vstack(const ZMat& a, const ZMat& b);
    static ZMat block_diag(const ZMat& a, const ZMat& b);

    long rows() const { return rows_; }
    long cols() const { return cols_; }

    mpz_class& at(long i, long j) { return a_[idx(i, j)]; }
    const mpz_class& at(long i, long j) const { return a_[idx(i, j)]; }

    bool operator==(const ZMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const ZMat& o) const { return !(*this == o); }

    ZMat operator*(const ZMat& o) const;
    ZMat operator+(const ZMat& o) const;
    ZMat operator-(const ZMat& o) const;
    ZMat operator-() const;
    ZMat scaled(const mpz_class& s) const;

    ZMat transpose() const;
    ZMat column(long j) const;
    ZMat columns(const std::vector<long>& js) const;
    ZMat submatrix(long i0, long j0, long r, long c) const;

    bool is_zero() const;
    bool is_identity() const;

    /* entrywise residue in [0, m) */
    ZMat mod(const mpz_class& m) const;

    std::string to_string() const;

    void swap_rows(long i, long k);
    void swap_cols(long i, long k);
    /* row_i -= q * row_k  /  col_i -= q * col_k */
    void addmul_row(long i, long k, const mpz_class& q);
    void addmul_col(long i, long k, const mpz_class& q);
    void negate_row(long i);
    void negate_col(long i);

  private:
    size_t idx(long i, long j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw error("ZMat: index out of range");
        return static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j);
    }
    long rows_, cols_;
    std::vector<mpz_class> a_;
};

class QMat {
  public:
    QMat() : rows_(0), cols_(0) {}
    QMat(long r, long c) : rows_(r), cols_(c), a_(static_cast<size_t>(r * c)) {
        if (r < 0 || c < 0) throw error("QMat: negative dimension");
    }

    static QMat identity(long n);
    static QMat zero(long r, long c) { return QMat(r, c); }
    static QMat hstack(const QMat& a, const QMat& b);
    static QMat vstack(const QMat& a, const QMat& b);
    static QMat block_diag(const QMat& a, const QMat& b);

    long rows() const { return rows_; }
    long cols() const { return cols_; }

    mpq_class& at(long i, long j) { return a_[idx(i, j)]; }
    const mpq_class& at(long i, long j) const { return a_[idx(i, j)]; }

    bool operator==(const QMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const QMat& o) const { return !(*this == o); }

    QMat operator*(const QMat& o) const;
    QMat operator+(const QMat& o) const;
    QMat operator-(const QMat& o) const;
    QMat operator-() const;
    QMat scaled(const mpq_class& s) const;

    QMat transpose() const;
    QMat column(long j) const;
    QMat columns(const std::vector<long>& js) const;
    QMat submatrix(long i0, long j0, long r, long c) const;

    bool is_zero() const;
    bool is_identity() const;
    mpq_class trace() const;

    std::string to_string() const;

  private:
    size_t idx(long i, long j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw error("QMat: index out of range");
        return static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j);
    }
    long rows_, cols_;
    std::vector<mpq_class> a_;
};

/* u * a * v = d, with u, v unimodular (uinv, vinv their exact inverses),
 * d diagonal with d_0 | d_1 | ... and every d_i >= 0. */
struct SnfResult {
    ZMat u, uinv, d, v, vinv;
    long rank = 0;                 /* number of nonzero diagonal entries */
    std::vector<mpz_class> diag;   /* all min(rows, cols) diagonal entries */
};

SnfResult smith_normal_form(const ZMat& a);

/* columns form a basis of { x in Z^cols : a x = 0 }; this kernel lattice is
 * saturated (a direct summand of Z^cols). */
ZMat z_kernel_basis(const ZMat& a);

/* basis of the lattice spanned by the columns of a (columns of the result) */
ZMat z_column_lattice_basis(const ZMat& a);

/* solve a x = b over Z (b may have several columns); false if unsolvable */
bool z_solve(const ZMat& a, const ZMat& b, ZMat& x);

/* solve a x = b over Q but report, for each column of b, the minimal positive
 * integer k with  k * column in colspan_Z(a).  Returns false (and leaves
 * denoms empty) if there is no rational solution at all. */
bool z_solve_denominators(const ZMat& a, const ZMat& b, std::vector<mpz_class>& denoms);

mpz_class z_det(const ZMat& a);

QMat q_from_z(const ZMat& a);
bool q_is_integral(const QMat& a);
ZMat z_from_q(const QMat& a); /* throws unless integral */
/* least common denominator of all entries (1 for the zero/empty matrix) */
mpz_class q_denominator(const QMat& a);

/* reduced row echelon form; records pivot columns if requested */
QMat q_rref(const QMat& a, std::vector<long>* pivot_cols = nullptr);
long q_rank(const QMat& a);
/* columns form a basis of { x : a x = 0 } */
QMat q_kernel_basis(const QMat& a);
bool q_solve(const QMat& a, const QMat& b, QMat& x);
QMat q_inverse(const QMat& a); /* throws if singular */
/* basis (as columns) of the column span of a */
QMat q_column_space_basis(const QMat& a);

/* arithmetic helpers */
bool is_prime_ul(unsigned long p);
int p_valuation(const mpz_class& n, unsigned long p);          /* n != 0 */
mpz_class p_power_part(const mpz_class& n, unsigned long p);   /* p^{v_p(n)} */
mpz_class strip_prime(const mpz_class& n, unsigned long p);
mpz_class strip_primes(const mpz_class& n, const std::set<unsigned long>& ps);
std::vector<std::pair<unsigned long, int>> factorize_ul(unsigned long n);

} // namespace artinperv
