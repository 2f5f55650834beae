#include "refinery/lp.hpp"

#include <limits>
#include <stdexcept>

namespace refinery::lp {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Simplex core: maximize c.u subject to G u <= h, u free.
/// Standard form z = [p; q; s] with u = p - q and slacks s; rows with
/// negative right-hand side are negated (slack coefficient -1) and receive
/// phase-I artificials.
class Simplex {
  public:
    Simplex(const Matrix& G, const Vector& h, const Vector& c)
        : m_(G.rows), k_(G.cols), cobj_(c) {
        sigma_.assign(m_, 1);
        for (std::size_t r = 0; r < m_; ++r)
            if (h[r].sign() < 0) sigma_[r] = -1;

        nstruct_ = 2 * k_ + m_;
        std::size_t nart = 0;
        art_col_.assign(m_, npos);
        for (std::size_t r = 0; r < m_; ++r)
            if (sigma_[r] < 0) art_col_[r] = nstruct_ + nart++;
        ncols_ = nstruct_ + nart;

        T_ = Matrix(m_, ncols_ + 1);
        for (std::size_t r = 0; r < m_; ++r) {
            Scalar sg(sigma_[r]);
            for (std::size_t j = 0; j < k_; ++j) {
                Scalar v = sg * G(r, j);
                T_(r, j) = v;
                T_(r, k_ + j) = -v;
            }
            T_(r, 2 * k_ + r) = sg; // slack
            if (art_col_[r] != npos) T_(r, art_col_[r]) = Scalar(1);
            T_(r, ncols_) = sg * h[r];
        }
        basis_.assign(m_, 0);
        for (std::size_t r = 0; r < m_; ++r)
            basis_[r] = art_col_[r] != npos ? art_col_[r] : 2 * k_ + r;
        barred_.assign(ncols_, false);
    }

    enum class Result { Optimal, Infeasible, Unbounded };

    Result run() {
        if (has_artificials()) {
            Vector cost(ncols_, Scalar(0));
            for (std::size_t r = 0; r < m_; ++r)
                if (art_col_[r] != npos) cost[art_col_[r]] = Scalar(1);
            load_cost(cost, /*minimize=*/true);
            iterate();
            if (objective_value().sign() != 0) {
                extract_farkas();
                return Result::Infeasible;
            }
            purge_artificials();
        }
        // Phase II.
        Vector cost(ncols_, Scalar(0));
        for (std::size_t j = 0; j < k_; ++j) {
            cost[j] = -cobj_[j]; // maximize c.u == minimize -c.u
            cost[k_ + j] = cobj_[j];
        }
        load_cost(cost, true);
        if (!iterate()) {
            extract_ray();
            return Result::Unbounded;
        }
        return Result::Optimal;
    }

    Vector solution_u() const {
        Vector z(ncols_, Scalar(0));
        for (std::size_t r = 0; r < m_; ++r) z[basis_[r]] = T_(r, ncols_);
        Vector u(k_);
        for (std::size_t j = 0; j < k_; ++j) u[j] = z[j] - z[k_ + j];
        return u;
    }

    const Vector& farkas() const { return farkas_; }  // per original row of G
    const Vector& ray_u() const { return ray_; }

  private:
    bool has_artificials() const {
        for (auto c : art_col_)
            if (c != npos) return true;
        return false;
    }

    void load_cost(const Vector& cost, bool) {
        cost_ = cost;
        rc_.assign(ncols_ + 1, Scalar(0));
        for (std::size_t j = 0; j <= ncols_; ++j) {
            Scalar v = j < ncols_ ? cost_[j] : Scalar(0);
            for (std::size_t r = 0; r < m_; ++r) {
                const Scalar& cb = cost_[basis_[r]];
                if (!cb.is_zero()) v -= cb * T_(r, j);
            }
            rc_[j] = v;
        }
    }

    Scalar objective_value() const { return -rc_[ncols_]; }

    // Returns false when unbounded (phase II only).
    bool iterate() {
        for (;;) {
            std::size_t enter = npos;
            for (std::size_t j = 0; j < ncols_; ++j)
                if (!barred_[j] && rc_[j].sign() < 0) {
                    enter = j;
                    break; // Bland: least index
                }
            if (enter == npos) return true;

            std::size_t leave = npos;
            Scalar best;
            for (std::size_t r = 0; r < m_; ++r) {
                if (T_(r, enter).sign() <= 0) continue;
                Scalar ratio = T_(r, ncols_) / T_(r, enter);
                if (leave == npos || ratio < best ||
                    (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == npos) {
                ray_enter_ = enter;
                return false;
            }
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        Scalar inv = T_(row, col).inverse();
        for (std::size_t j = 0; j <= ncols_; ++j) T_(row, j) = T_(row, j) * inv;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row) continue;
            Scalar f = T_(r, col);
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j <= ncols_; ++j) T_(r, j) = T_(r, j) - f * T_(row, j);
        }
        Scalar f = rc_[col];
        if (!f.is_zero())
            for (std::size_t j = 0; j <= ncols_; ++j) rc_[j] = rc_[j] - f * T_(row, j);
        basis_[row] = col;
    }

    // After phase I at value zero: pivot basic artificials out, drop rows
    // that turn out redundant, and bar artificial columns from re-entering.
    void purge_artificials() {
        for (std::size_t r = 0; r < m_;) {
            if (basis_[r] < nstruct_) {
                ++r;
                continue;
            }
            std::size_t j = npos;
            for (std::size_t c = 0; c < nstruct_; ++c)
                if (!T_(r, c).is_zero()) {
                    j = c;
                    break;
                }
            if (j != npos) {
                pivot(r, j);
                ++r;
            } else {
                drop_row(r);
            }
        }
        for (std::size_t r = 0; r < m_; ++r) art_col_[r] = npos;
        for (std::size_t c = nstruct_; c < ncols_; ++c) barred_[c] = true;
    }

    void drop_row(std::size_t row) {
        Matrix nt(m_ - 1, ncols_ + 1);
        std::size_t rr = 0;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row) continue;
            for (std::size_t j = 0; j <= ncols_; ++j) nt(rr, j) = T_(r, j);
            ++rr;
        }
        T_ = std::move(nt);
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
        row_of_.erase(row_of_.begin() + static_cast<std::ptrdiff_t>(row));
        art_col_.erase(art_col_.begin() + static_cast<std::ptrdiff_t>(row));
        sigma_dropped_.push_back(true); // placeholder; original rows tracked via row_of_
        --m_;
    }

  public:
    // Original-row bookkeeping: row_of_[r] = index into the G rows.
    void init_row_tracking() {
        row_of_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) row_of_[r] = r;
    }

  private:
    void extract_farkas() {
        // Dual values from reduced costs of each row's initial unit column.
        farkas_.assign(orig_rows_, Scalar(0));
        for (std::size_t r = 0; r < m_; ++r) {
            std::size_t unit = art_col_[r] != npos ? art_col_[r] : 2 * k_ + row_of_[r];
            Scalar cost0 = art_col_[r] != npos ? Scalar(1) : Scalar(0);
            Scalar y = cost0 - rc_[unit];
            // nu_r = -sigma_r * y_r  >= 0
            farkas_[row_of_[r]] = Scalar(-sigma_[row_of_[r]]) * y;
        }
    }

    void extract_ray() {
        Vector dz(ncols_, Scalar(0));
        dz[ray_enter_] = Scalar(1);
        for (std::size_t r = 0; r < m_; ++r) dz[basis_[r]] = -T_(r, ray_enter_);
        ray_.assign(k_, Scalar(0));
        for (std::size_t j = 0; j < k_; ++j) ray_[j] = dz[j] - dz[k_ + j];
    }

    std::size_t m_, k_, nstruct_ = 0, ncols_ = 0;
    Vector cobj_;
    std::vector<int> sigma_;
    std::vector<std::size_t> art_col_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> row_of_;
    std::vector<bool> barred_;
    std::vector<bool> sigma_dropped_;
    Matrix T_;
    Vector rc_;
    Vector cost_;
    Vector farkas_;
    Vector ray_;
    std::size_t ray_enter_ = npos;

  public:
    std::size_t orig_rows_ = 0;
};

void check_shapes(const LinearProgram& lp) {
    for (const auto& [a, b] : lp.inequalities)
        if (a.size() != lp.variables) throw std::invalid_argument("lp: inequality row size mismatch");
    for (const auto& [a, b] : lp.equalities)
        if (a.size() != lp.variables) throw std::invalid_argument("lp: equality row size mismatch");
    if (lp.objective && lp.objective->size() != lp.variables)
        throw std::invalid_argument("lp: objective size mismatch");
}

} // namespace

void LinearProgram::add_ge(Vector a, Scalar b) {
    for (auto& v : a) v = -v;
    inequalities.emplace_back(std::move(a), -b);
}

bool satisfies(const LinearProgram& lp, const Vector& x) {
    for (const auto& [a, b] : lp.inequalities)
        if ((dot(a, x) - b).sign() > 0) return false;
    for (const auto& [a, b] : lp.equalities)
        if (dot(a, x) != b) return false;
    return true;
}

bool verify_infeasibility_certificate(const LinearProgram& lp, const Vector& cert) {
    const std::size_t mi = lp.inequalities.size(), me = lp.equalities.size();
    if (cert.size() != mi + me) return false;
    Vector combo(lp.variables, Scalar(0));
    Scalar rhs(0);
    for (std::size_t i = 0; i < mi; ++i) {
        if (cert[i].sign() < 0) return false;
        if (cert[i].is_zero()) continue;
        combo = vec_add(combo, vec_scale(cert[i], lp.inequalities[i].first));
        rhs += cert[i] * lp.inequalities[i].second;
    }
    for (std::size_t j = 0; j < me; ++j) {
        if (cert[mi + j].is_zero()) continue;
        combo = vec_add(combo, vec_scale(cert[mi + j], lp.equalities[j].first));
        rhs += cert[mi + j] * lp.equalities[j].second;
    }
    return vec_is_zero(combo) && rhs.sign() < 0;
}

bool verify_unbounded_ray(const LinearProgram& lp, const Vector& ray) {
    if (ray.size() != lp.variables || !lp.objective) return false;
    for (const auto& [a, b] : lp.inequalities)
        if (dot(a, ray).sign() > 0) return false;
    for (const auto& [a, b] : lp.equalities)
        if (!dot(a, ray).is_zero()) return false;
    return dot(*lp.objective, ray).sign() > 0;
}

LpOutcome solve(const LinearProgram& lp) {
    check_shapes(lp);
    const std::size_t n = lp.variables;
    const std::size_t mi = lp.inequalities.size(), me = lp.equalities.size();

    // Substitute the equalities away: x = x0 + N u.
    Vector x0(n, Scalar(0));
    std::vector<Vector> kern;
    if (me > 0) {
        Matrix E(me, n);
        Vector f(me);
        for (std::size_t r = 0; r < me; ++r) {
            E.set_row(r, lp.equalities[r].first);
            f[r] = lp.equalities[r].second;
        }
        auto sol = solve_linear(E, f);
        if (sol.kind == LinearSolution::Kind::Inconsistent) {
            // kappa with E^T kappa = 0, f.kappa = -1.
            Matrix M(n + 1, me);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t r = 0; r < me; ++r) M(j, r) = E(r, j);
            for (std::size_t r = 0; r < me; ++r) M(n, r) = f[r];
            Vector rhs(n + 1, Scalar(0));
            rhs[n] = Scalar(-1);
            auto ks = solve_linear(M, rhs);
            if (ks.kind == LinearSolution::Kind::Inconsistent)
                throw std::logic_error("lp: missing Farkas witness for inconsistent equalities");
            Vector cert(mi + me, Scalar(0));
            for (std::size_t r = 0; r < me; ++r) cert[mi + r] = ks.particular[r];
            if (!verify_infeasibility_certificate(lp, cert))
                throw std::logic_error("lp: equality Farkas certificate failed verification");
            return {LpStatus::Infeasible, {}, Scalar(0), std::move(cert)};
        }
        x0 = sol.particular;
        kern = std::move(sol.kernel);
    } else {
        kern.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            Vector e(n, Scalar(0));
            e[j] = Scalar(1);
            kern.push_back(std::move(e));
        }
    }
    const std::size_t k = kern.size();
    Matrix N = k > 0 ? Matrix::from_cols(kern) : Matrix(n, 0);

    auto solve_kappa = [&](const Vector& target) {
        // kappa with E^T kappa = target (exists: target is orthogonal to ker E).
        Matrix M(n, me);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t r = 0; r < me; ++r) M(j, r) = lp.equalities[r].first[j];
        auto ks = solve_linear(M, target);
        if (ks.kind == LinearSolution::Kind::Inconsistent)
            throw std::logic_error("lp: Farkas back-substitution failed");
        return ks.particular;
    };

    if (k == 0) {
        // Point fully determined by the equalities.
        for (std::size_t i = 0; i < mi; ++i) {
            const auto& [a, b] = lp.inequalities[i];
            if ((dot(a, x0) - b).sign() > 0) {
                Vector target(n);
                for (std::size_t j = 0; j < n; ++j) target[j] = -a[j];
                Vector kappa = solve_kappa(target);
                Vector cert(mi + me, Scalar(0));
                cert[i] = Scalar(1);
                for (std::size_t r = 0; r < me; ++r) cert[mi + r] = kappa[r];
                if (!verify_infeasibility_certificate(lp, cert))
                    throw std::logic_error("lp: point-case Farkas certificate failed verification");
                return {LpStatus::Infeasible, {}, Scalar(0), std::move(cert)};
            }
        }
        if (lp.objective)
            return {LpStatus::Optimal, x0, dot(*lp.objective, x0), {}};
        return {LpStatus::Feasible, x0, Scalar(0), {}};
    }

    // Reduced inequality system G u <= h.
    Matrix G(mi, k);
    Vector h(mi);
    for (std::size_t i = 0; i < mi; ++i) {
        const auto& [a, b] = lp.inequalities[i];
        for (std::size_t j = 0; j < k; ++j) G(i, j) = dot(a, kern[j]);
        h[i] = b - dot(a, x0);
    }
    Vector cred(k, Scalar(0));
    if (lp.objective)
        for (std::size_t j = 0; j < k; ++j) cred[j] = dot(*lp.objective, kern[j]);

    Simplex sx(G, h, cred);
    sx.orig_rows_ = mi;
    sx.init_row_tracking();
    auto res = sx.run();

    if (res == Simplex::Result::Infeasible) {
        const Vector& nu = sx.farkas();
        Vector cert(mi + me, Scalar(0));
        Vector combo(n, Scalar(0));
        for (std::size_t i = 0; i < mi; ++i) {
            cert[i] = nu[i];
            if (!nu[i].is_zero()) combo = vec_add(combo, vec_scale(nu[i], lp.inequalities[i].first));
        }
        if (me > 0) {
            Vector target(n);
            for (std::size_t j = 0; j < n; ++j) target[j] = -combo[j];
            Vector kappa = solve_kappa(target);
            for (std::size_t r = 0; r < me; ++r) cert[mi + r] = kappa[r];
        }
        if (!verify_infeasibility_certificate(lp, cert))
            throw std::logic_error("lp: simplex Farkas certificate failed verification");
        return {LpStatus::Infeasible, {}, Scalar(0), std::move(cert)};
    }

    if (res == Simplex::Result::Unbounded) {
        Vector ru = sx.ray_u();
        Vector ray = N.mul(ru);
        if (!verify_unbounded_ray(lp, ray))
            throw std::logic_error("lp: unbounded ray failed verification");
        // Also report the feasible point the ray departs from.
        Vector u = sx.solution_u();
        Vector x = vec_add(x0, N.mul(u));
        return {LpStatus::Unbounded, std::move(x), Scalar(0), std::move(ray)};
    }

    Vector u = sx.solution_u();
    Vector x = vec_add(x0, N.mul(u));
    if (!satisfies(lp, x)) throw std::logic_error("lp: solution fails exact constraint check");
    if (lp.objective) {
        Scalar value = dot(*lp.objective, x);
        return {LpStatus::Optimal, std::move(x), std::move(value), {}};
    }
    return {LpStatus::Feasible, std::move(x), Scalar(0), {}};
}

} // namespace refinery::lp
