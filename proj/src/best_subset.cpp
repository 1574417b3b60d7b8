// Best subset selection.
//
// Branch and bound works on the sweep (Gram-residualization) form of least
// squares. A node fixes a support prefix F and keeps, for the remaining
// candidate columns C, the Gram matrix R and correlations c of the columns
// after projecting out span(X_F):
//
//   R = G_CC - G_CF G_FF^{-1} G_FC,   c = b_C - G_CF G_FF^{-1} b_F,
//
// so adding candidate a lowers the RSS by c_a^2 / R_aa and residualizes the
// rest with a rank-one update. Subtrees are discarded with two lower bounds
// on the RSS of any completion:
//   * monotonicity: RSS(F u T) >= RSS(F u C) for T within C;
//   * a Gershgorin bound on the best s-column gain,
//       gain(T) <= sum_{i in T} c_i^2/R_ii / (1 - (s-1) rho_max),
//     where rho_max is the largest residual correlation among candidates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "snrlab/estimators.hpp"

namespace snrlab {

std::uint64_t binomial(std::uint64_t p, std::uint64_t k) {
    if (k > p) return 0;
    k = std::min(k, p - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (p - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(result);
}

namespace {

// Relative floor on a residual column norm before a support counts as singular.
constexpr double kSingularRatio = 1e-10;

struct Incumbent {
    double rss = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> support;  // original column indices, sorted
};

bool lexicographically_smaller(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

class BranchAndBound {
public:
    BranchAndBound(const Matrix& gram, const Vector& xty, double yy, std::size_t n, std::size_t k,
                   std::uint64_t budget)
        : n_(n), k_(k), budget_(budget), yy_(yy) {
        const auto p = static_cast<std::size_t>(gram.cols());
        tie_tol_ = 1e-12 * std::max(yy, 1.0);

        // Explore columns with large marginal gain first.
        order_.resize(p);
        std::iota(order_.begin(), order_.end(), 0);
        std::vector<double> gain(p);
        for (std::size_t j = 0; j < p; ++j) {
            const double g = gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
            gain[j] = g > 0.0 ? xty(static_cast<Eigen::Index>(j)) * xty(static_cast<Eigen::Index>(j)) / g : 0.0;
        }
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });

        root_R_.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
        root_c_.resize(static_cast<Eigen::Index>(p));
        floor_.resize(p);
        for (std::size_t i = 0; i < p; ++i) {
            const auto oi = static_cast<Eigen::Index>(order_[i]);
            root_c_(static_cast<Eigen::Index>(i)) = xty(oi);
            floor_[i] = kSingularRatio * gram(oi, oi);
            for (std::size_t j = 0; j < p; ++j)
                root_R_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    gram(oi, static_cast<Eigen::Index>(order_[j]));
        }
    }

    void seed_incumbent(const std::vector<std::size_t>& support, double rss) {
        best_.support = support;
        std::sort(best_.support.begin(), best_.support.end());
        best_.rss = rss;
    }

    void run() {
        std::vector<std::size_t> cand(order_.size());
        std::iota(cand.begin(), cand.end(), 0);
        std::vector<std::size_t> chosen;
        visit(chosen, root_R_, root_c_, cand, yy_);
    }

    bool complete() const { return !exhausted_; }
    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t skipped() const { return skipped_; }
    const Incumbent& best() const { return best_; }

private:
    void consider(const std::vector<std::size_t>& chosen, double rss) {
        if (rss > best_.rss + tie_tol_) return;
        std::vector<std::size_t> support(chosen.size());
        for (std::size_t i = 0; i < chosen.size(); ++i) support[i] = order_[chosen[i]];
        std::sort(support.begin(), support.end());
        if (rss < best_.rss - tie_tol_ || lexicographically_smaller(support, best_.support)) {
            best_.rss = rss;
            best_.support = std::move(support);
        }
    }

    double lower_bound(const Matrix& R, const Vector& c, const std::vector<std::size_t>& cand,
                       double rss, std::size_t s, std::size_t depth) const {
        const auto m = static_cast<Eigen::Index>(cand.size());
        std::vector<double> gains;
        gains.reserve(cand.size());
        std::vector<Eigen::Index> usable;
        usable.reserve(cand.size());
        for (Eigen::Index i = 0; i < m; ++i) {
            if (R(i, i) > floor_[cand[static_cast<std::size_t>(i)]]) {
                usable.push_back(i);
                gains.push_back(c(i) * c(i) / R(i, i));
            }
        }
        if (usable.size() < s) return std::numeric_limits<double>::infinity();

        double best_gain = rss;

        double rho_max = 0.0;
        for (std::size_t a = 0; a < usable.size(); ++a) {
            const Eigen::Index i = usable[a];
            const double inv = 1.0 / std::sqrt(R(i, i));
            for (std::size_t b = a + 1; b < usable.size(); ++b) {
                const Eigen::Index j = usable[b];
                rho_max = std::max(rho_max, std::abs(R(i, j)) * inv / std::sqrt(R(j, j)));
            }
        }
        const double lambda_min = 1.0 - static_cast<double>(s - 1) * rho_max;
        if (lambda_min > 0.0) {
            std::partial_sort(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(s), gains.end(),
                              std::greater<>());
            const double top = std::accumulate(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(s), 0.0);
            best_gain = std::min(best_gain, top / lambda_min);
        }

        if (usable.size() <= 48 && usable.size() + depth <= n_) {
            Matrix sub(static_cast<Eigen::Index>(usable.size()), static_cast<Eigen::Index>(usable.size()));
            Vector cs(static_cast<Eigen::Index>(usable.size()));
            for (std::size_t a = 0; a < usable.size(); ++a) {
                cs(static_cast<Eigen::Index>(a)) = c(usable[a]);
                for (std::size_t b = 0; b < usable.size(); ++b)
                    sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = R(usable[a], usable[b]);
            }
            Eigen::LLT<Matrix> llt(sub);
            if (llt.info() == Eigen::Success) {
                const double full_gain = cs.dot(llt.solve(cs));
                if (std::isfinite(full_gain)) best_gain = std::min(best_gain, full_gain);
            }
        }
        return rss - best_gain;
    }

    void visit(std::vector<std::size_t>& chosen, const Matrix& R, const Vector& c,
               const std::vector<std::size_t>& cand, double rss) {
        if (exhausted_) return;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return;
        }
        const std::size_t s = k_ - chosen.size();
        const auto m = static_cast<Eigen::Index>(cand.size());
        if (cand.size() < s) return;

        if (s == 1) {
            for (Eigen::Index i = 0; i < m; ++i) {
                if (R(i, i) <= floor_[cand[static_cast<std::size_t>(i)]]) {
                    ++skipped_;
                    continue;
                }
                chosen.push_back(cand[static_cast<std::size_t>(i)]);
                consider(chosen, rss - c(i) * c(i) / R(i, i));
                chosen.pop_back();
            }
            return;
        }

        if (s == 2) {
            for (Eigen::Index a = 0; a + 1 < m; ++a) {
                const double raa = R(a, a);
                if (raa <= floor_[cand[static_cast<std::size_t>(a)]]) {
                    ++skipped_;
                    continue;
                }
                const double ca = c(a);
                const double rss_a = rss - ca * ca / raa;
                for (Eigen::Index i = a + 1; i < m; ++i) {
                    const double ria = R(i, a);
                    const double d = R(i, i) - ria * ria / raa;
                    if (d <= floor_[cand[static_cast<std::size_t>(i)]]) {
                        ++skipped_;
                        continue;
                    }
                    const double ci = c(i) - ria * ca / raa;
                    const double pair_rss = rss_a - ci * ci / d;
                    if (pair_rss <= best_.rss + tie_tol_) {
                        chosen.push_back(cand[static_cast<std::size_t>(a)]);
                        chosen.push_back(cand[static_cast<std::size_t>(i)]);
                        consider(chosen, pair_rss);
                        chosen.pop_back();
                        chosen.pop_back();
                    }
                }
            }
            return;
        }

        if (lower_bound(R, c, cand, rss, s, chosen.size()) > best_.rss + tie_tol_) return;

        for (Eigen::Index a = 0; a + static_cast<Eigen::Index>(s) <= m; ++a) {
            const double raa = R(a, a);
            if (raa <= floor_[cand[static_cast<std::size_t>(a)]]) {
                ++skipped_;
                continue;
            }
            const Eigen::Index rest = m - a - 1;
            const Vector col = R.col(a).tail(rest);
            Matrix child = R.bottomRightCorner(rest, rest);
            child.noalias() -= (col / raa) * col.transpose();
            Vector child_c = c.tail(rest) - col * (c(a) / raa);
            std::vector<std::size_t> child_cand(cand.begin() + a + 1, cand.end());

            chosen.push_back(cand[static_cast<std::size_t>(a)]);
            visit(chosen, child, child_c, child_cand, rss - c(a) * c(a) / raa);
            chosen.pop_back();
            if (exhausted_) return;
        }
    }

    std::size_t n_;
    std::size_t k_;
    std::uint64_t budget_;
    double yy_;
    double tie_tol_ = 0.0;
    std::vector<std::size_t> order_;
    std::vector<double> floor_;
    Matrix root_R_;
    Vector root_c_;

    Incumbent best_;
    std::uint64_t nodes_ = 0;
    std::uint64_t skipped_ = 0;
    bool exhausted_ = false;
};

// Greedy forward selection on the sweep form; the starting incumbent.
Incumbent forward_selection(const Matrix& gram, const Vector& xty, double yy, std::size_t k) {
    Matrix R = gram;
    Vector c = xty;
    const Eigen::Index p = gram.cols();
    std::vector<bool> used(static_cast<std::size_t>(p), false);
    Incumbent inc;
    double rss = yy;
    for (std::size_t step = 0; step < k; ++step) {
        Eigen::Index pick = -1;
        double best_gain = -1.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (used[static_cast<std::size_t>(j)] || R(j, j) <= kSingularRatio * gram(j, j)) continue;
            const double g = c(j) * c(j) / R(j, j);
            if (g > best_gain) {
                best_gain = g;
                pick = j;
            }
        }
        if (pick < 0) return Incumbent{};
        used[static_cast<std::size_t>(pick)] = true;
        inc.support.push_back(static_cast<std::size_t>(pick));
        rss -= best_gain;
        const Vector col = R.col(pick);
        const double rpp = R(pick, pick);
        const double cp = c(pick);
        R.noalias() -= (col / rpp) * col.transpose();
        c -= col * (cp / rpp);
    }
    std::sort(inc.support.begin(), inc.support.end());
    inc.rss = rss;
    return inc;
}

// RSS through a direct Cholesky of the support's Gram matrix, or NaN when
// the support is numerically singular.
double support_rss(const Matrix& gram, const Vector& xty, double yy, const std::vector<std::size_t>& s) {
    const auto k = static_cast<Eigen::Index>(s.size());
    Matrix G(k, k);
    Vector b(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        b(i) = xty(static_cast<Eigen::Index>(s[static_cast<std::size_t>(i)]));
        for (Eigen::Index j = 0; j < k; ++j)
            G(i, j) = gram(static_cast<Eigen::Index>(s[static_cast<std::size_t>(i)]),
                           static_cast<Eigen::Index>(s[static_cast<std::size_t>(j)]));
    }
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
    const Vector l = llt.matrixL().toDenseMatrix().diagonal();
    for (Eigen::Index i = 0; i < k; ++i)
        if (l(i) * l(i) <= kSingularRatio * G(i, i)) return std::numeric_limits<double>::quiet_NaN();
    return yy - b.dot(llt.solve(b));
}

Estimate finish(const DesignMatrix& X, const Vector& y, const std::vector<std::size_t>& support) {
    const auto k = static_cast<Eigen::Index>(support.size());
    Matrix Xs(X.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i) Xs.col(i) = X.col(static_cast<Eigen::Index>(support[static_cast<std::size_t>(i)]));
    const Vector coef = Xs.colPivHouseholderQr().solve(y);
    Estimate e;
    e.coefficients = Vector::Zero(X.cols());
    for (Eigen::Index i = 0; i < k; ++i)
        e.coefficients(static_cast<Eigen::Index>(support[static_cast<std::size_t>(i)])) = coef(i);
    e.objective = (y - Xs * coef).squaredNorm();
    e.support = support;
    e.converged = true;
    return e;
}

Estimate exhaustive(const DesignMatrix& X, const Vector& y, const Matrix& gram, const Vector& xty,
                    double yy, std::size_t k, std::uint64_t budget) {
    const auto p = static_cast<std::size_t>(X.cols());
    const std::uint64_t total = binomial(p, k);
    if (total > budget)
        throw BudgetExceeded("bss_fit: exhaustive search needs C(" + std::to_string(p) + ", " +
                             std::to_string(k) + ") = " + std::to_string(total) +
                             " supports, budget is " + std::to_string(budget));
    std::vector<std::size_t> s(k);
    std::iota(s.begin(), s.end(), 0);
    Incumbent best;
    const double tie_tol = 1e-12 * std::max(yy, 1.0);
    std::uint64_t skipped = 0, visited = 0;
    while (true) {
        ++visited;
        const double rss = support_rss(gram, xty, yy, s);
        if (std::isnan(rss))
            ++skipped;
        else if (rss < best.rss - tie_tol) {
            best.rss = rss;
            best.support = s;
        }
        // Next combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && s[i - 1] == p - k + i - 1) --i;
        if (i == 0) break;
        ++s[i - 1];
        for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
    }
    if (best.support.empty()) throw SingularSystem("bss_fit: every support is numerically singular");
    Estimate e = finish(X, y, best.support);
    e.certificate = Certificate::Exact;
    e.nodes = visited;
    e.skipped_supports = skipped;
    return e;
}

}  // namespace

Estimate bss_fit(const DesignMatrix& X, const Vector& y, std::size_t k, BssMode mode, std::uint64_t budget) {
    const auto n = static_cast<std::size_t>(X.rows());
    const auto p = static_cast<std::size_t>(X.cols());
    if (y.size() != X.rows()) throw std::invalid_argument("bss_fit: y length does not match X rows");
    if (k == 0 || k > std::min(n, p))
        throw std::invalid_argument("bss_fit: need 1 <= k <= min(n, p), got k = " + std::to_string(k));
    if (budget == 0) throw std::invalid_argument("bss_fit: budget must be >= 1");

    const Matrix gram = X.transpose() * X;
    const Vector xty = X.transpose() * y;
    const double yy = y.squaredNorm();

    if (mode == BssMode::Exhaustive) return exhaustive(X, y, gram, xty, yy, k, budget);

    BranchAndBound search(gram, xty, yy, n, k, budget);
    const Incumbent greedy = forward_selection(gram, xty, yy, k);
    if (!greedy.support.empty()) {
        const double rss = support_rss(gram, xty, yy, greedy.support);
        if (!std::isnan(rss)) search.seed_incumbent(greedy.support, rss);
    }
    search.run();
    if (search.best().support.empty()) throw SingularSystem("bss_fit: no numerically regular support found");

    Estimate e = finish(X, y, search.best().support);
    e.certificate = search.complete() ? Certificate::BranchAndBoundOptimal : Certificate::HeuristicOnly;
    e.nodes = std::min(search.nodes(), budget);
    e.skipped_supports = search.skipped();
    e.iterations = static_cast<std::size_t>(e.nodes);
    return e;
}

}  // namespace snrlab
