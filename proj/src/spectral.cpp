#include "traceform/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "traceform/bessel.hpp"
#include "traceform/rng.hpp"

namespace traceform {

double window_psi(double x) {
    if (x <= 1.0 || x >= 2.0) return 0.0;
    return std::exp(4.0 + 1.0 / ((x - 1.0) * (x - 2.0)));
}

double window_psi1(double x, double X, const PrimeLevel& lv, const AfeWeightConfig& wcfg) {
    double psi = window_psi(x);
    if (psi == 0.0) return 0.0;
    double xi = x * X / std::pow(double(lv.q), 2.01);
    return psi * v_weight(xi, wcfg);
}

double CoefficientVector::norm2() const {
    std::vector<double> sq(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sq[i] = std::norm(a[i]);
    return pairwise_sum(sq);
}

bool CoefficientVector::norm2_consistent(double tol) const {
    return std::fabs(norm2() - stored_norm2) <= tol * std::max(1.0, stored_norm2);
}

static CoefficientVector empty_vector(double N) {
    CoefficientVector v;
    v.N = N;
    v.first = i64(std::floor(N)) + 1;
    return v;
}

CoefficientVector prop25_vector(i64 b, i64 c, i64 d, i64 j, const PrimeLevel& lv, double X,
                                const AfeWeightConfig& wcfg) {
    if (b < 1 || c < 1 || d < 1 || j < 1)
        throw std::domain_error("prop25_vector: tuple entries must be positive");
    i64 L = std::lcm(b, c);
    double Y = X / (16.0 * std::pow(PI, 4.0) * double(j * L * d) * double(j * L * d));
    CoefficientVector v = empty_vector(Y);
    i64 last = i64(std::floor(2.0 * Y));
    if (last < v.first) return v;
    v.a.assign(std::size_t(last - v.first + 1), 0.0);
    i64 bc = b * c;
    for (i64 w = v.first; w <= last; ++w) {
        if (w % bc) continue;
        double psi1 = window_psi1(double(w) / Y, X, lv, wcfg);
        if (psi1 == 0.0) continue;
        v.a[std::size_t(w - v.first)] =
            double(sigma_k(w / bc, 4)) * psi1 / std::sqrt(double(w));
    }
    v.stored_norm2 = v.norm2();
    return v;
}

CoefficientVector random_unit_vector(double N, std::uint64_t seed) {
    CoefficientVector v = empty_vector(N);
    i64 last = i64(std::floor(2.0 * N));
    if (last < v.first) return v;
    Rng rng(seed);
    v.a.resize(std::size_t(last - v.first + 1));
    for (auto& z : v.a) z = rng.unit_circle();
    v.stored_norm2 = v.norm2();
    return v;
}

// ---------- Petersson formula ----------

static cplx i_pow_minus_k(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

double petersson_tail_bound(const PrimeLevel& lv, double mn_max, i64 c_cap) {
    if (lv.k < 3) throw std::domain_error("petersson_tail_bound: needs k >= 3");
    if (c_cap < lv.q || mn_max < 1)
        throw std::domain_error("petersson_tail_bound: bad arguments");
    // sum_{c > C, q | c} 2 pi (2 pi sqrt(mn)/c)^{k-1}/(k-1)! * (|S| <= c)/c
    //   <= 2 pi (2 pi sqrt(mn))^{k-1} / ((k-1)! (k-2) q C^{k-2})
    int k = lv.k;
    double lt = std::log(TWO_PI) + (k - 1) * std::log(TWO_PI * std::sqrt(mn_max)) -
                std::lgamma(double(k)) - std::log(double(k - 2)) - std::log(double(lv.q)) -
                (k - 2) * std::log(double(c_cap));
    return std::exp(lt);
}

i64 default_c_cap(const PrimeLevel& lv, double mn_max) {
    for (i64 m = 1; m <= 200; ++m)
        if (petersson_tail_bound(lv, mn_max, m * lv.q) < 1e-10) return m * lv.q;
    return 200 * lv.q;
}

PeterssonEval petersson_delta(i64 m, i64 n, const PrimeLevel& lv, const DirichletCharacter& chi,
                              i64 c_cap) {
    if (m < 1 || n < 1) throw std::domain_error("petersson_delta: m, n must be positive");
    if (lv.k < 3) throw std::domain_error("petersson_delta: needs k >= 3");
    if (chi.modulus() != lv.q) throw std::domain_error("petersson_delta: character level mismatch");
    const double x0 = 4.0 * PI * std::sqrt(double(m) * double(n));
    std::vector<cplx> terms;
    for (i64 c = lv.q; c <= c_cap; c += lv.q)
        terms.push_back(kloosterman_twisted(m, n, c, chi) / double(c) *
                        bessel_j(lv.k - 1, x0 / double(c)));
    PeterssonEval ev;
    ev.value = (m == n ? 1.0 : 0.0) + TWO_PI * i_pow_minus_k(lv.k) * pairwise_sum(terms);
    ev.tail = petersson_tail_bound(lv, double(m) * double(n), c_cap);
    return ev;
}

// ---------- bucketed pair-average engine ----------

PairAverageEngine::PairAverageEngine(const PrimeLevel& lv, double N, i64 c_cap)
    : lv_(lv), N_(N), c_cap_(c_cap) {
    if (lv.k < 3) throw std::domain_error("PairAverageEngine: needs k >= 3");
    first_ = i64(std::floor(N)) + 1;
    i64 last = i64(std::floor(2.0 * N));
    n_count_ = std::max<i64>(0, last - first_ + 1);
    if (n_count_ == 0) {
        tail_ = 0.0;
        return;
    }
    if (c_cap < lv.q) throw std::domain_error("PairAverageEngine: c_cap below level");
    tail_ = petersson_tail_bound(lv, double(last) * double(last), c_cap);

    const i64 q = lv.q;
    const std::size_t pairs = std::size_t(n_count_) * n_count_;
    buckets_.assign(pairs * std::size_t(q), 0.0);
    std::vector<cplx> tmp(pairs * std::size_t(q), 0.0);
    std::vector<cplx> wtab;
    std::vector<i64> am(n_count_), dn(n_count_);

    for (i64 c = q; c <= c_cap_; c += q) {
        std::fill(tmp.begin(), tmp.end(), cplx(0.0));
        auto inv = inverse_table(c);
        wtab.resize(c);
        for (i64 r = 0; r < c; ++r) wtab[r] = unit_e(double(r) / double(c));
        for (i64 a = 1; a < c; ++a) {
            i64 d = inv[a];
            if (d == 0) continue;
            i64 rho = d % q;
            for (i64 i = 0; i < n_count_; ++i) {
                am[i] = a * ((first_ + i) % c) % c;
                dn[i] = d * ((first_ + i) % c) % c;
            }
            for (i64 i = 0; i < n_count_; ++i) {
                cplx* row0 = tmp.data() + std::size_t(i) * n_count_ * q + rho;
                i64 ai = am[i];
                for (i64 j = 0; j < n_count_; ++j) {
                    i64 r = ai + dn[j];
                    if (r >= c) r -= c;
                    row0[std::size_t(j) * q] += wtab[r];
                }
            }
        }
        // fold the J_{k-1}(4 pi sqrt(mn)/c)/c factor per pair
        for (i64 i = 0; i < n_count_; ++i)
            for (i64 j = 0; j < n_count_; ++j) {
                double arg = 4.0 * PI * std::sqrt(double(first_ + i) * double(first_ + j));
                double f = bessel_j(lv_.k - 1, arg / double(c)) / double(c);
                if (f == 0.0) continue;
                cplx* dst = buckets_.data() + (std::size_t(i) * n_count_ + std::size_t(j)) * q;
                const cplx* src = tmp.data() + (std::size_t(i) * n_count_ + std::size_t(j)) * q;
                for (i64 rho = 0; rho < q; ++rho) dst[rho] += f * src[rho];
            }
    }
}

cplx PairAverageEngine::pair_sum(std::size_t pair_idx, const DirichletCharacter& chi) const {
    const cplx* row = buckets_.data() + pair_idx * std::size_t(lv_.q);
    cplx s = 0.0;
    for (i64 rho = 1; rho < lv_.q; ++rho) s += chi.value(rho) * row[rho];
    return s;
}

std::vector<double> PairAverageEngine::per_character_terms(const CoefficientVector& alpha,
                                                           int parity) const {
    if (parity != 1 && parity != -1)
        throw std::domain_error("per_character_terms: parity must be +-1");
    std::vector<double> out;
    if (n_count_ == 0) return out;
    if (alpha.first != first_ || alpha.count() != n_count_)
        throw std::domain_error("per_character_terms: coefficient window mismatch");
    // support indices with nonzero coefficients
    std::vector<i64> sup;
    for (i64 i = 0; i < n_count_; ++i)
        if (alpha.a[std::size_t(i)] != 0.0) sup.push_back(i);
    const cplx rot = TWO_PI * i_pow_minus_k(lv_.k);
    const double scale = 2.0 / double(lv_.q - 1);
    const i64 q = lv_.q;
    std::vector<cplx> chiv(q);
    double imag_acc = 0.0;
    const bool matched = parity == ((lv_.k % 2 == 0) ? 1 : -1);
    for (i64 idx = 0; idx <= q - 2; ++idx) {
        DirichletCharacter chi(q, idx);
        if (chi.parity() != parity) continue;
        for (i64 r = 0; r < q; ++r) chiv[std::size_t(r)] = (r == 0) ? 0.0 : chi.value(r);
        cplx vchi = 0.0;
        for (i64 i : sup)
            for (i64 j : sup) {
                const cplx* row =
                    buckets_.data() + (std::size_t(i) * n_count_ + std::size_t(j)) * q;
                cplx s = 0.0;
                for (i64 rho = 1; rho < q; ++rho) s += chiv[std::size_t(rho)] * row[rho];
                cplx delta = (i == j ? 1.0 : 0.0) + rot * s;
                vchi += alpha.a[std::size_t(i)] * std::conj(alpha.a[std::size_t(j)]) * delta;
            }
        imag_acc += vchi.imag();
        out.push_back(scale * vchi.real());
    }
    if (matched && std::fabs(imag_acc) * scale > 1e-7)
        throw std::runtime_error("per_character_terms: reality residual above 1e-7");
    return out;
}

double PairAverageEngine::parity_average(const CoefficientVector& alpha, int parity,
                                         bool folded) const {
    if (n_count_ == 0) return 0.0;
    if (!folded) {
        auto terms = per_character_terms(alpha, parity);
        return pairwise_sum(terms);
    }
    if (alpha.first != first_ || alpha.count() != n_count_)
        throw std::domain_error("parity_average: coefficient window mismatch");
    // (2/phi(q)) sum_{chi(-1)=parity} chi(rho) = [rho=1] + parity [rho=-1]
    std::vector<i64> sup;
    for (i64 i = 0; i < n_count_; ++i)
        if (alpha.a[std::size_t(i)] != 0.0) sup.push_back(i);
    const cplx rot = TWO_PI * i_pow_minus_k(lv_.k);
    const i64 q = lv_.q;
    cplx acc = 0.0;
    for (i64 i : sup)
        for (i64 j : sup) {
            const cplx* row = buckets_.data() + (std::size_t(i) * n_count_ + std::size_t(j)) * q;
            cplx folded_sum = row[1] + double(parity) * row[std::size_t(q - 1)];
            cplx delta = (i == j ? 1.0 : 0.0) + rot * folded_sum;
            acc += alpha.a[std::size_t(i)] * std::conj(alpha.a[std::size_t(j)]) * delta;
        }
    return acc.real();
}

double prop25_quantity(i64 b, i64 c, const CoefficientVector& alpha, const PrimeLevel& lv,
                       int parity, i64 c_cap, bool folded) {
    (void)b;
    (void)c;  // the tuple is already baked into alpha's support pattern
    if (alpha.count() == 0) return 0.0;
    PairAverageEngine engine(lv, alpha.N, c_cap);
    double val = engine.parity_average(alpha, parity, folded);
    if (val < -1e-8)
        throw std::runtime_error("prop25_quantity: negative beyond -1e-8 (truncation failure)");
    return val;
}

double prop25_oracle(const CoefficientVector& alpha, const PrimeLevel& lv, int parity, i64 c_cap) {
    if (alpha.count() == 0) return 0.0;
    cplx acc = 0.0;
    for (i64 idx = 0; idx <= lv.q - 2; ++idx) {
        DirichletCharacter chi(lv.q, idx);
        if (chi.parity() != parity) continue;
        for (i64 m = alpha.first; m <= alpha.last(); ++m) {
            if (alpha.at(m) == 0.0) continue;
            for (i64 n = alpha.first; n <= alpha.last(); ++n) {
                if (alpha.at(n) == 0.0) continue;
                acc += alpha.at(m) * std::conj(alpha.at(n)) *
                       petersson_delta(m, n, lv, chi, c_cap).value;
            }
        }
    }
    double scale = 2.0 / double(lv.q - 1);
    if (std::fabs(acc.imag()) * scale > 1e-7)
        throw std::runtime_error("prop25_oracle: reality residual above 1e-7");
    return scale * acc.real();
}

// ---------- asymptotic large sieve ----------

cplx p_ht(const CoefficientVector& alpha, const PrimeLevel& lv, i64 h, i64 t) {
    if (h < 1 || t < 1) throw std::domain_error("p_ht: h, t must be positive");
    if (std::gcd(t, lv.q) != 1) throw std::domain_error("p_ht: t must be coprime to q");
    i64 qbar = (t == 1) ? 0 : mod_inverse(lv.q, t);
    std::vector<cplx> terms;
    for (i64 n = alpha.first; n <= alpha.last(); ++n) {
        cplx an = alpha.at(n);
        if (an == 0.0) continue;
        double s = kloosterman(h * qbar, n, t);
        double j = bessel_j(lv.k - 1,
                            4.0 * PI / double(t) * std::sqrt(double(h) * double(n) / double(lv.q)));
        terms.push_back(an * s * j);
    }
    return terms.empty() ? cplx(0.0) : pairwise_sum(terms);
}

SieveSides large_sieve_sides(const CoefficientVector& alpha, const PrimeLevel& lv, i64 h_cut,
                             i64 c_cap) {
    SieveSides out;
    if (alpha.count() == 0) return out;
    double N = alpha.N;
    if (N < double(lv.q)) throw std::domain_error("large_sieve_sides: requires N >= q");
    i64 T = i64(std::floor(N / double(lv.q)));
    if (h_cut < 1 || h_cut > T)
        throw std::domain_error("large_sieve_sides: need 1 <= H <= T = N/q");

    int parity = (lv.k % 2 == 0) ? 1 : -1;
    PairAverageEngine engine(lv, N, c_cap);
    out.lhs = engine.parity_average(alpha, parity);

    std::vector<double> blocks;
    for (i64 t = 1; t <= T; ++t) {
        if (std::gcd(t, lv.q) != 1) continue;
        double w = (TWO_PI / double(t)) * (TWO_PI / double(t));
        for (i64 h = 1; h <= h_cut; ++h) blocks.push_back(w * std::norm(p_ht(alpha, lv, h, t)));
    }
    out.rhs_main = pairwise_sum(blocks) / double(lv.q);
    out.residual = out.lhs - out.rhs_main;
    double n2 = alpha.norm2();
    out.envelope = std::pow(N, 0.1) *
                   (N / (double(lv.q) * lv.q) + std::sqrt(N / (double(lv.q) * double(h_cut)))) * n2;
    return out;
}

Gl1Result gl1_large_sieve_check(const std::vector<cplx>& alpha_m, const std::vector<cplx>& beta_n,
                                i64 Q) {
    if (Q < 1) throw std::domain_error("gl1_large_sieve_check: Q must be >= 1");
    const i64 M = i64(alpha_m.size()), Nn = i64(beta_n.size());
    Gl1Result res;
    double na = 0, nb = 0;
    for (auto& z : alpha_m) na += std::norm(z);
    for (auto& z : beta_n) nb += std::norm(z);
    std::vector<double> outer;
    for (i64 qq = 1; qq <= Q; ++qq) {
        for (i64 a = 1; a <= qq; ++a) {
            if (std::gcd(a, qq) != 1) continue;
            cplx s = 0.0;
            for (i64 n = 1; n <= Nn; ++n) {
                if (std::gcd(n, qq) != 1 || beta_n[std::size_t(n - 1)] == 0.0) continue;
                i64 nbar = (qq == 1) ? 0 : mod_inverse(n, qq);
                for (i64 m = 1; m <= M; ++m) {
                    if (std::gcd(m, qq) != 1 || alpha_m[std::size_t(m - 1)] == 0.0) continue;
                    s += alpha_m[std::size_t(m - 1)] * beta_n[std::size_t(n - 1)] *
                         unit_e(double(a * (m % qq) % qq * nbar % qq) / double(qq));
                }
            }
            outer.push_back(std::norm(s));
        }
    }
    res.lhs = pairwise_sum(outer);
    res.rhs = (double(Q) * Q + double(M) * Nn) * na * nb;
    res.ok = res.lhs <= res.rhs * (1.0 + 1e-9);
    return res;
}

SieveExperiment::SieveExperiment(const PrimeLevel& lv, double X_, i64 b, i64 c, i64 d, i64 j,
                                 double T1_, double H1_, double N_)
    : level(lv), X(X_) {
    if (b < 1 || c < 1 || d < 1 || j < 1)
        throw std::domain_error("SieveExperiment: tuple entries must be positive");
    if (!(X > 0) || X > std::pow(double(lv.q), 2.2))
        throw std::domain_error("SieveExperiment: X must lie in (0, q^{2+eps}]");
    i64 L = std::lcm(b, c);
    Y = X / (16.0 * std::pow(PI, 4.0) * double(j * L * d) * double(j * L * d));
    T = Y / double(lv.q);
    H = T;  // coupled by construction: H = Y/q keeps the error term small
    T1 = T1_;
    H1 = H1_;
    N = N_;
    if (!(T1 > 0 && T1 <= T)) throw std::domain_error("SieveExperiment: need 0 < T1 <= T");
    if (!(H1 > 0 && H1 <= H)) throw std::domain_error("SieveExperiment: need 0 < H1 <= H");
    if (!(N > 0 && N <= 2.0 * std::sqrt(Y / (double(b) * c))))
        throw std::domain_error("SieveExperiment: need N <= sqrt(Y/(bc)) up to the dyadic factor");
}

// ---------- growth-trend experiment ----------

std::pair<double, double> cauchy_prefactors(double X) {
    if (!(X >= 1)) throw std::domain_error("cauchy_prefactors: X must be >= 1");
    double S = std::sqrt(X);
    i64 cap = i64(std::floor(S));
    double a1 = 0, a2 = 0;
    for (i64 b = 1; b <= cap; ++b)
        for (i64 c = 1; c <= cap; ++c) {
            i64 L = std::lcm(b, c);
            if (L > cap) continue;
            double g = double(std::gcd(b, c));
            for (i64 d = 1; L * d <= cap; ++d) {
                double s1 = double(sigma(d * (L / b))) * double(sigma(d * (L / c)));
                for (i64 j = 1; double(j * L * d) <= S; ++j) {
                    double den = double(j) * d * b * c;
                    double sj = double(sigma(j));
                    a1 += g * sj * sj * s1 * s1 / den;
                    a2 += g / den;
                }
            }
        }
    return {a1, a2};
}

std::vector<MomentTrendRow> moment_trend(const std::vector<PrimeLevel>& levels,
                                         const AfeWeightConfig& wcfg) {
    std::vector<MomentTrendRow> rows;
    for (const auto& lv : levels) {
        MomentTrendRow row;
        row.q = lv.q;
        row.k = lv.k;
        row.X = double(lv.q) * double(lv.q);
        row.Y = row.X / (16.0 * std::pow(PI, 4.0));
        try {
            auto pf = cauchy_prefactors(row.X);
            row.prefactor_a1 = pf.first;
            row.prefactor_a2 = pf.second;
            AfeWeightConfig cfg = wcfg;
            cfg.k = lv.k;
            CoefficientVector alpha = prop25_vector(1, 1, 1, 1, lv, row.X, cfg);
            row.window_count = alpha.count();
            row.norm2 = alpha.norm2();
            if (alpha.count() > 0 && row.norm2 > 0) {
                row.c_cap = default_c_cap(lv, double(alpha.last()) * double(alpha.last()));
                int parity = (lv.k % 2 == 0) ? 1 : -1;
                PairAverageEngine engine(lv, alpha.N, row.c_cap);
                row.value = engine.parity_average(alpha, parity);
                row.tail = engine.tail();
                row.ratio = row.value / row.norm2;
                if (row.value < -1e-8)
                    throw std::runtime_error("negative beyond -1e-8 (truncation failure)");
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double trend_slope(const std::vector<MomentTrendRow>& rows, bool use_ratio) {
    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        double v = use_ratio ? r.ratio : r.value;
        if (r.failed || !(v > 0)) continue;
        lx.push_back(std::log(double(r.q)));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 2) throw std::runtime_error("trend_slope: fewer than 2 usable rows");
    return ols_slope(lx, ly);
}

}  // namespace traceform
