#include "traceform/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "traceform/afe.hpp"
#include "traceform/bessel.hpp"
#include "traceform/rng.hpp"
#include "traceform/spectral.hpp"
#include "traceform/voronoi.hpp"

namespace traceform {

Field Field::str(std::string key, std::string v) {
    Field f;
    f.key = std::move(key);
    f.kind = Kind::text;
    f.text = std::move(v);
    return f;
}
Field Field::num(std::string key, double v) {
    Field f;
    f.key = std::move(key);
    f.kind = Kind::real;
    f.real = v;
    return f;
}
Field Field::count(std::string key, i64 v) {
    Field f;
    f.key = std::move(key);
    f.kind = Kind::integer;
    f.integer = v;
    return f;
}
Field Field::flag(std::string key, bool v) {
    Field f;
    f.key = std::move(key);
    f.kind = Kind::boolean;
    f.boolean = v;
    return f;
}

std::string Field::formatted() const {
    switch (kind) {
        case Kind::text: return text;
        case Kind::real: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.12e", real);
            return buf;
        }
        case Kind::integer: return std::to_string(integer);
        case Kind::boolean: return boolean ? "1" : "0";
    }
    return {};
}

Report::Report(const std::string& format) {
    if (format == "jsonl")
        jsonl_ = true;
    else if (format != "csv")
        throw std::domain_error("unknown format '" + format + "' (expected csv or jsonl)");
}

void Report::set_meta(Record meta) { meta_ = std::move(meta); }
void Report::add(Record row) { rows_.push_back(std::move(row)); }

static std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string Report::render() const {
    std::string out;
    if (!jsonl_) {
        out += "#";
        for (const auto& f : meta_) out += " " + f.key + "=" + f.formatted();
        out += "\n";
        if (!rows_.empty()) {
            for (std::size_t i = 0; i < rows_.front().size(); ++i)
                out += (i ? "," : "") + rows_.front()[i].key;
            out += "\n";
            for (const auto& row : rows_) {
                for (std::size_t i = 0; i < row.size(); ++i)
                    out += (i ? "," : "") + csv_escape(row[i].formatted());
                out += "\n";
            }
        }
        return out;
    }
    auto to_json = [](const Record& rec, const char* tag) {
        nlohmann::ordered_json j;
        j["record"] = tag;
        for (const auto& f : rec) switch (f.kind) {
                case Field::Kind::text: j[f.key] = f.text; break;
                case Field::Kind::real: j[f.key] = f.real; break;
                case Field::Kind::integer: j[f.key] = f.integer; break;
                case Field::Kind::boolean: j[f.key] = f.boolean; break;
            }
        return j.dump();
    };
    out += to_json(meta_, "header") + "\n";
    for (const auto& row : rows_) out += to_json(row, "row") + "\n";
    return out;
}

// ---------------- verify suites ----------------

namespace {

double tol_or(const RunConfig& cfg, double def) { return cfg.tolerance > 0 ? cfg.tolerance : def; }

SuiteRow suite_divisor_identity() {
    bool ok = true;
    for (i64 n1 = 1; n1 <= 200 && ok; ++n1)
        for (i64 n2 = 1; n2 <= 200; ++n2)
            if (!sigma_product_identity_check(n1, n2)) {
                ok = false;
                break;
            }
    return {"divisor_convolution_identity", ok, 0.0, "exact, all n1,n2 <= 200"};
}

SuiteRow suite_ramanujan(const RunConfig& cfg) {
    double worst = 0;
    for (i64 t = 1; t <= 200; ++t)
        for (i64 h = 1; h <= 200; ++h)
            worst = std::max(worst, std::fabs(double(ramanujan_sum(h, t)) - ramanujan_sum_enum(h, t)));
    double tol = tol_or(cfg, 1e-9);
    return {"ramanujan_sum_routes", worst <= tol, worst, "closed form vs unit-sum, h,t <= 200"};
}

SuiteRow suite_kloosterman_symmetry(const RunConfig& cfg) {
    Rng rng(cfg.seed);
    double worst = 0;
    for (int i = 0; i < 500; ++i) {
        i64 c = 1 + i64(rng.uniform() * 400);
        i64 m = 1 + i64(rng.uniform() * 1000);
        i64 n = 1 + i64(rng.uniform() * 1000);
        worst = std::max(worst, std::fabs(kloosterman(m, n, c) - kloosterman(n, m, c)));
    }
    double tol = tol_or(cfg, 1e-9);
    return {"kloosterman_symmetry", worst <= tol, worst, "S(m,n;c)=S(n,m;c), 500 seeded triples"};
}

SuiteRow suite_kloosterman_weil(const RunConfig& cfg) {
    Rng rng(cfg.seed + 1);
    double excess = 0;  // max over cases of |S|/(2 sqrt p) - 1
    for (i64 p : primes_in(2, 300))
        for (int rep = 0; rep < 3; ++rep) {
            i64 m = 1 + i64(rng.uniform() * (p - 1));
            i64 n = 1 + i64(rng.uniform() * (p - 1));
            double ratio = std::fabs(kloosterman(m, n, p)) / (2.0 * std::sqrt(double(p)));
            excess = std::max(excess, ratio - 1.0);
        }
    double worst = std::max(0.0, excess);
    double tol = tol_or(cfg, 1e-9);
    return {"kloosterman_weil_bound", worst <= tol, worst, "|S(m,n;p)| <= 2 sqrt p, primes p <= 300"};
}

SuiteRow suite_twisted_reduction(const RunConfig& cfg) {
    Rng rng(cfg.seed + 2);
    const i64 qs[4] = {5, 7, 11, 13};
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        i64 q = qs[std::size_t(rng.uniform() * 4)];
        i64 c = q * (1 + i64(rng.uniform() * 30));
        i64 m = 1 + i64(rng.uniform() * 500);
        i64 n = 1 + i64(rng.uniform() * 500);
        DirichletCharacter trivial(q, 0);
        worst = std::max(worst, std::abs(kloosterman_twisted(m, n, c, trivial) -
                                         cplx(kloosterman(m, n, c))));
    }
    double tol = tol_or(cfg, 1e-9);
    return {"twisted_kloosterman_reduction", worst <= tol, worst,
            "trivial character recovers untwisted sum, 200 triples"};
}

SuiteRow suite_hecke(const RunConfig& cfg) {
    PrimeLevel lv(13, 3);
    double worst = 0;
    for (int s = 0; s < 10; ++s) {
        auto sys = make_hecke_system(lv, i64(s) % 12, cfg.seed + std::uint64_t(s), 500);
        auto chi = sys.character();
        for (i64 m = 1; m <= 500; ++m)
            for (i64 n = 1; m * n <= 500; ++n) {
                cplx rhs = 0;
                i64 g = std::gcd(m, n);
                for (i64 d = 1; d <= g; ++d)
                    if (g % d == 0) rhs += chi.value(d) * sys.lam[std::size_t(m * n / (d * d))];
                worst = std::max(worst,
                                 std::abs(sys.lam[std::size_t(m)] * sys.lam[std::size_t(n)] - rhs));
            }
    }
    double tol = tol_or(cfg, 1e-10);
    return {"hecke_multiplicativity", worst <= tol, worst,
            "lambda(m)lambda(n) convolution law, 10 seeds, mn <= 500"};
}

SuiteRow suite_fourth_power(const RunConfig& cfg) {
    PrimeLevel lv(13, 3);
    double worst = 0;
    for (int s = 0; s < 10; ++s) {
        auto sys = make_hecke_system(lv, (i64(s) * 5 + 1) % 12, cfg.seed + 100 + std::uint64_t(s), 300);
        auto direct = l4_coefficients_direct(sys, 300);
        auto expanded = l4_coefficients_expanded(sys, 300);
        for (i64 n = 1; n <= 300; ++n)
            worst = std::max(worst, std::abs(direct[std::size_t(n)] - expanded[std::size_t(n)]));
    }
    double tol = tol_or(cfg, 1e-9);
    return {"fourth_power_coefficients", worst <= tol, worst,
            "lambda^4 Dirichlet coefficients, direct vs expanded, n <= 300"};
}

SuiteRow suite_smooth_weight(const RunConfig& cfg) {
    AfeWeightConfig wc;
    wc.k = cfg.k;
    double im1 = 0, im2 = 0;
    double near1 = v_weight(1e-10, wc, &im1);
    double far = v_weight(1e3, wc, &im2);
    double worst = std::max(std::fabs(near1 - 1.0), std::fabs(far));
    double imag = std::max(std::fabs(im1), std::fabs(im2));
    bool pass = worst <= tol_or(cfg, 1e-6) && imag <= 1e-10;
    char d[96];
    std::snprintf(d, sizeof(d), "V(1e-10)-1 and V(1e3); imag residual %.2e", imag);
    return {"smooth_weight_laws", pass, worst, d};
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
        xs[std::size_t(i)] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return xs;
}

SuiteRow suite_kernel_overlap(const RunConfig& cfg) {
    double worst = 0;
    for (const auto& row : bessel_table("y0", log_grid(0.05, 14.0, 50)))
        worst = std::max(worst, row.est_error);
    for (const auto& row : bessel_table("k0", log_grid(0.05, 14.0, 50)))
        worst = std::max(worst, row.est_error);
    for (const auto& row : bessel_table("j:10", log_grid(0.1, 50.0, 50)))
        worst = std::max(worst, row.est_error);
    double tol = tol_or(cfg, 1e-6);
    return {"kernel_overlap_grids", worst <= tol, worst,
            "dual-route agreement, 50-point grids (y0, k0, j:10)"};
}

SuiteRow suite_kernel_decay(const RunConfig& cfg) {
    double sup = 0;
    for (double s : {0.25, 0.5, 0.75}) {
        MellinKernel ker;
        ker.kind = MellinKernel::Kind::Y0;
        ker.contour_sigma = s;
        sup = std::max(sup, kernel_decay_sup(ker));
    }
    MellinKernel k0;
    k0.kind = MellinKernel::Kind::K0;
    sup = std::max(sup, kernel_decay_sup(k0));
    double worst = sup / 10.0;  // pinned envelope: sup |gamma| t^{sigma+1} <= 10
    double tol = tol_or(cfg, 1.0);
    char d[80];
    std::snprintf(d, sizeof(d), "sup |kernel(-s+it)| t^{s+1} = %.6g on [1,100]", sup);
    return {"kernel_decay_bound", worst <= tol, worst, d};
}

SuiteRow suite_kernel_integral(const RunConfig& cfg) {
    MellinKernel ker;  // Y0 kind: the only algebraically-decaying case
    auto rep = kernel_abs_integral_stabilized(ker);
    double tol = tol_or(cfg, 1e-8);
    char d[96];
    std::snprintf(d, sizeof(d), "integral %.9g after %zu doublings", rep.final_value,
                  rep.heights.size());
    return {"kernel_integral_stabilizes", rep.stabilized && rep.last_increment <= tol,
            rep.last_increment, d};
}

SuiteRow suite_voronoi(const RunConfig& cfg) {
    double worst = 0;
    for (const auto& cs : voronoi_corpus()) {
        cplx lhs = voronoi_lhs(cs.g, cs.a, cs.c);
        cplx rhs = voronoi_rhs(cs.g, cs.a, cs.c).value;
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
    }
    double tol = tol_or(cfg, 1e-6);
    return {"voronoi_transform_corpus", worst <= tol, worst,
            "divisor-sum transform, 12 cases, c = 1..12"};
}

SuiteRow suite_decomposition(const RunConfig& cfg) {
    PrimeLevel lv(5, 11);
    AfeWeightConfig wc;
    double worst = 0;
    bool inv_ok = true;
    for (const auto& cs : nsum_corpus()) {
        auto chk = nsum_decomposition_check(cs, lv, wc);
        worst = std::max(worst, chk.rel_gap);
        inv_ok = inv_ok && chk.inverse_match;
    }
    double tol = tol_or(cfg, 1e-5);
    return {"shifted_sum_decomposition", worst <= tol && inv_ok, worst,
            "window sum vs transform pieces R1+R2+R3, 10 cases"};
}

SuiteRow suite_gl1(const RunConfig& cfg) {
    Rng rng(cfg.seed + 3);
    double excess = 0;
    for (int i = 0; i < 100; ++i) {
        i64 Q = 2 + i64(rng.uniform() * 19);
        i64 M = 1 + i64(rng.uniform() * 40);
        i64 N = 1 + i64(rng.uniform() * 40);
        std::vector<cplx> am(std::size_t(M), cplx(0)), bn(std::size_t(N), cplx(0));
        for (auto& z : am) z = rng.unit_circle();
        for (auto& z : bn) z = rng.unit_circle();
        auto res = gl1_large_sieve_check(am, bn, Q);
        excess = std::max(excess, res.lhs / res.rhs - 1.0);
    }
    double worst = std::max(0.0, excess);
    double tol = tol_or(cfg, 1e-9);
    return {"bilinear_exponential_sieve", worst <= tol, worst,
            "additive-twist bilinear bound, 100 seeded instances"};
}

SuiteRow suite_petersson_diagonal(const RunConfig& cfg) {
    PrimeLevel lv(17, 11);
    i64 c_cap = default_c_cap(lv, 9.0);
    double worst = 0;
    for (i64 idx : {1, 7, 15})  // odd characters match (-1)^k for k = 11
        for (i64 n = 1; n <= 3; ++n) {
            auto ev = petersson_delta(n, n, lv, DirichletCharacter(17, idx), c_cap);
            worst = std::max(worst, std::abs(ev.value - cplx(1.0)));
        }
    double tol = tol_or(cfg, 1e-6);
    return {"petersson_diagonal", worst <= tol, worst,
            "delta-normalized diagonal near 1, q=17 k=11"};
}

}  // namespace

std::vector<SuiteRow> verify_suites(const RunConfig& cfg) {
    std::vector<SuiteRow> rows;
    rows.push_back(suite_divisor_identity());
    rows.push_back(suite_ramanujan(cfg));
    rows.push_back(suite_kloosterman_symmetry(cfg));
    rows.push_back(suite_kloosterman_weil(cfg));
    rows.push_back(suite_twisted_reduction(cfg));
    rows.push_back(suite_hecke(cfg));
    rows.push_back(suite_fourth_power(cfg));
    rows.push_back(suite_smooth_weight(cfg));
    rows.push_back(suite_kernel_overlap(cfg));
    rows.push_back(suite_kernel_decay(cfg));
    rows.push_back(suite_kernel_integral(cfg));
    rows.push_back(suite_voronoi(cfg));
    rows.push_back(suite_decomposition(cfg));
    rows.push_back(suite_gl1(cfg));
    rows.push_back(suite_petersson_diagonal(cfg));
    return rows;
}

// ---------------- command runners ----------------

namespace {

Record base_meta(const RunConfig& cfg, const std::string& command) {
    Record m;
    m.push_back(Field::str("artifact", kArtifactName));
    m.push_back(Field::str("version", kArtifactVersion));
    m.push_back(Field::str("command", command));
    m.push_back(Field::str("format", cfg.format));
    m.push_back(Field::count("seed", i64(cfg.seed)));
    m.push_back(Field::str("tolerance",
                           cfg.tolerance > 0 ? Field::num("t", cfg.tolerance).formatted()
                                             : std::string("default")));
    m.push_back(Field::count("partitions", 1));
    return m;
}

int emit(const RunConfig& cfg, const Report& rep, bool all_pass) {
    std::string text = rep.render();
    if (cfg.out.empty()) {
        std::cout << text;
        std::cout.flush();
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + cfg.out);
        f << text;
    }
    return all_pass ? 0 : 1;
}

i64 elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
        .count();
}

}  // namespace

int run_verify(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto rows = verify_suites(cfg);
    Report rep(cfg.format);
    auto meta = base_meta(cfg, "verify");
    meta.push_back(Field::count("suites", i64(rows.size())));
    if (cfg.timings) meta.push_back(Field::count("runtime_ms", elapsed_ms(t0)));
    rep.set_meta(std::move(meta));
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.pass;
        rep.add({Field::str("name", r.name), Field::flag("pass", r.pass),
                 Field::num("worst_error", r.worst), Field::str("detail", r.detail)});
    }
    return emit(cfg, rep, all);
}

int run_moment(const RunConfig& cfg) {
    if (cfg.qmin > cfg.qmax) throw std::domain_error("moment: qmin must be <= qmax");
    AfeWeightConfig wc;
    wc.k = cfg.k;
    Report rep(cfg.format);
    bool all = true;
    std::vector<MomentTrendRow> rows;
    for (i64 p : primes_in(std::max<i64>(5, cfg.qmin), cfg.qmax)) {
        auto t0 = std::chrono::steady_clock::now();
        auto batch = moment_trend({PrimeLevel(p, cfg.k)}, wc);
        for (auto& row : batch) {
            all = all && !row.failed && std::isfinite(row.value) && row.value >= -1e-8;
            Record rec{Field::count("q", row.q),
                       Field::count("k", row.k),
                       Field::count("seed", i64(cfg.seed)),
                       Field::num("X", row.X),
                       Field::num("Y", row.Y),
                       Field::count("c_cap", row.c_cap),
                       Field::num("value", row.value),
                       Field::num("tail", row.tail),
                       Field::num("norm2", row.norm2),
                       Field::num("ratio", row.ratio),
                       Field::count("window_count", row.window_count),
                       Field::flag("failed", row.failed)};
            if (cfg.timings) rec.push_back(Field::count("runtime_ms", elapsed_ms(t0)));
            if (row.failed) rec.push_back(Field::str("error", row.error));
            rep.add(std::move(rec));
            rows.push_back(row);
        }
    }
    auto meta = base_meta(cfg, "moment");
    meta.push_back(Field::count("qmin", cfg.qmin));
    meta.push_back(Field::count("qmax", cfg.qmax));
    meta.push_back(Field::count("k", cfg.k));
    try {
        meta.push_back(Field::num("slope_value", trend_slope(rows, false)));
        meta.push_back(Field::num("slope_ratio", trend_slope(rows, true)));
    } catch (const std::exception&) {
        // fewer than 2 usable rows: no slope fields
    }
    rep.set_meta(std::move(meta));
    return emit(cfg, rep, all);
}

int run_sieve(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    PrimeLevel lv(cfg.q, cfg.k);
    CoefficientVector alpha = random_unit_vector(cfg.big_n, cfg.seed);
    i64 last = alpha.count() ? alpha.last() : i64(cfg.big_n) + 1;
    i64 c_cap = default_c_cap(lv, double(last) * double(last));
    auto sides = large_sieve_sides(alpha, lv, cfg.h_cut, c_cap);
    bool ok = std::fabs(sides.residual) <= 100.0 * sides.envelope;
    Report rep(cfg.format);
    auto meta = base_meta(cfg, "sieve");
    if (cfg.timings) meta.push_back(Field::count("runtime_ms", elapsed_ms(t0)));
    rep.set_meta(std::move(meta));
    rep.add({Field::count("q", cfg.q), Field::count("k", cfg.k),
             Field::count("seed", i64(cfg.seed)), Field::num("N", cfg.big_n),
             Field::count("h_cut", cfg.h_cut), Field::count("c_cap", c_cap),
             Field::num("lhs", sides.lhs), Field::num("rhs_main", sides.rhs_main),
             Field::num("residual", sides.residual), Field::num("envelope", sides.envelope),
             Field::flag("pass", ok)});
    return emit(cfg, rep, ok);
}

int run_voronoi(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep(cfg.format);
    double tol = cfg.tolerance > 0 ? cfg.tolerance : 1e-6;
    bool all = true;
    auto corpus = voronoi_corpus();
    std::vector<Record> recs;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& cs = corpus[i];
        cplx lhs = voronoi_lhs(cs.g, cs.a, cs.c);
        auto rhs = voronoi_rhs(cs.g, cs.a, cs.c);
        double rel = std::abs(lhs - rhs.value) / (1.0 + std::abs(lhs));
        bool pass = rel <= tol;
        all = all && pass;
        recs.push_back({Field::count("case", i64(i + 1)), Field::count("a", cs.a),
                        Field::count("c", cs.c), Field::str("g", cs.g.description()),
                        Field::num("lhs_re", lhs.real()), Field::num("lhs_im", lhs.imag()),
                        Field::num("rhs_re", rhs.value.real()),
                        Field::num("rhs_im", rhs.value.imag()), Field::num("rel_gap", rel),
                        Field::count("ell_cap", rhs.ell_cap), Field::num("y_tail", rhs.y_tail),
                        Field::num("k_tail", rhs.k_tail), Field::flag("pass", pass)});
    }
    auto meta = base_meta(cfg, "voronoi");
    meta.push_back(Field::count("cases", i64(corpus.size())));
    if (cfg.timings) meta.push_back(Field::count("runtime_ms", elapsed_ms(t0)));
    rep.set_meta(std::move(meta));
    for (auto& r : recs) rep.add(std::move(r));
    return emit(cfg, rep, all);
}

int run_bessel(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> xs;
    if (cfg.grid == "default") {
        double lo = 0.05, hi = 14.0;
        if (cfg.kind.rfind("j:", 0) == 0) {
            lo = 0.1;
            hi = 50.0;
        }
        for (int i = 0; i < 50; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / 49.0));
    } else {
        // "lo:hi:n" log-spaced
        double lo = 0, hi = 0;
        int n = 0;
        if (std::sscanf(cfg.grid.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || !(lo > 0) ||
            !(hi > lo) || n < 2)
            throw std::domain_error("bessel: grid must be 'default' or 'lo:hi:n' with 0<lo<hi, n>=2");
        for (int i = 0; i < n; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    }
    auto rows = bessel_table(cfg.kind, xs);
    double tol = cfg.tolerance > 0 ? cfg.tolerance : 1e-6;
    Report rep(cfg.format);
    bool all = true;
    for (const auto& r : rows) {
        bool pass = r.est_error <= tol;
        all = all && pass;
        rep.add({Field::num("x", r.x), Field::num("value", r.value),
                 Field::str("route", r.representation), Field::num("est_error", r.est_error),
                 Field::flag("pass", pass)});
    }
    auto meta = base_meta(cfg, "bessel");
    meta.push_back(Field::str("kind", cfg.kind));
    meta.push_back(Field::count("points", i64(rows.size())));
    if (cfg.timings) meta.push_back(Field::count("runtime_ms", elapsed_ms(t0)));
    rep.set_meta(std::move(meta));
    return emit(cfg, rep, all);
}

}  // namespace traceform
