#include "lnagell/large_y.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "lnagell/errors.hpp"
#include "lnagell/linear_forms.hpp"
#include "parallel.hpp"
#include "real_ctx.hpp"

namespace lnagell {

namespace {

using detail::DoubleCtx;
using detail::IntervalCtx;

constexpr mpfr_prec_t kCheckCap = mpfr_prec_t{1} << 16;

template <class R>
struct RhoTerms {
    R A, B, C;
};

template <class Ctx, class R>
RhoTerms<R> rho_terms(const Ctx& c, u64 p, const R& Kp, u64 L, u64 R1, u64 R2, const R& mu) {
    using std::log;
    const long Rv = static_cast<long>(R1 + R2 - 1), m = static_cast<long>(std::min(R2, p));
    const R one = c.num(1), Li = c.num(static_cast<long>(L)), pi = c.num(static_cast<long>(p));
    const R sigma = one - (mu - one) * (mu - one) / c.num(2);
    const R C2 = Kp * Li / c.num(m);
    const R C4 = Li * pi / c.num(2 * m);
    const R C5 = c.num(m) / c.num(12 * Rv);
    const R quarter = one / c.num(4) - C5;
    const R A = Kp * (sigma * Li - one);
    const R B = quarter * Li * C2 * c.log_unit();
    const R C = c.num(2) * Kp * (log(C4) + c.lit("1.5")) + quarter * Li * (c.num(2 * Rv) + C2 * c.log_unit());
    return {A, B, C};
}

/// Integer ceiling of an enclosed real, escalating precision until the enclosure pins it down.
template <class F>
u64 certain_ceil(F&& eval, mpfr_prec_t prec) {
    for (mpfr_prec_t q = prec; q <= kCheckCap; q *= 2) {
        Interval v = eval(q);
        if (!v.bounded()) continue;
        const double lo = std::ceil(v.lo_d()), hi = std::ceil(v.hi_d());
        if (lo == hi && lo >= 0) return static_cast<u64>(lo);
    }
    throw PrecisionError("could not determine an integer ceiling");
}

template <class F>
ConditionVerdict check(std::string name, F&& eval, mpfr_prec_t prec) {
    if (!eval(prec).bounded()) return {std::move(name), false, true, "undefined (domain error)"};
    auto v = decide_sign(std::forward<F>(eval), prec, kCheckCap);
    std::ostringstream os;
    os << "value " << v.value << " at " << v.precision << " bits";
    return {std::move(name), v.sign > 0, true, os.str()};
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

u64 parse_u64(const std::string& s, const std::string& field) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw PreconditionError("table: bad integer in field " + field + ": '" + s + "'");
    }
}

}  // namespace

LargeYConstants large_y_constants(const LargeYParams& P, const mpq_class& y0, mpfr_prec_t prec) {
    if (P.p < 3 || !is_prime(P.p)) throw PreconditionError("large_y_constants: p must be an odd prime");
    if (P.L < 1 || P.R1 < 1 || P.R2 < 1) throw PreconditionError("large_y_constants: L, R1, R2 must be positive");
    if (P.K_prime <= 0) throw PreconditionError("large_y_constants: K' must be positive");
    if (P.mu < mpq_class(1, 3) || P.mu > 1) throw PreconditionError("large_y_constants: mu must lie in [1/3, 1]");
    if (P.rho <= 1) throw PreconditionError("large_y_constants: rho must exceed 1");
    if (y0 <= 1) throw PreconditionError("large_y_constants: y0 must exceed 1");

    LargeYConstants out;
    const u64 p = P.p, L = P.L, R1 = P.R1, R2 = P.R2;
    const u64 m = std::min(R2, p);
    out.R = R1 + R2 - 1;
    out.S1 = (L + R1 - 1) / R1;
    out.K = certain_ceil([&](mpfr_prec_t q) { IntervalCtx c{q}; return c.q(P.K_prime) * c.log_q(y0); }, prec);
    out.N = out.K * L;
    const u64 K = out.K, R = out.R, S1 = out.S1;

    const bool r2_ok = 2 * R2 <= (K - 1) * L + 1;
    out.checks.push_back({"two_R2_le_Kminus1_L_plus_1", r2_ok, true,
                          "2R2 = " + std::to_string(2 * R2) + ", (K-1)L+1 = " + std::to_string((K - 1) * L + 1)});
    if (r2_ok) {
        const u64 num = (K - 1) * L + 1 - 2 * R2;
        out.S2 = (num + m - 1) / m + 2;
    }
    const u64 S = S1 + out.S2 - 1;
    out.checks.push_back({"S_over_4_ge_R_over_2p", r2_ok && S * p >= 2 * R, true,
                          "S = " + std::to_string(S) + ", R = " + std::to_string(R)});
    out.checks.push_back({"N_exceeds_e", out.N >= 3, true, "N = " + std::to_string(out.N)});

    struct All {
        Interval C1, C2, C3, C4, C5, C6, C7, C8, C9, ly, logb, gu, eps, S_upper, e24, lhs25, e27, e29, hyp;
    };
    auto all = [&](mpfr_prec_t q) {
        using std::log;
        IntervalCtx c{q};
        const Interval one = c.num(1);
        const Interval Kp = c.q(P.K_prime), mu = c.q(P.mu), rho = c.q(P.rho);
        const Interval Li = c.num(static_cast<long>(L)), pi = c.num(static_cast<long>(p)), mi = c.num(static_cast<long>(m));
        const Interval Ri = c.num(static_cast<long>(R)), Ki = c.num(static_cast<long>(K));
        const long S1l = static_cast<long>(S1), R2l = static_cast<long>(R2), Ll = static_cast<long>(L);
        const Interval sigma = one - square(mu - one) / c.num(2);
        const Interval a2 = (rho + one) * c.log_unit();
        const Interval C1 = c.num(S1l + 2) + c.num(1 - 2 * R2l) / mi;
        const Interval C2 = Kp * Li / mi;
        const Interval C3 = (c.num(2) * (Ri - one) + (c.num(S1l) + c.num(1 - Ll - 2 * R2l) / mi + one) * pi) / c.num(2);
        const Interval C4 = Li * pi / (c.num(2) * mi);
        const Interval C5 = mi / (c.num(12) * Ri);
        const Interval C6 = (c.num(S1l + 2) * mi + c.num(1 - Ll - 2 * R2l)) / Li;
        const Interval C7 = (rho + one) * (c.num(2) * c.log_unit() + c.lit("1e-50")) / pi;
        const Interval ly = c.log_q(y0);
        const Interval logb = log(C3 / Ki + C4) + c.lit("1.5");
        const Interval gu = one / c.num(4) - C5 * Ki / (C6 + Ki);
        const Interval eps = stirling_bounds(out.N, K, q).eps_upper;
        const Interval lr = log(rho);
        const Interval C8 = Kp * (sigma * Li - one) * lr - c.num(2) * Kp * logb - gu * Li * (c.num(2) * Ri + C2 * a2);
        const Interval C9 = c.num(3) * log(Li) + gu * Li * (Ri * C7 + C1 * a2) + eps;
        const Interval S_upper = C1 + C2 * ly;
        const Interval decay = c.lit("0.7165") * exp(-(pi * ly / c.num(2)));
        const Interval slope = lr * mu * Li * Kp - pi / c.num(2);
        const Interval lhs25 = slope * ly + c.lit("1.053") + log(Li * S_upper / c.num(4)) + decay * Li * S_upper +
                               lr * mu * Li;
        const Interval e27 = C8 * ly - c.num(3) * log(Kp * ly + one) - C9;
        const Interval e29 = slope + C2 / S_upper + decay * Li * C2;
        const Interval hyp = ly - (c.num(3) / C8 - one / Kp);
        auto t = rho_terms(c, p, Kp, L, R1, R2, mu);
        const Interval e24 = t.A * lr - t.B * rho - t.C;
        return All{C1, C2, C3, C4, C5, C6, C7, C8, C9, ly, logb, gu, eps, S_upper, e24, lhs25, e27, e29, hyp};
    };

    const All v = all(prec);
    out.C1 = v.C1.mid();
    out.C2 = v.C2.mid();
    out.C3 = v.C3.mid();
    out.C4 = v.C4.mid();
    out.C5 = v.C5.mid();
    out.C6 = v.C6.mid();
    out.C7 = v.C7.mid();
    out.C8 = v.C8.mid();
    out.C9 = v.C9.mid();
    out.S_upper = v.S_upper.mid();
    out.log_b_upper = v.logb.mid();
    out.g_upper = v.gu.mid();
    out.eps_upper = v.eps.mid();
    out.rho_condition = v.e24.mid();
    out.contradiction_lhs = v.lhs25.mid();
    out.determinant_margin = v.e27.mid();
    out.slope_limit = v.e29.mid();

    out.checks.push_back(check("C1_positive", [&](mpfr_prec_t q) { return all(q).C1; }, prec));
    out.checks.push_back(check("C3_positive", [&](mpfr_prec_t q) { return all(q).C3; }, prec));
    out.checks.push_back(check("C6_positive", [&](mpfr_prec_t q) { return all(q).C6; }, prec));
    out.checks.push_back(check("C8_positive", [&](mpfr_prec_t q) { return all(q).C8; }, prec));
    out.checks.push_back(check("log_y_exceeds_3_over_C8_minus_1_over_Kp", [&](mpfr_prec_t q) { return all(q).hyp; }, prec));
    out.checks.push_back(check("determinant_margin_positive", [&](mpfr_prec_t q) { return all(q).e27; }, prec));
    out.checks.push_back(check("slope_negative", [&](mpfr_prec_t q) { return -all(q).e29; }, prec));
    out.checks.push_back(check("bound_contradiction", [&](mpfr_prec_t q) { return -all(q).lhs25; }, prec));
    return out;
}

RhoConditionCoeffs rho_condition_coeffs(u64 p, double K_prime, u64 L, u64 R1, u64 R2, double mu) {
    DoubleCtx c;
    auto t = rho_terms(c, p, K_prime, L, R1, R2, mu);
    return {t.A, t.B, t.C};
}

std::optional<double> rho_condition_min(const RhoConditionCoeffs& k) {
    if (k.A <= 0 || k.B <= 0) return std::nullopt;
    const double rho0 = k.A / k.B;
    auto phi = [&](double r) { return k.A * std::log(r) - k.B * r - k.C; };
    if (rho0 <= 1 || phi(rho0) <= 0) return std::nullopt;
    double lo = 1, hi = rho0;
    for (int i = 0; i < 60; ++i) {
        const double mid = (lo + hi) / 2;
        (phi(mid) > 0 ? hi : lo) = mid;
    }
    return hi;
}

bool verify_rho_condition(u64 p, const mpq_class& K_prime, u64 L, u64 R1, u64 R2, const mpq_class& mu, const mpq_class& rho,
                 mpfr_prec_t prec) {
    auto v = decide_sign(
        [&](mpfr_prec_t q) {
            IntervalCtx c{q};
            auto t = rho_terms(c, p, c.q(K_prime), L, R1, R2, c.q(mu));
            const Interval r = c.q(rho);
            return t.A * log(r) - t.B * r - t.C;
        },
        prec, kCheckCap);
    return v.sign > 0;
}

std::vector<TableRow> parse_table(const std::string& csv) {
    std::vector<TableRow> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(trim(cell));
        if (header) {
            header = false;
            const std::vector<std::string> expect{"primes", "y", "K_prime", "L", "R1", "R2", "mu", "rho"};
            if (f != expect) throw PreconditionError("table: header must be primes,y,K_prime,L,R1,R2,mu,rho");
            continue;
        }
        if (f.size() != 8) throw PreconditionError("table: expected 8 fields in '" + line + "'");
        TableRow row;
        row.primes_text = f[0];
        if (auto dash = f[0].find('-'); dash != std::string::npos) {
            row.range_lo = parse_u64(trim(f[0].substr(0, dash)), "primes");
            row.range_hi = parse_u64(trim(f[0].substr(dash + 1)), "primes");
            if (row.range_lo > row.range_hi) throw PreconditionError("table: empty prime range " + f[0]);
            for (u64 q = row.range_lo; q <= row.range_hi; ++q) {
                if (is_prime(q)) row.primes.push_back(q);
            }
        } else {
            std::istringstream ps(f[0]);
            for (std::string tok; ps >> tok;) {
                const u64 q = parse_u64(tok, "primes");
                if (!is_prime(q)) throw PreconditionError("table: " + tok + " is not prime");
                row.primes.push_back(q);
            }
            if (row.primes.empty()) throw PreconditionError("table: empty primes field");
            row.range_lo = *std::min_element(row.primes.begin(), row.primes.end());
            row.range_hi = *std::max_element(row.primes.begin(), row.primes.end());
        }
        row.y_text = f[1];
        row.y = parse_rational(f[1]);
        row.K_prime = parse_rational(f[2]);
        row.L = parse_u64(f[3], "L");
        row.R1 = parse_u64(f[4], "R1");
        row.R2 = parse_u64(f[5], "R2");
        row.mu = parse_rational(f[6]);
        row.rho = parse_rational(f[7]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TableRow> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_table(ss.str());
}

TableRowReport verify_table_row(const TableRow& row, u64 p, mpfr_prec_t prec) {
    TableRowReport rep;
    rep.p = p;
    rep.constants = large_y_constants({p, row.K_prime, row.L, row.R1, row.R2, row.mu, row.rho}, row.y, prec);
    rep.passed = rep.constants.passed();
    return rep;
}

TableReport verify_table(const std::vector<TableRow>& rows, mpfr_prec_t prec, unsigned workers) {
    TableReport rep;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const u64 lo = std::max(rows[i].range_lo, rows[j].range_lo);
            const u64 hi = std::min(rows[i].range_hi, rows[j].range_hi);
            if (lo > hi) continue;
            std::string affected;
            for (u64 q = lo; q <= hi; ++q) {
                if (is_prime(q)) affected += (affected.empty() ? "" : " ") + std::to_string(q);
            }
            std::ostringstream os;
            os << "rows " << rows[i].primes_text << " and " << rows[j].primes_text << " share [" << lo << ", " << hi
               << "]; primes affected: " << (affected.empty() ? "none" : affected);
            rep.overlaps.push_back(os.str());
        }
    }
    std::vector<std::pair<std::size_t, u64>> jobs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (u64 q : rows[i].primes) jobs.emplace_back(i, q);
    }
    rep.primes.resize(jobs.size());
    detail::parallel_for(jobs.size(), workers, [&](std::size_t k) {
        rep.primes[k] = verify_table_row(rows[jobs[k].first], jobs[k].second, prec);
        rep.primes[k].row = jobs[k].first;
    });
    rep.passed = !rep.primes.empty() &&
                 std::all_of(rep.primes.begin(), rep.primes.end(), [](const auto& r) { return r.passed; });
    return rep;
}

namespace {

struct CellResult {
    std::optional<SearchCandidate> best;
    u64 evaluations = 0;
};

auto rank(const SearchCandidate& c) { return std::tie(c.objective, c.L, c.R1, c.R2, c.K_prime, c.mu); }

CellResult search_cell(u64 p, u64 L, u64 R1, u64 R2, u64 budget) {
    CellResult out;
    u64 evals = 0;
    auto objective = [&](double Kp, double mu) -> std::optional<std::pair<double, double>> {
        ++evals;
        if (mu < 1.0 / 3.0 || mu > 1.0 || Kp <= 0) return std::nullopt;
        auto rho = rho_condition_min(rho_condition_coeffs(p, Kp, L, R1, R2, mu));
        if (!rho) return std::nullopt;
        return std::make_pair(std::log(*rho) * mu * static_cast<double>(L) * Kp, *rho);
    };
    for (double K0 : {15.0, 27.0, 40.0}) {
        for (double mu0 : {0.45, 0.6, 0.75}) {
            evals = 0;
            double Kp = K0, mu = mu0;
            auto cur = objective(Kp, mu);
            if (!cur) continue;
            double sk = 1.0, sm = 0.04;
            while (sk > 1e-5 && evals < budget) {
                bool moved = false;
                const double dirs[8][2] = {{sk, 0}, {-sk, 0}, {0, sm}, {0, -sm}, {sk, sm}, {-sk, -sm}, {sk, -sm}, {-sk, sm}};
                for (const auto& d : dirs) {
                    auto o = objective(Kp + d[0], mu + d[1]);
                    if (o && o->first < cur->first) {
                        cur = o;
                        Kp += d[0];
                        mu += d[1];
                        moved = true;
                        break;
                    }
                }
                if (!moved) {
                    sk /= 2;
                    sm /= 2;
                }
            }
            out.evaluations += evals;
            SearchCandidate cand{L, R1, R2, Kp, mu, cur->second, cur->first};
            if (!out.best || rank(cand) < rank(*out.best)) out.best = cand;
        }
    }
    return out;
}

}  // namespace

SearchResult param_search(u64 p, const SearchOptions& opt) {
    if (p < 3) throw PreconditionError("param_search: p must be at least 3");
    if (opt.L_min < 2 || opt.L_min > opt.L_max || opt.R1_max < 1 || opt.R2_step < 1 || opt.R2_min < 1 ||
        opt.R2_min > opt.R2_max) {
        throw PreconditionError("param_search: empty lattice");
    }
    std::vector<std::tuple<u64, u64, u64>> cells;
    for (u64 L = opt.L_min; L <= opt.L_max; ++L) {
        for (u64 R1 = 1; R1 <= opt.R1_max; ++R1) {
            for (u64 R2 = opt.R2_min; R2 <= opt.R2_max; R2 += opt.R2_step) cells.emplace_back(L, R1, R2);
        }
    }
    std::vector<CellResult> results(cells.size());
    detail::parallel_for(cells.size(), opt.workers, [&](std::size_t i) {
        const auto [L, R1, R2] = cells[i];
        results[i] = search_cell(p, L, R1, R2, opt.budget);
    });

    SearchResult out;
    out.p = p;
    out.cells = cells.size();
    for (const auto& r : results) {
        out.evaluations += r.evaluations;
        if (r.best && (!out.best || rank(*r.best) < rank(*out.best))) out.best = r.best;
    }
    if (!out.best) return out;

    auto& b = *out.best;
    out.K_prime = mpq_class(b.K_prime);
    out.mu = mpq_class(b.mu);
    for (double slack : {1e-9, 1e-6, 1e-3}) {
        out.rho = mpq_class(b.rho * (1 + slack));
        if (verify_rho_condition(p, out.K_prime, b.L, b.R1, b.R2, out.mu, out.rho)) {
            out.reverified = true;
            break;
        }
    }
    if (out.reverified) {
        b.rho = out.rho.get_d();
        auto v = decide_sign(
            [&](mpfr_prec_t q) {
                IntervalCtx c{q};
                return c.num(static_cast<long>(p)) / c.num(2) -
                       log(c.q(out.rho)) * c.q(out.mu) * c.num(static_cast<long>(b.L)) * c.q(out.K_prime);
            },
            kDefaultBasePrecision, kCheckCap);
        out.contradiction = v.sign > 0;
        b.objective = std::log(b.rho) * b.mu * static_cast<double>(b.L) * b.K_prime;
    }
    return out;
}

}  // namespace lnagell
