#include "lnagell/modular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lnagell/errors.hpp"
#include "parallel.hpp"

namespace lnagell {

namespace {

using nlohmann::json;

constexpr std::array<long, 4> kTwists{1, -1, 2, -2};
constexpr u64 kTwistCheckBound = 500;

bool good_reduction(const EllipticCurveZ& E, u64 l) {
    return l != 2 && reduce(E.discriminant(), l) != 0;
}

/// Discrete-log table of F_l^* with respect to g: dlog[g^k] = k.
std::vector<u64> dlog_table(u64 g, u64 l) {
    std::vector<u64> dlog(l, 0);
    u64 x = 1;
    for (u64 k = 0; k + 1 < l; ++k) {
        dlog[x] = k;
        x = mulmod(x, g, l);
    }
    if (x != 1) throw PreconditionError("dlog_table: " + std::to_string(g) + " is not a primitive root");
    return dlog;
}

bool is_primitive_root(u64 g, u64 l) {
    if (g == 0 || g >= l) return false;
    for (const auto& f : factorize(l - 1)) {
        if (modpow(g, (l - 1) / f.prime, l) == 1) return false;
    }
    return true;
}

std::string set_text(const std::vector<u64>& s) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : "") << s[i];
    os << "}";
    return os.str();
}

bool within_pm1(const std::vector<u64>& s, u64 p) {
    return std::all_of(s.begin(), s.end(), [p](u64 v) { return v == 1 || v == p - 1; });
}

std::vector<u64> intersect(const std::vector<u64>& a, const std::vector<u64>& b) {
    std::vector<u64> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

long EllipticCurveZ::discriminant() const {
    const long a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
    const long b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
    const long b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

std::vector<signed char> legendre_table(u64 l) {
    std::vector<signed char> chi(l, -1);
    chi[0] = 0;
    for (u64 x = 1; x <= l / 2; ++x) chi[mulmod(x, x, l)] = 1;
    return chi;
}

long ap_point_count(const EllipticCurveZ& E, u64 l) {
    if (!is_prime(l)) throw PreconditionError("ap_point_count: " + std::to_string(l) + " is not prime");
    if (!good_reduction(E, l)) {
        throw PreconditionError("ap_point_count: bad reduction of " + E.label + " at l = " + std::to_string(l));
    }
    const auto chi = legendre_table(l);
    const u64 a1 = reduce(E.a[0], l), a2 = reduce(E.a[1], l), a3 = reduce(E.a[2], l);
    const u64 a4 = reduce(E.a[3], l), a6 = reduce(E.a[4], l);
    long sum = 0;
    for (u64 x = 0; x < l; ++x) {
        // (2y + a1 x + a3)^2 = 4(x^3 + a2 x^2 + a4 x + a6) + (a1 x + a3)^2
        const u64 cubic = (mulmod(mulmod(x, x, l), (x + a2) % l, l) + mulmod(a4, x, l) + a6) % l;
        const u64 lin = (mulmod(a1, x, l) + a3) % l;
        sum += chi[(mulmod(4, cubic, l) + mulmod(lin, lin, l)) % l];
    }
    return -sum;
}

std::optional<long> ap_frey_residue(u64 delta, u64 l, const std::vector<signed char>& chi) {
    if (mulmod(delta, delta, l) == 2 % l) return std::nullopt;
    const u64 two_delta = mulmod(2, delta, l);
    long sum = 0;
    for (u64 x = 1; x < l; ++x) {
        const u64 q = (mulmod(x, x, l) + mulmod(two_delta, x, l) + 2) % l;
        sum += chi[mulmod(x, q, l)];
    }
    return -sum;
}

CurveSet parse_curves(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("curves: invalid JSON: ") + e.what());
    }
    const json& list = doc.is_object() && doc.contains("curves") ? doc.at("curves") : doc;
    if (!list.is_array()) throw PreconditionError("curves: expected a list of curves");
    CurveSet set;
    for (const auto& item : list) {
        EllipticCurveZ E;
        try {
            E.label = item.at("label").get<std::string>();
            const auto coeffs = item.at("coefficients").get<std::vector<long>>();
            if (coeffs.size() != 5) throw PreconditionError("curves: " + E.label + " needs five coefficients");
            std::copy(coeffs.begin(), coeffs.end(), E.a.begin());
            if (item.contains("note")) E.note = item.at("note").get<std::string>();
        } catch (const json::exception& e) {
            throw PreconditionError(std::string("curves: malformed entry: ") + e.what());
        }
        if (E.discriminant() == 0) throw PreconditionError("curves: " + E.label + " is singular");
        set.curves.push_back(std::move(E));
    }
    if (set.curves.size() != 4) throw PreconditionError("curves: expected exactly four curves");

    std::vector<std::size_t> matches;
    for (std::size_t i = 0; i < set.curves.size(); ++i) {
        bool ok = true;
        for (const auto& [l, a] : kNewformPrefix) {
            if (!good_reduction(set.curves[i], l) || ap_point_count(set.curves[i], l) != a) ok = false;
        }
        if (ok) matches.push_back(i);
    }
    if (matches.size() != 1) {
        throw PreconditionError("curves: " + std::to_string(matches.size()) +
                                " curves match the newform prefix (expected exactly one)");
    }
    set.minimal = matches[0];
    const auto primes = primes_up_to(kTwistCheckBound);
    std::vector<long> base;
    for (u64 l : primes) base.push_back(l > 2 && good_reduction(set.curves[set.minimal], l)
                                            ? ap_point_count(set.curves[set.minimal], l)
                                            : 0);
    std::vector<bool> used(kTwists.size(), false);
    for (const auto& E : set.curves) {
        std::optional<long> found;
        for (std::size_t t = 0; t < kTwists.size() && !found; ++t) {
            if (used[t]) continue;
            bool ok = true;
            for (std::size_t k = 0; k < primes.size() && ok; ++k) {
                const u64 l = primes[k];
                if (l == 2 || !good_reduction(set.curves[set.minimal], l)) continue;
                if (!good_reduction(E, l)) {
                    ok = false;
                    break;
                }
                ok = ap_point_count(E, l) == legendre(kTwists[t], l) * base[k];
            }
            if (ok) {
                found = kTwists[t];
                used[t] = true;
            }
        }
        if (!found) throw PreconditionError("curves: " + E.label + " is not a quadratic twist of the minimal curve");
        set.twist_character.push_back(*found);
    }
    return set;
}

CurveSet load_curves(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve asset " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_curves(ss.str());
}

AuxConditions aux_conditions(u64 p, u64 l, const EllipticCurveZ& F) {
    AuxConditions out;
    const bool form = l > 1 && (l - 1) % p == 0 && is_prime(l);
    out.n = form ? (l - 1) / p : 0;
    out.conditions.push_back({"l_is_np_plus_1", form, true, "l = " + std::to_string(l)});
    const bool pm1 = l % 8 == 1 || l % 8 == 7;
    out.conditions.push_back({"l_pm1_mod_8", pm1, true, "l mod 8 = " + std::to_string(l % 8)});
    if (!form || !pm1 || !good_reduction(F, l)) {
        out.conditions.push_back({"a_l_not_pm_l_plus_1", false, true, form && pm1 ? "bad reduction" : "not evaluated"});
        out.conditions.push_back({"one_plus_theta_pow_n_ne_1", false, true, "not evaluated"});
        return out;
    }
    out.a_l = ap_point_count(F, l);
    const u64 a = reduce(out.a_l, p), s = (l + 1) % p;
    const bool c3 = a != s && a != (p - s) % p;
    out.conditions.push_back({"a_l_not_pm_l_plus_1", c3, true, "a_l = " + std::to_string(out.a_l)});
    out.theta = *sqrt_mod(2, l);
    const u64 power = modpow((1 + out.theta) % l, out.n, l);
    out.conditions.push_back({"one_plus_theta_pow_n_ne_1", power != 1, true, "(1+theta)^n = " + std::to_string(power)});
    return out;
}

ResidueSet residue_set(u64 p, u64 l, const EllipticCurveZ& F, u64 g) {
    const auto aux = aux_conditions(p, l, F);
    if (!aux.passed()) {
        throw PreconditionError("residue_set: l = " + std::to_string(l) + " fails " +
                                [&] {
                                    for (const auto& c : aux.conditions) {
                                        if (!c.passed) return c.name;
                                    }
                                    return std::string();
                                }());
    }
    ResidueSet out;
    out.l = l;
    out.n = aux.n;
    out.primitive_root = g == 0 ? primitive_root(l) : g;
    const auto dlog = dlog_table(out.primitive_root, l);
    const auto chi = legendre_table(l);
    const u64 target = reduce(aux.a_l, p);
    for (u64 d = 0; d < l; ++d) {
        const u64 v = (mulmod(d, d, l) + l - 2) % l;
        // v in mu_n  <=>  v != 0 and its discrete log is divisible by p
        if (v == 0 || dlog[v] % p != 0) continue;
        out.X_prime.push_back(d);
        auto a = ap_frey_residue(d, l, chi);
        if (a && reduce(*a, p) == target) out.X.push_back(d);
    }
    const u64 base = dlog[(1 + aux.theta) % l] % p;
    if (base == 0) throw std::logic_error("residue_set: Phi(1 + theta) vanishes although condition (4) holds");
    const u64 inv = invmod(base, p);
    for (u64 d : out.X) out.R.push_back(mulmod(dlog[(d + aux.theta) % l] % p, inv, p));
    std::sort(out.R.begin(), out.R.end());
    out.R.erase(std::unique(out.R.begin(), out.R.end()), out.R.end());
    return out;
}

std::string certificate_to_json(const RCertificate& cert) {
    using ojson = nlohmann::ordered_json;
    ojson primes = ojson::array();
    for (const auto& e : cert.primes) {
        primes.push_back({{"l", e.l}, {"n", e.n}, {"primitive_root", e.primitive_root}, {"R_set", e.R}});
    }
    ojson doc = {{"p", cert.p}, {"curve_label", cert.curve_label}, {"primes", primes}, {"intersection", cert.intersection}};
    return doc.dump(2);
}

RCertificate certificate_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        RCertificate cert;
        cert.p = doc.at("p").get<u64>();
        cert.curve_label = doc.at("curve_label").get<std::string>();
        for (const auto& e : doc.at("primes")) {
            cert.primes.push_back({e.at("l").get<u64>(), e.at("n").get<u64>(), e.at("primitive_root").get<u64>(),
                                   e.at("R_set").get<std::vector<u64>>()});
        }
        cert.intersection = doc.at("intersection").get<std::vector<u64>>();
        return cert;
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("certificate: malformed JSON: ") + e.what());
    }
}

CertificateOutcome generate_certificate(u64 p, const EllipticCurveZ& F, const CertificateOptions& opt) {
    if (p < 5 || !is_prime(p)) throw PreconditionError("generate_certificate: p must be a prime >= 5");
    const u64 max_n = opt.max_n ? opt.max_n : std::max<u64>(1, 1000000 / p);
    const unsigned workers = detail::resolve_workers(opt.workers);

    CertificateOutcome out;
    out.certificate.p = p;
    out.certificate.curve_label = F.label;
    std::vector<u64> current(p);
    for (u64 r = 0; r < p; ++r) current[r] = r;

    std::vector<u64> batch;
    for (u64 n = 1; n <= max_n && !within_pm1(current, p);) {
        batch.clear();
        for (; n <= max_n && batch.size() < std::max<std::size_t>(workers, 1); ++n) {
            const u64 l = n * p + 1;
            if ((l % 8 == 1 || l % 8 == 7) && is_prime(l)) batch.push_back(l);
        }
        std::vector<std::optional<ResidueSet>> sets(batch.size());
        detail::parallel_for(batch.size(), workers, [&](std::size_t i) {
            if (aux_conditions(p, batch[i], F).passed()) sets[i] = residue_set(p, batch[i], F);
        });
        for (auto& s : sets) {
            if (!s) continue;
            ++out.primes_scanned;
            auto next = intersect(current, s->R);
            if (next.size() < current.size()) {
                out.certificate.primes.push_back({s->l, s->n, s->primitive_root, s->R});
                current = std::move(next);
                if (within_pm1(current, p)) break;
            }
        }
    }
    out.certificate.intersection = current;
    out.ok = within_pm1(current, p);
    if (!out.ok) {
        out.failure = "no certificate for p = " + std::to_string(p) + " on " + F.label + " with n <= " +
                      std::to_string(max_n) + "; residual set " + set_text(current);
    }
    return out;
}

CertificateCheck verify_certificate(const RCertificate& cert, const CurveSet& curves) {
    auto fail = [](std::string why) { return CertificateCheck{false, std::move(why)}; };
    const u64 p = cert.p;
    if (p < 5 || !is_prime(p)) return fail("p = " + std::to_string(p) + " is not a prime >= 5");
    const EllipticCurveZ* F = nullptr;
    for (const auto& c : curves.curves) {
        if (c.label == cert.curve_label) F = &c;
    }
    if (!F) return fail("unknown curve label " + cert.curve_label);

    std::vector<u64> current(p);
    for (u64 r = 0; r < p; ++r) current[r] = r;
    u64 last_l = 0;
    for (const auto& e : cert.primes) {
        const std::string tag = "l = " + std::to_string(e.l) + ": ";
        if (e.l <= last_l) return fail(tag + "primes not in increasing order");
        last_l = e.l;
        if (!is_prime(e.l)) return fail(tag + "not prime");
        if (e.n * p + 1 != e.l) return fail(tag + "n does not match l = np + 1");
        const auto aux = aux_conditions(p, e.l, *F);
        for (const auto& c : aux.conditions) {
            if (!c.passed) return fail(tag + "condition " + c.name + " fails");
        }
        if (!is_primitive_root(e.primitive_root, e.l)) return fail(tag + "primitive_root is not primitive");
        const auto rs = residue_set(p, e.l, *F, e.primitive_root);
        if (rs.R != e.R) return fail(tag + "R_set mismatch (recomputed " + set_text(rs.R) + ")");
        current = intersect(current, rs.R);
    }
    if (current != cert.intersection) return fail("intersection mismatch (recomputed " + set_text(current) + ")");
    if (!within_pm1(current, p)) return fail("intersection " + set_text(current) + " is not within {1, p-1}");
    return {true, {}};
}

std::vector<FreyTraceEntry> frey_trace_scan(const CurveSet& curves, u64 p_max) {
    const auto& F = curves.curves.at(curves.minimal);
    std::vector<FreyTraceEntry> out;
    for (u64 p : primes_up_to(p_max > 0 ? p_max - 1 : 0)) {
        if (p < 5) continue;
        FreyTraceEntry e;
        e.p = p;
        e.a_p = ap_point_count(F, p);
        const u64 r = reduce(e.a_p, p);
        e.not_pm1 = r != 1 && r != p - 1;
        e.a_p_squared_mod_p = static_cast<long>(mulmod(r, r, p));
        e.square_not_1 = e.a_p_squared_mod_p != 1;
        out.push_back(e);
    }
    return out;
}

int chi8(u64 n) {
    switch (n % 8) {
        case 1:
        case 3:
            return 1;
        case 5:
        case 7:
            return -1;
        default:
            return 0;
    }
}

long ap_formula_representation_sum(u64 p) {
    const long P = static_cast<long>(p);
    const long A = static_cast<long>(std::sqrt(static_cast<double>(p))) + 1;
    long sum = 0;
    for (long a = -A; a <= A; ++a) {
        const long ra = P - a * a;
        if (ra < 0) continue;
        for (long b = -A; b <= A; ++b) {
            const long rb = ra - 2 * b * b;
            if (rb < 0) continue;
            for (long c = -A; c <= A; ++c) {
                const long rc = rb - 4 * c * c;
                if (rc < 0 || rc % 8 != 0) continue;
                const long d2 = rc / 8;
                const long d = std::lround(std::sqrt(static_cast<double>(d2)));
                if (d * d != d2) continue;
                sum += d == 0 ? 1 : 2 * (d % 2 == 0 ? 1 : -1);
            }
        }
    }
    return sum;
}

long ap_formula(u64 p) {
    if (p < 3 || !is_prime(p)) throw PreconditionError("ap_formula: p must be an odd prime");
    if (p % 8 == 3) throw PreconditionError("ap_formula: p = 3 mod 8 is not covered by the closed form");
    const long s = ap_formula_representation_sum(p);
    if (s % 2 != 0) throw std::logic_error("ap_formula: odd representation sum");
    return chi8(p) * s / 2;
}

}  // namespace lnagell
