#include <algorithm>

#include <gtest/gtest.h>

#include "lnagell/errors.hpp"
#include "lnagell/modular.hpp"

using namespace lnagell;

namespace {

const CurveSet& curves() {
    static const CurveSet set = load_curves(LNAGELL_ASSET_DIR "/curves_128.json");
    return set;
}

const EllipticCurveZ& minimal() { return curves().curves[curves().minimal]; }

bool within_pm1(const std::vector<u64>& s, u64 p) {
    return std::all_of(s.begin(), s.end(), [&](u64 v) { return v == 1 || v == p - 1; });
}

}  // namespace

TEST(Curves, LoadAndTwists) {
    ASSERT_EQ(curves().curves.size(), 4u);
    EXPECT_EQ(minimal().label, "128A1");
    for (auto [l, a] : kNewformPrefix) EXPECT_EQ(ap_point_count(minimal(), l), a);
    EXPECT_EQ(ap_point_count(minimal(), 3) * ap_point_count(minimal(), 3) - 3, 1);
    for (u64 l : primes_up_to(500)) {
        if (l == 2) continue;
        for (std::size_t i = 0; i < 4; ++i) {
            const long d = curves().twist_character[i];
            EXPECT_EQ(ap_point_count(curves().curves[i], l), legendre(d, l) * ap_point_count(minimal(), l));
        }
    }
    EXPECT_THROW(parse_curves("{\"curves\": []}"), PreconditionError);
}

TEST(Curves, HasseBound) {
    for (u64 l : primes_up_to(3000)) {
        if (l == 2) continue;
        for (const auto& E : curves().curves) {
            const long a = ap_point_count(E, l);
            EXPECT_LE(static_cast<double>(a) * a, 4.0 * static_cast<double>(l)) << E.label << " " << l;
        }
    }
    EXPECT_THROW(ap_point_count(minimal(), 2), PreconditionError);
}

TEST(FreyResidue, SingularExactlyWhenDeltaSquaredIsTwo) {
    for (u64 l : {7ull, 17ull, 23ull, 11ull, 13ull}) {
        const auto chi = legendre_table(l);
        for (u64 d = 0; d < l; ++d) {
            const auto a = ap_frey_residue(d, l, chi);
            EXPECT_EQ(!a.has_value(), mulmod(d, d, l) == 2 % l) << d << " mod " << l;
            if (a) EXPECT_LE(static_cast<double>(*a) * *a, 4.0 * static_cast<double>(l));
        }
    }
}

TEST(AuxConditions, Examples) {
    const auto a = aux_conditions(17, 103, minimal());
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(a.n, 6u);
    EXPECT_EQ(mulmod(a.theta, a.theta, 103), 2u);
    const auto b = aux_conditions(17, 137, minimal());
    EXPECT_EQ(b.n, 8u);
    const auto c = aux_conditions(17, 307, minimal());
    EXPECT_FALSE(c.passed());
    ASSERT_NE(find_verdict(c.conditions, "l_pm1_mod_8"), nullptr);
    EXPECT_FALSE(find_verdict(c.conditions, "l_pm1_mod_8")->passed);
}

TEST(ResidueSet, SizeBoundedByCandidates) {
    for (u64 l : {103ull, 137ull, 239ull, 409ull}) {
        if (!aux_conditions(17, l, minimal()).passed()) continue;
        const auto rs = residue_set(17, l, minimal());
        EXPECT_LE(rs.R.size(), rs.X.size());
        EXPECT_TRUE(std::is_sorted(rs.R.begin(), rs.R.end()));
        for (u64 r : rs.R) EXPECT_LT(r, 17u);
    }
}

TEST(Certificates, GenerateVerifyRoundTrip) {
    for (u64 p : {17ull, 19ull, 37ull}) {
        for (const auto& F : curves().curves) {
            const auto out = generate_certificate(p, F);
            ASSERT_TRUE(out.ok) << p << " " << F.label << ": " << out.failure;
            EXPECT_TRUE(within_pm1(out.certificate.intersection, p));
            EXPECT_TRUE(verify_certificate(out.certificate, curves()).ok);
            const auto json = certificate_to_json(out.certificate);
            const auto back = certificate_from_json(json);
            EXPECT_EQ(certificate_to_json(back), json);
            EXPECT_TRUE(verify_certificate(back, curves()).ok);
        }
    }
}

TEST(Certificates, MutationsAreRejected) {
    const auto cert = generate_certificate(19, minimal()).certificate;
    ASSERT_FALSE(cert.primes.empty());
    for (std::size_t i = 0; i < cert.primes.size(); ++i) {
        auto c = cert;
        c.primes.erase(c.primes.begin() + static_cast<long>(i));
        EXPECT_FALSE(verify_certificate(c, curves()).ok) << "dropped " << i;
    }
    auto tampered = cert;
    tampered.primes[0].R.push_back(tampered.primes[0].R.back() == 18 ? 17 : 18);
    std::sort(tampered.primes[0].R.begin(), tampered.primes[0].R.end());
    EXPECT_FALSE(verify_certificate(tampered, curves()).ok);
    auto shifted = cert;
    shifted.primes[0].n += 1;
    EXPECT_FALSE(verify_certificate(shifted, curves()).ok);
    auto relabeled = cert;
    relabeled.curve_label = "nope";
    EXPECT_FALSE(verify_certificate(relabeled, curves()).ok);
    auto widened = cert;
    widened.intersection.push_back(2);
    EXPECT_FALSE(verify_certificate(widened, curves()).ok);
}

TEST(Certificates, SmallPrimeExhaustsBudget) {
    CertificateOptions opt;
    opt.max_n = 300;
    const auto out = generate_certificate(7, minimal(), opt);
    EXPECT_FALSE(out.ok);
    EXPECT_FALSE(out.failure.empty());
}

TEST(ApFormula, Examples) {
    EXPECT_EQ(ap_formula(5), -2);
    EXPECT_EQ(ap_formula(7), -4);
    EXPECT_EQ(ap_formula(13), -2);
    EXPECT_THROW(ap_formula(11), PreconditionError);
    EXPECT_EQ(chi8(1), 1);
    EXPECT_EQ(chi8(3), 1);
    EXPECT_EQ(chi8(5), -1);
    EXPECT_EQ(chi8(7), -1);
}

TEST(ApFormula, MatchesPointCount) {
    for (u64 p : primes_up_to(1000)) {
        if (p < 5 || p % 8 == 3) continue;
        EXPECT_EQ(ap_formula(p), ap_point_count(minimal(), p)) << p;
    }
}

TEST(FreyTraceScan, NoTraceIsPlusMinusOne) {
    const auto scan = frey_trace_scan(curves(), 5000);
    EXPECT_EQ(scan.front().p, 5u);
    for (const auto& e : scan) {
        EXPECT_TRUE(e.not_pm1) << e.p;
        EXPECT_EQ(e.not_pm1, e.square_not_1) << e.p;
    }
}
