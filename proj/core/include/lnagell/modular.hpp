#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lnagell/numerics.hpp"
#include "lnagell/verdict.hpp"

namespace lnagell {

struct EllipticCurveZ {
    std::string label;
    std::array<long, 5> a{};  ///< a1, a2, a3, a4, a6
    std::string note;

    long discriminant() const;
};

/// Coefficients of the twist-minimal level-128 form at 3, 5, 7, 11, 13.
inline constexpr std::array<std::pair<u64, long>, 5> kNewformPrefix{
    {{3, -2}, {5, -2}, {7, -4}, {11, 2}, {13, -2}}};

struct CurveSet {
    std::vector<EllipticCurveZ> curves;
    std::size_t minimal = 0;           ///< index of the twist-minimal curve
    std::vector<long> twist_character;  ///< d with a_l(curve) = (d/l) a_l(minimal); 1 for the minimal curve
};

/// Parses and validates: exactly one curve matches the newform prefix and the other three are its
/// twists by -1, 2, -2 on every good l < 500. Throws PreconditionError on any mismatch.
CurveSet parse_curves(const std::string& json);
CurveSet load_curves(const std::string& path);

/// Quadratic character table of F_l (index v gives (v/l)).
std::vector<signed char> legendre_table(u64 l);

/// a_l = l + 1 - #E(F_l) by the naive character sum. Throws PreconditionError at bad reduction.
long ap_point_count(const EllipticCurveZ& E, u64 l);

/// a_l of Y^2 = X^3 + 2 delta X^2 + 2X over F_l; nullopt when delta^2 = 2 (singular).
std::optional<long> ap_frey_residue(u64 delta, u64 l, const std::vector<signed char>& chi);

struct AuxConditions {
    std::vector<ConditionVerdict> conditions;  ///< l_is_np_plus_1, l_pm1_mod_8, a_l_not_pm_l_plus_1, one_plus_theta_pow_n_ne_1
    u64 n = 0;
    u64 theta = 0;  ///< the smaller square root of 2 mod l, when it exists
    long a_l = 0;
    bool passed() const { return all_passed(conditions); }
};

AuxConditions aux_conditions(u64 p, u64 l, const EllipticCurveZ& F);

struct ResidueSet {
    u64 l = 0, n = 0, primitive_root = 0;
    std::vector<u64> X_prime, X;  ///< candidate residues of x mod l
    std::vector<u64> R;           ///< sorted residues mod p
};

/// R_l(F) from the discrete logarithm with respect to `primitive_root` (smallest one when 0).
ResidueSet residue_set(u64 p, u64 l, const EllipticCurveZ& F, u64 primitive_root = 0);

struct CertificatePrime {
    u64 l = 0, n = 0, primitive_root = 0;
    std::vector<u64> R;
};

struct RCertificate {
    u64 p = 0;
    std::string curve_label;
    std::vector<CertificatePrime> primes;  ///< increasing l
    std::vector<u64> intersection;
};

std::string certificate_to_json(const RCertificate& cert);
RCertificate certificate_from_json(const std::string& json);

struct CertificateOutcome {
    bool ok = false;
    RCertificate certificate;  ///< partial on failure
    std::string failure;       ///< names the residual set on failure
    u64 primes_scanned = 0;
};

struct CertificateOptions {
    u64 max_n = 0;  ///< 0 = 10^6 / p
    unsigned workers = 0;
};

/// Scans l = np + 1 for increasing n, keeping the primes that shrink the running intersection.
CertificateOutcome generate_certificate(u64 p, const EllipticCurveZ& F, const CertificateOptions& opt = {});

struct CertificateCheck {
    bool ok = false;
    std::string first_failure;
};

/// Recomputes every condition, residue set and the intersection from the certificate and curve data.
CertificateCheck verify_certificate(const RCertificate& cert, const CurveSet& curves);

struct FreyTraceEntry {
    u64 p = 0;
    long a_p = 0;
    bool not_pm1 = false;         ///< a_p(F) not congruent to +-1 mod p
    bool square_not_1 = false;    ///< a_p(F)^2 not congruent to 1 mod p
    long a_p_squared_mod_p = 0;
};

/// Primes 5 <= p < p_max on the twist-minimal curve.
std::vector<FreyTraceEntry> frey_trace_scan(const CurveSet& curves, u64 p_max);

/// chi_8 with value 1 on 1, 3 and -1 on 5, 7 (mod 8).
int chi8(u64 n);

/// (1/2) chi_8(p) sum over p = a^2 + 2b^2 + 4c^2 + 8d^2 of (-1)^d. Rejects p = 3 mod 8.
long ap_formula(u64 p);
/// The raw representation sum, for inspection.
long ap_formula_representation_sum(u64 p);

}  // namespace lnagell
