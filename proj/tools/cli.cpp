#include "cli.hpp"

#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lnagell/elementary.hpp"
#include "lnagell/errors.hpp"
#include "lnagell/large_y.hpp"
#include "lnagell/linear_forms.hpp"
#include "lnagell/local_count.hpp"
#include "lnagell/modular.hpp"
#include "lnagell/small_y.hpp"
#include "lnagell/thue.hpp"
#include "persist.hpp"

namespace lnagell::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    long precision_bits = kDefaultBasePrecision;
    u64 budget = 5000;
    u64 trial_bound = kDefaultTrialBound;
    unsigned workers = 0;
    std::string curves = LNAGELL_ASSET_DIR "/curves_128.json";
    std::string table = LNAGELL_ASSET_DIR "/large_y_table.csv";
    std::string out;
    bool resume = false;

    void validate() const {
        if (precision_bits < 32) throw PreconditionError("--precision-bits must be at least 32");
        if (budget == 0) throw PreconditionError("--budget must be positive");
        if (trial_bound == 0) throw PreconditionError("--trial-bound must be positive");
        if (resume && out.empty()) throw PreconditionError("--resume requires --out");
    }

    /// Everything that can change a result; the output location, resume flag and worker count cannot.
    Json to_json() const {
        Json j;
        j["precision_bits"] = precision_bits;
        j["budget"] = budget;
        j["trial_bound"] = trial_bound;
        j["curves"] = curves;
        j["table"] = table;
        return j;
    }
};

class Context {
public:
    Context(const RunConfig& cfg, std::string command, std::ostream& out, std::ostream& err)
        : cfg(cfg), command(std::move(command)), out(out), err(err) {}

    const RunConfig& cfg;
    std::string command;
    std::ostream& out;
    std::ostream& err;
    Json params = Json::object();
    std::vector<std::string> artifacts;

    mpfr_prec_t prec() const { return static_cast<mpfr_prec_t>(cfg.precision_bits); }

    Json config() const {
        Json j = cfg.to_json();
        j["params"] = params;
        return j;
    }
    std::string config_hash() const { return fnv1a_hex(command + "\n" + config().dump()); }

    /// Writes an artifact into --out, when given.
    void emit(const std::string& name, const std::string& content) {
        if (cfg.out.empty()) return;
        write_atomic(fs::path(cfg.out) / name, content);
        artifacts.push_back(name);
    }

    std::optional<Checkpoint> checkpoint() const {
        if (cfg.out.empty()) return std::nullopt;
        Checkpoint cp(cfg.out, command, config_hash(), cfg.resume);
        if (cp.restored()) err << "resuming: " << cp.restored() << " item(s) restored from " << cp.path().string() << "\n";
        return cp;
    }

    void progress(const std::string& line) const { err << command << ": " << line << "\n"; }
};

std::string verdict_line(const ConditionVerdict& v) {
    std::string s = std::string(v.passed ? "PASS " : "FAIL ") + v.name;
    if (!v.fully_verified) s += " (unverified cofactor)";
    if (!v.detail.empty()) s += ": " + v.detail;
    return s;
}

Json verdicts_json(const std::vector<ConditionVerdict>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) {
        Json j;
        j["name"] = v.name;
        j["passed"] = v.passed;
        j["fully_verified"] = v.fully_verified;
        j["detail"] = v.detail;
        arr.push_back(j);
    }
    return arr;
}

std::vector<u64> prime_list(const std::vector<u64>& explicit_p, u64 lo, u64 hi) {
    std::vector<u64> ps = explicit_p;
    if (hi) {
        for (u64 p : primes_up_to(hi)) {
            if (p >= lo) ps.push_back(p);
        }
    }
    if (ps.empty()) throw PreconditionError("give --p or a --p-min/--p-max range");
    return ps;
}

// ---- subcommands ----

int cmd_sieve(Context& ctx, const std::string& x, const std::string& y, unsigned long p, bool unchecked) {
    ctx.params["x"] = x;
    ctx.params["y"] = y;
    ctx.params["p"] = p;
    ctx.params["unchecked"] = unchecked;
    const mpz_class X(x, 10), Y(y, 10);
    const auto c = unchecked ? CandidateSolution::unchecked(X, Y, p) : CandidateSolution::make(X, Y, p);
    const SieveReport rep = sieve_check(c, ctx.cfg.trial_bound);
    for (const auto& v : rep.conditions) ctx.out << verdict_line(v) << "\n";
    ctx.out << (rep.passed() ? "all conditions hold" : "some condition fails") << "\n";
    return rep.passed() ? kExitOk : kExitRefuted;
}

int cmd_thue_info(Context& ctx, unsigned long p, long r) {
    ctx.params["p"] = p;
    ctx.params["r"] = r;
    const ThuePolynomial f = thue_coeffs(p, r);
    ctx.out << "coefficients:";
    for (const auto& c : f.coeffs) ctx.out << " " << c.get_str();
    ctx.out << "\n";
    const RootSet roots = all_roots(p, r, ctx.prec());
    ctx.out << "real root theta: " << roots.roots[roots.real_index].re.str(30) << "\n";
    ctx.out << "max scaled residual: " << roots.max_residual.str(6) << "\n";
    ctx.out << "min root separation: " << roots.min_separation.str(6) << "\n";
    ctx.out << "discriminant: " << discriminant_formula(p).get_str() << "\n";
    if (r == 1) ctx.out << "prod |Im rho_i|: " << im_product(p, ctx.prec()).closed_form.str(20) << "\n";
    return kExitOk;
}

int cmd_disc_check(Context& ctx, unsigned long p, long r) {
    ctx.params["p"] = p;
    ctx.params["r"] = r;
    const mpz_class formula = discriminant_formula(p);
    const mpz_class resultant = discriminant_resultant(p, r);
    const bool ok = formula == resultant;
    ctx.out << "formula " << formula.get_str() << (ok ? " = " : " != ") << "resultant " << resultant.get_str() << "\n";
    return ok ? kExitOk : kExitRefuted;
}

int cmd_bound(Context& ctx, bool improved) {
    ctx.params["plan"] = improved ? "improved" : "initial";
    const PBoundCertificate cert =
        certify_p_bound(improved ? improved_bound_plan() : initial_bound_plan(), ctx.prec());
    Json doc;
    doc["mode"] = to_string(cert.plan.setup.mode);
    doc["p_bound"] = cert.plan.setup.p_ell;
    if (cert.plan.critical) {
        const auto& cp = *cert.plan.critical;
        ctx.out << std::setprecision(10) << "critical point: p = " << cp.p << ", mu = " << cp.mu << ", rho = " << cp.rho
                << "\n";
        doc["critical"] = {{"p", cp.p}, {"mu", cp.mu}, {"rho", cp.rho}, {"residual", cp.residual},
                           {"iterations", cp.iterations}};
    }
    const auto& c = cert.constants;
    doc["constants"] = {{"C1", c.C1}, {"C2", c.C2}, {"C3", c.C3}, {"C4", c.C4}, {"C5", c.C5},
                        {"h_ell", c.h_ell}, {"a1_ell_a2", c.a1_ell_a2}, {"lambda", c.lambda}};
    doc["finite_primes"] = cert.finite_primes;
    doc["checks"] = verdicts_json(cert.checks);
    doc["passed"] = cert.passed;
    for (const auto& v : cert.checks) ctx.out << verdict_line(v) << "\n";
    ctx.out << "p < " << cert.plan.setup.p_ell << (cert.passed ? " certified" : " not certified") << "\n";
    ctx.emit(ctx.command + ".json", doc.dump(2) + "\n");
    return cert.passed ? kExitOk : kExitRefuted;
}

int cmd_table_verify(Context& ctx) {
    const auto rows = load_table(ctx.cfg.table);
    const TableReport rep = verify_table(rows, ctx.prec(), ctx.cfg.workers);
    std::ostringstream csv;
    csv << "p,row,K,N,C8,determinant_margin,slope_limit,contradiction_lhs,passed\n" << std::setprecision(12);
    std::vector<std::size_t> ok(rows.size()), total(rows.size());
    for (const auto& r : rep.primes) {
        const auto& k = r.constants;
        csv << r.p << ',' << r.row << ',' << k.K << ',' << k.N << ',' << k.C8 << ',' << k.determinant_margin << ',' << k.slope_limit << ','
            << k.contradiction_lhs << ',' << (r.passed ? 1 : 0) << "\n";
        ++total[r.row];
        if (r.passed) ++ok[r.row];
        if (!r.passed) {
            for (const auto& v : k.checks) {
                if (!v.passed) ctx.out << "p = " << r.p << ": " << verdict_line(v) << "\n";
            }
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ctx.out << "row " << i << " (" << rows[i].primes_text << ", y = " << rows[i].y_text << "): " << ok[i] << "/"
                << total[i] << " primes verified\n";
    }
    for (const auto& o : rep.overlaps) ctx.out << "overlap: " << o << "\n";
    ctx.emit("table-report.csv", csv.str());
    ctx.out << (rep.passed ? "table verified" : "table not verified") << "\n";
    return rep.passed ? kExitOk : kExitRefuted;
}

int cmd_rcert_generate(Context& ctx, const std::vector<u64>& ps, const std::string& label, u64 max_n) {
    ctx.params["p"] = ps;
    ctx.params["curve"] = label;
    ctx.params["max_n"] = max_n;
    const CurveSet curves = load_curves(ctx.cfg.curves);
    std::vector<const EllipticCurveZ*> chosen;
    for (const auto& E : curves.curves) {
        if (label == "all" || E.label == label) chosen.push_back(&E);
    }
    if (chosen.empty()) throw PreconditionError("no curve labelled " + label);
    auto cp = ctx.checkpoint();
    bool all_ok = true;
    for (u64 p : ps) {
        for (const auto* E : chosen) {
            const std::string key = std::to_string(p) + ":" + E->label;
            const std::string file = "rcert-p" + std::to_string(p) + "-" + E->label + ".json";
            bool ok = false;
            if (cp && cp->has(key)) {
                ok = cp->get(key).at("ok").get<bool>();
                if (ok) ctx.artifacts.push_back(file);
                ctx.out << "p = " << p << " " << E->label << ": " << (ok ? "ok" : "failed") << " (restored)\n";
            } else {
                const CertificateOutcome o = generate_certificate(p, *E, {max_n, ctx.cfg.workers});
                ok = o.ok;
                ctx.out << "p = " << p << " " << E->label << ": ";
                if (o.ok) {
                    ctx.emit(file, certificate_to_json(o.certificate) + "\n");
                    ctx.out << "ok, l =";
                    for (const auto& e : o.certificate.primes) ctx.out << " " << e.l;
                    ctx.out << ", intersection =";
                    for (u64 v : o.certificate.intersection) ctx.out << " " << v;
                    ctx.out << "\n";
                } else {
                    ctx.out << "failed: " << o.failure << "\n";
                }
                if (cp) cp->put(key, Json{{"ok", o.ok}, {"primes_scanned", o.primes_scanned}});
            }
            all_ok = all_ok && ok;
        }
    }
    return all_ok ? kExitOk : kExitRefuted;
}

int cmd_rcert_verify(Context& ctx, const std::string& file) {
    ctx.params["file"] = file;
    const RCertificate cert = certificate_from_json(read_file(file));
    const CurveSet curves = load_curves(ctx.cfg.curves);
    const CertificateCheck chk = verify_certificate(cert, curves);
    if (chk.ok) {
        ctx.out << "certificate verified: p = " << cert.p << ", curve " << cert.curve_label << ", "
                << cert.primes.size() << " auxiliary prime(s)\n";
        return kExitOk;
    }
    ctx.out << "certificate rejected: " << chk.first_failure << "\n";
    return kExitRefuted;
}

int cmd_smally(Context& ctx, const std::vector<u64>& ps, unsigned long digits) {
    ctx.params["p"] = ps;
    ctx.params["target_digits"] = digits;
    mpz_class target;
    mpz_ui_pow_ui(target.get_mpz_t(), 10, digits);
    auto cp = ctx.checkpoint();
    bool all_ok = true;
    for (u64 p : ps) {
        const std::string key = std::to_string(p);
        const std::string file = "smally-p" + key + ".json";
        Json rep;
        if (cp && cp->has(key)) {
            rep = cp->get(key);
            ctx.artifacts.push_back(file);
        } else {
            const std::string text = report_to_json(lower_bound_b(p, target));
            ctx.emit(file, text + "\n");
            rep = Json::parse(text);
            if (cp) cp->put(key, rep);
            ctx.progress("p = " + key + " done");
        }
        const bool ok = rep.at("success").get<bool>();
        ctx.out << "p = " << p << ": " << (ok ? "b > 10^" + std::to_string(digits) : std::string("not certified"))
                << ", terms " << rep.at("terms") << ", precision " << rep.at("precision_bits") << " bits, max quotient "
                << rep.at("max_quotient").get<std::string>() << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok ? kExitOk : kExitRefuted;
}

int cmd_local_count(Context& ctx, u64 p, u64 n, bool brute) {
    ctx.params["p"] = p;
    ctx.params["n"] = n;
    ctx.params["brute"] = brute;
    const mpz_class count = count_mod_n(p, n);
    ctx.out << count.get_str() << "\n";
    std::ostringstream csv;
    csv << local_count_csv_header() << "\n";
    if (n > 1) {
        for (const auto& f : factorize(n)) csv << local_count_csv_row(count_mod_prime_power(p, f.prime, f.exponent)) << "\n";
    }
    ctx.emit("local-count.csv", csv.str());
    if (brute) {
        const u64 b = brute_force_count(p, n);
        ctx.out << "enumeration: " << b << "\n";
        if (count != b) return kExitRefuted;
    }
    return kExitOk;
}

int cmd_ap_formula(Context& ctx, const std::vector<u64>& explicit_p, u64 p_max) {
    ctx.params["p"] = explicit_p;
    ctx.params["p_max"] = p_max;
    const CurveSet curves = load_curves(ctx.cfg.curves);
    const EllipticCurveZ& F = curves.curves[curves.minimal];
    std::vector<u64> ps = explicit_p;
    if (p_max) {
        for (u64 p : primes_up_to(p_max - 1)) {
            if (p > 2 && p % 8 != 3) ps.push_back(p);
        }
    }
    if (ps.empty()) throw PreconditionError("give --p or --p-max");
    std::size_t bad = 0;
    std::ostringstream csv;
    csv << "p,formula,point_count\n";
    for (u64 p : ps) {
        const long a = ap_formula(p), b = ap_point_count(F, p);
        csv << p << ',' << a << ',' << b << "\n";
        if (a != b) {
            ++bad;
            ctx.out << "p = " << p << ": formula " << a << " != point count " << b << "\n";
        } else if (ps.size() == 1) {
            ctx.out << "a_" << p << " = " << a << " (formula) = " << b << " (" << F.label << ")\n";
        }
    }
    ctx.emit("ap-formula.csv", csv.str());
    ctx.out << ps.size() << " prime(s), " << bad << " mismatch(es)\n";
    return bad ? kExitRefuted : kExitOk;
}

int cmd_wieferich(Context& ctx, u64 p_max, bool expect_none) {
    ctx.params["p_max"] = p_max;
    ctx.params["expect_none"] = expect_none;
    std::vector<u64> found;
    std::size_t scanned = 0;
    for (u64 p : primes_up_to(p_max - 1)) {
        if (p == 2) continue;
        ++scanned;
        if (wieferich_check(p)) found.push_back(p);
    }
    ctx.out << scanned << " odd primes below " << p_max << ", Wieferich:";
    for (u64 p : found) ctx.out << " " << p;
    ctx.out << (found.empty() ? " none" : "") << "\n";
    Json doc;
    doc["p_max"] = p_max;
    doc["primes_scanned"] = scanned;
    doc["wieferich"] = found;
    ctx.emit("wieferich-scan.json", doc.dump(2) + "\n");
    return expect_none && !found.empty() ? kExitRefuted : kExitOk;
}

int cmd_frey_scan(Context& ctx, u64 p_max) {
    ctx.params["p_max"] = p_max;
    const CurveSet curves = load_curves(ctx.cfg.curves);
    const auto entries = frey_trace_scan(curves, p_max);
    std::ostringstream csv;
    csv << "p,a_p,a_p_squared_mod_p,not_pm1,square_not_1\n";
    std::size_t violations = 0;
    for (const auto& e : entries) {
        csv << e.p << ',' << e.a_p << ',' << e.a_p_squared_mod_p << ',' << e.not_pm1 << ',' << e.square_not_1 << "\n";
        if (!e.not_pm1 || !e.square_not_1) {
            ++violations;
            ctx.out << "violation at p = " << e.p << ": a_p = " << e.a_p << "\n";
        }
    }
    ctx.emit("frey-trace-scan.csv", csv.str());
    ctx.out << entries.size() << " primes, " << violations << " violation(s)\n";
    return violations ? kExitRefuted : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Verification tools for x^2 - 2 = y^p", "lnagell"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--precision-bits", cfg.precision_bits, "Working precision in bits")->capture_default_str();
    app.add_option("--budget", cfg.budget, "Objective evaluations per search start")->capture_default_str();
    app.add_option("--trial-bound", cfg.trial_bound, "Trial-division bound for factor checks")->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--curves", cfg.curves, "Curve asset (JSON)")->capture_default_str();
    app.add_option("--table", cfg.table, "Parameter table asset (CSV)")->capture_default_str();
    app.add_option("--out", cfg.out, "Output directory for artifacts, manifest and checkpoints");
    app.add_flag("--resume", cfg.resume, "Resume from the checkpoint of an identical run");

    std::function<int(Context&)> action;
    auto sub = [&](const std::string& name, const std::string& desc) { return app.add_subcommand(name, desc); };

    std::string sx, sy;
    unsigned long sp = 0;
    bool unchecked = false;
    auto* s_sieve = sub("sieve", "Necessary conditions on a candidate solution");
    s_sieve->add_option("--x", sx)->required();
    s_sieve->add_option("--y", sy)->required();
    s_sieve->add_option("--p", sp)->required();
    s_sieve->add_flag("--unchecked", unchecked, "Skip the equation check (synthetic triples)");
    s_sieve->callback([&] { action = [&](Context& c) { return cmd_sieve(c, sx, sy, sp, unchecked); }; });

    unsigned long tp = 0;
    long tr = 1;
    auto* s_thue = sub("thue-info", "Coefficients, roots and discriminant of the Thue form");
    s_thue->add_option("--p", tp)->required();
    s_thue->add_option("--r", tr)->capture_default_str();
    s_thue->callback([&] { action = [&](Context& c) { return cmd_thue_info(c, tp, tr); }; });

    auto* s_disc = sub("disc-check", "Closed-form discriminant against the resultant");
    s_disc->add_option("--p", tp)->required();
    s_disc->add_option("--r", tr)->capture_default_str();
    s_disc->callback([&] { action = [&](Context& c) { return cmd_disc_check(c, tp, tr); }; });

    sub("bound-initial", "Certify the p-bound from the general two-logarithm estimate")->callback([&] {
        action = [](Context& c) { return cmd_bound(c, false); };
    });
    sub("bound-improved", "Certify the p-bound from the unit-case estimate")->callback([&] {
        action = [](Context& c) { return cmd_bound(c, true); };
    });
    sub("table1-verify", "Verify every row of the large-y parameter table")->callback([&] {
        action = [](Context& c) { return cmd_table_verify(c); };
    });

    std::vector<u64> plist;
    u64 p_min = 0, p_max = 0, max_n = 0;
    std::string label = "all";
    auto* s_gen = sub("r-cert-generate", "Generate residue-set certificates");
    s_gen->add_option("--p", plist, "Primes");
    s_gen->add_option("--p-min", p_min);
    s_gen->add_option("--p-max", p_max, "Inclusive upper end of the prime range");
    s_gen->add_option("--curve", label, "Curve label or 'all'")->capture_default_str();
    s_gen->add_option("--max-n", max_n, "Largest n in l = np + 1 (0 = 10^6/p)");
    s_gen->callback([&] {
        action = [&](Context& c) { return cmd_rcert_generate(c, prime_list(plist, p_min, p_max), label, max_n); };
    });

    std::string file;
    auto* s_ver = sub("r-cert-verify", "Re-verify a residue-set certificate");
    s_ver->add_option("--file", file)->required();
    s_ver->callback([&] { action = [&](Context& c) { return cmd_rcert_verify(c, file); }; });

    unsigned long digits = 1000;
    auto* s_small = sub("smally-certify", "Continued-fraction lower bound b > 10^digits");
    s_small->add_option("--p", plist, "Primes");
    s_small->add_option("--p-min", p_min);
    s_small->add_option("--p-max", p_max, "Inclusive upper end of the prime range");
    s_small->add_option("--target-digits", digits)->capture_default_str();
    s_small->callback([&] { action = [&](Context& c) { return cmd_smally(c, prime_list(plist, p_min, p_max), digits); }; });

    u64 lp = 0, ln = 0;
    bool brute = false;
    auto* s_local = sub("local-count", "Solutions of the Thue equation modulo n");
    s_local->add_option("--p", lp)->required();
    s_local->add_option("--n", ln)->required();
    s_local->add_flag("--brute", brute, "Cross-check by enumeration");
    s_local->callback([&] { action = [&](Context& c) { return cmd_local_count(c, lp, ln, brute); }; });

    auto* s_ap = sub("ap-formula", "Representation formula for a_p against point counting");
    s_ap->add_option("--p", plist, "Primes");
    s_ap->add_option("--p-max", p_max, "Exclusive bound for a scan over p != 3 mod 8");
    s_ap->callback([&] { action = [&](Context& c) { return cmd_ap_formula(c, plist, p_max); }; });

    u64 w_max = 1000;
    bool expect_none = false;
    auto* s_wief = sub("wieferich-scan", "Odd primes p < p-max with 2^(p-1) = 1 mod p^2");
    s_wief->add_option("--p-max", w_max)->capture_default_str();
    s_wief->add_flag("--expect-none", expect_none, "Exit 2 when a Wieferich prime is found");
    s_wief->callback([&] { action = [&](Context& c) { return cmd_wieferich(c, w_max, expect_none); }; });

    u64 frey_max = 5000;
    auto* s_frey = sub("section8-scan", "a_p(F) against +-1 mod p on the twist-minimal curve");
    s_frey->add_option("--p-max", frey_max)->capture_default_str();
    s_frey->callback([&] { action = [&](Context& c) { return cmd_frey_scan(c, frey_max); }; });

    std::vector<std::string> argv_store{"lnagell"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Context ctx(cfg, command, out, err);
    int code = kExitError;
    try {
        cfg.validate();
        code = action(ctx);
    } catch (const PrecisionError& e) {
        err << "undecided: " << e.what() << "\n";
        code = kExitRefuted;
    } catch (const BudgetError& e) {
        err << "budget exhausted: " << e.what() << "\n";
        code = kExitRefuted;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        code = kExitError;
    }
    if (!cfg.out.empty()) {
        try {
            write_manifest(cfg.out, {command, ctx.config(), ctx.config_hash(), ctx.artifacts, code});
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            if (code == kExitOk) code = kExitError;
        }
    }
    return code;
}

}  // namespace lnagell::cli
