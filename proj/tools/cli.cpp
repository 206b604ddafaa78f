#include "cli.hpp"

#include <CLI11.hpp>

#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "supertau/errors.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"
#include "supertau/suite.hpp"
#include "tables.hpp"

namespace supertau::cli {

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2, kInvalid = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Args {
    std::string verb;
    std::string target;
    std::string spec;
    std::string suite = "all";
    std::string format = "json";
    std::string out;
    std::string in;
    std::string c0 = "symbolic";
    std::string odd_weight = "consistent";
    bool no_timestamp = false;
    bool list_suites = false;
    SuiteOptions opt;
};

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// A readable file wins; otherwise a built-in name, with or without ".json".
nlohmann::json spec_document(const std::string& spec) {
    if (std::filesystem::exists(spec)) return read_json(spec);
    std::string stem = std::filesystem::path(spec).stem().string();
    for (const auto& name : builtin_spec_names())
        if (name == stem) return builtin_spec_json(name);
    throw UsageError("spec " + spec + " is neither a readable file nor a built-in (" + [] {
        std::string s;
        for (const auto& n : builtin_spec_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }() + ", kdv)");
}

bool is_kdv(const Args& a) { return a.spec.empty() || a.spec == "kdv"; }

SuiteTarget target_cover(const Args& a) {
    if (a.target == "kdv") {
        if (!is_kdv(a)) throw UsageError("target kdv takes no --spec");
        return kdv_target();
    }
    if (a.spec.empty()) throw UsageError("target " + a.target + " needs --spec (a file, a built-in name, or kdv)");
    if (a.spec == "kdv") return kdv_target();
    return frobenius_target(spec_document(a.spec));
}

void emit(const Args& a, const std::string& text, std::ostream& out) {
    if (a.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(a.out);
    if (!f) throw UsageError("cannot write " + a.out);
    f << text;
}

std::string render(const Args& a, const Report& r) {
    if (a.format == "json") return report_to_json(r).dump(2) + "\n";
    if (a.format == "latex") return report_to_latex(r);
    return report_to_text(r);
}

std::string render(const Args& a, const Table& t) {
    if (a.format == "json") return table_to_json(t).dump(2) + "\n";
    if (a.format == "latex") return table_to_latex(t);
    return table_to_text(t);
}

int finish(const Args& a, Report r, std::ostream& out, int fail_code = kFail) {
    if (!a.no_timestamp) r.timestamp = utc_now();
    emit(a, render(a, r), out);
    return r.all_pass() ? kPass : fail_code;
}

int validate(const Args& a, std::ostream& out) {
    if (a.target != "spec") throw UsageError("validate takes the target spec");
    if (a.spec.empty() || a.spec == "kdv") throw UsageError("validate spec needs --spec with a Frobenius spec");
    nlohmann::json doc = spec_document(a.spec);
    FrobeniusSpec spec = parse_spec(doc);
    Report r;
    r.target = "spec";
    r.suites = {"validate"};
    for (auto& c : validate_spec(spec)) r.checks.push_back(ReportCheck{"validate:" + c.id, c.pass, 0, c.residue, c.note});
    r.environment = {{"cover", spec.name}, {"spec_hash", sha256_hex(spec_to_json(spec).dump())}};
    return finish(a, std::move(r), out, kInvalid);
}

int verify(const Args& a, std::ostream& out) {
    if (a.target == "spec") return validate(a, out);
    SuiteTarget on = target_cover(a);
    auto suites = find_suites(a.target, a.suite, on);
    if (suites.empty()) {
        std::string names;
        for (const auto* e : find_suites(a.target, "all", on)) names += " " + e->name;
        if (names.empty()) throw UsageError("target " + a.target + " has no suites on " + on.name());
        throw UsageError("no suite " + a.suite + " for target " + a.target + " on " + on.name() + "; available:" + names);
    }
    return finish(a, run_suites(a.target, suites, on, a.opt, default_threads()), out);
}

int compute(const Args& a, std::ostream& out) {
    SuiteTarget on = a.target == "kdv" && a.spec.empty() ? kdv_target() : target_cover(a);
    Table t = build_table(a.target, on, a.opt);
    if (!a.no_timestamp) t.timestamp = utc_now();
    emit(a, render(a, t), out);
    return kPass;
}

int limit(const Args& a, std::ostream& out) {
    if (!a.spec.empty()) throw UsageError("limit compares KdV with the built-in one-dimensional manifold; drop --spec");
    return finish(a, limit_report(a.target, a.opt), out);
}

int export_doc(const Args& a, std::ostream& out) {
    if (a.in.empty()) throw UsageError("export needs --in with a JSON report or table");
    nlohmann::json doc = read_json(a.in);
    if (!doc.contains("target") || doc["target"] != a.target)
        throw UsageError("document target does not match " + a.target);
    if (doc.contains("checks")) {
        Report r = report_from_json(doc);
        emit(a, render(a, r), out);
        return kPass;
    }
    emit(a, render(a, table_from_json(doc)), out);
    return kPass;
}

void list_suites(std::ostream& out) {
    for (const auto& e : suite_catalog()) {
        std::string on = e.on_frobenius && e.on_kdv ? "spec, kdv" : e.on_kdv ? "kdv" : "spec";
        out << e.target << " " << e.name << " [" << on << "]: " << e.description << "\n";
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Args a;
    CLI::App app{"Super tau-covers of bihamiltonian hierarchies: tables and exact verification"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", "supertau 0.1.0");

    const std::vector<std::string> targets{"spec", "h", "omega", "phi", "delta", "flows", "kdv", "virasoro", "tau-cover"};
    auto& o = a.opt;
    app.add_option("--spec", a.spec, "Frobenius spec file, built-in name (onedim, cp1), or kdv");
    app.add_option("--suite", a.suite, "Suite name, or all")->capture_default_str();
    app.add_option("--format", a.format, "Output format")
        ->check(CLI::IsMember({"json", "latex", "text"}))
        ->capture_default_str();
    app.add_option("--out", a.out, "Write output to this path instead of stdout");
    app.add_option("--in", a.in, "JSON report or table to export");
    app.add_option("--pmax", o.pmax, "Highest level p of f, t and h")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--kmax", o.kmax, "Highest odd index k")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--nmax", o.nmax, "Highest n of Phi^n, R_n and B_n")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--mmax", o.mmax, "Highest m of C_m")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--total", o.total, "Bound on p + q for tau symmetry")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--P", o.P, "Virasoro truncation of the even times")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--K", o.K, "Virasoro truncation of the odd times")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--window", o.window, "Series window")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--m", o.ms, "Virasoro orders")->check(CLI::Range(-1, 64))->capture_default_str();
    app.add_option("--c0", a.c0, "Value of c0, or symbolic")->capture_default_str();
    app.add_option("--odd-weight", a.odd_weight, "Odd Virasoro weight")
        ->check(CLI::IsMember({"consistent", "printed"}))
        ->capture_default_str();
    app.add_flag("--no-timestamp", a.no_timestamp, "Omit the timestamp and runtimes");
    app.add_flag("--list-suites", a.list_suites, "List the suite catalog");

    struct Verb {
        const char* name;
        const char* help;
    };
    for (Verb v : {Verb{"validate", "Check the identities a spec must satisfy"},
                   Verb{"compute", "Compute a table"},
                   Verb{"verify", "Run verification suites"},
                   Verb{"limit", "Compare the eps -> 0 limit of KdV with the one-dimensional manifold"},
                   Verb{"export", "Re-emit a JSON report or table in another format"}}) {
        auto* sub = app.add_subcommand(v.name, v.help);
        sub->fallthrough();
        sub->add_option("target", a.target, "Target")->required()->check(CLI::IsMember(targets));
        sub->callback([&a, sub] { a.verb = sub->get_name(); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    if (a.list_suites) {
        list_suites(out);
        return kPass;
    }
    if (a.verb.empty()) {
        err << app.help();
        return kUsage;
    }
    try {
        if (a.c0 != "symbolic") {
            try {
                o.c0 = Rational::parse(a.c0);
            } catch (const std::exception&) {
                throw UsageError("--c0 takes a rational number or symbolic, got " + a.c0);
            }
        }
        o.odd_weight = a.odd_weight == "printed" ? OddWeight::Printed : OddWeight::Consistent;
        if (a.verb == "validate") return validate(a, out);
        if (a.verb == "verify") return verify(a, out);
        if (a.verb == "compute") return compute(a, out);
        if (a.verb == "limit") return limit(a, out);
        return export_doc(a, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kInvalid;
    } catch (const UnsupportedOrder& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const TruncationTooSmall& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace supertau::cli
