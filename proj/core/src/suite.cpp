#include "supertau/suite.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "supertau/errors.hpp"
#include "supertau/frobenius.hpp"
#include "supertau/kdv.hpp"
#include "supertau/serialize.hpp"

namespace supertau {

nlohmann::json SuiteOptions::to_json() const {
    return {{"pmax", pmax},
            {"kmax", kmax},
            {"nmax", nmax},
            {"mmax", mmax},
            {"total", total},
            {"P", P},
            {"K", K},
            {"window", window},
            {"m", ms},
            {"c0", c0 ? c0->to_string() : "symbolic"},
            {"odd_weight", odd_weight == OddWeight::Consistent ? "consistent" : "printed"}};
}

const TauCover& SuiteTarget::cover() const {
    if (frobenius) return *frobenius;
    return *kdv;
}

std::string SuiteTarget::name() const { return cover().name(); }

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        out += buf;
    }
    return out;
}

SuiteTarget kdv_target() { return SuiteTarget{nullptr, std::make_shared<KdvCover>(), sha256_hex("kdv")}; }

SuiteTarget frobenius_target(const nlohmann::json& spec_doc) {
    auto spec = std::make_shared<FrobeniusSpec>(load_spec(spec_doc));
    std::string hash = sha256_hex(spec_to_json(*spec).dump());
    return SuiteTarget{std::make_shared<FrobeniusCover>(spec), nullptr, hash};
}

namespace {

using Jobs = std::vector<SuiteJob>;

SuiteJob job(std::function<std::vector<CheckResult>()> f) { return f; }

// m values, and the sums of distinct pairs, that the Frobenius tables support.
void require_general_orders(const std::vector<int>& ms) {
    for (size_t i = 0; i < ms.size(); ++i) {
        if (ms[i] < -1 || ms[i] > 1)
            throw UnsupportedOrder("Virasoro tables of a Frobenius manifold need m in {-1, 0, 1}, got " +
                                   std::to_string(ms[i]));
        for (size_t j = i + 1; j < ms.size(); ++j) {
            int s = ms[i] + ms[j];
            if (ms[i] != ms[j] && (s < -1 || s > 1))
                throw UnsupportedOrder("the relation for m = " + std::to_string(ms[i]) + ", " + std::to_string(ms[j]) +
                                       " needs L_" + std::to_string(s));
        }
    }
}

void require_kdv_orders(const std::vector<int>& ms) {
    for (int m : ms)
        if (m < -1) throw UnsupportedOrder("Virasoro order m = " + std::to_string(m) + " is below -1");
}

std::function<VirasoroCoefficients(int)> table_for(const SuiteTarget& on, OddWeight w, bool dispersive) {
    if (on.frobenius) {
        auto c = on.frobenius;
        return [c, w](int m) { return general_coefficients(*c, m, w); };
    }
    return [w, dispersive](int m) { return kdv_coefficients(m, dispersive, w); };
}

Jobs symmetry_jobs(const SuiteTarget& on, const SuiteOptions& o) {
    if (o.pmax > o.P || o.kmax > o.K)
        throw TruncationTooSmall("symmetry checks need pmax <= P and kmax <= K");
    std::set<int> needed(o.ms.begin(), o.ms.end());
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < o.ms.size(); ++i)
        for (size_t j = i + 1; j < o.ms.size(); ++j)
            if (o.ms[i] != o.ms[j]) {
                pairs.emplace_back(o.ms[i], o.ms[j]);
                needed.insert(o.ms[i] + o.ms[j]);
            }
    auto table = table_for(on, o.odd_weight, false);
    DiffPoly genus = on.kdv ? DiffPoly::eps(2) : DiffPoly();
    auto own = std::make_shared<std::map<int, std::unique_ptr<VirasoroFlow>>>();
    auto flows = std::make_shared<std::map<int, const VirasoroFlow*>>();
    for (int m : needed) {
        (*own)[m] = std::make_unique<VirasoroFlow>(on.cover(), table(m), o.P, o.K, genus);
        (*flows)[m] = (*own)[m].get();
    }
    SymmetryBounds b{o.pmax, o.kmax};
    Jobs out;
    for (int m : o.ms)
        out.push_back([on, own, flows, m, b] { return check_symmetry_flows(on.cover(), *flows->at(m), b); });
    for (auto [x, y] : pairs)
        out.push_back([on, own, flows, x, y, b] { return check_symmetry_bracket(on.cover(), *flows, x, y, b); });
    return out;
}

std::vector<SuiteEntry> build_catalog() {
    std::vector<SuiteEntry> c;
    auto add = [&](std::string target, std::string name, std::string description, bool frob, bool kdv,
                   std::function<Jobs(const SuiteTarget&, const SuiteOptions&)> f) {
        c.push_back(SuiteEntry{std::move(target), std::move(name), std::move(description), frob, kdv, std::move(f)});
    };

    add("h", "h", "unit recursion, homogeneity and the golden h-table", true, false,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.frobenius->check_h(o.pmax); })};
        });
    add("omega", "omega", "two-point functions against the t-flows", true, false,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.frobenius->check_omega(o.pmax); })};
        });
    add("omega", "tau-symmetry", "symmetry of Omega for p + q <= total", true, false,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.frobenius->check_tau_symmetry(o.total); })};
        });
    add("phi", "phi", "odd densities against the tau-flows", true, true, [](const SuiteTarget& on, const SuiteOptions& o) {
        if (on.kdv) return Jobs{job([on, o] { return on.kdv->check_omega_phi(o.kmax, o.nmax); })};
        return Jobs{job([on, o] { return on.frobenius->check_phi(o.pmax, o.nmax); })};
    });
    add("delta", "delta", "antisymmetric Delta tensors", true, false, [](const SuiteTarget& on, const SuiteOptions& o) {
        return Jobs{job([on, o] { return on.frobenius->check_delta(o.pmax, o.kmax); })};
    });
    add("flows", "commutativity", "pairwise commutators of t- and tau-flows", true, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return check_commutativity(on.cover(), o.pmax, o.kmax); })};
        });
    add("flows", "principal-unit", "t^{1,0} acts as d/dx", true, true, [](const SuiteTarget& on, const SuiteOptions& o) {
        return Jobs{job([on, o] { return check_principal_unit(on.cover(), o.kmax); })};
    });

    add("kdv", "poisson-pair", "Schouten brackets of P_0 and P_1", false, true, [](const SuiteTarget&, const SuiteOptions&) {
        return Jobs{job([] { return check_kdv_poisson_pair(); })};
    });
    add("kdv", "recursion", "Gelfand-Dickey recursion for R_n", false, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.kdv->check_recursion(o.nmax); })};
        });
    add("kdv", "generating-identities", "identities of the generating series", false, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.kdv->check_generating_identities(o.window); })};
        });
    add("kdv", "zero-curvature", "compatibility of B_n and C_m", false, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.kdv->check_zero_curvature(o.nmax, o.mmax, o.window); })};
        });
    add("kdv", "omega-phi", "two-point functions and odd densities", false, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.kdv->check_omega_phi(o.kmax, o.nmax); })};
        });
    add("kdv", "commutativity", "pairwise commutators of t- and tau-flows", false, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return check_commutativity(on.cover(), o.pmax, o.kmax); })};
        });
    add("kdv", "dispersionless", "eps -> 0 against the one-dimensional manifold", false, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] {
                FrobeniusCover onedim(std::make_shared<FrobeniusSpec>(load_spec(builtin_spec_json("onedim"))));
                return on.kdv->check_dispersionless(onedim, o.pmax, o.kmax);
            })};
        });
    add("kdv", "bihamiltonian", "tau_0 and tau_1 against the flows of P_0 and P_1", false, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            return Jobs{job([on, o] { return on.kdv->check_bihamiltonian_recovery(o.nmax); })};
        });

    add("virasoro", "euler", "Euler identity fixing the c-coefficients", true, false,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            require_general_orders(o.ms);
            Jobs out;
            for (int m : o.ms)
                out.push_back([on, o, m] {
                    return check_euler_identity(*on.frobenius, general_coefficients(*on.frobenius, m, o.odd_weight), o.pmax);
                });
            return out;
        });
    add("virasoro", "algebra", "[L_m, L_n] = (m - n) L_{m+n} on polynomials", true, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            if (on.frobenius) require_general_orders(o.ms);
            else require_kdv_orders(o.ms);
            auto table = table_for(on, o.odd_weight, true);
            int n = on.cover().n();
            return Jobs{job([table, o, n] { return check_virasoro_algebra(table, o.ms, n, o.P, o.K); })};
        });
    add("virasoro", "symmetry", "Virasoro flows commute with the hierarchy and close", true, true,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            if (on.frobenius) require_general_orders(o.ms);
            else require_kdv_orders(o.ms);
            return symmetry_jobs(on, o);
        });
    add("virasoro", "a-equals-b", "the two expressions of the odd symmetry agree", true, false,
        [](const SuiteTarget& on, const SuiteOptions& o) {
            require_general_orders(o.ms);
            Jobs out;
            for (int m : o.ms)
                out.push_back([on, o, m] {
                    return check_ab_identity(*on.frobenius, general_coefficients(*on.frobenius, m, o.odd_weight));
                });
            return out;
        });
    return c;
}

}  // namespace

const std::vector<SuiteEntry>& suite_catalog() {
    static const std::vector<SuiteEntry> catalog = build_catalog();
    return catalog;
}

std::vector<const SuiteEntry*> find_suites(const std::string& target, const std::string& name, const SuiteTarget& on) {
    static const std::set<std::string> tau_cover{"h", "omega", "phi", "delta", "flows"};
    std::vector<const SuiteEntry*> out;
    for (const auto& e : suite_catalog()) {
        bool target_ok = e.target == target || (target == "tau-cover" && tau_cover.count(e.target));
        bool cover_ok = on.frobenius ? e.on_frobenius : e.on_kdv;
        if (target_ok && cover_ok && (name == "all" || name == e.name)) out.push_back(&e);
    }
    return out;
}

int default_threads() {
    if (const char* s = std::getenv("SUPERTAU_THREADS")) {
        int n = std::atoi(s);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

bool Report::all_pass() const { return failures() == 0; }

size_t Report::failures() const {
    return std::count_if(checks.begin(), checks.end(), [](const ReportCheck& c) { return !c.pass; });
}

Report run_suites(const std::string& target, const std::vector<const SuiteEntry*>& suites, const SuiteTarget& on,
                  const SuiteOptions& opt, int threads) {
    struct Task {
        std::string suite;
        SuiteJob fn;
    };
    std::vector<Task> tasks;
    Report rep;
    rep.target = target;
    for (const SuiteEntry* e : suites) {
        rep.suites.push_back(e->name);
        for (auto& j : e->jobs(on, opt)) tasks.push_back(Task{e->name, std::move(j)});
    }

    std::vector<std::vector<ReportCheck>> results(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < tasks.size();) {
            auto start = std::chrono::steady_clock::now();
            std::vector<CheckResult> rs;
            try {
                rs = tasks[i].fn();
            } catch (const Error& e) {
                rs.push_back(CheckResult{"error", false, {}, e.kind() + ": " + e.what()});
            } catch (const std::exception& e) {
                rs.push_back(CheckResult{"error", false, {}, e.what()});
            }
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            for (auto& r : rs) {
                ReportCheck c{tasks[i].suite + ":" + r.id, r.pass, secs, std::move(r.residue), std::move(r.note)};
                if (opt.c0 && !c.residue.is_zero()) {
                    c.residue = c.residue.substitute_c0(*opt.c0);
                    c.pass = c.residue.is_zero();
                }
                results[i].push_back(std::move(c));
            }
        }
    };
    std::vector<std::jthread> pool;
    int n = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    for (auto& rs : results)
        for (auto& c : rs) rep.checks.push_back(std::move(c));
    std::stable_sort(rep.checks.begin(), rep.checks.end(),
                     [](const ReportCheck& a, const ReportCheck& b) { return a.id < b.id; });
    rep.environment = {{"cover", on.name()}, {"spec_hash", on.spec_hash}, {"options", opt.to_json()}};
    return rep;
}

nlohmann::json report_to_json(const Report& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json j{{"id", c.id}, {"status", c.pass ? "pass" : "fail"}};
        if (r.timestamp) j["runtime"] = c.runtime;
        if (!c.residue.is_zero()) j["residue"] = to_json(c.residue);
        if (!c.note.empty()) j["note"] = c.note;
        checks.push_back(std::move(j));
    }
    nlohmann::json doc{{"target", r.target},
                       {"suites", r.suites},
                       {"environment", r.environment},
                       {"summary", {{"checks", r.checks.size()}, {"failures", r.failures()}}},
                       {"checks", std::move(checks)}};
    if (r.timestamp) doc["timestamp"] = *r.timestamp;
    return doc;
}

Report report_from_json(const nlohmann::json& j) {
    Report r;
    try {
        r.target = j.at("target").get<std::string>();
        r.suites = j.at("suites").get<std::vector<std::string>>();
        r.environment = j.at("environment");
        if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
        for (const auto& c : j.at("checks")) {
            ReportCheck rc;
            rc.id = c.at("id").get<std::string>();
            rc.pass = c.at("status").get<std::string>() == "pass";
            if (c.contains("runtime")) rc.runtime = c.at("runtime").get<double>();
            if (c.contains("residue")) rc.residue = from_json(c.at("residue"));
            if (c.contains("note")) rc.note = c.at("note").get<std::string>();
            r.checks.push_back(std::move(rc));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
    return r;
}

std::string report_to_text(const Report& r) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.id;
        if (!c.residue.is_zero()) os << "  residue: " << c.residue.to_string();
        if (!c.note.empty()) os << "  (" << c.note << ")";
        os << "\n";
    }
    os << r.target << ": " << r.checks.size() - r.failures() << "/" << r.checks.size() << " checks passed\n";
    return os.str();
}

std::string report_to_latex(const Report& r) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char ch : s) {
            if (ch == '_' || ch == '&' || ch == '%' || ch == '#' || ch == '{' || ch == '}') out += '\\';
            out += ch;
        }
        return out;
    };
    std::ostringstream os;
    os << "\\begin{tabular}{lll}\n";
    for (const auto& c : r.checks) {
        os << "\\texttt{" << escape(c.id) << "} & " << (c.pass ? "pass" : "fail") << " & ";
        if (!c.residue.is_zero()) os << "$" << to_latex(c.residue) << "$";
        os << " \\\\\n";
    }
    os << "\\end{tabular}\n";
    return os.str();
}

}  // namespace supertau
