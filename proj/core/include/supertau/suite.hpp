#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "supertau/report.hpp"
#include "supertau/virasoro.hpp"

namespace supertau {

class FrobeniusCover;
class KdvCover;

// Truncations and parameters shared by every suite.
struct SuiteOptions {
    int pmax = 3;
    int kmax = 3;
    int nmax = 3;
    int mmax = 3;
    int total = 4;  // p + q bound for tau symmetry
    int P = 4;
    int K = 4;
    int window = 6;
    std::vector<int> ms{-1, 0, 1};
    std::optional<Rational> c0;  // empty: symbolic
    OddWeight odd_weight = OddWeight::Consistent;

    nlohmann::json to_json() const;
};

// The cover a suite runs against: a Frobenius manifold or KdV.
struct SuiteTarget {
    std::shared_ptr<const FrobeniusCover> frobenius;
    std::shared_ptr<const KdvCover> kdv;
    std::string spec_hash;  // sha256 of the canonical spec document, or of "kdv"

    const TauCover& cover() const;
    std::string name() const;
};
SuiteTarget kdv_target();
// Throws ValidationError for an invalid spec.
SuiteTarget frobenius_target(const nlohmann::json& spec_doc);
std::string sha256_hex(const std::string& data);

using SuiteJob = std::function<std::vector<CheckResult>()>;

struct SuiteEntry {
    std::string target;  // CLI target
    std::string name;
    std::string description;
    bool on_frobenius = true;
    bool on_kdv = false;
    // Builds the independent jobs; throws UnsupportedOrder or TruncationTooSmall
    // for options the suite cannot honour.
    std::function<std::vector<SuiteJob>(const SuiteTarget&, const SuiteOptions&)> jobs;
};

const std::vector<SuiteEntry>& suite_catalog();
// Suites of a target that run on the given cover; name "all" selects every one.
// Target "tau-cover" collects h, omega, phi, delta and flows.
std::vector<const SuiteEntry*> find_suites(const std::string& target, const std::string& name, const SuiteTarget& on);

struct ReportCheck {
    std::string id;
    bool pass = false;
    double runtime = 0;  // seconds spent in the job that produced the check
    DiffPoly residue;
    std::string note;
};

struct Report {
    std::string target;
    std::vector<std::string> suites;
    nlohmann::json environment;
    std::vector<ReportCheck> checks;
    // Present when timing information is recorded; runtimes are emitted with it.
    std::optional<std::string> timestamp;

    bool all_pass() const;
    size_t failures() const;
};

// SUPERTAU_THREADS when set to a positive integer, else the hardware concurrency.
int default_threads();

// Runs the jobs of all suites on `threads` workers. Check ids are prefixed by the
// suite name and sorted. With a numeric c0 every residue is evaluated at it.
Report run_suites(const std::string& target, const std::vector<const SuiteEntry*>& suites, const SuiteTarget& on,
                  const SuiteOptions& opt, int threads);

// Without a timestamp the document has no runtimes and is byte-stable.
nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
std::string report_to_text(const Report& r);
std::string report_to_latex(const Report& r);

}  // namespace supertau
