#pragma once

#include <memory>
#include <optional>
#include <string>

#include "wgcat/nfold.hpp"

namespace wgcat {

// ---- homotopically discrete structures -------------------------------------

// Recursive certificate: at the base a category is an equivalence relation;
// above that, every level is certified, the level-1 Segal comparisons are
// invertible, the category direction is groupoidal, and the levelwise
// iso-class truncation reconstructs and is itself certified.
struct HDCert {
    int n = 1;
    std::vector<SegalWitness> segal;                 // direction-1, n >= 2
    std::vector<std::shared_ptr<HDCert>> levels;     // per level 0..m, n >= 2
    std::shared_ptr<HDCert> p_cert;                  // n >= 2
    GridPtr p_grid;                                  // reconstructed truncation, n >= 2
};

struct HDOutcome {
    std::shared_ptr<HDCert> cert;
    Report report;
    bool ok() const { return cert != nullptr; }
};

HDOutcome check_hd(GridPtr x, int n, const Limits& lim = default_limits());

// re-verify a stored certificate against an instance without re-searching
Report recheck_hd(GridPtr x, const HDCert& cert, const Limits& lim = default_limits());

// ---- truncation -------------------------------------------------------------

// Levelwise iso-class quotient followed by reconstruction of the last
// direction; the J-grid of the one-lower-dimensional truncation.
struct TruncationOutcome {
    GridPtr grid;               // dirs - 1
    LevelwiseQuotient barp;     // the set-valued grid and quotient data
    Report report;
    bool ok() const { return grid != nullptr; }
};

TruncationOutcome p_truncate(GridPtr x, const Limits& lim = default_limits());

// ---- discretization ----------------------------------------------------------

struct Discretization {
    std::vector<std::string> class_ids;    // the underlying set
    std::vector<std::vector<int>> cls;     // per linear entry: object -> class
    GridPtr xd;                            // constant grid on the discrete set
    GridMorphism gamma;                    // x -> xd
    GridPtr dp_grid;                       // discrete grid of the one-step truncation
    GridMorphism gamma_n;                  // x -> dp_grid (entrywise quotient)
};

struct DiscretizeOutcome {
    std::optional<Discretization> disc;
    Report report;
    bool ok() const { return disc.has_value(); }
};

// pre: x certified homotopically discrete
DiscretizeOutcome discretize(GridPtr x, int n, const Limits& lim = default_limits());

// ---- n-equivalences -----------------------------------------------------------

struct NEquivCert {
    int n = 1;
    std::optional<EquivCertificate> base;  // n == 1
    struct Fiber {
        std::string a, b;    // source classes
        std::string fa, fb;  // image classes
        std::shared_ptr<NEquivCert> cert;
    };
    std::vector<Fiber> fibers;           // n >= 2
    std::shared_ptr<NEquivCert> p_cert;  // n >= 2
};

struct NEquivOutcome {
    std::shared_ptr<NEquivCert> cert;
    Report report;
    bool ok() const { return cert != nullptr; }
};

NEquivOutcome check_nequiv(const GridMorphism& f, int n, const Limits& lim = default_limits());

// ---- weak globularity -----------------------------------------------------------

struct WGCert {
    int n = 1;
    std::shared_ptr<HDCert> hd0;              // level 0
    std::vector<SegalWitness> segal;          // direction-1 comparisons
    struct Induced {
        int k = 2;
        GridPtr pullback;                     // over the discretized level 0
        std::shared_ptr<WGCert> pullback_wg;  // per-instance closure check
        std::shared_ptr<NEquivCert> comparison;
    };
    std::vector<Induced> induced;
    std::vector<std::shared_ptr<WGCert>> levels;
    std::shared_ptr<WGCert> p_cert;
    GridPtr p_grid;
};

struct WGOutcome {
    std::shared_ptr<WGCert> cert;
    Report report;
    bool ok() const { return cert != nullptr; }
};

WGOutcome check_wg(GridPtr x, int n, const Limits& lim = default_limits());

Report recheck_wg(GridPtr x, const WGCert& cert, const Limits& lim = default_limits());

// ---- verified statements ----------------------------------------------------------

// A source n-equivalent to a homotopically discrete target is homotopically
// discrete; conclusion failures are hard errors (theorem violations).
struct VerifyOutcome {
    Report report;
    std::shared_ptr<HDCert> derived;
};
VerifyOutcome verify_nequiv_to_hd(const GridMorphism& f, int n, const Limits& lim = default_limits());

// A weakly globular structure with homotopically discrete level 1 and
// truncation is homotopically discrete.
VerifyOutcome verify_hd_criterion(GridPtr x, int n, const Limits& lim = default_limits());

// Sufficient criterion for weak globularity: level 0 homotopically discrete
// (and doubly so one level in when n > 2), and the levelwise iso-class grid
// a multinerve of a weakly globular structure. Hypothesis failures are
// ordinary outcomes; a conclusion failure raises a theorem violation.
struct CriterionOutcome {
    bool hypotheses_hold = false;
    Report hypothesis_report;
    std::shared_ptr<WGCert> cert;  // set when the conclusion was verified
    bool ok() const { return cert != nullptr; }
};
CriterionOutcome criterion_wg(GridPtr x, int n, const Limits& lim = default_limits());

// levelwise weak globularity of the direction-2 nerve
Report nerve_dir2_wg(GridPtr x, int n, const Limits& lim = default_limits());

}  // namespace wgcat
