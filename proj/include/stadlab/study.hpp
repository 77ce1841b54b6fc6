#pragma once

#include "stadlab/verify.hpp"

#include <string>
#include <vector>

namespace stadlab {

// One sweep configuration.  Serialized as JSON; doubles round-trip
// bit-exactly (shortest-representation printing).
struct StudyConfig {
    double alpha = 1.0;
    double beta = 1.0;
    double h = 0.02;
    int refinements = 0;

    // Either explicit windows, or (when empty) the bouncing-ball index
    // range [n_lo, n_hi] with the given halfwidth around each center.
    std::vector<SpectralWindow> windows;
    int n_lo = 3;
    int n_hi = 15;
    double window_halfwidth = 4.0;

    double delta = 1.0;    // zone-I layer constant
    double gamma1 = -0.5;  // strip coordinates
    double gamma2 = 0.5;

    std::string output_dir = "study_out";

    std::vector<SpectralWindow> resolved_windows() const;
};

std::string to_json(const StudyConfig& config);
StudyConfig config_from_json(const std::string& text);

// Per-mode sweep record.  CSV column order is frozen; the two slope
// columns are filled by fit_scaling and repeated on every row.
struct ScalingRow {
    double lambda = 0.0;
    double wing_mass = 0.0;
    double l4_wing_mass = 0.0;   // lambda^4 * wing_mass
    double l2_wing_norm = 0.0;   // lambda^2 * sqrt(wing_mass)
    double flux_weighted = 0.0;
    double lhs_normderiv = 0.0;
    double lhs_L2 = 0.0;
    double lhs_L2bis = 0.0;
    double strip_mass = 0.0;
    double zoneI = 0.0;
    double zoneII = 0.0;
    double zoneIII = 0.0;
    double f_norm = 0.0;
    double wing_slope = 0.0;
    double flux_slope = 0.0;
};

extern const char* const kScalingCsvHeader;

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square in log-log coordinates
    int used = 0;
    int excluded = 0;  // nonpositive quantities, flagged out of the fit
};

// OLS of log(quantity) against log(lambda).
FitResult fit_scaling(const std::vector<double>& lambdas, const std::vector<double>& quantities);

struct StudyResult {
    std::vector<ScalingRow> rows;
    FitResult wing_fit;
    FitResult flux_fit;
    std::string csv_path;
    std::vector<std::string> svg_paths;
};

// solve -> observe -> verify per window; writes scaling.csv and the
// log-log SVG plots (reference slopes -4 for wing mass, 0 for flux).
StudyResult run_study(const StudyConfig& config);

std::string scaling_csv_text(const std::vector<ScalingRow>& rows);

// Log-log scatter plot with a reference guide line of the given slope.
std::string scaling_svg(const std::vector<ScalingRow>& rows, const std::string& quantity,
                        double reference_slope);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool ran = false;
    bool passed = false;
    std::string detail;  // measured values, human-readable
};

// Full acceptance suite; writes manifest.json under output_dir and
// returns one record per criterion.  Failures are recorded, not thrown.
std::vector<CriterionResult> acceptance(const std::string& output_dir);

std::string acceptance_manifest_json(const std::vector<CriterionResult>& results);

}  // namespace stadlab
