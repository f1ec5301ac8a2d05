#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jcm/config.hpp"
#include "jcm/integrator.hpp"

namespace jcm {

inline constexpr std::string_view kCsvHeader =
    "t,sigma3,sigma_p,photon,energy,B_re,B_im,nu,p1,pm1";

struct CsvRow {
    double t, sigma3, sigma_p, photon, energy, B_re, B_im, nu, p1, pm1;
};

// The sample times integrate() lands on for these options: 0, h, 2h, ...
// with h = dt * record_every, ending at t_max.
std::vector<double> record_grid(const IntegratorOptions& opts);

CsvRow to_csv_row(const TrajectorySample& s);

// Truncated-Fock trajectory on the given grid. The nu, p1, pm1 columns hold
// the Gaussian-equivalent decomposition of the instantaneous second moments:
// thermal occupation from the field covariances, atom level occupations from
// the reduced atom density eigenvalues (so sigma_p = p1 - pm1 here too).
std::vector<CsvRow> exact_csv_rows(const RunConfig& cfg, const std::vector<double>& times);

// 17 significant digits, so parsing an emitted file round-trips bit-exactly.
std::string format_csv_row(const CsvRow& r);
std::string format_csv(const std::vector<CsvRow>& rows);
std::vector<CsvRow> parse_csv(std::string_view text);

struct SeriesMetrics {
    double l2 = 0.0;       // rms error over [0, window]
    double max_abs = 0.0;  // over the full grid
    double horizon = 0.0;  // first time |error| exceeds the threshold
    bool crossed = false;  // horizon equals the final time when false
};

SeriesMetrics series_metrics(const std::vector<double>& times, const std::vector<double>& abs_err,
                             double window, double threshold);

struct ObservableComparison {
    std::string name;
    SeriesMetrics meanfield;
    SeriesMetrics collisional;
};

struct ComparisonReport {
    double window = 0.0;
    double horizon_threshold = 0.2;
    double dt_sample = 0.0;
    std::size_t samples = 0;
    std::vector<ObservableComparison> observables;  // sigma3, sigma_p, photon, B
    std::optional<double> freq_exact, freq_meanfield, freq_collisional;
};

ComparisonReport compare_runs(const std::vector<CsvRow>& exact, const std::vector<CsvRow>& mf,
                              const std::vector<CsvRow>& coll, double window,
                              double threshold = 0.2);

std::string format_report(const ComparisonReport& r);

// Angular frequency of the largest nonzero peak of a uniformly sampled
// series (Hann-windowed transform scan with local refinement).
double dominant_frequency(const std::vector<double>& series, double dt_sample);

// Executes the configured run and reports the files written. Dynamics or
// truncation failures still flush the rows recorded so far, append an
// "# aborted:" marker line, and then propagate.
std::vector<std::filesystem::path> run(const RunConfig& cfg);

}  // namespace jcm
