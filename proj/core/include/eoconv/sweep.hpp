#ifndef EOCONV_SWEEP_HPP
#define EOCONV_SWEEP_HPP

#include "eoconv/pipeline.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eoconv
{

enum class Sampling
{
    linear,
    log,
};

enum class Objective
{
    g0,         // maximise, rad/s
    C0,         // maximise
    gamma_peak, // maximise
    P_for_C1,   // minimise, W (configured topology)
    n_eq,       // minimise, quanta
};

std::string_view sampling_name(Sampling s) noexcept;
Sampling parse_sampling(std::string_view s);
std::string_view objective_name(Objective o) noexcept;
Objective parse_objective(std::string_view s);
bool maximise(Objective o) noexcept;

struct SweepSpec
{
    std::string parameter; // dotted config path, e.g. geometry.electrode_gap
    double lo = 0.0;       // SI
    double hi = 0.0;
    int points = 2;
    Sampling sampling = Sampling::linear;
    Objective objective = Objective::g0;

    // Throws ConfigError: lo < hi, points >= 2, positive range for log, known path.
    void validate() const;
    std::vector<double> values() const;
};

struct SweepPoint
{
    int index = 0;
    double value = 0.0;
    std::optional<double> objective;
    std::string status = "ok"; // "ok", "infeasible: ...", or the error message
    std::string report_id;
    std::shared_ptr<const RunReport> report;
};

struct SweepOptions
{
    int jobs = 1;
    FieldCache* cache = nullptr; // a private cache is used when null
    // Points below this parameter value are skipped as infeasible.
    std::optional<double> lower_bound;
};

struct SweepResult
{
    SweepSpec spec;
    std::vector<SweepPoint> points;
    int failures = 0;

    // Best successful point for the objective direction (nullptr if none).
    const SweepPoint* best() const;
};

double objective_value(const RunReport& report, Objective objective);

// Evaluates the pipeline at every sample, concurrently up to `jobs` workers;
// points are merged by index so the output is independent of scheduling.
// Throws Error if every point fails.
SweepResult sweep(const RunConfig& config, const SweepSpec& spec, const SweepOptions& options = {});

// Runs fn over indices [0, n) with up to `jobs` threads pulling from a shared counter.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

struct ScalarOptimum
{
    double x = 0.0;
    double value = 0.0;
    bool flat = false;       // constant objective: x is the range midpoint
    bool refined = false;    // golden-section refinement improved on the samples
    int evaluations = 0;
    std::vector<std::pair<double, double>> samples;
};

// Samples f on the sweep grid, then refines around the best sample by golden
// section to a relative tolerance. Never returns worse than the best sample.
ScalarOptimum optimize_scalar(const std::function<double(double)>& f, double lo, double hi, int points,
                              Sampling sampling, bool maximise, double rel_tol = 1e-3, int max_refine = 80);

struct OptimizeResult
{
    ScalarOptimum optimum;
    std::shared_ptr<const RunReport> report; // at optimum.x
    SweepResult sweep;
    std::optional<double> lower_bound;
};

// Sweep-then-refine on the pipeline objective. Failed points count as worst.
OptimizeResult optimize_scalar(const RunConfig& config, const SweepSpec& spec, const SweepOptions& options = {},
                               double rel_tol = 1e-3);

} // namespace eoconv

#endif // EOCONV_SWEEP_HPP
