#include "eoconv/sweep.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"
#include "eoconv/hash.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <thread>

namespace eoconv
{

std::string_view sampling_name(Sampling s) noexcept { return s == Sampling::linear ? "linear" : "log"; }

Sampling parse_sampling(std::string_view s)
{
    if (s == "linear" || s == "lin")
        return Sampling::linear;
    if (s == "log")
        return Sampling::log;
    throw ConfigError("unknown sampling '" + std::string(s) + "' (linear or log)");
}

std::string_view objective_name(Objective o) noexcept
{
    switch (o) {
    case Objective::g0: return "g0";
    case Objective::C0: return "C0";
    case Objective::gamma_peak: return "gamma_peak";
    case Objective::P_for_C1: return "P_for_C1";
    case Objective::n_eq: return "n_eq";
    }
    return "?";
}

Objective parse_objective(std::string_view s)
{
    for (auto o : {Objective::g0, Objective::C0, Objective::gamma_peak, Objective::P_for_C1, Objective::n_eq})
        if (objective_name(o) == s)
            return o;
    throw ConfigError("unknown objective '" + std::string(s) + "' (g0, C0, gamma_peak, P_for_C1, n_eq)");
}

bool maximise(Objective o) noexcept { return o == Objective::g0 || o == Objective::C0 || o == Objective::gamma_peak; }

void SweepSpec::validate() const
{
    (void)parameter_dimension(parameter);
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ConfigError("sweep range needs lo < hi");
    if (points < 2)
        throw ConfigError("sweep needs at least 2 points");
    if (sampling == Sampling::log && !(lo > 0.0))
        throw ConfigError("log sampling needs a positive range");
}

std::vector<double> SweepSpec::values() const
{
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double t = static_cast<double>(k) / (points - 1);
        v[static_cast<std::size_t>(k)] =
            sampling == Sampling::linear ? lo + (hi - lo) * t : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * t);
    }
    v.front() = lo;
    v.back() = hi;
    return v;
}

const SweepPoint* SweepResult::best() const
{
    const SweepPoint* b = nullptr;
    const bool up = maximise(spec.objective);
    for (const auto& p : points) {
        if (!p.objective)
            continue;
        if (!b || (up ? *p.objective > *b->objective : *p.objective < *b->objective))
            b = &p;
    }
    return b;
}

double objective_value(const RunReport& r, Objective o)
{
    switch (o) {
    case Objective::g0: return r.coupling.g0;
    case Objective::C0: return r.conversion.C0;
    case Objective::gamma_peak: return r.conversion.gamma_peak;
    case Objective::P_for_C1:
        if (!(r.conversion.C0 > 0.0))
            throw PreconditionError("P_for_C1 undefined without coupling");
        return r.params.topology == PumpTopology::single_mode ? r.conversion.p_single : r.conversion.p_dual;
    case Objective::n_eq:
        if (!r.conversion.n_eq)
            throw PreconditionError("n_eq undefined at zero cooperativity");
        return *r.conversion.n_eq;
    }
    return 0.0;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn)
{
    const int workers = std::clamp(jobs, 1, std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++)
                fn(i);
        });
    for (auto& t : pool)
        t.join();
}

namespace
{

std::string point_id(int index, const RunConfig& cfg, const std::string& parameter, double value)
{
    Fnv1a h;
    h.add(cfg.source);
    h.add(parameter);
    h.add(value);
    char buf[64];
    std::snprintf(buf, sizeof buf, "point-%03d-%s", index, h.hex().substr(0, 8).c_str());
    return buf;
}

SweepPoint evaluate_point(const RunConfig& base, const SweepSpec& spec, int index, double value,
                          const SweepOptions& opt, FieldCache* cache)
{
    SweepPoint p;
    p.index = index;
    p.value = value;
    p.report_id = point_id(index, base, spec.parameter, value);
    if (opt.lower_bound && value < *opt.lower_bound) {
        p.status = "infeasible: below lower bound " + format_significant(*opt.lower_bound, 4);
        return p;
    }
    try {
        RunConfig cfg = base;
        set_parameter(cfg, spec.parameter, value);
        RunOptions ro;
        ro.cache = cache;
        auto rep = std::make_shared<RunReport>(run_pipeline(cfg, ro));
        rep->potential_field.reset(); // curves do not need the fields
        rep->mode_solution.reset();
        p.objective = objective_value(*rep, spec.objective);
        p.report = std::move(rep);
    } catch (const std::exception& e) {
        p.objective.reset();
        p.status = e.what();
    }
    return p;
}

} // namespace

SweepResult sweep(const RunConfig& config, const SweepSpec& spec, const SweepOptions& opt)
{
    spec.validate();
    FieldCache local;
    FieldCache* cache = opt.cache ? opt.cache : &local;
    const auto values = spec.values();

    SweepResult res;
    res.spec = spec;
    res.points.resize(values.size());
    parallel_for(static_cast<int>(values.size()), opt.jobs, [&](int i) {
        res.points[static_cast<std::size_t>(i)] =
            evaluate_point(config, spec, i, values[static_cast<std::size_t>(i)], opt, cache);
    });
    for (const auto& p : res.points)
        if (!p.objective)
            ++res.failures;
    if (res.failures == static_cast<int>(res.points.size()))
        throw Error("sweep: all " + std::to_string(res.failures) + " points failed; first: " + res.points.front().status);
    return res;
}

ScalarOptimum optimize_scalar(const std::function<double(double)>& f, double lo, double hi, int points,
                              Sampling sampling, bool maximise, double rel_tol, int max_refine)
{
    SweepSpec grid;
    grid.parameter = "converter.optical_q"; // any known path; only used for sampling
    grid.lo = lo;
    grid.hi = hi;
    grid.points = points;
    grid.sampling = sampling;
    if (!(lo < hi) || points < 2)
        throw PreconditionError("optimize_scalar: need lo < hi and at least 2 points");
    if (sampling == Sampling::log && !(lo > 0.0))
        throw PreconditionError("optimize_scalar: log sampling needs a positive range");

    const double sign = maximise ? 1.0 : -1.0;
    auto score = [&](double y) { return std::isfinite(y) ? sign * y : -std::numeric_limits<double>::infinity(); };

    ScalarOptimum out;
    const auto xs = grid.values();
    for (double x : xs)
        out.samples.emplace_back(x, f(x));
    out.evaluations = static_cast<int>(xs.size());

    std::size_t ib = 0;
    for (std::size_t k = 1; k < out.samples.size(); ++k)
        if (score(out.samples[k].second) > score(out.samples[ib].second))
            ib = k;
    out.x = out.samples[ib].first;
    out.value = out.samples[ib].second;

    const auto [mn, mx] = std::minmax_element(out.samples.begin(), out.samples.end(),
                                              [](auto& a, auto& b) { return a.second < b.second; });
    const double span = std::abs(mx->second - mn->second);
    if (std::isfinite(span) && span <= 1e-12 * std::max(std::abs(mx->second), 1e-300)) {
        out.flat = true;
        out.x = sampling == Sampling::linear ? 0.5 * (lo + hi) : std::sqrt(lo * hi);
        out.value = f(out.x);
        ++out.evaluations;
        return out;
    }

    // Golden section inside the bracket formed by the neighbours of the best sample.
    const bool logx = sampling == Sampling::log;
    auto to_t = [&](double x) { return logx ? std::log(x) : x; };
    auto from_t = [&](double t) { return logx ? std::exp(t) : t; };
    double a = to_t(xs[ib == 0 ? 0 : ib - 1]);
    double b = to_t(xs[std::min(ib + 1, xs.size() - 1)]);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(from_t(c));
    double fd = f(from_t(d));
    out.evaluations += 2;
    const double scale = std::max(std::abs(from_t(a)), std::abs(from_t(b)));
    for (int it = 0; it < max_refine && std::abs(from_t(b) - from_t(a)) > rel_tol * scale; ++it) {
        if (score(fc) > score(fd)) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(from_t(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(from_t(d));
        }
        ++out.evaluations;
    }
    for (auto [t, y] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (score(y) > score(out.value)) {
            out.x = from_t(t);
            out.value = y;
            out.refined = true;
        }
    }
    return out;
}

OptimizeResult optimize_scalar(const RunConfig& config, const SweepSpec& spec, const SweepOptions& opt,
                               double rel_tol)
{
    OptimizeResult res;
    FieldCache local;
    SweepOptions so = opt;
    if (!so.cache)
        so.cache = &local;
    res.lower_bound = so.lower_bound;
    res.sweep = sweep(config, spec, so);

    // the refinement reuses the sweep samples instead of recomputing them
    std::map<double, std::shared_ptr<const RunReport>> reports;
    std::map<double, double> known;
    for (const auto& p : res.sweep.points) {
        if (p.objective) {
            known[p.value] = *p.objective;
            reports[p.value] = p.report;
        }
    }
    const bool up = maximise(spec.objective);
    const double worst = up ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    auto f = [&](double x) -> double {
        if (const auto it = known.find(x); it != known.end())
            return it->second;
        if (so.lower_bound && x < *so.lower_bound)
            return worst;
        const SweepPoint pt = evaluate_point(config, spec, -1, x, so, so.cache);
        const double y = pt.objective.value_or(worst);
        known[x] = y;
        if (pt.report)
            reports[x] = pt.report;
        return y;
    };
    // failed samples appear as the worst value (NaN would poison comparisons)
    auto g = [&](double x) {
        const double y = f(x);
        return std::isfinite(y) ? y : worst;
    };
    res.optimum = optimize_scalar(g, spec.lo, spec.hi, spec.points, spec.sampling, up, rel_tol);
    if (const auto it = reports.find(res.optimum.x); it != reports.end())
        res.report = it->second;
    return res;
}

} // namespace eoconv
