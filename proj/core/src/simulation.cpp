#include "mixedosc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixedosc/linalg.hpp"

namespace mixedosc {

ReferenceSignal ReferenceSignal::constant(double value) {
    ReferenceSignal s;
    s.baseline_ = value;
    return s;
}

ReferenceSignal ReferenceSignal::pulse_train(std::vector<double> amplitudes,
                                             std::vector<double> starts,
                                             std::vector<double> durations, double baseline) {
    if (amplitudes.size() != starts.size() || starts.size() != durations.size())
        throw InvalidInput("pulse_train: amplitude/start/duration lengths differ");
    ReferenceSignal s;
    s.baseline_ = baseline;

    std::vector<std::size_t> order(starts.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return starts[a] < starts[b]; });
    for (std::size_t idx : order) {
        if (durations[idx] <= 0.0) throw InvalidInput("pulse_train: durations must be positive");
        const double start = starts[idx];
        const double end = start + durations[idx];
        if (!s.ends_.empty() && start < s.ends_.back() - 1e-15)
            throw InvalidInput("pulse_train: pulses overlap");
        s.amplitudes_.push_back(amplitudes[idx]);
        s.starts_.push_back(start);
        s.ends_.push_back(end);
        s.discontinuities_.push_back(start);
        s.discontinuities_.push_back(end);
    }
    return s;
}

double ReferenceSignal::operator()(double t) const {
    for (std::size_t i = 0; i < starts_.size(); ++i)
        if (t >= starts_[i] && t < ends_[i]) return baseline_ + amplitudes_[i];
    return baseline_;
}

namespace {

// Dormand-Prince 4(5) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1c = 35.0 / 384, B3c = 500.0 / 1113, B4c = 125.0 / 192, B5c = -2187.0 / 6784,
                 B6c = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

} // namespace

SimTrace integrate(const ClosedLoopSystem& sys, const Eigen::VectorXd& x0,
                   const ReferenceSignal& rsig, double T, double tol) {
    if (T <= 0.0) throw InvalidInput("integrate: horizon must be positive");
    if (tol <= 0.0) throw InvalidInput("integrate: tolerance must be positive");
    if (x0.size() != sys.order()) throw InvalidInput("integrate: x0 dimension mismatch");

    double fastest = 0.0;
    for (const auto& e : eigenvalues(sys.A)) fastest = std::max(fastest, std::abs(e.real()));
    const double max_step = fastest > 0.0 ? 0.1 / fastest : T / 100.0;
    const double atol = tol * 1e-2;

    auto trace = std::make_shared<SimTrace>();
    trace->meta.tol = tol;
    trace->meta.max_step = max_step;

    // Segment boundaries at reference discontinuities inside (0, T).
    std::vector<double> boundaries;
    for (double d : rsig.discontinuities())
        if (d > 0.0 && d < T) boundaries.push_back(d);
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.push_back(T);

    const int n = sys.order();
    Eigen::VectorXd x = x0;
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), xnew(n), err(n);

    double t = 0.0;
    auto record = [&](double time, const Eigen::VectorXd& state, double rv) {
        trace->t.push_back(time);
        trace->x.push_back(state);
        trace->y.push_back(sys.C1.dot(state));
        trace->r.push_back(rv);
    };
    record(t, x, rsig(0.0));

    double h = max_step;
    for (double tb : boundaries) {
        const double rv = rsig(t); // constant within the segment
        bool segment_done = t >= tb;
        while (!segment_done) {
            h = std::min({h, max_step, tb - t});
            if (tb - t <= 1e-14 * std::max(1.0, tb)) break;
            const double hmin = 1e-12 * std::max(1.0, t);
            if (h < hmin)
                throw IntegrationFailure("integrate: step underflow (stiffness?)", trace);

            auto f = [&](const Eigen::VectorXd& xs) { return sys.derivative(xs, rv); };
            k1 = f(x);
            k2 = f(x + h * (A21 * k1));
            k3 = f(x + h * (A31 * k1 + A32 * k2));
            k4 = f(x + h * (A41 * k1 + A42 * k2 + A43 * k3));
            k5 = f(x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
            k6 = f(x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
            xnew = x + h * (B1c * k1 + B3c * k3 + B4c * k4 + B5c * k5 + B6c * k6);
            k7 = f(xnew);
            err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

            double err_norm = 0.0;
            for (int i = 0; i < n; ++i) {
                const double sc = atol + tol * std::max(std::abs(x(i)), std::abs(xnew(i)));
                const double e = err(i) / sc;
                err_norm += e * e;
            }
            err_norm = std::sqrt(err_norm / n);

            if (!xnew.allFinite())
                throw IntegrationFailure("integrate: non-finite state encountered", trace);

            if (err_norm <= 1.0) {
                t += h;
                x = xnew;
                ++trace->meta.accepted_steps;
                if (tb - t <= 1e-14 * std::max(1.0, tb)) {
                    t = tb;
                    segment_done = true;
                    // The sample at the boundary carries the next segment's
                    // reference value (right-continuity).
                    record(t, x, rsig(t));
                } else {
                    record(t, x, rv);
                }
            } else {
                ++trace->meta.rejected_steps;
            }
            const double factor =
                err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        }
        t = tb;
    }
    return std::move(*trace);
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Converged: return "Converged";
        case VerdictKind::Oscillating: return "Oscillating";
        case VerdictKind::SwitchedEquilibrium: return "SwitchedEquilibrium";
        case VerdictKind::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

namespace {

struct Peak {
    std::size_t index;
    double prominence;
};

std::vector<Peak> detect_peaks(const std::vector<double>& y, std::size_t lo, std::size_t hi,
                               double min_prominence) {
    std::vector<Peak> peaks;
    for (std::size_t i = lo + 1; i + 1 < hi; ++i) {
        if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;
        double left_min = y[i];
        for (std::size_t j = i; j-- > lo;) {
            if (y[j] > y[i]) break;
            left_min = std::min(left_min, y[j]);
        }
        double right_min = y[i];
        for (std::size_t j = i + 1; j < hi; ++j) {
            if (y[j] > y[i]) break;
            right_min = std::min(right_min, y[j]);
        }
        const double prominence = y[i] - std::max(left_min, right_min);
        if (prominence >= min_prominence) peaks.push_back({i, prominence});
    }
    return peaks;
}

struct WindowStats {
    bool converged = false;
    double mean = 0.0;
    double max_dev = 0.0;
};

// Convergence test on the terminal quarter of [lo, hi).
WindowStats terminal_stats(const std::vector<double>& t, const std::vector<double>& y,
                           std::size_t lo, std::size_t hi) {
    WindowStats out;
    if (hi <= lo + 4) return out;
    const double t_start = t[hi - 1] - 0.25 * (t[hi - 1] - t[lo]);
    std::size_t w = lo;
    while (w < hi && t[w] < t_start) ++w;
    if (hi <= w + 2) w = lo;
    double sum = 0.0;
    for (std::size_t i = w; i < hi; ++i) sum += y[i];
    out.mean = sum / static_cast<double>(hi - w);
    for (std::size_t i = w; i < hi; ++i) out.max_dev = std::max(out.max_dev, std::abs(y[i] - out.mean));
    out.converged = out.max_dev < 1e-3 * std::max(1.0, std::abs(out.mean));
    return out;
}

double peak_to_peak(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
    double mn = y[lo], mx = y[lo];
    for (std::size_t i = lo; i < hi; ++i) {
        mn = std::min(mn, y[i]);
        mx = std::max(mx, y[i]);
    }
    return mx - mn;
}

std::size_t first_index_at(const std::vector<double>& t, double time) {
    return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), time) - t.begin());
}

} // namespace

OscillationVerdict classify_trace(const SimTrace& trace, double transient_fraction) {
    if (trace.size() < 64) throw InvalidInput("classify_trace: trace too short");
    if (transient_fraction < 0.0 || transient_fraction >= 1.0)
        throw InvalidInput("classify_trace: transient_fraction must be in [0, 1)");

    const auto& t = trace.t;
    const auto& y = trace.y;
    const std::size_t N = trace.size();

    // Last reference discontinuity observed in the sampled r.
    std::size_t last_change = 0;
    std::size_t first_change = N;
    for (std::size_t i = 1; i < N; ++i) {
        if (trace.r[i] != trace.r[i - 1]) {
            last_change = i;
            if (first_change == N) first_change = i;
        }
    }

    const double post_start = t[last_change];
    const double analysis_start = post_start + transient_fraction * (t.back() - post_start);
    const std::size_t lo = first_index_at(t, analysis_start);
    const std::size_t hi = N;
    OscillationVerdict verdict;
    if (hi <= lo + 32) {
        verdict.diagnostics = "analysis window too short";
        return verdict;
    }

    // Oscillation: enough regular, non-decaying prominent peaks.
    const std::vector<Peak> peaks = detect_peaks(y, lo, hi, 1e-3);
    if (peaks.size() >= 6) {
        std::vector<double> intervals;
        intervals.reserve(peaks.size() - 1);
        for (std::size_t i = 1; i < peaks.size(); ++i)
            intervals.push_back(t[peaks[i].index] - t[peaks[i - 1].index]);
        const double mean =
            std::accumulate(intervals.begin(), intervals.end(), 0.0) / intervals.size();
        double var = 0.0;
        for (double v : intervals) var += (v - mean) * (v - mean);
        const double cv = mean > 0.0 ? std::sqrt(var / intervals.size()) / mean : 1.0;

        const double span = t[hi - 1] - t[lo];
        const std::size_t q1 = first_index_at(t, t[hi - 1] - 0.25 * span);
        const std::size_t q2 = first_index_at(t, t[hi - 1] - 0.5 * span);
        const double amp_last = peak_to_peak(y, q1, hi);
        const double amp_prev = peak_to_peak(y, q2, q1 + 1);
        const bool amp_stable =
            std::abs(amp_last - amp_prev) <= 0.10 * std::max({amp_last, amp_prev, 1e-12});

        if (cv < 0.05 && amp_stable) {
            verdict.kind = VerdictKind::Oscillating;
            verdict.amplitude = peak_to_peak(y, first_index_at(t, t[hi - 1] - 0.5 * span), hi);
            verdict.period = mean;
            verdict.diagnostics = "peaks=" + std::to_string(peaks.size());
            return verdict;
        }
        verdict.diagnostics = "irregular peaks: cv=" + std::to_string(cv) +
                              " amp_last=" + std::to_string(amp_last) +
                              " amp_prev=" + std::to_string(amp_prev);
    }

    const WindowStats post = terminal_stats(t, y, lo, hi);
    if (post.converged) {
        // Compare with the pre-pulse steady state when pulses were applied.
        if (first_change < N && first_change > 16) {
            const double pre_end = t[first_change];
            const double pre_analysis = t.front() + transient_fraction * (pre_end - t.front());
            const std::size_t plo = first_index_at(t, pre_analysis);
            const std::size_t phi_idx = first_change;
            if (phi_idx > plo + 8) {
                const WindowStats pre = terminal_stats(t, y, plo, phi_idx);
                const double switch_tol = 1e-2 * std::max({1.0, std::abs(pre.mean), std::abs(post.mean)});
                if (!pre.converged || std::abs(pre.mean - post.mean) > switch_tol) {
                    verdict.kind = VerdictKind::SwitchedEquilibrium;
                    verdict.old_value = pre.mean;
                    verdict.new_value = post.mean;
                    verdict.diagnostics =
                        pre.converged ? "pre/post equilibria differ" : "pre-window not converged";
                    return verdict;
                }
            }
        }
        verdict.kind = VerdictKind::Converged;
        verdict.value = post.mean;
        return verdict;
    }

    if (verdict.diagnostics.empty())
        verdict.diagnostics = "neither converged (max_dev=" + std::to_string(post.max_dev) +
                              ") nor oscillating (peaks=" + std::to_string(peaks.size()) + ")";
    return verdict;
}

} // namespace mixedosc
