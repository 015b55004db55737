#include "kgflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "kgflow/errors.hpp"

namespace kgflow {

const char* to_string(Parameterization p) {
    return p == Parameterization::Local ? "local" : "nonlocal";
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::ParamLimit: return "param_limit";
        case StopReason::TimeBoxExit: return "time_box_exit";
        case StopReason::Stagnation: return "stagnation";
        default: return "node_truncation";
    }
}

Trajectory integrate_local(const SingleParticleCurrentField& field, const FourVector& x0,
                           double s_max, double ds, const FlowOptions& options) {
    const double eps = options.stagnation_epsilon > 0.0
                           ? options.stagnation_epsilon
                           : 1e-12 * field.amplitude_bound();
    const auto rhs = [&](const FourVector& x) -> std::optional<FourVector> {
        const FourVector j = field.evaluate(x);
        if (euclidean_norm(j) < eps) return std::nullopt;
        return j;
    };
    return integrate_flow(rhs, field.box(), x0, s_max, ds, options.step_length_cap,
                          Parameterization::Local, field.particle(), StopReason::Stagnation);
}

namespace {

Configuration offset(const Configuration& x, const std::vector<FourVector>& dir, double scale) {
    Configuration out = x;
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += scale * dir[a];
    return out;
}

}  // namespace

std::vector<Trajectory> integrate_nonlocal(const FlowField& flow, const Configuration& cfg0,
                                           double s_max, double ds,
                                           const FlowOptions& options) {
    const int n = flow.wave_function().particle_count();
    if (static_cast<int>(cfg0.size()) != n)
        throw std::invalid_argument("configuration arity mismatch");
    if (!(ds > 0.0)) throw std::invalid_argument("integration step must be positive");
    if (s_max < 0.0) throw std::invalid_argument("parameter span must be nonnegative");
    const SpacetimeBox& box = flow.wave_function().box();
    for (int a = 0; a < n; ++a)
        if (!box.contains_time(cfg0[static_cast<std::size_t>(a)].t))
            throw std::invalid_argument("initial configuration lies outside the box time extent");
    if (!(flow.density(cfg0) > flow.node_threshold()))
        throw node_error("initial configuration sits at a node of |psi|^2");

    const auto rhs = [&](const Configuration& c) -> std::optional<std::vector<FourVector>> {
        const double rho = flow.density(c);
        if (!(rho > flow.node_threshold())) return std::nullopt;
        std::vector<FourVector> v(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a)
            v[static_cast<std::size_t>(a)] =
                (1.0 / rho) * flow.current(a).evaluate(c[static_cast<std::size_t>(a)]);
        return v;
    };
    const auto step = [&](const Configuration& x, double dp) -> std::optional<Configuration> {
        const auto k1 = rhs(x);
        if (!k1) return std::nullopt;
        const auto k2 = rhs(offset(x, *k1, dp / 2.0));
        if (!k2) return std::nullopt;
        const auto k3 = rhs(offset(x, *k2, dp / 2.0));
        if (!k3) return std::nullopt;
        const auto k4 = rhs(offset(x, *k3, dp));
        if (!k4) return std::nullopt;
        Configuration out = x;
        for (std::size_t a = 0; a < out.size(); ++a)
            out[a] += (dp / 6.0) * ((*k1)[a] + 2.0 * (*k2)[a] + 2.0 * (*k3)[a] + (*k4)[a]);
        return out;
    };

    std::vector<Trajectory> trajs(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        trajs[static_cast<std::size_t>(a)].particle = a;
        trajs[static_cast<std::size_t>(a)].parameterization = Parameterization::Nonlocal;
        trajs[static_cast<std::size_t>(a)].samples.push_back(
            {0.0, cfg0[static_cast<std::size_t>(a)]});
    }
    const auto record = [&](double param, const Configuration& c) {
        for (int a = 0; a < n; ++a) {
            Trajectory& tr = trajs[static_cast<std::size_t>(a)];
            tr.max_segment_length = std::max(
                tr.max_segment_length,
                euclidean_norm(c[static_cast<std::size_t>(a)] - tr.samples.back().point));
            tr.samples.push_back({param, c[static_cast<std::size_t>(a)]});
        }
    };
    const auto finish = [&](StopReason reason) {
        for (auto& tr : trajs) tr.stop = reason;
        return trajs;
    };

    const double cap =
        options.step_length_cap > 0.0 ? options.step_length_cap : std::min(box.L, box.T) / 2.0;
    const double tiny = 1e-12 * ds;

    double s = 0.0;
    Configuration x = cfg0;
    while (s < s_max - tiny) {
        const double dp = std::min(ds, s_max - s);

        std::vector<Configuration> pts;
        bool available = true;
        std::size_t substeps = 1;
        for (int attempt = 0; attempt < 24; ++attempt) {
            pts.clear();
            available = true;
            double max_len = 0.0;
            Configuration cur = x;
            for (std::size_t i = 0; i < substeps; ++i) {
                const auto next = step(cur, dp / static_cast<double>(substeps));
                if (!next) {
                    available = false;
                    break;
                }
                for (std::size_t a = 0; a < cur.size(); ++a)
                    max_len = std::max(max_len, euclidean_norm((*next)[a] - cur[a]));
                pts.push_back(*next);
                cur = *next;
            }
            if (!available || max_len <= cap) break;
            substeps *= 2;
        }

        const double dp_sub = dp / static_cast<double>(substeps);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Configuration& q = pts[i];
            const double p_prev = trajs[0].samples.back().param;
            // First particle to cross a time face sets the clip fraction.
            double lambda = 2.0;
            for (int a = 0; a < n; ++a) {
                const double tq = q[static_cast<std::size_t>(a)].t;
                if (box.contains_time(tq)) continue;
                const double tp = trajs[static_cast<std::size_t>(a)].samples.back().point.t;
                const double bound = tq > box.time_max() ? box.time_max() : box.time_min();
                const double denom = tq - tp;
                lambda = std::min(lambda, denom != 0.0 ? (bound - tp) / denom : 0.0);
            }
            if (lambda <= 1.0) {
                if (lambda > 0.0) {
                    Configuration clipped = q;
                    for (int a = 0; a < n; ++a) {
                        const FourVector& prev =
                            trajs[static_cast<std::size_t>(a)].samples.back().point;
                        clipped[static_cast<std::size_t>(a)] =
                            prev + lambda * (q[static_cast<std::size_t>(a)] - prev);
                    }
                    record(p_prev + lambda * dp_sub, clipped);
                }
                return finish(StopReason::TimeBoxExit);
            }
            record(s + static_cast<double>(i + 1) * dp_sub, q);
        }
        if (!available) return finish(StopReason::NodeTruncation);
        s += dp;
        x = pts.back();
    }
    return finish(StopReason::ParamLimit);
}

namespace {

double euclid_dot(const FourVector& a, const FourVector& b) {
    return a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

double point_segment_distance(const FourVector& p, const FourVector& a, const FourVector& b) {
    const FourVector ab = b - a;
    const double denom = euclid_dot(ab, ab);
    if (denom == 0.0) return euclidean_norm(p - a);
    double tau = euclid_dot(p - a, ab) / denom;
    tau = std::clamp(tau, 0.0, 1.0);
    return euclidean_norm(p - (a + tau * ab));
}

// Pieces of the polyline with time coordinate inside [lo, hi]; segments that
// leave and re-enter the window are split rather than chorded across the gap.
std::vector<std::vector<FourVector>> clip_to_time(const std::vector<TrajectorySample>& samples,
                                                  double lo, double hi) {
    std::vector<std::vector<FourVector>> pieces;
    std::vector<FourVector> current;
    const auto inside = [&](double t) { return t >= lo && t <= hi; };
    const auto push = [&](const FourVector& p) {
        if (current.empty() || euclidean_norm(current.back() - p) > 0.0) current.push_back(p);
    };
    const auto flush = [&]() {
        if (!current.empty()) pieces.push_back(std::move(current));
        current.clear();
    };

    if (samples.empty()) return pieces;
    if (inside(samples[0].point.t)) push(samples[0].point);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const FourVector& a = samples[i - 1].point;
        const FourVector& b = samples[i].point;
        std::vector<double> cuts{1.0};
        for (double bound : {lo, hi}) {
            const double da = a.t - bound;
            const double db = b.t - bound;
            if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0))
                cuts.push_back(da / (da - db));
        }
        std::sort(cuts.begin(), cuts.end());
        double prev = 0.0;
        for (double cut : cuts) {
            const double mid_t = a.t + 0.5 * (prev + cut) * (b.t - a.t);
            const FourVector at_cut = a + cut * (b - a);
            if (inside(mid_t)) {
                if (current.empty()) push(a + prev * (b - a));
                push(at_cut);
            } else {
                flush();
            }
            prev = cut;
        }
    }
    flush();
    return pieces;
}

double directed_distance(const std::vector<std::vector<FourVector>>& from,
                         const std::vector<std::vector<FourVector>>& to, Exec exec) {
    std::vector<FourVector> points;
    for (const auto& piece : from) points.insert(points.end(), piece.begin(), piece.end());
    return chunked_max(points.size(), exec, [&](std::size_t i) {
        const FourVector& p = points[i];
        double best = std::numeric_limits<double>::infinity();
        for (const auto& piece : to) {
            if (piece.size() == 1) best = std::min(best, euclidean_norm(p - piece[0]));
            for (std::size_t k = 1; k < piece.size(); ++k)
                best = std::min(best, point_segment_distance(p, piece[k - 1], piece[k]));
        }
        return best;
    });
}

}  // namespace

double reparameterization_distance(const Trajectory& a, const Trajectory& b, Exec exec) {
    if (a.samples.empty() || b.samples.empty())
        throw std::invalid_argument("empty trajectory");
    const auto t_range = [](const Trajectory& tr) {
        double lo = tr.samples[0].point.t, hi = lo;
        for (const auto& s : tr.samples) {
            lo = std::min(lo, s.point.t);
            hi = std::max(hi, s.point.t);
        }
        return std::pair{lo, hi};
    };
    const auto [alo, ahi] = t_range(a);
    const auto [blo, bhi] = t_range(b);
    const double lo = std::max(alo, blo);
    const double hi = std::min(ahi, bhi);
    if (lo > hi) throw std::invalid_argument("trajectories do not overlap in time");

    const auto pa = clip_to_time(a.samples, lo, hi);
    const auto pb = clip_to_time(b.samples, lo, hi);
    if (pa.empty() || pb.empty())
        throw std::invalid_argument("trajectories do not overlap in time");
    return std::max(directed_distance(pa, pb, exec), directed_distance(pb, pa, exec));
}

std::vector<CausalClass> causal_character(const Trajectory& traj, double null_band) {
    if (traj.samples.size() < 2)
        throw std::invalid_argument("causal character needs at least two samples");
    std::vector<CausalClass> classes;
    classes.reserve(traj.samples.size() - 1);
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        classes.push_back(
            classify_interval(traj.samples[i].point - traj.samples[i - 1].point, null_band));
    return classes;
}

}  // namespace kgflow
