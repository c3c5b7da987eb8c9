#include "vort/bp_limiter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vort/compact_ops.hpp"

namespace vort {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

double pos(double x) { return x > 0.0 ? x : 0.0; }

int out_state(double x, BpBounds b) {
    if (x < b.m) return -1;
    if (x > b.M) return +1;
    return 0;
}

}  // namespace

SetDecomposition classify_sets(std::span<const double> u, BpBounds b) {
    const int n = static_cast<int>(u.size());
    SetDecomposition d;
    if (b.m >= b.M) throw std::invalid_argument("classify_sets: requires m < M");
    if (n < 3) throw std::invalid_argument("classify_sets: line too short");

    int first_in = -1;
    for (int i = 0; i < n; ++i) {
        if (out_state(u[i], b) == 0) {
            first_in = i;
            break;
        }
    }
    if (first_in < 0) {
        d.degenerate = true;
        d.class2.push_back({0, n});
        return d;
    }

    // Walk one full period from an in-range anchor; collect maximal
    // out-of-range runs and promote mixed-sign runs to class I.
    int i = first_in;
    int steps = 0;
    while (steps < n) {
        const int s = out_state(u[wrap(i, n)], b);
        if (s == 0) {
            ++i;
            ++steps;
            continue;
        }
        int run_begin = wrap(i, n);
        int run_len = 0;
        bool has_lo = false, has_hi = false;
        while (steps < n && out_state(u[wrap(i, n)], b) != 0) {
            (out_state(u[wrap(i, n)], b) < 0 ? has_lo : has_hi) = true;
            ++i;
            ++steps;
            ++run_len;
        }
        if (has_lo && has_hi) {
            if (run_len + 2 > n) {
                // Flanking in-range points would have to coincide; treat the
                // line as one class-II set.
                d.class1.clear();
                d.class2.clear();
                d.degenerate = true;
                d.class2.push_back({0, n});
                return d;
            }
            d.class1.push_back({wrap(run_begin - 1, n), run_len + 2});
        }
    }

    if (d.class1.empty()) {
        d.class2.push_back({0, n});
        return d;
    }
    // Complement segments run from the right endpoint of one class-I set to
    // the left endpoint of the next, endpoints shared.
    const int k = static_cast<int>(d.class1.size());
    for (int j = 0; j < k; ++j) {
        const IndexRun& cur = d.class1[j];
        const IndexRun& nxt = d.class1[(j + 1) % k];
        const int r = wrap(cur.begin + cur.len - 1, n);
        const int l = nxt.begin;
        d.class2.push_back({r, wrap(l - r, n) + 1});
    }
    return d;
}

void bp_limit_line(std::span<double> u, BpBounds b, double a, BpLineStats* stats) {
    const int n = static_cast<int>(u.size());
    if (n < 3) throw std::invalid_argument("bp_limit_line: line too short");
    if (a < 2.0) throw std::invalid_argument("bp_limit_line: requires a >= 2");
    if (b.m >= b.M) throw std::invalid_argument("bp_limit_line: requires m < M");

    BpLineStats local;
    BpLineStats& st = stats ? *stats : local;

    bool any_out = false;
    for (int i = 0; i < n; ++i) {
        if (out_state(u[i], b) != 0) {
            any_out = true;
            break;
        }
    }
    if (!any_out) return;

    const double avg_tol = 1e-11 * std::max({1.0, std::abs(b.m), std::abs(b.M)});
    for (int i = 0; i < n; ++i) {
        const double bar = (u[wrap(i - 1, n)] + a * u[i] + u[wrap(i + 1, n)]) / (a + 2.0);
        if (bar < b.m - avg_tol || bar > b.M + avg_tol) ++st.precondition_violations;
    }

    const SetDecomposition dec = classify_sets(u, b);
    st.class1_sets += static_cast<int>(dec.class1.size());

    bool has_lo = false, has_hi = false;
    for (int i = 0; i < n; ++i) {
        const int s = out_state(u[i], b);
        has_lo = has_lo || s < 0;
        has_hi = has_hi || s > 0;
    }

    // Excursions of both signs without two distinct in-range flanks cannot
    // form a flanked saw-tooth set; the whole circle plays that role. Summing
    // the precondition over the line bounds its mean, which is exactly the
    // room the redistribution needs.
    if (dec.degenerate && has_lo && has_hi) {
        double target = 0.0;
        for (int i = 0; i < n; ++i) target += u[i];
        std::vector<double> v(u.begin(), u.end());
        int n_out = 0;
        for (int i = 0; i < n; ++i) {
            const int s = out_state(u[i], b);
            if (s > 0) v[i] = b.M;
            if (s < 0) v[i] = b.m;
            if (s != 0) ++n_out;
        }
        st.limited_points += n_out;
        ++st.class1_sets;
        double clamped = 0.0;
        for (int i = 0; i < n; ++i) clamped += v[i];
        const double room_dn = clamped - n * b.m;
        const double room_up = n * b.M - clamped;
        const double excess = clamped - target;
        if (excess > 0.0) {
            if (excess > room_dn * (1.0 + 1e-14)) ++st.precondition_violations;
            if (room_dn > 0.0)
                for (int i = 0; i < n; ++i) v[i] -= (v[i] - b.m) / room_dn * excess;
        } else if (excess < 0.0) {
            if (-excess > room_up * (1.0 + 1e-14)) ++st.precondition_violations;
            if (room_up > 0.0)
                for (int i = 0; i < n; ++i) v[i] += (b.M - v[i]) / room_up * (-excess);
        }
        double achieved = 0.0;
        for (int i = 0; i < n; ++i) achieved += v[i];
        st.set_target_sums.push_back(target);
        st.set_final_sums.push_back(achieved);
        for (int i = 0; i < n; ++i) u[i] = std::clamp(v[i], b.m, b.M);
        return;
    }

    std::vector<double> v(u.begin(), u.end());

    // Isolated excursions donate surplus/deficit to neighbors proportionally
    // to the neighbors' headroom; weights read the original values, so within
    // a class-II set transfers only reach in-range points and the set sum is
    // conserved exactly.
    for (const IndexRun& t : dec.class2) {
        for (int s = 0; s < t.len; ++s) {
            const int i = wrap(t.begin + s, n);
            const int il = wrap(i - 1, n), ir = wrap(i + 1, n);
            if (u[i] < b.m) {
                const double wl = pos(u[il] - b.m), wr = pos(u[ir] - b.m);
                const double den = wl + wr, need = b.m - u[i];
                if (den > 0.0) {
                    v[il] -= wl / den * need;
                    v[ir] -= wr / den * need;
                } else {
                    ++st.precondition_violations;
                }
                v[i] = b.m;
                ++st.limited_points;
            } else if (u[i] > b.M) {
                const double wl = pos(b.M - u[il]), wr = pos(b.M - u[ir]);
                const double den = wl + wr, exc = u[i] - b.M;
                if (den > 0.0) {
                    v[il] += wl / den * exc;
                    v[ir] += wr / den * exc;
                } else {
                    ++st.precondition_violations;
                }
                v[i] = b.M;
                ++st.limited_points;
            }
        }
    }

    // Saw-tooth sets: clamp the interior and spread the clamping error over
    // the whole set, proportionally to each point's headroom.
    for (const IndexRun& sset : dec.class1) {
        const int l = sset.begin;
        const int r = wrap(sset.begin + sset.len - 1, n);
        int n_lo = 0, n_hi = 0;
        double target = 0.0;
        for (int s = 0; s < sset.len; ++s) target += v[wrap(l + s, n)];
        for (int s = 1; s < sset.len - 1; ++s) {
            const int i = wrap(l + s, n);
            if (u[i] > b.M) {
                v[i] = b.M;
                ++n_hi;
            } else {
                v[i] = b.m;
                ++n_lo;
            }
            ++st.limited_points;
        }
        const double clamped = n_hi * b.M + n_lo * b.m + v[l] + v[r];
        const double room_dn = v[l] + v[r] + n_hi * b.M - (n_hi + 2) * b.m;
        const double room_up = (n_lo + 2) * b.M - v[l] - v[r] - n_lo * b.m;
        const double excess = clamped - target;
        if (excess > 0.0) {
            if (excess > room_dn * (1.0 + 1e-14)) ++st.precondition_violations;
            if (room_dn > 0.0) {
                for (int s = 0; s < sset.len; ++s) {
                    const int i = wrap(l + s, n);
                    v[i] -= (v[i] - b.m) / room_dn * excess;
                }
            }
        } else if (excess < 0.0) {
            if (-excess > room_up * (1.0 + 1e-14)) ++st.precondition_violations;
            if (room_up > 0.0) {
                for (int s = 0; s < sset.len; ++s) {
                    const int i = wrap(l + s, n);
                    v[i] += (b.M - v[i]) / room_up * (-excess);
                }
            }
        }
        double achieved = 0.0;
        for (int s = 0; s < sset.len; ++s) achieved += v[wrap(l + s, n)];
        st.set_target_sums.push_back(target);
        st.set_final_sums.push_back(achieved);
    }

    // Exact bound enforcement; per point this moves the sum by at most one
    // ulp of the redistribution arithmetic.
    for (int i = 0; i < n; ++i) u[i] = std::clamp(v[i], b.m, b.M);
}

namespace {

void limit_rows(Field2D& g, BpBounds b, double a, BpFieldStats* fs) {
    const int nx = g.grid().nx, ny = g.grid().ny;
    std::span<double> all = g.values();
    for (int j = 0; j < ny; ++j) {
        BpLineStats ls;
        bp_limit_line(all.subspan(static_cast<size_t>(j) * nx, nx), b, a, &ls);
        if (fs) {
            fs->precondition_violations += ls.precondition_violations;
            fs->limited_points += ls.limited_points;
        }
    }
}

void limit_cols(Field2D& g, BpBounds b, double a, BpFieldStats* fs) {
    const int nx = g.grid().nx, ny = g.grid().ny;
    std::vector<double> line(ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) line[j] = g(i, j);
        BpLineStats ls;
        bp_limit_line(line, b, a, &ls);
        for (int j = 0; j < ny; ++j) g(i, j) = line[j];
        if (fs) {
            fs->precondition_violations += ls.precondition_violations;
            fs->limited_points += ls.limited_points;
        }
    }
}

// One x-then-y sweep: limit x-lines of Wy g (their Wx averages are the bounded
// quantity), recover through Wy^{-1}, then limit y-lines of the recovery.
Field2D limit_pass(const Field2D& g, BpBounds b, OpKind kind, double a, BpFieldStats* fs) {
    Field2D t = apply_op(kind, g, Axis::Y);
    limit_rows(t, b, a, fs);
    Field2D rec = solve_op(kind, t, Axis::Y);
    limit_cols(rec, b, a, fs);
    return rec;
}

}  // namespace

Field2D bp_limit_2d_euler(const Field2D& omega, BpBounds b, BpFieldStats* stats) {
    return limit_pass(omega, b, OpKind::W1, 4.0, stats);
}

Field2D bp_limit_2d_ns(const Field2D& omega, BpBounds b, BpFieldStats* stats) {
    Field2D tilde = apply_op(OpKind::W2, apply_op(OpKind::W2, omega, Axis::Y), Axis::X);
    Field2D stage1 = limit_pass(tilde, b, OpKind::W1, 4.0, stats);
    Field2D recov = solve_op(OpKind::W2, solve_op(OpKind::W2, stage1, Axis::X), Axis::Y);
    return limit_pass(recov, b, OpKind::W2, 10.0, stats);
}

}  // namespace vort
