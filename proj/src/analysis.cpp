#include "popdyn/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "popdyn/angles.hpp"
#include "popdyn/errors.hpp"
#include "popdyn/pop_maps.hpp"

namespace popdyn {

namespace {

double max_circular_gap(std::vector<double> phis) {
    std::sort(phis.begin(), phis.end());
    double worst = kTwoPi - (phis.back() - phis.front());
    for (std::size_t i = 1; i < phis.size(); ++i)
        worst = std::max(worst, phis[i] - phis[i - 1]);
    return worst;
}

}  // namespace

DensityReport density_report(const Linkage& lk, double phi0, long n) {
    const BarLengths b = lk.bars();
    require_in_lambda(b, lk.L);

    AngleConfig t = from_polar(b, lk.L, phi0);
    std::vector<double> phis;
    phis.reserve(static_cast<std::size_t>(n) + 1);
    phis.push_back(std::atan2(t.theta2, t.theta1));

    DensityReport report;
    report.n_iterates = n;
    long checkpoint = 10;
    for (long k = 1; k <= n; ++k) {
        t = pop23(b, pop12(b, t));
        phis.push_back(std::atan2(t.theta2, t.theta1));
        if (k == checkpoint || k == n) {
            report.gap_history.emplace_back(k, max_circular_gap(phis));
            if (k == checkpoint) checkpoint *= 10;
        }
    }
    if (report.gap_history.empty())
        report.gap_history.emplace_back(n, max_circular_gap(phis));
    report.max_gap_phi = report.gap_history.back().second;
    return report;
}

ScanResult scan_rotation(const BarLengths& bars, std::span<const double> L_grid,
                         const ScanOptions& opt, ExecutionPolicy policy) {
    for (double L : L_grid) require_in_lambda(bars, L);

    ScanResult result;
    result.rows.resize(L_grid.size());
    const bool parallel = policy == ExecutionPolicy::Parallel;
    const int threads = effective_threads();
    const long count = static_cast<long>(L_grid.size());
    std::exception_ptr first_error = nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (parallel && threads > 1)
#endif
    for (long i = 0; i < count; ++i) {
        try {
            double L = L_grid[static_cast<std::size_t>(i)];
            ScanRow row;
            row.L = L;
            row.estimate = (opt.method == RhoMethod::MeasureIntegral)
                               ? rotation_number_integral(bars, L, opt.phi0, opt.quad_tol)
                               : rotation_number_orbit(bars, L, opt.orbit_n, opt.phi0);
            if (opt.q_max > 0)
                row.periodic = detect_periodicity(bars, L, opt.q_max, opt.period_tol).rational;
            result.rows[static_cast<std::size_t>(i)] = row;
        } catch (...) {
            // exceptions must not escape the worker loop
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    // A representative linkage of the family: T1>0, T2>0, T3<0 hold for
    // every L in Lambda, so the strictness hinges on the lengths alone.
    Linkage family{bars.l1, bars.l2, bars.l3, L_grid.empty() ? 0.0 : L_grid[0]};
    if (L_grid.empty() || !strict_theorem_conditions(family)) {
        result.verdict = MonotonicityVerdict::Skipped;
        return result;
    }

    result.verdict = MonotonicityVerdict::Monotone;
    result.min_adjacent_step = result.rows.size() > 1
                                   ? std::numeric_limits<double>::infinity()
                                   : 0.0;
    int direction = 0;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        double diff = result.rows[i].estimate.rho - result.rows[i - 1].estimate.rho;
        int s = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        result.min_adjacent_step = std::min(result.min_adjacent_step, std::abs(diff));
        if (s == 0 || (direction != 0 && s != direction)) {
            result.verdict = MonotonicityVerdict::Violated;
            result.offending = std::make_pair(i - 1, i);
            return result;
        }
        direction = s;
    }
    return result;
}

std::optional<Relabeling> relabel_for_theorem(const Linkage& lk) {
    const std::array<double, 4> s{lk.l1, lk.l2, lk.l3, lk.L};
    bool outer_before =
        std::max(lk.l2, lk.L) <= std::min(lk.l1, lk.l3) ||
        std::min(lk.l2, lk.L) >= std::max(lk.l1, lk.l3);

    for (int k = 0; k < 4; ++k) {
        Linkage rot{s[k % 4], s[(k + 1) % 4], s[(k + 2) % 4], s[(k + 3) % 4]};
        MotionClass mc = classify(rot);
        if (mc.kind != MotionKind::ZeroPiDoubleRocker) continue;
        Relabeling rel;
        rel.rotation = k;
        rel.relabeled = rot;
        rel.relabeled_class = mc;
        rel.outer_condition_before = outer_before;
        rel.theorem_condition_after = theorem_conditions(rot);
        return rel;
    }
    return std::nullopt;
}

void fill_gamma_field(const BarLengths& bars, double L, int n, std::span<double> out,
                      ExecutionPolicy policy) {
    const double target = L * L;
    const double step = kTwoPi / n;
    const bool parallel = policy == ExecutionPolicy::Parallel;
    const int threads = effective_threads();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (parallel && threads > 1)
#endif
    for (int j = 0; j < n; ++j) {
        double t2 = -kPi + step * j;
        for (int i = 0; i < n; ++i) {
            double t1 = -kPi + step * i;
            double v = lbar_squared(bars, {t1, t2}) - target;
            // Nudge exact zeros so every corner has a definite sign.
            if (v == 0.0) v = 1e-300;
            out[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
}

namespace {

// Marching squares on the periodic grid. Crossing nodes live on grid
// edges; every crossing edge is shared by exactly two cells, so nodes
// have degree two and the contour decomposes into closed loops.
struct ContourExtraction {
    GammaGeometry geometry;
};

struct EdgeKey {
    long id;
    bool operator==(const EdgeKey& o) const { return id == o.id; }
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const { return std::hash<long>()(k.id); }
};

GammaGeometry extract_contour(const BarLengths& bars, double L, int n,
                              ExecutionPolicy policy) {
    std::vector<double> field(static_cast<std::size_t>(n) * n);
    fill_gamma_field(bars, L, n, field, policy);

    const double step = kTwoPi / n;
    auto value = [&](int i, int j) {
        return field[static_cast<std::size_t>((j % n + n) % n) * n + ((i % n + n) % n)];
    };
    auto coord = [&](int idx) { return -kPi + step * idx; };

    // Edge ids: horizontal edge (i,j)->(i+1,j) gets 2*(j*n+i), vertical
    // edge (i,j)->(i,j+1) gets 2*(j*n+i)+1, with i,j taken mod n.
    auto hedge = [&](int i, int j) { return 2L * (static_cast<long>((j % n + n) % n) * n + ((i % n + n) % n)); };
    auto vedge = [&](int i, int j) { return hedge(i, j) + 1; };

    std::unordered_map<long, int> node_of_edge;
    std::vector<AngleConfig> node_pos;
    std::vector<std::array<int, 2>> node_adj;  // up to two neighbor nodes

    auto node_for = [&](long edge, int i, int j, bool horizontal) {
        auto it = node_of_edge.find(edge);
        if (it != node_of_edge.end()) return it->second;
        double va, vb;
        AngleConfig pos;
        if (horizontal) {
            va = value(i, j);
            vb = value(i + 1, j);
            double t = va / (va - vb);
            pos = {coord(i) + t * step, coord(j)};
        } else {
            va = value(i, j);
            vb = value(i, j + 1);
            double t = va / (va - vb);
            pos = {coord(i), coord(j) + t * step};
        }
        int id = static_cast<int>(node_pos.size());
        node_pos.push_back(pos);
        node_adj.push_back({-1, -1});
        node_of_edge.emplace(edge, id);
        return id;
    };

    auto link = [&](int a, int b) {
        auto attach = [&](int x, int y) {
            if (node_adj[x][0] == -1) node_adj[x][0] = y;
            else node_adj[x][1] = y;
        };
        attach(a, b);
        attach(b, a);
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double v00 = value(i, j);
            double v10 = value(i + 1, j);
            double v01 = value(i, j + 1);
            double v11 = value(i + 1, j + 1);
            int idx = (v00 < 0 ? 1 : 0) | (v10 < 0 ? 2 : 0) | (v11 < 0 ? 4 : 0) | (v01 < 0 ? 8 : 0);
            if (idx == 0 || idx == 15) continue;

            int bottom = -1, right = -1, top = -1, left = -1;
            if ((v00 < 0) != (v10 < 0)) bottom = node_for(hedge(i, j), i, j, true);
            if ((v10 < 0) != (v11 < 0)) right = node_for(vedge(i + 1, j), i + 1, j, false);
            if ((v01 < 0) != (v11 < 0)) top = node_for(hedge(i, j + 1), i, j + 1, true);
            if ((v00 < 0) != (v01 < 0)) left = node_for(vedge(i, j), i, j, false);

            switch (idx) {
                case 1: case 14: link(left, bottom); break;
                case 2: case 13: link(bottom, right); break;
                case 3: case 12: link(left, right); break;
                case 4: case 11: link(right, top); break;
                case 6: case 9:  link(bottom, top); break;
                case 7: case 8:  link(left, top); break;
                case 5: case 10: {
                    // Saddle: split by the sign of the cell center.
                    double center = 0.25 * (v00 + v10 + v01 + v11);
                    bool center_neg = center < 0;
                    bool corner_neg = (idx == 5);  // v00 and v11 negative
                    if (center_neg == corner_neg) {
                        link(left, bottom);
                        link(right, top);
                    } else {
                        link(left, top);
                        link(bottom, right);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    GammaGeometry geo;
    geo.resolution = n;
    std::vector<char> visited(node_pos.size(), 0);
    for (std::size_t start = 0; start < node_pos.size(); ++start) {
        if (visited[start]) continue;
        std::vector<AngleConfig> loop;
        int prev = -1;
        int cur = static_cast<int>(start);
        while (cur != -1 && !visited[cur]) {
            visited[cur] = 1;
            loop.push_back(node_pos[cur]);
            int next = (node_adj[cur][0] != prev) ? node_adj[cur][0] : node_adj[cur][1];
            prev = cur;
            cur = next;
        }
        if (loop.size() >= 3) {
            geo.polyline_component.push_back(geo.components);
            geo.polylines.push_back(std::move(loop));
            ++geo.components;
        }
    }
    return geo;
}

}  // namespace

GammaGeometry gamma_geometry(const Linkage& lk, int resolution, ExecutionPolicy policy,
                             int max_resolution) {
    require_feasible(lk);
    if (resolution > 0) return extract_contour(lk.bars(), lk.L, resolution, policy);

    int n = 1024;
    int stable = 0;
    int last_count = -1;
    GammaGeometry geo;
    while (n <= max_resolution) {
        geo = extract_contour(lk.bars(), lk.L, n, policy);
        // A feasible linkage has a nonempty level set; an empty contour
        // means the loop slipped between grid corners.
        if (geo.components > 0) {
            if (geo.components == last_count) ++stable;
            else stable = 0;
            if (stable >= 2) return geo;
            last_count = geo.components;
        } else {
            stable = 0;
            last_count = -1;
        }
        n *= 2;
    }
    std::ostringstream os;
    os << "component count did not stabilize up to resolution " << max_resolution;
    throw ResolutionTooCoarse(os.str());
}

namespace {

double torus_dist2(const AngleConfig& a, const AngleConfig& b) {
    double d1 = wrap_angle(a.theta1 - b.theta1);
    double d2 = wrap_angle(a.theta2 - b.theta2);
    return d1 * d1 + d2 * d2;
}

// Bucketed nearest-vertex lookup on the torus. Queries carry a radius of
// interest: per-component minima are exact up to that radius (and up to
// the certified global nearest), infinity beyond it.
struct ComponentIndex {
    int buckets;
    double cell;
    int n_components;
    std::vector<std::vector<std::pair<AngleConfig, int>>> grid;

    explicit ComponentIndex(const GammaGeometry& geo, int buckets_ = 128)
        : buckets(buckets_),
          cell(kTwoPi / buckets_),
          n_components(geo.components),
          grid(static_cast<std::size_t>(buckets_) * buckets_) {
        for (std::size_t p = 0; p < geo.polylines.size(); ++p)
            for (const AngleConfig& v : geo.polylines[p])
                grid[bucket_of(v)].emplace_back(v, geo.polyline_component[p]);
    }

    std::size_t bucket_of(const AngleConfig& v) const {
        int i = static_cast<int>(std::floor((v.theta1 + kPi) / cell));
        int j = static_cast<int>(std::floor((v.theta2 + kPi) / cell));
        i = ((i % buckets) + buckets) % buckets;
        j = ((j % buckets) + buckets) % buckets;
        return static_cast<std::size_t>(j) * buckets + i;
    }

    void query(const AngleConfig& q, double radius, int& comp, double& dist,
               double& other) const {
        std::vector<double> best(static_cast<std::size_t>(std::max(n_components, 1)),
                                 std::numeric_limits<double>::infinity());
        int qi = static_cast<int>(std::floor((q.theta1 + kPi) / cell));
        int qj = static_cast<int>(std::floor((q.theta2 + kPi) / cell));
        double global = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring <= buckets / 2 + 1; ++ring) {
            // Cells completing ring r cover every vertex within (r-1)*cell;
            // stop once both the global nearest and the radius are covered.
            double covered = (ring - 1) * cell;
            if (ring > 0 && covered * covered > global && covered > radius) break;
            for (int dj = -ring; dj <= ring; ++dj) {
                for (int di = -ring; di <= ring; ++di) {
                    if (std::max(std::abs(di), std::abs(dj)) != ring) continue;
                    int i = ((qi + di) % buckets + buckets) % buckets;
                    int j = ((qj + dj) % buckets + buckets) % buckets;
                    for (const auto& [v, c] : grid[static_cast<std::size_t>(j) * buckets + i]) {
                        double d2 = torus_dist2(q, v);
                        best[static_cast<std::size_t>(c)] = std::min(best[c], d2);
                        global = std::min(global, d2);
                    }
                }
            }
        }
        comp = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        double other_d2 = std::numeric_limits<double>::infinity();
        for (int c = 0; c < n_components; ++c) {
            if (best[c] < best_d2) {
                other_d2 = best_d2;
                best_d2 = best[c];
                comp = c;
            } else {
                other_d2 = std::min(other_d2, best[c]);
            }
        }
        dist = std::sqrt(best_d2);
        other = std::sqrt(other_d2);
    }
};

}  // namespace

int nearest_component(const GammaGeometry& geo, const AngleConfig& point, double* distance,
                      double* other_distance) {
    ComponentIndex index(geo);
    int comp;
    double d, other;
    index.query(point, kTwoPi, comp, d, other);  // full scan
    if (distance) *distance = d;
    if (other_distance) *other_distance = other;
    return comp;
}

bool confinement_check(const Linkage& lk, const AngleConfig& start, long n_pops) {
    OrbitOptions opt;
    OrbitTrace trace = orbit(lk, start, n_pops, PopLabel::P12, opt);

    for (int resolution = 1024; resolution <= 8192; resolution *= 2) {
        GammaGeometry geo = gamma_geometry(lk, resolution);
        if (geo.components <= 0) continue;
        ComponentIndex index(geo);
        double margin = 3.0 * (kTwoPi / resolution) * std::sqrt(2.0);

        auto classify_point = [&](const AngleConfig& p, int& comp) {
            double d, other;
            index.query(p, margin, comp, d, other);
            return d <= margin && other > margin;  // unambiguous
        };

        int home;
        if (!classify_point(start, home)) continue;
        bool confined = true;
        bool ambiguous = false;
        for (const OrbitStep& step : trace.steps) {
            int comp;
            if (!classify_point(step.angles, comp)) {
                ambiguous = true;
                break;
            }
            if (comp != home) {
                confined = false;
                break;
            }
        }
        if (!ambiguous) return confined;
    }
    throw ResolutionTooCoarse("component classification stayed ambiguous up to resolution 8192");
}

}  // namespace popdyn
