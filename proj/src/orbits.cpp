#include "sympcal/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sympcal/errors.hpp"

namespace sympcal {

namespace {

std::vector<Vec> build_seeds(int dim, const SeedGrid& grid) {
    std::vector<Vec> seeds;
    const int per = std::max(1, grid.per_axis);
    long long total = 1;
    for (int d = 0; d < dim; ++d) {
        total *= per;
        if (total > 2'000'000) throw DomainError("find_periodic_points: seed grid too large");
    }
    for (long long idx = 0; idx < total; ++idx) {
        Vec z(dim);
        long long rem = idx;
        for (int d = 0; d < dim; ++d) {
            const int c = static_cast<int>(rem % per);
            rem /= per;
            z(d) = per == 1 ? 0.0 : -grid.extent + 2.0 * grid.extent * c / (per - 1);
        }
        seeds.push_back(z);
    }
    return seeds;
}

struct NewtonOutcome {
    bool converged = false;
    Vec z;
};

NewtonOutcome newton_orbit(const HamiltonianBase& h, int k, Vec z, const NewtonOptions& nopt,
                           const FlowOptions& fopt) {
    const int dim = h.dim();
    NewtonOutcome out;
    double fnorm = 1e300;
    for (int it = 0; it < nopt.max_iter; ++it) {
        FlowJac fj;
        try {
            fj = flow_with_jacobian(h, z, 0.0, static_cast<double>(k), fopt);
        } catch (const DivergenceError&) {
            return out;
        }
        const Vec f = fj.z - z;
        fnorm = f.norm();
        if (fnorm < nopt.tol * (1.0 + z.norm())) {
            out.converged = true;
            out.z = z;
            return out;
        }
        const Mat jac = fj.jac - Mat::Identity(dim, dim);
        Eigen::PartialPivLU<Mat> lu(jac);
        if (std::abs(lu.determinant()) < 1e-300) return out;
        const Vec step = lu.solve(-f);
        // damping: accept the largest halving that decreases the residual
        double lambda = 1.0;
        bool accepted = false;
        for (int half = 0; half < 8; ++half) {
            const Vec cand = z + lambda * step;
            double cnorm;
            try {
                cnorm = (flow_point(h, cand, 0.0, static_cast<double>(k), fopt) - cand).norm();
            } catch (const DivergenceError&) {
                lambda *= 0.5;
                continue;
            }
            if (cnorm < fnorm) {
                z = cand;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) return out;
    }
    return out;
}

} // namespace

OrbitSearch find_periodic_points(const HamPtr& h, int k, const SeedGrid& grid,
                                 const NewtonOptions& nopt, const FlowOptions& fopt, int threads,
                                 bool with_index) {
    if (k < 1) throw DomainError("find_periodic_points: k must be >= 1");
    const int dim = h->dim();
    const std::vector<Vec> seeds = build_seeds(dim, grid);

    OrbitSearch result;
    result.seeds = static_cast<int>(seeds.size());

    std::vector<NewtonOutcome> outcomes(seeds.size());
    const int nthreads = std::max(1, threads);
    auto worker = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) outcomes[i] = newton_orbit(*h, k, seeds[i], nopt, fopt);
    };
    if (nthreads == 1) {
        worker(0, seeds.size());
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (seeds.size() + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const size_t lo = t * chunk;
            const size_t hi = std::min(seeds.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // canonical order before deduplication keeps the result thread-count
    // independent
    std::vector<Vec> roots;
    for (const auto& o : outcomes) {
        if (o.converged) {
            ++result.converged;
            roots.push_back(o.z);
        } else {
            ++result.newton_failures;
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Vec& a, const Vec& b) {
        const double na = a.norm(), nb = b.norm();
        if (std::abs(na - nb) > 1e-12) return na < nb;
        for (int i = 0; i < a.size(); ++i)
            if (std::abs(a(i) - b(i)) > 1e-12) return a(i) < b(i);
        return false;
    });

    for (const auto& z : roots) {
        // orbit-level dedupe: same point, or lying on an accepted trajectory
        bool dup = false;
        for (const auto& orb : result.orbits) {
            if ((orb.z0 - z).norm() < nopt.pair_tol * (1.0 + z.norm())) {
                dup = true;
                break;
            }
            for (int jj = 1; jj < k && !dup; ++jj) {
                const Vec img = flow_point(*h, orb.z0, 0.0, static_cast<double>(jj), fopt);
                if ((img - z).norm() < nopt.pair_tol * (1.0 + z.norm())) dup = true;
            }
        }
        if (dup) continue;

        PeriodicOrbit orb;
        orb.z0 = z;
        orb.k = k;
        const Trajectory traj = flow_trajectory(*h, z, 0.0, static_cast<double>(k), true, fopt);
        orb.closure = (traj.z.back() - z).norm();
        if (orb.closure > nopt.certify * (1.0 + z.norm())) continue;
        orb.monodromy = traj.jac.back();
        orb.action = action_of_trajectory(*h, traj);
        // simple-vs-iterated: intermediate integer-time returns
        orb.base_period = k;
        for (int jj = 1; jj < k; ++jj) {
            if (k % jj != 0) continue;
            const size_t idx = static_cast<size_t>(jj) * (traj.times.size() - 1) / k;
            if ((traj.z[idx] - z).norm() < nopt.pair_tol * (1.0 + z.norm())) {
                orb.base_period = jj;
                break;
            }
        }
        orb.simple = orb.base_period == k;
        if (with_index) {
            try {
                orb.index = index_report(linearized_path(traj));
                orb.index_available = true;
            } catch (const Error&) {
                orb.index_available = false;
            }
        }
        result.orbits.push_back(std::move(orb));
    }
    return result;
}

} // namespace sympcal
