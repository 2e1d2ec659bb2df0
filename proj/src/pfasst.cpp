#include "pint/pfasst.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "pint/errors.hpp"
#include "pint/kernels.hpp"
#include "pint/precond.hpp"

namespace pint {

PfasstHierarchy make_pfasst_hierarchy(double length, double final_time, double gamma, int nx,
                                      int M, int nt, int levels, SweepMode mode,
                                      QDeltaKind qdelta)
{
    if (levels < 1) throw ConfigError("pfasst: need at least one level");
    if (nt < 1) throw ConfigError("pfasst: Nt must be >= 1");
    PfasstHierarchy h;
    h.nt = nt;
    h.dt = final_time / nt;
    int nxl = nx;
    for (int l = 0; l < levels; ++l) {
        if (l > 0) {
            if (nxl % 2 != 0 || nxl / 2 < 2)
                throw ConfigError("pfasst: Nx = " + std::to_string(nx) +
                                  " cannot be bisected for level " + std::to_string(l + 1));
            nxl /= 2;
        }
        h.levels.push_back(make_sdc_level(SpaceMesh::make(nxl, length), l == 0 ? M : 1, h.dt,
                                          gamma, mode, qdelta));
    }
    for (int l = 0; l + 1 < levels; ++l)
        h.transfers.push_back(make_level_transfer(h.levels[l], h.levels[l + 1]));
    return h;
}

namespace {

struct Aborted {};

double nan_max(double a, double b)
{
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
    return std::max(a, b);
}

// Deterministic all-reduce (max) across a fixed number of participants.
class Reduction {
public:
    explicit Reduction(int n) : n_(n) {}

    double max(double v)
    {
        std::unique_lock lock(mu_);
        if (aborted_) throw Aborted{};
        acc_ = nan_max(acc_, v);
        if (++count_ == n_) {
            result_ = acc_;
            acc_ = -std::numeric_limits<double>::infinity();
            count_ = 0;
            ++generation_;
            cv_.notify_all();
            return result_;
        }
        const long gen = generation_;
        cv_.wait(lock, [&] { return generation_ != gen || aborted_; });
        if (generation_ == gen) throw Aborted{};
        return result_;
    }

    void abort()
    {
        std::lock_guard lock(mu_);
        aborted_ = true;
        cv_.notify_all();
    }

private:
    int n_;
    int count_ = 0;
    long generation_ = 0;
    double acc_ = -std::numeric_limits<double>::infinity();
    double result_ = 0.0;
    bool aborted_ = false;
    std::mutex mu_;
    std::condition_variable cv_;
};

// Forward-only handoff of coarse end values from worker w to w + 1, keyed by iteration.
class Channel {
public:
    void send(int iter, std::vector<double> v)
    {
        std::lock_guard lock(mu_);
        box_[iter] = std::move(v);
        cv_.notify_all();
    }

    std::vector<double> receive(int iter)
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return aborted_ || box_.count(iter) != 0; });
        if (box_.count(iter) == 0) throw Aborted{};
        std::vector<double> v = std::move(box_[iter]);
        box_.erase(iter);
        return v;
    }

    void abort()
    {
        std::lock_guard lock(mu_);
        aborted_ = true;
        cv_.notify_all();
    }

private:
    std::map<int, std::vector<double>> box_;
    bool aborted_ = false;
    std::mutex mu_;
    std::condition_variable cv_;
};

class Pipeline {
public:
    Pipeline(const PfasstHierarchy& h, std::span<const double> u0, const PfasstOptions& opt)
        : h_(h), opt_(opt), P_(opt.workers), block_(h.nt / opt.workers), L_(h.num_levels()),
          links_(static_cast<std::size_t>(std::max(P_ - 1, 1)))
    {
        initial_.push_back(std::vector<double>(u0.begin(), u0.end()));
        for (int l = 0; l + 1 < L_; ++l)
            initial_.push_back(h.transfers[l].space_restriction *
                               std::span<const double>(initial_.back()));
        states_.resize(h.nt);
        restricted_.resize(h.nt);
        for (int s = 0; s < h.nt; ++s) {
            for (int l = 0; l < L_; ++l) states_[s].push_back(SweeperState::make(h.levels[l]));
            restricted_[s].resize(L_);
            SweeperState& f = states_[s][0];
            f.U0 = initial_[0];
            spread(h.levels[0], f);
        }
        for (auto& buf : snapshots_) buf.resize(P_);
    }

    double initial_residual() const
    {
        double r = 0.0;
        for (int s = 0; s < h_.nt; ++s) r = nan_max(r, collocation_residual(h_.levels[0], states_[s][0]));
        return r;
    }

    void process_block(int w, int iter)
    {
        const int first = w * block_;
        const int last = first + block_ - 1;
        for (int s = first; s <= last; ++s) process_step(w, s, first, last, iter);
    }

    void publish(int w, int iter)
    {
        snapshots_[iter % 2][w] = end_value(0, states_[w * block_ + block_ - 1][0]);
    }

    double finish(int w, int iter)
    {
        const int first = w * block_;
        if (w > 0) states_[first][0].U0 = snapshots_[iter % 2][w - 1];
        double r = 0.0;
        for (int s = first; s < first + block_; ++s)
            r = nan_max(r, collocation_residual(h_.levels[0], states_[s][0]));
        return r;
    }

    void abort_links()
    {
        for (Channel& c : links_) c.abort();
    }

    std::vector<double> solution() const
    {
        std::vector<double> u;
        u.reserve(static_cast<std::size_t>(h_.nt) * h_.levels[0].size());
        for (int s = 0; s < h_.nt; ++s)
            u.insert(u.end(), states_[s][0].U.begin(), states_[s][0].U.end());
        return u;
    }

private:
    std::vector<double> end_value(int l, const SweeperState& st) const
    {
        const int n = h_.levels[l].ndof();
        const auto begin = st.U.end() - n;
        return std::vector<double>(begin, st.U.end());
    }

    void sweeps(int l, SweeperState& st) const
    {
        for (int k = 0; k < opt_.nu; ++k) sweep(h_.levels[l], st);
    }

    void process_step(int w, int s, int first, int last, int iter)
    {
        std::vector<SweeperState>& S = states_[s];
        if (s != first) S[0].U0 = end_value(0, states_[s - 1][0]);

        for (int l = 0; l + 1 < L_; ++l) {
            sweeps(l, S[l]);
            fas_restrict(h_.levels[l], h_.levels[l + 1], h_.transfers[l], S[l], S[l + 1]);
            restricted_[s][l + 1] = S[l + 1].U;
            if (l + 2 < L_)
                S[l + 1].U0 = h_.transfers[l].space_restriction * std::span<const double>(S[l].U0);
        }

        const int c = L_ - 1;
        if (c == 0) {
            sweeps(0, S[0]);
            return;
        }
        if (s == 0)
            S[c].U0 = initial_[c];
        else if (s == first)
            S[c].U0 = links_[w - 1].receive(iter);
        else
            S[c].U0 = end_value(c, states_[s - 1][c]);
        sweeps(c, S[c]);
        if (s == last && w + 1 < P_) links_[w].send(iter, end_value(c, S[c]));

        for (int l = c - 1; l >= 0; --l) {
            interpolate_correction(h_.levels[l], h_.transfers[l], restricted_[s][l + 1], S[l + 1],
                                   S[l]);
            if (l > 0) sweeps(l, S[l]);
        }
    }

    const PfasstHierarchy& h_;
    PfasstOptions opt_;
    int P_;
    int block_;
    int L_;
    std::vector<std::vector<double>> initial_;
    std::vector<std::vector<SweeperState>> states_;
    std::vector<std::vector<std::vector<double>>> restricted_;
    std::vector<std::vector<double>> snapshots_[2];
    std::vector<Channel> links_;
};

ConvergenceMonitor make_monitor(const PfasstOptions& opt)
{
    return ConvergenceMonitor(0.0, opt.tol, opt.max_iters, opt.divergence_factor);
}

SolveReport run_serial(Pipeline& pipe, const PfasstOptions& opt, double r0)
{
    SolveReport report;
    ConvergenceMonitor monitor = make_monitor(opt);
    auto status = monitor.start(r0, report);
    int iter = 0;
    while (status == ConvergenceMonitor::Status::running) {
        ++iter;
        try {
            for (int w = 0; w < opt.workers; ++w) pipe.process_block(w, iter);
        } catch (const SolverError&) {
            report.diverged = true;
            break;
        }
        for (int w = 0; w < opt.workers; ++w) pipe.publish(w, iter);
        double r = 0.0;
        for (int w = 0; w < opt.workers; ++w) r = nan_max(r, pipe.finish(w, iter));
        ++report.iterations;
        status = monitor.update(r, report);
    }
    return report;
}

SolveReport run_threaded(Pipeline& pipe, const PfasstOptions& opt, double r0)
{
    const int threads = opt.threads > 0 ? std::min(opt.threads, opt.workers)
                                        : std::min(opt.workers, kernels::thread_cap());
    const auto groups = partition_ranges(opt.workers, threads);
    Reduction reduction(threads);
    std::vector<SolveReport> reports(threads);
    std::exception_ptr error;
    std::mutex error_mu;

    auto body = [&](int t) {
        const auto [w0, w1] = groups[t];
        SolveReport& report = reports[t];
        ConvergenceMonitor monitor = make_monitor(opt);
        auto status = monitor.start(r0, report);
        int iter = 0;
        try {
            while (status == ConvergenceMonitor::Status::running) {
                ++iter;
                for (int w = w0; w < w1; ++w) pipe.process_block(w, iter);
                for (int w = w0; w < w1; ++w) pipe.publish(w, iter);
                reduction.max(0.0);
                double r = 0.0;
                for (int w = w0; w < w1; ++w) r = nan_max(r, pipe.finish(w, iter));
                r = reduction.max(r);
                ++report.iterations;
                status = monitor.update(r, report);
            }
        } catch (const Aborted&) {
            report.diverged = true;
        } catch (...) {
            {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
            }
            report.diverged = true;
            reduction.abort();
            pipe.abort_links();
        }
    };

    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(body, t);
    body(0);
    for (std::thread& th : pool) th.join();

    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const SolverError&) {
            SolveReport r = reports[0];
            r.converged = false;
            r.diverged = true;
            return r;
        }
    }
    return reports[0];
}

}  // namespace

std::pair<std::vector<double>, SolveReport> pfasst_run(const PfasstHierarchy& hierarchy,
                                                       std::span<const double> u0,
                                                       const PfasstOptions& options)
{
    if (hierarchy.levels.empty()) throw ConfigError("pfasst: empty hierarchy");
    if (options.workers < 1 || hierarchy.nt % options.workers != 0)
        throw ConfigError("pfasst: P = " + std::to_string(options.workers) +
                          " must divide Nt = " + std::to_string(hierarchy.nt));
    if (options.nu < 1) throw ConfigError("pfasst: nu must be >= 1");
    if (static_cast<int>(u0.size()) != hierarchy.levels[0].ndof())
        throw ConfigError("pfasst: initial value has the wrong size");

    const auto start = std::chrono::steady_clock::now();
    Pipeline pipe(hierarchy, u0, options);
    const double r0 = pipe.initial_residual();
    SolveReport report = options.executor == PfasstExecutor::serial
                             ? run_serial(pipe, options, r0)
                             : run_threaded(pipe, options, r0);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {pipe.solution(), report};
}

}  // namespace pint
