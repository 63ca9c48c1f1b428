#include "cox2q/sim.hpp"

#include "cox2q/random.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <thread>

namespace cox2q {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct QueueEntry {
    double arrival_time;
    bool tracked;
};

// Fixed-capacity-doubling FIFO ring.
class Ring {
public:
    bool empty() const { return count_ == 0; }

    void push(QueueEntry e) {
        if (count_ == buf_.size()) grow();
        buf_[(head_ + count_) & mask_] = e;
        ++count_;
    }

    QueueEntry pop() {
        QueueEntry e = buf_[head_];
        head_ = (head_ + 1) & mask_;
        --count_;
        return e;
    }

private:
    void grow() {
        std::vector<QueueEntry> wider(buf_.size() * 2);
        for (std::size_t i = 0; i < count_; ++i) {
            wider[i] = buf_[(head_ + i) & mask_];
        }
        buf_.swap(wider);
        mask_ = buf_.size() - 1;
        head_ = 0;
    }

    std::vector<QueueEntry> buf_ = std::vector<QueueEntry>(1024);
    std::size_t mask_ = 1023;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

struct MetricSamples {
    std::vector<double> values;

    MetricEstimate summarize(const char* name) const {
        const long n = static_cast<long>(values.size());
        if (n < 2) {
            throw EstimationError(std::string(name) +
                                  ": fewer than 2 usable replications");
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));

        const boost::math::students_t dist(static_cast<double>(n - 1));
        const double tq = boost::math::quantile(dist, 0.975);

        MetricEstimate est;
        est.point = mean;
        est.half_width = tq * sd / std::sqrt(static_cast<double>(n));
        est.replications = n;
        return est;
    }
};

}  // namespace

void SimConfig::validate() const {
    if (replications < 2) {
        throw ParameterDomainError("at least 2 replications are required");
    }
    if (arrivals_per_rep < 1) {
        throw ParameterDomainError("arrivals_per_rep must be at least 1");
    }
    if (warmup_arrivals < 0) {
        throw ParameterDomainError("warmup_arrivals must be nonnegative");
    }
}

RawReplicationStats run_replication(const ModelSpec& model, long horizon_arrivals,
                                    long warmup_arrivals, std::uint64_t seed) {
    model.validate();
    if (horizon_arrivals < 1) {
        throw ParameterDomainError("horizon must cover at least 1 arrival");
    }
    if (warmup_arrivals < 0) {
        throw ParameterDomainError("warmup must be nonnegative");
    }

    const int c = model.c;
    const double lambda = model.lambda;
    const Cox2Params service = model.service;
    RandomStream stream(seed);

    std::vector<double> completion(static_cast<std::size_t>(c), kInf);
    int busy = 0;
    long population = 0;
    Ring queue;

    RawReplicationStats stats;
    const long last_index = warmup_arrivals + horizon_arrivals;
    long arrival_index = 0;

    double now = 0.0;
    double next_arrival = sample_exponential(lambda, stream);
    bool generating = true;

    bool integrating = (warmup_arrivals == 0);
    double window_start = 0.0;
    double last_t = 0.0;

    // Starts service for a customer at the current instant on the
    // lowest-index free server; uniforms are consumed in the order fixed by
    // sample_service (stage 1, routing, optional stage 2).
    auto start_service = [&](const QueueEntry& e) {
        int srv = 0;
        while (completion[static_cast<std::size_t>(srv)] != kInf) ++srv;
        const double s = sample_service(service, stream);
        completion[static_cast<std::size_t>(srv)] = now + s;
        ++busy;
        if (e.tracked) {
            stats.sum_wait += now - e.arrival_time;
            stats.sum_service += s;
        }
    };

    while (true) {
        double min_completion = kInf;
        int min_server = -1;
        for (int i = 0; i < c; ++i) {
            if (completion[static_cast<std::size_t>(i)] < min_completion) {
                min_completion = completion[static_cast<std::size_t>(i)];
                min_server = i;
            }
        }

        if (generating && next_arrival <= min_completion) {
            now = next_arrival;
            if (integrating) {
                stats.population_integral += population * (now - last_t);
                last_t = now;
            }
            ++arrival_index;
            if (arrival_index == warmup_arrivals) {
                integrating = true;
                window_start = now;
                last_t = now;
            }
            const bool tracked = arrival_index > warmup_arrivals;
            if (tracked) ++stats.arrivals;

            if (arrival_index == last_index) {
                stats.window_length = now - window_start;
                integrating = false;
                generating = false;
                next_arrival = kInf;
            } else {
                next_arrival = now + sample_exponential(lambda, stream);
            }

            if (busy == c) {
                if (tracked) {
                    ++stats.waited;
                    // The queue is FIFO and all servers are busy, so the next
                    // departure is the smallest scheduled completion.
                    assert(min_completion >= now);
                    stats.sum_min_residual += min_completion - now;
                }
                queue.push(QueueEntry{now, tracked});
            } else {
                start_service(QueueEntry{now, tracked});
            }
            ++population;
        } else {
            if (min_server < 0) break;  // idle, no arrivals left, queue empty
            now = min_completion;
            if (integrating) {
                stats.population_integral += population * (now - last_t);
                last_t = now;
            }
            completion[static_cast<std::size_t>(min_server)] = kInf;
            --busy;
            --population;
            if (!queue.empty()) {
                start_service(queue.pop());
            }
        }
    }
    return stats;
}

SimEstimates estimate(const ModelSpec& model, const SimConfig& config,
                      int max_threads) {
    config.validate();
    model.validate();

    const long reps = config.replications;
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(reps));
    for (long i = 0; i < reps; ++i) {
        seeds[static_cast<std::size_t>(i)] =
            split_seed(config.master_seed, static_cast<std::uint64_t>(i));
    }

    std::vector<RawReplicationStats> raw(static_cast<std::size_t>(reps));
    unsigned threads = max_threads > 0
                           ? static_cast<unsigned>(max_threads)
                           : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));

    auto work = [&](std::atomic<long>& next) {
        for (long i = next.fetch_add(1); i < reps; i = next.fetch_add(1)) {
            raw[static_cast<std::size_t>(i)] =
                run_replication(model, config.arrivals_per_rep,
                                config.warmup_arrivals,
                                seeds[static_cast<std::size_t>(i)]);
        }
    };

    std::atomic<long> next{0};
    if (threads <= 1) {
        work(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] { work(next); });
        }
        for (auto& th : pool) th.join();
    }

    // Aggregation in replication-index order keeps the result independent of
    // scheduling.
    MetricSamples pi_wait, ew, eq, min_tr;
    for (long i = 0; i < reps; ++i) {
        const RawReplicationStats& r = raw[static_cast<std::size_t>(i)];
        const double n = static_cast<double>(r.arrivals);
        pi_wait.values.push_back(static_cast<double>(r.waited) / n);
        ew.values.push_back(r.sum_wait / n);
        if (r.window_length > 0.0) {
            eq.values.push_back(r.population_integral / r.window_length);
        }
        if (r.waited > 0) {
            min_tr.values.push_back(r.sum_min_residual /
                                    static_cast<double>(r.waited));
        }
    }

    SimEstimates out;
    out.pi_wait = pi_wait.summarize("pi_wait");
    out.ew = ew.summarize("ew");
    out.eq = eq.summarize("eq");
    out.min_tr = min_tr.summarize("min_tr");
    out.seeds = std::move(seeds);
    return out;
}

}  // namespace cox2q
