// Compares the serial reference paths with the OpenMP kernels and checks
// that both produce identical output.

#include <chrono>
#include <cstdio>
#include <vector>

#include "popdyn/analysis.hpp"
#include "popdyn/parallel.hpp"

using namespace popdyn;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = Clock::now();
    f();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   equal %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms, equal ? "yes" : "NO");
}

}  // namespace

int main() {
    std::printf("worker threads: %d\n", effective_threads());

    {
        const int n = 2048;
        BarLengths b{1, 3, 1};
        std::vector<double> serial(static_cast<std::size_t>(n) * n);
        std::vector<double> parallel(serial.size());
        double ts = time_ms([&] { fill_gamma_field(b, 4.0, n, serial, ExecutionPolicy::Serial); });
        double tp = time_ms([&] { fill_gamma_field(b, 4.0, n, parallel, ExecutionPolicy::Parallel); });
        report("gamma field 2048x2048", ts, tp, serial == parallel);
    }

    {
        BarLengths b{1, 3, 1};
        std::vector<double> grid;
        for (int i = 0; i < 12; ++i) grid.push_back(3.2 + 1.6 * i / 11.0);
        ScanOptions opt;
        opt.q_max = 0;
        ScanResult rs, rp;
        double ts = time_ms([&] { rs = scan_rotation(b, grid, opt, ExecutionPolicy::Serial); });
        double tp = time_ms([&] { rp = scan_rotation(b, grid, opt, ExecutionPolicy::Parallel); });
        bool equal = rs.rows.size() == rp.rows.size();
        for (std::size_t i = 0; equal && i < rs.rows.size(); ++i)
            equal = rs.rows[i].estimate.rho == rp.rows[i].estimate.rho;
        report("rotation scan (12 points)", ts, tp, equal);
    }

    return 0;
}
