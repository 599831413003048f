// Benchmark of the OpenMP kernels against their serial reference
// implementations: universe/table construction, the three enumerations, and
// the full sweep. Results must agree bit for bit; the timing table shows the
// speedup.
//
//   bench_kernels [ring-spec] [bound] [repeats]
//
// Defaults: zmod:6 36 3.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "torsion/mutation.hpp"
#include "torsion/ring_spec.hpp"

using namespace torsion;

namespace {

template <class F>
double time_ms(int repeats, F&& f) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    std::string ring_spec = argc > 1 ? argv[1] : "zmod:6";
    i64 bound = argc > 2 ? std::atoll(argv[2]) : 36;
    int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

    RingPtr r = parse_ring_spec(ring_spec);
    std::printf("ring %s, bound %lld, best of %d\n", ring_spec.c_str(), (long long)bound, repeats);
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    double bs = time_ms(repeats, [&] { build_universe(r, bound, Exec::serial, bound); });
    double bp = time_ms(repeats, [&] { build_universe(r, bound, Exec::parallel, bound); });
    row("build_universe", bs, bp);

    auto us = build_universe(r, bound, Exec::serial, bound);
    auto up = build_universe(r, bound, Exec::parallel, bound);
    if (us->num_classes() != up->num_classes() || us->sub != up->sub || us->quot != up->quot ||
        us->vanish != up->vanish) {
        std::fprintf(stderr, "FATAL: serial and parallel universes differ\n");
        return 1;
    }

    auto check = [&](const char* what, bool ok) {
        if (!ok) {
            std::fprintf(stderr, "FATAL: serial and parallel %s differ\n", what);
            std::exit(1);
        }
    };

    {
        std::vector<Subcategory> a, b;
        double s = time_ms(repeats, [&] { a = enumerate_serre(up, EnumMode::brute, Exec::serial); });
        double p =
            time_ms(repeats, [&] { b = enumerate_serre(up, EnumMode::brute, Exec::parallel); });
        row("enumerate_serre", s, p);
        check("serre lists", a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) check("serre lists", a[i] == b[i]);
    }
    {
        std::vector<TTPair> a, b;
        double s = time_ms(repeats,
                           [&] { a = enumerate_torsion_theories(up, EnumMode::brute, Exec::serial); });
        double p = time_ms(
            repeats, [&] { b = enumerate_torsion_theories(up, EnumMode::brute, Exec::parallel); });
        row("enumerate_torsion_theories", s, p);
        check("torsion theory lists", a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i)
            check("torsion theory lists", a[i].x == b[i].x && a[i].y == b[i].y);
    }
    {
        auto serres = enumerate_serre(up);
        std::vector<STorsionTheory> a, b;
        double s = 0, p = 0;
        for (const auto& heart : serres) {
            s += time_ms(repeats, [&] {
                a = enumerate_s_torsion_theories(up, heart, EnumMode::brute, Exec::serial);
            });
            p += time_ms(repeats, [&] {
                b = enumerate_s_torsion_theories(up, heart, EnumMode::brute, Exec::parallel);
            });
            check("s-torsion lists", a.size() == b.size());
            for (size_t i = 0; i < a.size(); ++i)
                check("s-torsion lists", a[i].t == b[i].t && a[i].f == b[i].f);
        }
        row("enumerate_s_torsion (all S)", s, p);
    }
    {
        SweepOptions so, po;
        so.exec = Exec::serial;
        po.exec = Exec::parallel;
        SweepResult a, b;
        double s = time_ms(repeats, [&] { a = sweep(up, so); });
        double p = time_ms(repeats, [&] { b = sweep(up, po); });
        row("sweep", s, p);
        check("sweep reports", a.reports.size() == b.reports.size());
        for (size_t i = 0; i < a.reports.size(); ++i)
            check("sweep reports", a.reports[i].holds == b.reports[i].holds &&
                                       a.reports[i].instance == b.reports[i].instance);
        std::printf("sweep: %lld checks, %lld counterexamples\n", (long long)a.counts.checks,
                    (long long)a.counts.counterexamples());
    }
    return 0;
}
