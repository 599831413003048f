#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace torsion {

/// Execution policy for the enumeration and table-construction kernels.
/// `serial` is the reference path; `parallel` must produce identical results
/// (tests compare the two, the benchmark times them).
enum class Exec { serial, parallel };

template <class F>
void par_for(int n, Exec exec, F&& body) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) body(i);
    } else {
        for (int i = 0; i < n; ++i) body(i);
    }
}

inline void set_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
}

}  // namespace torsion
