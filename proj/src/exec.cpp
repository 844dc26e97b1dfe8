#include "atomlab/exec.hpp"

#include <omp.h>

namespace atomlab
{
    void set_thread_count(int threads)
    {
        if (threads < 1)
            threads = 1;
        omp_set_num_threads(threads);
    }

    auto thread_count() -> int { return omp_get_max_threads(); }
}
