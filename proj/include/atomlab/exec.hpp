#pragma once

namespace atomlab
{
    /// Selects the serial reference kernel or the OpenMP one. Both must give identical results.
    enum class Exec
    {
        serial,
        parallel
    };

    void set_thread_count(int threads);
    auto thread_count() -> int;
}
