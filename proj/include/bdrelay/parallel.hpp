#pragma once

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bdrelay {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results; the serial path exists for testing and profiling.
enum class Execution { Serial, Parallel };

/// Carries the first exception out of an OpenMP region, which must not be
/// left by a throw.
class ExceptionSink {
public:
    template <class F>
    void run(F&& f) noexcept
    {
        try {
            f();
        } catch (...) {
#pragma omp critical(bdrelay_exception_sink)
            if (!first_) first_ = std::current_exception();
        }
    }

    void rethrow() const
    {
        if (first_) std::rethrow_exception(first_);
    }

private:
    std::exception_ptr first_;
};

inline int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n)
{
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace bdrelay
