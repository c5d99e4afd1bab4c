#include "secdispatch/sweep_parallel.hpp"

#include <omp.h>

#include <exception>

namespace secdispatch {

PosOutcome evaluate_one(const DispatchModel& model, const InputInstance& inst,
                        const EvalOptions& opts)
{
    const auto rep = model.price_of_security(inst);
    PosOutcome out;
    out.status = rep.status;
    if (!rep.ok()) return out;
    out.c_ed = rep.c_ed;
    out.c_sc = rep.c_sc;
    out.pos = rep.pos;
    if (opts.certify) {
        out.certified = true;
        out.sced_secure = model.check_n1_security(inst, rep.sc_solution.generation).secure();
        out.ed_secure = model.check_n1_security(inst, rep.ed_solution.generation).secure();
    }
    return out;
}

std::vector<PosOutcome> evaluate_serial(const DispatchModel& model,
                                        std::span<const InputInstance> batch,
                                        const EvalOptions& opts)
{
    std::vector<PosOutcome> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out[i] = evaluate_one(model, batch[i], opts);
    }
    return out;
}

std::vector<PosOutcome> evaluate_parallel(const DispatchModel& model,
                                          std::span<const InputInstance> batch,
                                          const EvalOptions& opts)
{
    std::vector<PosOutcome> out(batch.size());
    std::vector<std::exception_ptr> errors(batch.size());
    const auto count = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = evaluate_one(model, batch[k], opts);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    // Rethrow the lowest-index failure, as the serial loop would.
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<PosOutcome> evaluate(const DispatchModel& model, std::span<const InputInstance> batch,
                                 Execution exec, const EvalOptions& opts)
{
    return exec == Execution::Parallel ? evaluate_parallel(model, batch, opts)
                                       : evaluate_serial(model, batch, opts);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace secdispatch
