// Batch price-of-security evaluation. Every instance in a batch is an
// independent ED + SCED pair, so the batch is a data-parallel loop. The
// serial version is the reference the OpenMP version is tested against;
// both write outcome i for instance i, so results never depend on the
// schedule.

#pragma once

#include "secdispatch/dispatch.hpp"

#include <span>
#include <vector>

namespace secdispatch {

struct PosOutcome {
    PosStatus status = PosStatus::Ok;
    double c_ed = 0.0;
    double c_sc = 0.0;
    double pos = 1.0;
    // Filled only when EvalOptions::certify is set.
    bool certified = false;
    bool sced_secure = false;
    bool ed_secure = false;

    bool ok() const { return status == PosStatus::Ok; }
};

struct EvalOptions {
    /// Run the independent N-1 check on both dispatches of each instance.
    bool certify = false;
};

enum class Execution { Serial, Parallel };

PosOutcome evaluate_one(const DispatchModel& model, const InputInstance& inst,
                        const EvalOptions& opts = {});

std::vector<PosOutcome> evaluate_serial(const DispatchModel& model,
                                        std::span<const InputInstance> batch,
                                        const EvalOptions& opts = {});

std::vector<PosOutcome> evaluate_parallel(const DispatchModel& model,
                                          std::span<const InputInstance> batch,
                                          const EvalOptions& opts = {});

std::vector<PosOutcome> evaluate(const DispatchModel& model, std::span<const InputInstance> batch,
                                 Execution exec, const EvalOptions& opts = {});

int max_threads();

}  // namespace secdispatch
