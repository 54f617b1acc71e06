#pragma once

// Rethrows integrator failures with the calling experiment prefixed to the message.

#include <string>
#include <utility>

#include "vefluid/errors.hpp"

namespace vefluid::detail {

template <class F>
auto with_context(const std::string& ctx, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (const NonFiniteError& e) {
    throw NonFiniteError(ctx + ": " + e.what(), e.t(), e.y());
  } catch (const StepUnderflowError& e) {
    throw StepUnderflowError(ctx + ": " + e.what());
  } catch (const StepBudgetError& e) {
    throw StepBudgetError(ctx + ": " + e.what());
  }
}

}  // namespace vefluid::detail
