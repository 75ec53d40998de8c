#pragma once

#include "abreach/syntax.hpp"

#include <string>
#include <vector>

namespace abreach {

struct TraceStep {
    std::string transition; // name in the problem the engine ran on
    std::string base;       // original transition to replay concretely
    bool abstracted = false;
    bool accelerated = false;
};

/// Steps in forward order, from a state consistent with the initial
/// formula to a state in the unsafe formula.
struct Trace {
    std::vector<TraceStep> steps;
    Formula initial;
    Formula unsafe;

    bool exact() const {
        for (const auto& s : steps) {
            if (s.abstracted || s.accelerated) { return false; }
        }
        return true;
    }
};

} // namespace abreach
