#pragma once

#include <string>
#include <vector>

#include "mcfill/rational.hpp"
#include "mcfill/sets.hpp"

namespace mcfill {

// Replayable evidence behind a verdict. Refutations replay exactly: the
// recorded structure alone determines the claimed value under the owning
// module's evaluator. For positive verdicts the certificate records the
// worst case met during the sweep (a spot check, since a universally
// quantified claim has no succinct witness).
struct Certificate {
    std::string kind;                      // dispatch key for replay
    std::vector<PointSet> partition;       // parts, in sweep order
    std::vector<MeasurableSet> covers;     // parallel to partition when present
    std::vector<int> witness;              // maximizing F, or the violating H
    std::vector<int> tags;                 // chosen tag per part (-1 = none)
    std::string functional;                // argmax functional name, if any
};

struct Verdict {
    bool holds = false;
    Rational epsilon;
    Rational value;  // the value the certificate replays to
    Certificate certificate;
};

struct WeightedSelection {
    Rational value;
    std::vector<int> member;
};

}  // namespace mcfill
