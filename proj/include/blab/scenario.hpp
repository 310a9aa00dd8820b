#pragma once

#include "blab/config.hpp"
#include "blab/report.hpp"

#include <map>
#include <string>

namespace blab::scen {

struct ScenarioResult {
    std::string name;
    report::Json report;
    std::map<std::string, std::string> csvFiles;     // relative name -> contents
    std::map<std::string, std::string> binaryFiles;  // relative name -> raw bytes
    int violations = 0;
};

/// Construction-I experiment: Cantor-supported deformation of the
/// boundary-singular Teichmuller form, vanishing-moment battery for the
/// trivial perturbations, certificate + infinitesimal inequality suite,
/// landslide probe, concentrating sweep, optional solve/imaging.
ScenarioResult runConstructionI(const cfg::Config& cfg);

/// Construction-II experiment: same deformation plus local-extremality
/// probes on subdisks meeting and avoiding the deformation support.
ScenarioResult runConstructionII(const cfg::Config& cfg);

/// Randomized certified-pair battery through all four inequality checks.
ScenarioResult runInequalityAudit(const cfg::Config& cfg);

ScenarioResult runCantorDump(const cfg::Config& cfg);
ScenarioResult runMoments(const cfg::Config& cfg);
ScenarioResult runHamiltonSweep(const cfg::Config& cfg);
ScenarioResult runSolve(const cfg::Config& cfg);

}  // namespace blab::scen
