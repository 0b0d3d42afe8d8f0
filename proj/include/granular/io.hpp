// File formats: snapshot CSV ("x,rho,u,p,K", full double precision),
// diagnostics CSV with the fixed 13-column layout, report.json with the
// check results, and manifest.json naming every artifact of a run.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "granular/core.hpp"
#include "granular/diagnostics.hpp"
#include "granular/solver.hpp"

namespace granular {

inline constexpr const char* kCodeVersion = "granular-sim 1.0.0";
inline constexpr const char* kDiagnosticsHeader =
    "t,M,P,E,Ek,Ei,G,F,S,Kmax,rho_max,dudx_max,dt";

// 17-significant-digit decimal, round-trip exact for doubles.
std::string format_g17(double v);

// FNV-1a 64-bit over raw bytes, as a 16-digit hex string.
std::string fnv1a_hex(const std::string& bytes);
std::string hash_file(const std::string& path);

void write_snapshot_csv(const std::string& path, const PrimitiveField& pf, const Grid1D& grid,
                        const GasParams& g);
PrimitiveField read_snapshot_csv(const std::string& path, Grid1D* grid_out = nullptr);

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& records);
// Reads the 13 pinned columns; the auxiliary fields stay zero.
std::vector<DiagnosticRecord> read_diagnostics_csv(const std::string& path);

struct TimedReport {
    double t = 0.0;
    InequalityReport report;
};

// Everything report.json carries beyond the raw record table.
struct RunReport {
    std::string scenario_name;
    std::string scenario_hash;
    double K_plus = 0.0;
    std::size_t flooring_events = 0;
    BlowupReport blowup;
    std::optional<std::pair<double, double>> blowup_estimate;
    std::optional<InequalityReport> theorem2;
    std::vector<IdentitySeries> identities;
    std::vector<InequalityReport> identity_reports;
    std::vector<TimedReport> inequalities;
    std::vector<std::pair<double, double>> support;  // (t, radius), tracked runs
    std::vector<InequalityReport> support_checks;
    std::vector<TimedReport> moment_checks;
};

void write_report_json(const std::string& path, const RunReport& report);
RunReport read_report_json(const std::string& path);

struct Manifest {
    std::string scenario_hash;
    std::string code_version = kCodeVersion;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> outputs;
    int exit_status = 0;
};

void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path);

std::string utc_timestamp();

}  // namespace granular
