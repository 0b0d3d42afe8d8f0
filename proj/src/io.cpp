#include "granular/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace granular {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file for hashing: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

namespace {

double parse_double(const std::string& tok, const std::string& where) {
    double v = 0.0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ValidationError("malformed number '" + tok + "' in " + where);
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(line);
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

json report_to_json(const InequalityReport& r) {
    return json{{"name", r.name},       {"lhs", r.lhs},
                {"rhs", r.rhs},         {"satisfied", r.satisfied},
                {"margin", r.margin},   {"tolerance", r.tolerance}};
}

InequalityReport report_from_json(const json& j) {
    InequalityReport r;
    r.name = j.at("name").get<std::string>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.satisfied = j.at("satisfied").get<bool>();
    r.margin = j.at("margin").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    return r;
}

BlowupTrigger trigger_from_string(const std::string& s) {
    if (s == "dt_underflow") return BlowupTrigger::dt_underflow;
    if (s == "density_cap") return BlowupTrigger::density_cap;
    if (s == "gradient_cap") return BlowupTrigger::gradient_cap;
    return BlowupTrigger::none;
}

}  // namespace

void write_snapshot_csv(const std::string& path, const PrimitiveField& pf, const Grid1D& grid,
                        const GasParams& g) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write snapshot: " + path);
    out << "x,rho,u,p,K\n";
    const auto K = entropy_K(pf, g);
    for (std::size_t i = 0; i < pf.size(); ++i) {
        out << format_g17(grid.center(i)) << ',' << format_g17(pf.rho[i]) << ','
            << format_g17(pf.u[i]) << ',' << format_g17(pf.p[i]) << ',' << format_g17(K[i])
            << '\n';
    }
}

PrimitiveField read_snapshot_csv(const std::string& path, Grid1D* grid_out) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read snapshot: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "x,rho,u,p,K") {
        throw ValidationError("snapshot header mismatch in " + path);
    }
    PrimitiveField pf;
    std::vector<double> xs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tok = split_csv(line);
        if (tok.size() != 5) throw ValidationError("snapshot row arity mismatch in " + path);
        xs.push_back(parse_double(tok[0], path));
        pf.rho.push_back(parse_double(tok[1], path));
        pf.u.push_back(parse_double(tok[2], path));
        pf.p.push_back(parse_double(tok[3], path));
    }
    if (grid_out && xs.size() >= 2) {
        const double dx = xs[1] - xs[0];
        grid_out->x_min = xs.front() - 0.5 * dx;
        grid_out->x_max = xs.back() + 0.5 * dx;
        grid_out->num_cells = xs.size();
    }
    return pf;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& records) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write diagnostics: " + path);
    out << kDiagnosticsHeader << '\n';
    for (const auto& r : records) {
        out << format_g17(r.t) << ',' << format_g17(r.M) << ',' << format_g17(r.P) << ','
            << format_g17(r.E) << ',' << format_g17(r.E_k) << ',' << format_g17(r.E_i) << ','
            << format_g17(r.G) << ',' << format_g17(r.F) << ',' << format_g17(r.S) << ','
            << format_g17(r.K_max) << ',' << format_g17(r.rho_max) << ','
            << format_g17(r.dudx_max) << ',' << format_g17(r.dt_current) << '\n';
    }
}

std::vector<DiagnosticRecord> read_diagnostics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read diagnostics: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kDiagnosticsHeader) {
        throw ValidationError("diagnostics header mismatch in " + path);
    }
    std::vector<DiagnosticRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tok = split_csv(line);
        if (tok.size() != 13) throw ValidationError("diagnostics row arity mismatch in " + path);
        DiagnosticRecord r;
        r.t = parse_double(tok[0], path);
        r.M = parse_double(tok[1], path);
        r.P = parse_double(tok[2], path);
        r.E = parse_double(tok[3], path);
        r.E_k = parse_double(tok[4], path);
        r.E_i = parse_double(tok[5], path);
        r.G = parse_double(tok[6], path);
        r.F = parse_double(tok[7], path);
        r.S = parse_double(tok[8], path);
        r.K_max = parse_double(tok[9], path);
        r.rho_max = parse_double(tok[10], path);
        r.dudx_max = parse_double(tok[11], path);
        r.dt_current = parse_double(tok[12], path);
        out.push_back(r);
    }
    return out;
}

void write_report_json(const std::string& path, const RunReport& rep) {
    json j;
    j["scenario"] = rep.scenario_name;
    j["scenario_hash"] = rep.scenario_hash;
    j["code_version"] = kCodeVersion;
    j["k_plus"] = rep.K_plus;
    j["flooring_events"] = rep.flooring_events;
    j["blowup"] = json{{"detected", rep.blowup.detected},
                       {"trigger", to_string(rep.blowup.trigger)},
                       {"t_detect", rep.blowup.t_detect},
                       {"t_lo", rep.blowup.t_lo},
                       {"t_hi", rep.blowup.t_hi}};
    if (rep.blowup_estimate) {
        j["blowup_estimate"] =
            json{{"t_lo", rep.blowup_estimate->first}, {"t_hi", rep.blowup_estimate->second}};
    } else {
        j["blowup_estimate"] = nullptr;
    }
    j["theorem2"] = rep.theorem2 ? report_to_json(*rep.theorem2) : json(nullptr);

    json ids = json::array();
    for (const auto& s : rep.identities) {
        json rows = json::array();
        for (const auto& row : s.rows) rows.push_back(json::array({row.t, row.lhs, row.rhs}));
        ids.push_back(json{{"name", s.name},
                           {"max_abs_residual", s.max_abs_residual},
                           {"scale", s.scale},
                           {"rows", rows}});
    }
    j["identities"] = ids;

    json idr = json::array();
    for (const auto& r : rep.identity_reports) idr.push_back(report_to_json(r));
    j["identity_reports"] = idr;

    json ineq = json::array();
    for (const auto& tr : rep.inequalities) {
        json e = report_to_json(tr.report);
        e["t"] = tr.t;
        ineq.push_back(e);
    }
    j["inequalities"] = ineq;

    json sup = json::array();
    for (const auto& s : rep.support) sup.push_back(json::array({s.first, s.second}));
    j["support"] = sup;

    json supc = json::array();
    for (const auto& r : rep.support_checks) supc.push_back(report_to_json(r));
    j["support_checks"] = supc;

    json mom = json::array();
    for (const auto& tr : rep.moment_checks) {
        json e = report_to_json(tr.report);
        e["t"] = tr.t;
        mom.push_back(e);
    }
    j["moment_checks"] = mom;

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write report: " + path);
    out << j.dump(2) << '\n';
}

RunReport read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read report: " + path);
    json j = json::parse(in);
    RunReport rep;
    rep.scenario_name = j.value("scenario", "");
    rep.scenario_hash = j.value("scenario_hash", "");
    rep.K_plus = j.at("k_plus").get<double>();
    rep.flooring_events = j.at("flooring_events").get<std::size_t>();
    const auto& b = j.at("blowup");
    rep.blowup.detected = b.at("detected").get<bool>();
    rep.blowup.trigger = trigger_from_string(b.at("trigger").get<std::string>());
    rep.blowup.t_detect = b.at("t_detect").get<double>();
    rep.blowup.t_lo = b.at("t_lo").get<double>();
    rep.blowup.t_hi = b.at("t_hi").get<double>();
    if (!j.at("blowup_estimate").is_null()) {
        rep.blowup_estimate = std::make_pair(j["blowup_estimate"]["t_lo"].get<double>(),
                                             j["blowup_estimate"]["t_hi"].get<double>());
    }
    if (!j.at("theorem2").is_null()) rep.theorem2 = report_from_json(j["theorem2"]);
    for (const auto& s : j.at("identities")) {
        IdentitySeries ser;
        ser.name = s.at("name").get<std::string>();
        ser.max_abs_residual = s.at("max_abs_residual").get<double>();
        ser.scale = s.at("scale").get<double>();
        for (const auto& row : s.at("rows")) {
            ser.rows.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
        rep.identities.push_back(std::move(ser));
    }
    for (const auto& r : j.at("identity_reports")) rep.identity_reports.push_back(report_from_json(r));
    for (const auto& e : j.at("inequalities")) {
        rep.inequalities.push_back({e.at("t").get<double>(), report_from_json(e)});
    }
    for (const auto& s : j.at("support")) {
        rep.support.emplace_back(s[0].get<double>(), s[1].get<double>());
    }
    for (const auto& r : j.at("support_checks")) rep.support_checks.push_back(report_from_json(r));
    for (const auto& e : j.at("moment_checks")) {
        rep.moment_checks.push_back({e.at("t").get<double>(), report_from_json(e)});
    }
    return rep;
}

void write_manifest(const std::string& path, const Manifest& m) {
    json j;
    j["scenario_hash"] = m.scenario_hash;
    j["code_version"] = m.code_version;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["outputs"] = m.outputs;
    j["exit_status"] = m.exit_status;
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read manifest: " + path);
    json j = json::parse(in);
    Manifest m;
    m.scenario_hash = j.at("scenario_hash").get<std::string>();
    m.code_version = j.at("code_version").get<std::string>();
    m.started_utc = j.value("started_utc", "");
    m.finished_utc = j.value("finished_utc", "");
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.exit_status = j.at("exit_status").get<int>();
    return m;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace granular
