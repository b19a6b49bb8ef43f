#include "hamsys/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hamsys {

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_human(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

Framework parse_framework(const std::string& name) {
    if (name == "dual") return Framework::Dual;
    if (name == "inversion") return Framework::Inversion;
    if (name == "ls_reduction") return Framework::LSReduction;
    if (name == "shooting") return Framework::ShootingOracle;
    throw std::runtime_error("unknown framework '" + name +
                             "' (expected dual, inversion, ls_reduction, shooting)");
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

double to_double(const std::string& origin, int line, const std::string& key,
                 const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw std::runtime_error(origin + ":" + std::to_string(line) + ": field '" +
                                 key + "': cannot parse '" + v + "' as a number");
    }
}

long long to_int(const std::string& origin, int line, const std::string& key,
                 const std::string& v) {
    try {
        size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw std::runtime_error(origin + ":" + std::to_string(line) + ": field '" +
                                 key + "': cannot parse '" + v + "' as an integer");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, Entry> kv;
    {
        std::stringstream ss(text);
        std::string raw, section;
        int line = 0;
        while (std::getline(ss, raw)) {
            line++;
            size_t cpos = raw.find_first_of("#;");
            std::string s = trim(cpos == std::string::npos ? raw : raw.substr(0, cpos));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw std::runtime_error(origin + ":" + std::to_string(line) +
                                             ": unterminated section header");
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            size_t eq = s.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(origin + ":" + std::to_string(line) +
                                         ": expected 'key = value'");
            std::string key = trim(s.substr(0, eq));
            std::string val = trim(s.substr(eq + 1));
            if (key.find('.') == std::string::npos && !section.empty())
                key = section + "." + key;
            if (kv.count(key))
                throw std::runtime_error(origin + ":" + std::to_string(line) +
                                         ": field '" + key + "' set twice (first at line " +
                                         std::to_string(kv[key].line) + ")");
            kv[key] = {val, line};
        }
    }

    RunConfig cfg;
    auto get = [&](const std::string& key) -> Entry* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };
    auto getd = [&](const std::string& key, double dflt) {
        Entry* e = get(key);
        return e ? to_double(origin, e->line, key, e->value) : dflt;
    };
    auto geti = [&](const std::string& key, long long dflt) {
        Entry* e = get(key);
        return e ? to_int(origin, e->line, key, e->value) : dflt;
    };

    cfg.problem.p = getd("problem.p", 3.0);
    cfg.problem.q = getd("problem.q", 3.0);
    cfg.problem.alpha = getd("problem.alpha", 0.0);
    cfg.problem.beta = getd("problem.beta", 0.0);

    std::string kind = "interval";
    if (Entry* e = get("domain.kind")) kind = e->value;
    if (kind == "interval") {
        cfg.dom = Domain::interval(getd("domain.length", M_PI));
    } else if (kind == "rectangle") {
        cfg.dom = Domain::rectangle(getd("domain.a", M_PI), getd("domain.b", M_PI));
    } else if (kind == "disk") {
        cfg.dom = Domain::disk(getd("domain.radius", 1.0));
    } else {
        Entry* e = get("domain.kind");
        throw std::runtime_error(origin + ":" + std::to_string(e ? e->line : 0) +
                                 ": field 'domain.kind': unknown domain '" + kind + "'");
    }
    cfg.problem.N = cfg.dom.N;

    cfg.modes = static_cast<int>(geti("solver.modes", 64));
    cfg.solver.tol = getd("solver.tol", 1e-9);
    cfg.solver.max_iter = static_cast<int>(geti("solver.max_iter", 10000));
    cfg.solver.max_outer = static_cast<int>(geti("solver.max_outer", 500));
    cfg.solver.seed = static_cast<std::uint64_t>(geti("solver.seed", 0));
    cfg.solver.lambda = getd("solver.lambda", 1.0);

    if (Entry* e = get("solver.frameworks")) {
        cfg.frameworks.clear();
        for (const auto& n : split_list(e->value)) {
            try {
                cfg.frameworks.push_back(parse_framework(n));
            } catch (const std::exception& ex) {
                throw std::runtime_error(origin + ":" + std::to_string(e->line) +
                                         ": field 'solver.frameworks': " + ex.what());
            }
        }
        if (cfg.frameworks.empty())
            throw std::runtime_error(origin + ":" + std::to_string(e->line) +
                                     ": field 'solver.frameworks': empty list");
    }
    if (Entry* e = get("solver.lambdas")) {
        cfg.lambdas.clear();
        for (const auto& n : split_list(e->value))
            cfg.lambdas.push_back(to_double(origin, e->line, "solver.lambdas", n));
    }

    cfg.tols.level = getd("tolerances.level", cfg.tols.level);
    cfg.tols.identity = getd("tolerances.identity", cfg.tols.identity);
    cfg.tols.pointwise = getd("tolerances.pointwise", cfg.tols.pointwise);
    cfg.tols.pohozaev = getd("tolerances.pohozaev", cfg.tols.pohozaev);
    cfg.tols.radial = getd("tolerances.radial", cfg.tols.radial);

    if (Entry* e = get("sweep.weights")) {
        cfg.sweep_weights.clear();
        for (const auto& n : split_list(e->value))
            cfg.sweep_weights.push_back(to_double(origin, e->line, "sweep.weights", n));
    }
    if (Entry* e = get("output.dir")) cfg.outdir = e->value;

    for (const auto& [key, e] : kv)
        if (!e.used)
            throw std::runtime_error(origin + ":" + std::to_string(e.line) +
                                     ": unknown field '" + key + "'");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

namespace {

const char* framework_key(Framework f) {
    switch (f) {
        case Framework::Dual: return "dual";
        case Framework::Inversion: return "inversion";
        case Framework::LSReduction: return "ls_reduction";
        case Framework::ShootingOracle: return "shooting";
    }
    return "?";
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); i++) {
        if (i) s += ",";
        s += fmt_full(v[i]);
    }
    return s;
}

}  // namespace

std::string config_echo(const RunConfig& cfg) {
    std::string s;
    s += "[problem]\n";
    s += "p = " + fmt_full(cfg.problem.p) + "\n";
    s += "q = " + fmt_full(cfg.problem.q) + "\n";
    s += "alpha = " + fmt_full(cfg.problem.alpha) + "\n";
    s += "beta = " + fmt_full(cfg.problem.beta) + "\n";
    s += "\n[domain]\n";
    switch (cfg.dom.kind) {
        case Domain::Kind::Interval:
            s += "kind = interval\nlength = " + fmt_full(cfg.dom.L1) + "\n";
            break;
        case Domain::Kind::Rectangle:
            s += "kind = rectangle\na = " + fmt_full(cfg.dom.L1) +
                 "\nb = " + fmt_full(cfg.dom.L2) + "\n";
            break;
        case Domain::Kind::Disk:
            s += "kind = disk\nradius = " + fmt_full(cfg.dom.R) + "\n";
            break;
    }
    s += "\n[solver]\n";
    s += "modes = " + std::to_string(cfg.modes) + "\n";
    s += "tol = " + fmt_full(cfg.solver.tol) + "\n";
    s += "max_iter = " + std::to_string(cfg.solver.max_iter) + "\n";
    s += "max_outer = " + std::to_string(cfg.solver.max_outer) + "\n";
    s += "seed = " + std::to_string(cfg.solver.seed) + "\n";
    s += "lambda = " + fmt_full(cfg.solver.lambda) + "\n";
    s += "frameworks = ";
    for (size_t i = 0; i < cfg.frameworks.size(); i++)
        s += std::string(i ? "," : "") + framework_key(cfg.frameworks[i]);
    s += "\nlambdas = " + join_doubles(cfg.lambdas) + "\n";
    s += "\n[tolerances]\n";
    s += "level = " + fmt_full(cfg.tols.level) + "\n";
    s += "identity = " + fmt_full(cfg.tols.identity) + "\n";
    s += "pointwise = " + fmt_full(cfg.tols.pointwise) + "\n";
    s += "pohozaev = " + fmt_full(cfg.tols.pohozaev) + "\n";
    s += "radial = " + fmt_full(cfg.tols.radial) + "\n";
    s += "\n[sweep]\nweights = " + join_doubles(cfg.sweep_weights) + "\n";
    s += "\n[output]\ndir = " + cfg.outdir + "\n";
    return s;
}

void save_field(const Field& f, const std::string& stem) {
    if (!f.valid()) throw std::invalid_argument("save_field: empty field");
    const Basis& b = *f.basis();
    {
        std::ofstream out(stem + ".csv");
        if (!out) throw std::runtime_error("cannot write '" + stem + ".csv'");
        out << "mode_index,coefficient\n";
        for (int n = 0; n < b.M; n++)
            out << n << "," << fmt_full(f.coeff()[n]) << "\n";
    }
    nlohmann::json j;
    switch (b.domain.kind) {
        case Domain::Kind::Interval:
            j["kind"] = "interval";
            j["length"] = b.domain.L1;
            break;
        case Domain::Kind::Rectangle:
            j["kind"] = "rectangle";
            j["a"] = b.domain.L1;
            j["b"] = b.domain.L2;
            break;
        case Domain::Kind::Disk:
            j["kind"] = "disk";
            j["radius"] = b.domain.R;
            break;
    }
    j["modes"] = b.M;
    j["radial_only"] = b.radial_only;
    std::ofstream out(stem + ".json");
    if (!out) throw std::runtime_error("cannot write '" + stem + ".json'");
    out << j.dump(2) << "\n";
}

Field load_field(const std::string& stem) {
    nlohmann::json j;
    {
        std::ifstream in(stem + ".json");
        if (!in) throw std::runtime_error("cannot open '" + stem + ".json'");
        in >> j;
    }
    std::string kind = j.at("kind");
    int M = j.at("modes");
    BasisPtr b;
    if (kind == "interval")
        b = Basis::build(Domain::interval(j.at("length")), M);
    else if (kind == "rectangle")
        b = Basis::build(Domain::rectangle(j.at("a"), j.at("b")), M);
    else if (kind == "disk")
        b = j.value("radial_only", false)
                ? Basis::build_disk_radial(j.at("radius"), M)
                : Basis::build(Domain::disk(j.at("radius")), M);
    else
        throw std::runtime_error("sidecar '" + stem + ".json': unknown kind '" + kind + "'");

    std::ifstream in(stem + ".csv");
    if (!in) throw std::runtime_error("cannot open '" + stem + ".csv'");
    std::string line;
    std::getline(in, line);
    if (trim(line) != "mode_index,coefficient")
        throw std::runtime_error("'" + stem + ".csv': bad header '" + line + "'");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(M);
    int row = 1;
    while (std::getline(in, line)) {
        row++;
        line = trim(line);
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("'" + stem + ".csv' line " + std::to_string(row) +
                                     ": expected two columns");
        int n = static_cast<int>(to_int(stem + ".csv", row, "mode_index",
                                        line.substr(0, comma)));
        if (n < 0 || n >= M)
            throw std::runtime_error("'" + stem + ".csv' line " + std::to_string(row) +
                                     ": mode_index out of range");
        c[n] = to_double(stem + ".csv", row, "coefficient", line.substr(comma + 1));
    }
    return Field::from_coeff(b, std::move(c));
}

void save_nodal(const Field& f, const std::string& path) {
    if (!f.valid()) throw std::invalid_argument("save_nodal: empty field");
    const Basis& b = *f.basis();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    bool two = b.nodes.cols() > 1;
    out << (two ? "x,y,value\n" : "x,value\n");
    for (int i = 0; i < b.nq(); i++) {
        out << fmt_full(b.nodes(i, 0));
        if (two) out << "," << fmt_full(b.nodes(i, 1));
        out << "," << fmt_full(f.nodal()[i]) << "\n";
    }
}

void save_trace(const std::vector<TraceRow>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "iter,energy,residual,step\n";
    for (const auto& r : trace)
        out << r.iter << "," << fmt_full(r.energy) << "," << fmt_full(r.residual)
            << "," << fmt_full(r.step) << "\n";
}

void save_sweep(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "alpha,beta,c_rad,c_full,breaking_flag,foliated_deficit\n";
    for (const auto& r : rows)
        out << fmt_full(r.alpha) << "," << fmt_full(r.beta) << "," << fmt_full(r.c_rad)
            << "," << fmt_full(r.c_full) << "," << (r.breaking ? 1 : 0) << ","
            << fmt_full(r.foliated) << "\n";
}

nlohmann::json classification_json(const Classification& cl) {
    return {{"H1", cl.H1},         {"H2", cl.H2},
            {"H3", cl.H3},         {"H4", cl.H4},
            {"H4_prime", cl.H4p},  {"regime", cl.regime_name()},
            {"hyperbola", cl.hyperbola_name()}};
}

nlohmann::json result_json(const FrameworkResult& r) {
    nlohmann::json j;
    j["framework"] = framework_name(r.framework);
    j["converged"] = r.converged;
    j["c"] = r.c;
    j["iterations"] = r.iterations;
    j["message"] = r.message;
    if (r.framework == Framework::Inversion) j["alpha_pq"] = r.alpha_pq;
    if (r.converged) {
        j["energy"] = r.solution.energy;
        j["residual_u"] = r.solution.residual_u;
        j["residual_v"] = r.solution.residual_v;
    }
    return j;
}

nlohmann::json report_json(const VerificationReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : rep.checks)
        rows.push_back({{"name", c.name},
                        {"measured", c.measured},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass}});
    return {{"checks", rows}, {"all_pass", rep.all_pass()}};
}

nlohmann::json config_json(const RunConfig& cfg) {
    return {{"ini", config_echo(cfg)}};
}

}  // namespace hamsys
