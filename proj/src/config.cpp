#include "wntv/config.hpp"

#include <cctype>
#include <cinttypes>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "wntv/errors.hpp"

namespace wntv {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value, const char* expected) {
    throw IoError("config " + section + "." + key + ": cannot parse '" + value +
                  "' as " + expected);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        bad_value(section, key, value, "a number");
    }
    if (pos != value.size()) bad_value(section, key, value, "a number");
    return v;
}

int parse_int(const std::string& section, const std::string& key,
              const std::string& value) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(value, &pos);
    } catch (const std::exception&) {
        bad_value(section, key, value, "an integer");
    }
    if (pos != value.size() || v < INT_MIN || v > INT_MAX)
        bad_value(section, key, value, "an integer");
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& section, const std::string& key,
                        const std::string& value) {
    size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        bad_value(section, key, value, "an unsigned integer");
    }
    if (pos != value.size()) bad_value(section, key, value, "an unsigned integer");
    return v;
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(section, key, value, "a boolean (true/false)");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void apply_config_value(RunConfig& c, const std::string& section, const std::string& key,
                        const std::string& value) {
    if (section == "run") {
        if (key == "command") { c.command = value; return; }
        if (key == "seed") { c.seed = parse_u64(section, key, value); return; }
        if (key == "input") { c.input = value; return; }
        if (key == "mask") { c.mask = value; return; }
        if (key == "truth") { c.truth = value; return; }
        if (key == "output") { c.output = value; return; }
        if (key == "metrics") { c.metrics = value; return; }
    } else if (section == "graph") {
        if (key == "k") { c.k_sparsify = parse_int(section, key, value); return; }
        if (key == "r_sigma") { c.r_sigma = parse_int(section, key, value); return; }
    } else if (section == "solver") {
        if (key == "name") { c.solver = solver_kind_from_string(value); return; }
        if (key == "lambda") { c.solver_options.lambda = parse_double(section, key, value); return; }
        if (key == "mu") { c.solver_options.mu = parse_double(section, key, value); return; }
        if (key == "bregman_iters") {
            c.solver_options.max_bregman_iters = parse_int(section, key, value);
            return;
        }
        if (key == "bregman_tol") {
            c.solver_options.bregman_tol = parse_double(section, key, value);
            return;
        }
        if (key == "cg_tol") { c.solver_options.cg_tol = parse_double(section, key, value); return; }
        if (key == "cg_iters") {
            c.solver_options.cg_max_iters = parse_int(section, key, value);
            return;
        }
    } else if (section == "patch") {
        if (key == "size") {
            c.patch_config.s1 = c.patch_config.s2 = parse_int(section, key, value);
            return;
        }
        if (key == "s1") { c.patch_config.s1 = parse_int(section, key, value); return; }
        if (key == "s2") { c.patch_config.s2 = parse_int(section, key, value); return; }
        if (key == "semi_local") {
            c.patch_config.semi_local = parse_bool(section, key, value);
            return;
        }
    } else if (section == "pipeline") {
        if (key == "outer_iters") { c.outer_iters = parse_int(section, key, value); return; }
        if (key == "rate") { c.rate = parse_double(section, key, value); return; }
        if (key == "label_count") { c.label_count = parse_int(section, key, value); return; }
        if (key == "stratified") { c.stratified = parse_bool(section, key, value); return; }
    } else {
        throw IoError("config: unknown section [" + section + "]");
    }
    throw IoError("config: unknown key '" + key + "' in section [" + section + "]");
}

RunConfig parse_config_file(const std::string& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    RunConfig config = base;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw IoError(path + ":" + std::to_string(line_no) + ": unterminated section");
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw IoError(path + ":" + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw IoError(path + ":" + std::to_string(line_no) + ": key before any [section]");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty())
            throw IoError(path + ":" + std::to_string(line_no) + ": empty key");
        try {
            apply_config_value(config, section, key, value);
        } catch (const IoError& e) {
            throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

void validate_config(const RunConfig& c) {
    std::vector<std::string> problems;
    const auto complain = [&problems](const std::string& p) { problems.push_back(p); };

    const bool known_command =
        c.command == "ssl" || c.command == "inpaint" || c.command == "colorize";
    if (c.command.empty())
        complain("command is required (ssl, inpaint or colorize)");
    else if (!known_command)
        complain("unknown command '" + c.command + "'");

    if (!(c.solver_options.lambda > 0.0) || !std::isfinite(c.solver_options.lambda))
        complain("solver.lambda must be positive");
    if (c.solver_options.mu &&
        (!(*c.solver_options.mu > 0.0) || !std::isfinite(*c.solver_options.mu)))
        complain("solver.mu must be positive");
    if (c.solver_options.max_bregman_iters < 1) complain("solver.bregman_iters must be >= 1");
    if (!(c.solver_options.bregman_tol > 0.0)) complain("solver.bregman_tol must be positive");
    if (!(c.solver_options.cg_tol > 0.0)) complain("solver.cg_tol must be positive");
    if (c.solver_options.cg_max_iters < 1) complain("solver.cg_iters must be >= 1");

    if (c.k_sparsify == 0 || c.k_sparsify < -1) complain("graph.k must be >= 1");
    if (c.r_sigma == 0 || c.r_sigma < -1) complain("graph.r_sigma must be >= 1");
    if (c.graph_r() > c.graph_k())
        complain("graph.r_sigma (" + std::to_string(c.graph_r()) +
                 ") cannot exceed graph.k (" + std::to_string(c.graph_k()) + ")");

    if (c.patch_config.s1 < 1 || c.patch_config.s1 % 2 == 0)
        complain("patch.s1 must be odd and positive");
    if (c.patch_config.s2 < 1 || c.patch_config.s2 % 2 == 0)
        complain("patch.s2 must be odd and positive");

    if (c.outer_iters < 1) complain("pipeline.outer_iters must be >= 1");
    const bool has_rate = c.rate >= 0.0;
    if (has_rate && (!(c.rate > 0.0) || !(c.rate <= 1.0)))
        complain("pipeline.rate must lie in (0, 1]");
    if (c.label_count == 0 || c.label_count < -1) complain("pipeline.label_count must be >= 1");

    const auto file_must_exist = [&complain](const std::string& what, const std::string& path) {
        if (path.empty()) return;
        if (!std::filesystem::exists(path)) complain(what + " '" + path + "' does not exist");
    };

    if (c.input.empty())
        complain("input path is required");
    else
        file_must_exist("input", c.input);
    file_must_exist("mask", c.mask);
    file_must_exist("truth", c.truth);

    if (c.output.empty()) {
        complain("output path is required");
    } else {
        const auto parent = std::filesystem::path(c.output).parent_path();
        if (!parent.empty() && !std::filesystem::is_directory(parent))
            complain("output directory '" + parent.string() + "' does not exist");
    }

    if (known_command) {
        if (c.command == "ssl") {
            if (c.truth.empty()) complain("ssl needs truth (the IDX label file)");
            if (c.label_count < 0 && !has_rate)
                complain("ssl needs pipeline.label_count or pipeline.rate");
        } else {
            const bool has_mask = !c.mask.empty();
            if (has_mask && has_rate)
                complain(c.command + " takes either a mask file or a rate, not both");
            if (!has_mask && !has_rate)
                complain(c.command + " needs a mask file or pipeline.rate");
            if (c.command == "colorize" && c.truth.empty())
                complain("colorize needs truth (the color image supplying the samples)");
        }
    }

    if (!problems.empty()) {
        std::ostringstream out;
        out << "invalid configuration (" << problems.size() << " problem"
            << (problems.size() == 1 ? "" : "s") << "):";
        for (const std::string& p : problems) out << "\n  - " << p;
        throw IoError(out.str());
    }
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "command=" << c.command << '\n';
    out << "solver=" << to_string(c.solver) << '\n';
    out << "k=" << c.graph_k() << '\n';
    out << "r_sigma=" << c.graph_r() << '\n';
    out << "lambda=" << fmt_double(c.solver_options.lambda) << '\n';
    out << "mu=" << (c.solver_options.mu ? fmt_double(*c.solver_options.mu) : "default")
        << '\n';
    out << "bregman_iters=" << c.solver_options.max_bregman_iters << '\n';
    out << "bregman_tol=" << fmt_double(c.solver_options.bregman_tol) << '\n';
    out << "cg_tol=" << fmt_double(c.solver_options.cg_tol) << '\n';
    out << "cg_iters=" << c.solver_options.cg_max_iters << '\n';
    out << "patch_s1=" << c.patch_config.s1 << '\n';
    out << "patch_s2=" << c.patch_config.s2 << '\n';
    out << "semi_local=" << (c.patch_config.semi_local ? "true" : "false") << '\n';
    out << "outer_iters=" << c.outer_iters << '\n';
    out << "seed=" << c.seed << '\n';
    out << "rate=" << (c.rate >= 0.0 ? fmt_double(c.rate) : "unset") << '\n';
    out << "label_count=" << c.label_count << '\n';
    out << "stratified=" << (c.stratified ? "true" : "false") << '\n';
    out << "input=" << c.input << '\n';
    out << "mask=" << c.mask << '\n';
    out << "truth=" << c.truth << '\n';
    out << "output=" << c.output << '\n';
    return out.str();
}

std::string config_run_id(const RunConfig& c) {
    const std::string text = serialize_config(c);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char byte : text) {
        h ^= byte;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string derive_output_path(const std::string& output, const std::string& suffix) {
    std::filesystem::path p(output);
    p.replace_extension();
    return p.string() + suffix;
}

}  // namespace wntv
