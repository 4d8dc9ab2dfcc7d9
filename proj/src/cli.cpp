#include "levy/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levy/version.hpp"

namespace levy::cli {

namespace fs = std::filesystem;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

uint64_t fnv1a(const std::string& bytes, uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Every command drops a manifest next to its primary output.
void write_manifest(const std::string& primary_out, const json& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, const json& config) {
    json m;
    m["tool"] = "levymap";
    m["version"] = kVersion;
    m["command"] = command;
    json in = json::object();
    for (const auto& p : inputs) in[p] = file_hash(p);
    m["inputs"] = in;
    m["outputs"] = outputs;
    m["config"] = config;
    write_text_atomic(primary_out + ".manifest.json", m.dump(2) + "\n");
}

}  // namespace

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return "fnv1a:" + hex64(fnv1a(ss.str()));
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot write " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

void write_batch_csv(const SampleBatch& b, const std::string& path) {
    std::ostringstream out;
    uint64_t h = fnv1a(b.provenance);
    h = fnv1a(std::to_string(b.config.seed), h);
    h = fnv1a(std::to_string(b.n), h);
    out << "# levymap samples\n";
    out << "# provenance_hash: " << hex64(h) << "\n";
    out << "# seed: " << b.config.seed << "\n";
    out << "# dim: " << b.dim << "\n";
    for (int d = 0; d < b.dim; ++d) out << (d ? "," : "") << "x" << d;
    out << "\n";
    for (int64_t i = 0; i < b.n; ++i) {
        for (int d = 0; d < b.dim; ++d) out << (d ? "," : "") << fmt(b.value(i, d));
        out << "\n";
    }
    write_text_atomic(path, out.str());
}

SampleBatch read_batch_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    SampleBatch b;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("dim:");
            if (pos != std::string::npos) b.dim = std::stoi(line.substr(pos + 4));
            continue;
        }
        if (!header_done) {
            header_done = true;  // column names
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) b.values.push_back(std::stod(cell));
    }
    if (b.dim <= 0) b.dim = 1;
    b.n = static_cast<int64_t>(b.values.size()) / b.dim;
    if (b.n == 0) throw io_error("no samples in " + path);
    return b;
}

void write_exponent_csv(const CharFn& f, const std::string& path) {
    std::ostringstream out;
    out << "# levymap exponent table\n";
    for (int d = 0; d < f.dim(); ++d) out << "y" << d << ",";
    out << "re_phi,im_phi\n";
    const auto& vals = f.grid_values();
    const auto& probes = f.probes();
    for (size_t i = 0; i < probes.size(); ++i) {
        for (double y : probes[i]) out << fmt(y) << ",";
        out << fmt(vals[i].real()) << "," << fmt(vals[i].imag()) << "\n";
    }
    write_text_atomic(path, out.str());
}

// ---------------------------------------------------------------------------

int cmd_transform(const std::string& dist_path, const std::string& map_path,
                  const std::string& out_prefix) {
    const LevyTriple nu = parse_distribution(load_json(dist_path));
    const MapRequest req = parse_map_spec(load_json(map_path));

    json result;
    CharFn exponent;
    switch (req.kind) {
        case MapRequest::Kind::jbeta: {
            const LevyTriple out = jbeta_transform(nu, req.beta);
            result = distribution_to_json(out);
            result["map"] = {{"transform", "jbeta"}, {"beta", req.beta}};
            exponent = exponent_of(out);
            break;
        }
        case MapRequest::Kind::imap: {
            const LevyTriple out = i_transform(nu);
            result = distribution_to_json(out);
            result["map"] = {{"transform", "imap"}};
            exponent = exponent_of(out);
            break;
        }
        case MapRequest::Kind::general: {
            exponent = map_exponent(req.spec, exponent_of(nu));
            result["map"] = map_spec_to_json(req.spec);
            result["exponent_only"] = true;
            break;
        }
    }
    const std::string out_json = out_prefix + ".json";
    const std::string out_csv = out_prefix + "_exponent.csv";
    write_text_atomic(out_json, result.dump(2) + "\n");
    write_exponent_csv(exponent, out_csv);
    write_manifest(out_json, json::array({"transform", dist_path, map_path, out_prefix}),
                   {dist_path, map_path}, {out_json, out_csv}, json::object());
    return 0;
}

int cmd_classify(const std::string& dist_path, double beta,
                 const std::optional<std::string>& rho_path, const std::string& out_path) {
    const LevyTriple nu = parse_distribution(load_json(dist_path));
    const ClassificationReport rep = check_iv(nu, beta);
    json out = classification_to_json(rep);
    out["beta"] = beta;
    if (rep.decision == Decision::yes && rep.witness) {
        const auto fac = factorization_check(nu, *rep.witness, beta);
        out["factorization"] = {{"pass", fac.pass}, {"sup_gap", fac.sup_gap}};
    }
    if (rho_path) {
        const LevyTriple rho = parse_distribution(load_json(*rho_path));
        const auto fac = factorization_check(nu, rho, beta);
        const auto cor = corollary2_check(nu, rho, beta);
        out["given_rho"] = {{"factorization_pass", fac.pass},
                            {"factorization_gap", fac.sup_gap},
                            {"corollary2_pass", cor.pass},
                            {"shift_margin", cor.shift_margin},
                            {"cov_margin", cor.cov_margin},
                            {"measure_margin", cor.measure_margin}};
    }
    write_text_atomic(out_path, out.dump(2) + "\n");
    std::vector<std::string> inputs{dist_path};
    if (rho_path) inputs.push_back(*rho_path);
    write_manifest(out_path,
                   json::array({"classify", dist_path, std::to_string(beta), out_path}), inputs,
                   {out_path}, json{{"beta", beta}});
    return rep.decision == Decision::inconclusive ? 3 : 0;
}

int cmd_simulate(const SimulateArgs& a) {
    if (a.n <= 0) throw domain_error("usage: --n must be positive");
    const LevyTriple nu = parse_distribution(load_json(a.dist_path));
    const MapRequest req = parse_map_spec(load_json(a.spec_path));
    SimConfig cfg;
    cfg.seed = a.seed;
    cfg.n_samples = a.n;
    cfg.jump_eps = a.eps;
    cfg.n_time_steps = a.steps;
    const SampleBatch batch = sample_integral(req.spec, nu, cfg);
    write_batch_csv(batch, a.out_csv);
    write_manifest(a.out_csv,
                   json::array({"simulate", "--spec", a.spec_path, "--dist", a.dist_path, "--n",
                                std::to_string(a.n), "--seed", std::to_string(a.seed), "--eps",
                                fmt(a.eps), "--steps", std::to_string(a.steps), "--out",
                                a.out_csv}),
                   {a.spec_path, a.dist_path}, {a.out_csv},
                   json{{"seed", a.seed}, {"n", a.n}, {"eps", a.eps}, {"steps", a.steps}});
    return 0;
}

int cmd_maflp(const MaflpArgs& a) {
    if (a.n <= 0) throw domain_error("usage: --n must be positive");
    const LevyTriple nu = parse_distribution(load_json(a.dist_path));
    SimConfig cfg;
    cfg.seed = a.seed;
    cfg.n_samples = a.n;
    cfg.jump_eps = a.eps;
    cfg.n_time_steps = a.steps;
    const SampleBatch batch = sample_maflp(nu, a.alpha, a.t, cfg);
    write_batch_csv(batch, a.out_csv);
    std::vector<std::string> outputs{a.out_csv};
    if (!a.law_out.empty()) {
        write_exponent_csv(z_law(nu, a.alpha, a.t), a.law_out);
        outputs.push_back(a.law_out);
    }
    write_manifest(a.out_csv,
                   json::array({"maflp", "--dist", a.dist_path, "--alpha", fmt(a.alpha), "--t",
                                fmt(a.t), "--n", std::to_string(a.n), "--seed",
                                std::to_string(a.seed), "--eps", fmt(a.eps), "--steps",
                                std::to_string(a.steps), "--out", a.out_csv, "--law-out",
                                a.law_out}),
                   {a.dist_path}, outputs,
                   json{{"alpha", a.alpha}, {"t", a.t}, {"seed", a.seed}, {"n", a.n}});
    return 0;
}

int cmd_verify(const std::string& samples_csv, const std::string& target_path, double confidence,
               const std::string& out_path) {
    const SampleBatch batch = read_batch_csv(samples_csv);
    const CharFn target = parse_target(load_json(target_path));
    const EcfReport rep = compare(batch, target, confidence);
    write_text_atomic(out_path, ecf_report_to_json(rep).dump(2) + "\n");
    write_manifest(out_path,
                   json::array({"verify", "--samples", samples_csv, "--target", target_path,
                                "--confidence", fmt(confidence), "--out", out_path}),
                   {samples_csv, target_path}, {out_path}, json{{"confidence", confidence}});
    return rep.pass ? 0 : 3;
}

int cmd_rerun(const std::string& manifest_path) {
    const json m = load_json(manifest_path);
    const json& cmd = m.at("command");
    const std::string verb = cmd.at(0).get<std::string>();
    auto arg = [&cmd](const std::string& flag) -> std::string {
        for (size_t i = 1; i + 1 < cmd.size(); ++i)
            if (cmd.at(i).get<std::string>() == flag) return cmd.at(i + 1).get<std::string>();
        throw io_error("manifest command missing " + flag);
    };
    if (verb == "simulate") {
        SimulateArgs a;
        a.spec_path = arg("--spec");
        a.dist_path = arg("--dist");
        a.n = std::stoll(arg("--n"));
        a.seed = std::stoull(arg("--seed"));
        a.eps = std::stod(arg("--eps"));
        a.steps = std::stoi(arg("--steps"));
        a.out_csv = arg("--out");
        return cmd_simulate(a);
    }
    if (verb == "maflp") {
        MaflpArgs a;
        a.dist_path = arg("--dist");
        a.alpha = std::stod(arg("--alpha"));
        a.t = std::stod(arg("--t"));
        a.n = std::stoll(arg("--n"));
        a.seed = std::stoull(arg("--seed"));
        a.eps = std::stod(arg("--eps"));
        a.steps = std::stoi(arg("--steps"));
        a.out_csv = arg("--out");
        a.law_out = arg("--law-out");
        return cmd_maflp(a);
    }
    if (verb == "verify")
        return cmd_verify(arg("--samples"), arg("--target"), std::stod(arg("--confidence")),
                          arg("--out"));
    if (verb == "transform") {
        return cmd_transform(cmd.at(1).get<std::string>(), cmd.at(2).get<std::string>(),
                             cmd.at(3).get<std::string>());
    }
    if (verb == "classify")
        return cmd_classify(cmd.at(1).get<std::string>(), std::stod(cmd.at(2).get<std::string>()),
                            std::nullopt, cmd.at(3).get<std::string>());
    throw io_error("manifest has unknown command: " + verb);
}

}  // namespace levy::cli
