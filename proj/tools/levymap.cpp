// levymap: apply random integral mappings to infinitely divisible laws,
// classify selfdecomposability, simulate MAFLP marginals, verify samples.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "levy/cli.hpp"
#include "levy/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("LEVYMAP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
    CLI::App app{"numerical engine for Levy-Khintchine triples and random integral mappings"};
    app.set_version_flag("--version", levy::kVersion);
    app.require_subcommand(1);

    std::string dist, map, out, rho, samples, target, manifest;
    double beta = 1.0, confidence = 3.0;
    levy::cli::SimulateArgs sim;
    levy::cli::MaflpArgs maflp;

    auto* t = app.add_subcommand("transform", "apply a random integral mapping to a law");
    t->add_option("--dist", dist, "distribution descriptor json")->required();
    t->add_option("--map", map, "map spec json")->required();
    t->add_option("--out", out, "output prefix")->required();

    auto* c = app.add_subcommand("classify", "decide selfdecomposability of J^beta(nu)");
    c->add_option("--dist", dist, "distribution descriptor json")->required();
    c->add_option("--beta", beta, "beta parameter")->required();
    c->add_option("--rho", rho, "optional candidate rho descriptor json");
    c->add_option("--out", out, "report json path")->required();

    auto* s = app.add_subcommand("simulate", "sample a random integral by Riemann-Stieltjes sums");
    s->add_option("--spec", sim.spec_path, "map spec json")->required();
    s->add_option("--dist", sim.dist_path, "distribution descriptor json")->required();
    s->add_option("--n", sim.n, "number of samples")->required();
    s->add_option("--seed", sim.seed, "rng seed");
    s->add_option("--eps", sim.eps, "small-jump cutoff");
    s->add_option("--steps", sim.steps, "partition size");
    s->add_option("--out", sim.out_csv, "samples csv path")->required();

    auto* z = app.add_subcommand("maflp", "sample MAFLP marginals Z(t)");
    z->add_option("--dist", maflp.dist_path, "distribution descriptor json")->required();
    z->add_option("--alpha", maflp.alpha, "kernel exponent in (0,1/2)")->required();
    z->add_option("--t", maflp.t, "time point")->required();
    z->add_option("--n", maflp.n, "number of samples")->required();
    z->add_option("--seed", maflp.seed, "rng seed");
    z->add_option("--eps", maflp.eps, "small-jump cutoff");
    z->add_option("--steps", maflp.steps, "partition size");
    z->add_option("--out", maflp.out_csv, "samples csv path")->required();
    z->add_option("--law-out", maflp.law_out, "optional z_law exponent table csv");

    auto* v = app.add_subcommand("verify", "compare samples against an analytic exponent");
    v->add_option("--samples", samples, "samples csv")->required();
    v->add_option("--target", target, "target descriptor json")->required();
    v->add_option("--confidence", confidence, "band multiplier c in c/sqrt(n)");
    v->add_option("--out", out, "report json path")->required();

    auto* r = app.add_subcommand("rerun", "re-execute a command from its manifest");
    r->add_option("manifest", manifest, "manifest json path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (t->parsed()) return levy::cli::cmd_transform(dist, map, out);
        if (c->parsed())
            return levy::cli::cmd_classify(
                dist, beta, rho.empty() ? std::nullopt : std::make_optional(rho), out);
        if (s->parsed()) return levy::cli::cmd_simulate(sim);
        if (z->parsed()) return levy::cli::cmd_maflp(maflp);
        if (v->parsed()) return levy::cli::cmd_verify(samples, target, confidence, out);
        if (r->parsed()) return levy::cli::cmd_rerun(manifest);
    } catch (const levy::error& e) {
        std::cerr << "levymap: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "levymap: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
