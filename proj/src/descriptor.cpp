#include "levy/descriptor.hpp"

#include <algorithm>
#include <cmath>

namespace levy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec parse_vec(const json& j) {
    if (j.is_number()) return {j.get<double>()};
    Vec v;
    for (const auto& x : j) v.push_back(x.get<double>());
    return v;
}

Matrix parse_matrix(const json& j, int dim) {
    if (j.is_number()) {
        Matrix m(1);
        m(0, 0) = j.get<double>();
        return m;
    }
    Matrix m(dim);
    int i = 0;
    for (const auto& row : j) {
        int k = 0;
        for (const auto& x : row) m(i, k++) = x.get<double>();
        ++i;
    }
    return m;
}

LevyTriple parse_family(const json& j) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "gaussian") {
        const auto& jm = j.contains("mean") ? j.at("mean") : json(0.0);
        if (jm.is_number() && !j.contains("covariance"))
            return gaussian_triple(jm.get<double>(), j.value("variance", 1.0));
        Vec mean = parse_vec(jm);
        return gaussian_triple(mean, parse_matrix(j.at("covariance"), static_cast<int>(mean.size())));
    }
    if (fam == "gamma") return gamma_triple(j.at("shape").get<double>(), j.at("rate").get<double>());
    if (fam == "compound_poisson") {
        std::vector<std::pair<Vec, double>> atoms;
        for (const auto& a : j.at("atoms"))
            atoms.emplace_back(parse_vec(a.at("x")), a.value("p", 1.0));
        return compound_poisson_triple(j.at("rate").get<double>(), atoms);
    }
    if (fam == "stable")
        return stable_triple(j.at("alpha").get<double>(), j.value("scale", 1.0),
                             j.value("r_max", kInf));
    throw io_error("unknown family: " + fam);
}

}  // namespace

LevyTriple parse_distribution(const json& j) {
    if (j.contains("family")) return parse_family(j);
    if (!j.contains("triple")) throw io_error("distribution needs \"family\" or \"triple\"");
    const json& t = j.at("triple");
    Vec shift = parse_vec(t.at("shift"));
    const int dim = static_cast<int>(shift.size());
    Matrix cov = t.contains("covariance") ? parse_matrix(t.at("covariance"), dim) : Matrix(dim);
    RadialLevyMeasure m;
    m.dim = dim;
    if (t.contains("measure")) {
        for (const auto& jr : t.at("measure").at("rays")) {
            Ray ray;
            ray.direction = parse_vec(jr.at("direction"));
            const double dn = norm2(ray.direction);
            if (dn > 0)
                for (double& x : ray.direction) x /= dn;
            if (jr.contains("atoms"))
                for (const auto& a : jr.at("atoms"))
                    ray.atoms.push_back({a.at("r").get<double>(), a.at("w").get<double>()});
            std::sort(ray.atoms.begin(), ray.atoms.end(),
                      [](const RadialAtom& a, const RadialAtom& b) { return a.radius < b.radius; });
            if (jr.contains("density")) {
                const json& d = jr.at("density");
                ray.density = make_grid_density(
                    d.at("grid").get<std::vector<double>>(),
                    d.at("values").get<std::vector<double>>(), d.at("tail_lo").get<double>(),
                    d.at("tail_hi").get<double>());
            }
            m.rays.push_back(std::move(ray));
        }
    }
    return make_triple(std::move(shift), std::move(cov), std::move(m));
}

namespace {

json density_to_json(const RadialDensityImpl& d) {
    const auto& bp = d.breakpoints();
    double lo = std::max(1e-9, bp.front() * 1e-2);
    double hi;
    const auto eu = d.upper();
    const double shi = d.support_hi();
    if (shi < kInf) {
        hi = shi;
        lo = std::min(lo, hi * 1e-6);
    } else if (eu.decay > 0) {
        double peak = 0;
        for (double r = lo; r <= bp.back() * 2; r *= 1.3) peak = std::max(peak, d.eval(r));
        hi = bp.back();
        while (d.eval(hi) > peak * 1e-16 && hi < 1e280) hi *= 1.2;
    } else {
        hi = std::max(bp.back(), 1.0) * 1e3;
    }
    const int n = std::max(32, std::min(4096, static_cast<int>(128 * std::log10(hi / lo))));
    std::vector<double> grid(n), vals(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        vals[i] = std::max(d.eval(grid[i]), 0.0);
    }
    auto end_slope = [&](int i0, int i1) {
        if (vals[i0] <= 0 || vals[i1] <= 0) return 0.0;
        return std::log(vals[i1] / vals[i0]) / std::log(grid[i1] / grid[i0]);
    };
    double tail_lo = vals.front() > 0 ? std::max(end_slope(0, 1), -2.99) : 0.0;
    double tail_hi = vals.back() > 0 ? std::min(end_slope(n - 2, n - 1), -1.5) : -2.0;
    if (shi < kInf) tail_hi = -2.0;  // coef is zero beyond anyway
    return json{{"grid", grid}, {"values", vals}, {"tail_lo", tail_lo}, {"tail_hi", tail_hi}};
}

}  // namespace

json distribution_to_json(const LevyTriple& t) {
    json cov = json::array();
    for (int i = 0; i < t.dim; ++i) {
        json row = json::array();
        for (int j = 0; j < t.dim; ++j) row.push_back(t.covariance(i, j));
        cov.push_back(row);
    }
    json rays = json::array();
    for (const auto& ray : t.levy_measure.rays) {
        json jr{{"direction", ray.direction}};
        if (!ray.atoms.empty()) {
            json atoms = json::array();
            for (const auto& a : ray.atoms) atoms.push_back({{"r", a.radius}, {"w", a.weight}});
            jr["atoms"] = atoms;
        }
        if (ray.density) jr["density"] = density_to_json(*ray.density);
        rays.push_back(jr);
    }
    return json{{"triple",
                 {{"shift", t.shift}, {"covariance", cov}, {"measure", {{"rays", rays}}}}}};
}

MapRequest parse_map_spec(const json& j) {
    MapRequest req;
    if (j.contains("transform")) {
        const std::string tr = j.at("transform").get<std::string>();
        if (tr == "jbeta") {
            req.kind = MapRequest::Kind::jbeta;
            req.beta = j.at("beta").get<double>();
            req.spec = jbeta_map_spec(req.beta);
            return req;
        }
        if (tr == "imap") {
            req.kind = MapRequest::Kind::imap;
            req.spec = i_map_spec();
            return req;
        }
        throw io_error("unknown transform: " + tr);
    }
    IntegralMapSpec s;
    const json& k = j.at("kernel");
    const std::string kt = k.at("type").get<std::string>();
    if (kt == "power")
        s.kernel = {KernelSpec::Type::power, k.at("alpha").get<double>(), 1.0, 1.0};
    else if (kt == "exp")
        s.kernel.type = KernelSpec::Type::exponential;
    else if (kt == "maflp_u")
        s.kernel = {KernelSpec::Type::maflp_u, k.at("alpha").get<double>(), k.at("t").get<double>(),
                    1.0};
    else if (kt == "constant")
        s.kernel = {KernelSpec::Type::constant, 1.0, 1.0, k.value("value", 1.0)};
    else
        throw io_error("unknown kernel type: " + kt);
    if (j.contains("time_change")) {
        const json& tc = j.at("time_change");
        const std::string tt = tc.at("type").get<std::string>();
        if (tt == "power")
            s.time_change = {TimeChangeSpec::Type::power, tc.at("beta").get<double>(), 1.0};
        else if (tt == "identity")
            s.time_change.type = TimeChangeSpec::Type::identity;
        else if (tt == "linear")
            s.time_change = {TimeChangeSpec::Type::linear, 1.0, tc.at("c").get<double>()};
        else
            throw io_error("unknown time change: " + tt);
    }
    const json& iv = j.at("interval");
    s.interval.a = iv.at(0).get<double>();
    s.interval.b = iv.at(1).is_string() ? kInf : iv.at(1).get<double>();
    s.validate();
    req.spec = s;
    // recognize the closed-form maps
    if (s.kernel.type == KernelSpec::Type::power && s.kernel.alpha == 1.0 &&
        s.time_change.type == TimeChangeSpec::Type::power && s.interval.a == 0.0 &&
        s.interval.b == 1.0) {
        req.kind = MapRequest::Kind::jbeta;
        req.beta = s.time_change.beta;
    } else if (s.kernel.type == KernelSpec::Type::exponential &&
               s.time_change.type == TimeChangeSpec::Type::identity && s.interval.a == 0.0 &&
               s.interval.half_line()) {
        req.kind = MapRequest::Kind::imap;
    }
    return req;
}

json map_spec_to_json(const IntegralMapSpec& s) {
    json k;
    switch (s.kernel.type) {
        case KernelSpec::Type::power:
            k = {{"type", "power"}, {"alpha", s.kernel.alpha}};
            break;
        case KernelSpec::Type::exponential:
            k = {{"type", "exp"}};
            break;
        case KernelSpec::Type::maflp_u:
            k = {{"type", "maflp_u"}, {"alpha", s.kernel.alpha}, {"t", s.kernel.t0}};
            break;
        case KernelSpec::Type::constant:
            k = {{"type", "constant"}, {"value", s.kernel.value}};
            break;
    }
    json tc;
    switch (s.time_change.type) {
        case TimeChangeSpec::Type::power:
            tc = {{"type", "power"}, {"beta", s.time_change.beta}};
            break;
        case TimeChangeSpec::Type::identity:
            tc = {{"type", "identity"}};
            break;
        case TimeChangeSpec::Type::linear:
            tc = {{"type", "linear"}, {"c", s.time_change.c}};
            break;
    }
    json iv = json::array({s.interval.a});
    if (s.interval.half_line())
        iv.push_back("inf");
    else
        iv.push_back(s.interval.b);
    return json{{"kernel", k}, {"time_change", tc}, {"interval", iv}};
}

json classification_to_json(const ClassificationReport& r) {
    json j;
    j["decision"] = r.decision == Decision::yes  ? "yes"
                    : r.decision == Decision::no ? "no"
                                                 : "inconclusive";
    j["log_moment"] =
        std::isfinite(r.log_moment_value) ? json(r.log_moment_value) : json("inf");
    j["margins"] = r.numeric_margins;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.failure_evidence) {
        const auto& e = *r.failure_evidence;
        j["failure_evidence"] = {{"ray", e.ray},
                                 {"interval", {e.r_lo, std::isfinite(e.r_hi) ? json(e.r_hi) : json("inf")}},
                                 {"mass", e.mass}};
    }
    if (r.witness) j["witness"] = distribution_to_json(*r.witness);
    return j;
}

json ecf_report_to_json(const EcfReport& r) {
    json probes = json::array(), vals = json::array(), targets = json::array();
    for (size_t i = 0; i < r.probes.size(); ++i) {
        probes.push_back(r.probes[i]);
        vals.push_back({r.ecf_values[i].real(), r.ecf_values[i].imag()});
        targets.push_back({r.target_values[i].real(), r.target_values[i].imag()});
    }
    return json{{"pass", r.pass},        {"band", r.band},
                {"confidence", r.confidence}, {"n_samples", r.n_samples},
                {"worst_gap", r.worst_gap},   {"probes", probes},
                {"ecf", vals},           {"target", targets},
                {"gaps", r.gaps}};
}

CharFn parse_target(const json& j) {
    if (j.contains("maflp")) {
        const json& m = j.at("maflp");
        return z_law(parse_distribution(m.at("dist")), m.at("alpha").get<double>(),
                     m.at("t").get<double>());
    }
    if (j.contains("map")) {
        const auto req = parse_map_spec(j.at("map"));
        const LevyTriple t = parse_distribution(j.at("dist"));
        switch (req.kind) {
            case MapRequest::Kind::jbeta:
                return exponent_of(jbeta_transform(t, req.beta));
            case MapRequest::Kind::imap:
                return exponent_of(i_transform(t));
            case MapRequest::Kind::general:
                return map_exponent(req.spec, exponent_of(t));
        }
    }
    return exponent_of(parse_distribution(j));
}

}  // namespace levy
