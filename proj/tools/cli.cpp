#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cosym/rng.hpp"

namespace cosym::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (...) {
        throw ParseError("key '" + key + "': cannot parse number '" + value +
                         "'");
    }
    if (pos != value.size())
        throw ParseError("key '" + key + "': trailing characters in '" +
                         value + "'");
    if (!std::isfinite(v))
        throw ParseError("key '" + key + "': non-finite value");
    return v;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

Config Config::parse(const std::string& text) {
    Config c;
    c.raw_ = text;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) +
                             ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("config line " + std::to_string(lineno) +
                             ": empty key");
        if (c.kv_.count(key))
            throw ParseError("config: duplicate key '" + key + "'");
        c.kv_[key] = value;
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get(const std::string& key,
                        const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end())
        throw ParseError("config: missing required key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : parse_double(key, it->second);
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        return std::stoull(it->second);
    } catch (...) {
        throw ParseError("key '" + key + "': cannot parse integer");
    }
}

std::size_t Config::get_size(const std::string& key,
                             std::size_t fallback) const {
    return static_cast<std::size_t>(get_u64(key, fallback));
}

std::vector<double> Config::get_vector(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& tok : split_ws(require(key)))
        out.push_back(parse_double(key, tok));
    return out;
}

void Config::reject_unknown_keys() const {
    static const char* exact[] = {
        "system", "state", "field",
        "integrator.method", "integrator.step", "integrator.tol",
        "integrator.max_step",
        "time.t0", "time.t1", "time.grid",
        "rep.seed_state", "rep.tol",
        "stability.radius", "stability.samples",
        "verify.tol", "verify.samples",
        "custom.n", "custom.h",
        "three_body.mu", "three_body.varpi",
        "two_level.B0", "two_level.B1", "two_level.B2", "two_level.B3",
        "two_level.envelope", "two_level.envelope.a", "two_level.envelope.b",
        "two_level.rotating",
        "n_level.n", "n_level.diag", "n_level.envelope", "n_level.envelope.a",
        "n_level.envelope.b",
    };
    for (const auto& [key, value] : kv_) {
        bool ok = false;
        for (const char* k : exact)
            if (key == k) {
                ok = true;
                break;
            }
        if (key.rfind("momentum.J.", 0) == 0) ok = true;
        if (!ok) throw ParseError("config: unknown key '" + key + "'");
    }
}

ScalarField parse_polynomial_field(const DarbouxChart& chart,
                                   const std::string& name,
                                   const std::string& text) {
    struct Term {
        double coeff;
        std::vector<int> exps;
    };
    std::vector<Term> terms;

    // split into signed terms on standalone +/- tokens
    std::vector<std::string> tokens = split_ws(text);
    if (tokens.empty()) throw ParseError("polynomial '" + name + "' is empty");
    std::vector<std::pair<double, std::vector<std::string>>> groups;
    double sign = 1.0;
    groups.push_back({1.0, {}});
    for (const std::string& tok : tokens) {
        if (tok == "+" || tok == "-") {
            sign = tok == "-" ? -1.0 : 1.0;
            groups.push_back({sign, {}});
        } else {
            groups.back().second.push_back(tok);
        }
    }

    auto coord_index = [&](const std::string& var) -> std::size_t {
        if (var == "t") return 0;
        if (var.size() >= 2 && (var[0] == 'q' || var[0] == 'p')) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(var.substr(1));
            } catch (...) {
                throw ParseError("polynomial: bad coordinate '" + var + "'");
            }
            if (idx == 0 || idx > chart.n)
                throw ParseError("polynomial: coordinate '" + var +
                                 "' outside the chart (n = " +
                                 std::to_string(chart.n) + ")");
            return var[0] == 'q' ? chart.q_index(idx - 1)
                                 : chart.p_index(idx - 1);
        }
        throw ParseError("polynomial: unknown token '" + var + "'");
    };

    for (const auto& [gsign, factors] : groups) {
        if (factors.empty())
            throw ParseError("polynomial '" + name + "': dangling sign");
        Term term;
        term.coeff = gsign;
        term.exps.assign(chart.dim(), 0);
        for (const std::string& f : factors) {
            if ((f[0] >= '0' && f[0] <= '9') || f[0] == '.' || f[0] == '-' ||
                f[0] == '+') {
                term.coeff *= parse_double("polynomial", f);
                continue;
            }
            const auto caret = f.find('^');
            const std::string var = caret == std::string::npos
                                        ? f
                                        : f.substr(0, caret);
            int exp = 1;
            if (caret != std::string::npos) {
                try {
                    exp = std::stoi(f.substr(caret + 1));
                } catch (...) {
                    throw ParseError("polynomial: bad exponent in '" + f + "'");
                }
                if (exp < 0)
                    throw ParseError("polynomial: negative exponent in '" + f +
                                     "'");
            }
            term.exps[coord_index(var)] += exp;
        }
        terms.push_back(term);
    }

    return ScalarField(chart, name, [terms](const std::vector<Jet>& c) {
        Jet out(0.0, c[0].dim());
        for (const auto& term : terms) {
            Jet m(term.coeff, c[0].dim());
            for (std::size_t i = 0; i < c.size(); ++i)
                if (term.exps[i] > 0) m = m * pow(c[i], term.exps[i]);
            out += m;
        }
        return out;
    });
}

namespace {

Envelope envelope_from(const Config& config, const std::string& prefix) {
    const std::string kind = config.get(prefix, "constant");
    const double a = config.get_double(prefix + ".a", 0.5);
    const double b = config.get_double(prefix + ".b", 1.0);
    if (kind == "constant") return Envelope::constant();
    if (kind == "one_plus_sin") return Envelope::one_plus_sin(a, b);
    if (kind == "exp_decay") return Envelope::exp_decay(a);
    throw ParseError("unknown envelope '" + kind + "'");
}

std::optional<SymmetryAction> momentum_override(const Config& config,
                                                const DarbouxChart& chart) {
    std::vector<ScalarField> js;
    for (std::size_t i = 1;; ++i) {
        const std::string key = "momentum.J." + std::to_string(i);
        if (!config.has(key)) break;
        js.push_back(parse_polynomial_field(chart, "J" + std::to_string(i),
                                            config.require(key)));
    }
    if (js.empty()) return std::nullopt;
    SymmetryAction action;
    action.algebra = LieAlgebraSpec::abelian(js.size());
    action.J = std::move(js);
    return action;
}

HermitianPath path_from(const Config& config, const std::string& kind) {
    if (kind == "two_level") {
        const double b0 = config.get_double("two_level.B0", 0.0);
        const double b1 = config.get_double("two_level.B1", 0.0);
        const double b2 = config.get_double("two_level.B2", 0.0);
        const double b3 = config.get_double("two_level.B3", 1.0);
        if (config.has("two_level.rotating")) {
            // H(t) = B0 I + B1 sin(wt) S1 + B2 S2 + B3 cos(wt) S3: the
            // eigenvector directions genuinely move, so no ray certifies.
            const double omega = config.get_double("two_level.rotating", 1.0);
            return HermitianPath::free_form(2, [=](double t) {
                CMatrix m(2);
                const CMatrix i2 = identity2();
                const CMatrix s1 = pauli_s(1), s2 = pauli_s(2),
                              s3 = pauli_s(3);
                for (std::size_t k = 0; k < 4; ++k)
                    m.a[k] = b0 * i2.a[k] + b1 * std::sin(omega * t) * s1.a[k] +
                             b2 * s2.a[k] + b3 * std::cos(omega * t) * s3.a[k];
                return m;
            });
        }
        return two_level_path(b0, b1, b2, b3,
                              envelope_from(config, "two_level.envelope"));
    }
    const std::vector<double> diag = config.get_vector("n_level.diag");
    const std::size_t n = config.get_size("n_level.n", diag.size());
    if (n != diag.size())
        throw ParseError("n_level.diag must list n entries");
    CMatrix base(n);
    for (std::size_t i = 0; i < n; ++i) base(i, i) = diag[i];
    return HermitianPath::from_base(base,
                                    envelope_from(config, "n_level.envelope"));
}

} // namespace

SystemBundle build_system(const Config& config) {
    config.reject_unknown_keys();
    SystemBundle bundle;
    bundle.kind = config.require("system");

    if (bundle.kind == "harmonic") {
        bundle.chart = DarbouxChart{1, "harmonic"};
        bundle.h = ScalarField(bundle.chart, "h_harmonic",
                               [](const std::vector<Jet>& c) {
                                   return 0.5 * (sq(c[1]) + sq(c[2]));
                               });
        bundle.default_state = {0.0, 1.0, 0.0};
    } else if (bundle.kind == "two_level" || bundle.kind == "n_level") {
        const HermitianPath path = path_from(config, bundle.kind);
        bundle.chart = quantum_chart(path.n);
        if (path.separable) bundle.h = schrodinger_field(path);
        bundle.action = u1_action(path.n);
        bundle.default_state = Vec(bundle.chart.dim(), 0.0);
        bundle.default_state[1] = 1.0;
    } else if (bundle.kind == "three_body") {
        ThreeBodyParams p;
        p.mu = config.get_double("three_body.mu", 0.99);
        p.varpi = config.get_double("three_body.varpi", 1.0);
        p.validate();
        bundle.three_body = p;
        bundle.chart = three_body_chart();
        bundle.h = three_body_hamiltonian(p);
        bundle.default_state = {0.0, 1.5, 0.0, 0.0, p.varpi * 1.5 * 1.5};
    } else if (bundle.kind == "custom_polynomial") {
        const std::size_t n = config.get_size("custom.n", 1);
        bundle.chart = DarbouxChart{n, "custom"};
        bundle.h = parse_polynomial_field(bundle.chart, "h",
                                          config.require("custom.h"));
        bundle.default_state = Vec(bundle.chart.dim(), 0.0);
    } else {
        throw ParseError("unknown system '" + bundle.kind + "'");
    }

    if (auto action = momentum_override(config, bundle.chart))
        bundle.action = std::move(action);
    if (bundle.action) bundle.action->base_chart = bundle.chart;
    return bundle;
}

namespace {

std::vector<Vec> seeded_states(Rng& rng, const DarbouxChart& chart,
                               std::size_t count, double lo, double hi) {
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < count; ++i)
        pts.push_back(rng.uniform_vec(chart.dim(), lo, hi));
    return pts;
}

std::vector<double> time_grid_from(const Config& config) {
    const double t0 = config.get_double("time.t0", 0.0);
    const double t1 = config.get_double("time.t1", 10.0);
    const std::size_t count = config.get_size("time.grid", 9);
    std::vector<double> g;
    if (count == 0 || t1 < t0) return g;
    if (count == 1) return {t0};
    for (std::size_t i = 0; i < count; ++i)
        g.push_back(t0 + (t1 - t0) * double(i) / double(count - 1));
    return g;
}

IntegratorConfig integrator_from(const Config& config) {
    const std::string method = config.get("integrator.method", "rk45");
    if (method == "rk4")
        return IntegratorConfig::rk4(config.get_double("integrator.step", 1e-3));
    if (method != "rk45")
        throw ParseError("unknown integrator.method '" + method + "'");
    return IntegratorConfig::rk45(config.get_double("integrator.tol", 1e-10),
                                  config.get_double("integrator.max_step", 0.1));
}

FieldKind field_kind_from(const Config& config) {
    const std::string kind = config.get("field", "evolution");
    if (kind == "evolution") return FieldKind::evolution;
    if (kind == "hamiltonian") return FieldKind::hamiltonian;
    if (kind == "gradient") return FieldKind::gradient;
    throw ParseError("unknown field kind '" + kind + "'");
}

Vec spatial_of(const Vec& state) {
    return Vec(state.begin() + 1, state.end());
}

} // namespace

namespace {

void require_hamiltonian(const SystemBundle& bundle) {
    if (!bundle.h.valid())
        throw ParseError("system '" + bundle.kind +
                         "' has no exact-jet Hamiltonian in this "
                         "configuration (rotating paths support `rep` only)");
}

} // namespace

CommandResult cmd_verify(const Config& config, std::uint64_t seed) {
    CommandResult result;
    const SystemBundle bundle = build_system(config);
    require_hamiltonian(bundle);
    const double tol = config.get_double("verify.tol", 1e-9);
    const std::size_t samples = config.get_size("verify.samples", 100);
    Rng rng(seed);
    bool pass = true;

    if (bundle.kind == "three_body") {
        const ReducedThreeBody red = reduce(*bundle.three_body);
        std::vector<Vec> pts;
        for (std::size_t i = 0; i < 50; ++i)
            pts.push_back(Vec{rng.uniform(-1, 1), rng.uniform(1.3, 1.7),
                              rng.uniform(0, 2 * M_PI), rng.uniform(-0.2, 0.2),
                              rng.uniform(0.8, 1.2)});
        const auto rep = verify_reduction_identities(red, pts, 1e-10);
        result.report["verify.k_formula_residual"] =
            fmt(rep.max_k_formula_residual);
        result.report["verify.pushforward_residual"] =
            fmt(rep.max_pushforward_residual);
        result.report["verify.time_dependence"] = fmt(rep.max_time_dependence);
        pass = rep.pass;
    } else if (bundle.action) {
        const auto pts = seeded_states(rng, bundle.chart, samples, -1.5, 1.5);
        const auto mm = verify_momentum_map(*bundle.action, bundle.h, pts, tol);
        result.report["verify.form_residual"] = fmt(mm.max_form_residual);
        result.report["verify.reeb_residual"] = fmt(mm.max_reeb_residual);
        result.report["verify.eta_residual"] = fmt(mm.max_eta_residual);
        result.report["verify.invariance_residual"] =
            fmt(mm.max_invariance_residual);
        pass = mm.pass;

        const auto cocycle = cocycle_form(*bundle.action, pts);
        result.report["verify.cocycle_deviation"] = fmt(cocycle.max_deviation);
        pass = pass && cocycle.constant;

        // tangency at a seeded level-set point
        Vec x = bundle.default_state;
        x[1] = 1.0;
        const Vec mu = bundle.action->momentum(x);
        const auto tangency = tangency_check(*bundle.action, mu, x);
        result.report["verify.tangency_regular"] =
            tangency.regular ? "1" : "0";
        result.report["verify.tangency_gap"] =
            fmt(std::max(tangency.gap_item2, tangency.gap_item3));
        pass = pass && tangency.pass;

        if (bundle.kind == "two_level" && mm.pass && mu[0] > 0.0) {
            const double mu0 = mu[0];
            const ReductionChart chart = hopf_chart(mu0);
            std::vector<Vec> us;
            for (int i = 0; i < 25; ++i)
                us.push_back(Vec{rng.uniform(-1, 1),
                                 rng.uniform(0.1, M_PI / 2 - 0.1),
                                 rng.uniform(0, 2 * M_PI),
                                 rng.uniform(0, 2 * M_PI)});
            const auto red = verify_reduction(chart, *bundle.action, us, tol);
            result.report["verify.reduction_omega_residual"] =
                fmt(red.max_omega_residual);
            result.report["verify.reduction_eta_residual"] =
                fmt(red.max_eta_residual);
            pass = pass && red.pass;
        }
    } else {
        // no symmetry declared: structural Poisson checks on the chart
        const auto pts = seeded_states(rng, bundle.chart, samples, -1.5, 1.5);
        double worst = 0.0;
        DarbouxChart chart = bundle.chart;
        ScalarField q1(chart, "q1",
                       [](const std::vector<Jet>& c) { return c[1]; });
        ScalarField p1(chart, "p1", [chart](const std::vector<Jet>& c) {
            return c[chart.p_index(0)];
        });
        for (const Vec& x : pts) {
            worst = std::max(worst,
                             std::abs(poisson_bracket(q1, p1, x) - 1.0));
            worst = std::max(worst,
                             std::abs(poisson_bracket(bundle.h, bundle.h, x)));
        }
        std::vector<Vec> spts;
        for (std::size_t i = 0; i < 20; ++i)
            spts.push_back(rng.uniform_vec(bundle.chart.dim() + 1, -1, 1));
        const auto symp = symplectization_check(q1, bundle.h, spts, 1e-9);
        result.report["verify.bracket_residual"] = fmt(worst);
        result.report["verify.symplectization_residual"] =
            fmt(symp.max_bracket_residual);
        pass = worst <= tol && symp.pass;
    }

    result.report["verify.pass"] = pass ? "1" : "0";
    result.exit_code = pass ? 0 : 1;
    return result;
}

CommandResult cmd_integrate(const Config& config, std::uint64_t seed) {
    (void)seed;
    CommandResult result;
    const SystemBundle bundle = build_system(config);
    require_hamiltonian(bundle);
    Vec x0 = bundle.default_state;
    if (config.has("state")) x0 = config.get_vector("state");
    bundle.chart.check_point(x0.size());

    const double t0 = config.get_double("time.t0", x0[0]);
    const double t1 = config.get_double("time.t1", t0 + 10.0);
    const auto cfg = integrator_from(config);
    const FieldKind kind = field_kind_from(config);

    const Trajectory traj = integrate(kind, bundle.h, x0, t0, t1, cfg);
    result.files.emplace_back("trajectory.csv",
                              trajectory_csv(traj, bundle.chart));

    std::vector<ScalarField> monitored{bundle.h};
    if (bundle.action)
        for (const auto& j : bundle.action->J) monitored.push_back(j);
    if (bundle.three_body) {
        const ReducedThreeBody red = reduce(*bundle.three_body);
        const ScalarField k = red.k;
        const double varpi = bundle.three_body->varpi;
        monitored.push_back(ScalarField(
            bundle.chart, "k_rotating", [k, varpi](const std::vector<Jet>& c) {
                std::vector<Jet> u = c;
                u[2] = c[2] - varpi * c[0];
                return k.eval_jets(u);
            }));
    }
    const auto series = monitor(traj, monitored);
    std::ostringstream drift;
    drift.precision(17);
    drift << "s";
    for (const auto& s : series) drift << "," << s.name;
    drift << "\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        drift << traj.times[i];
        for (const auto& s : series)
            drift << "," << (s.values[i] - s.values.front());
        drift << "\n";
    }
    result.files.emplace_back("drift.csv", drift.str());

    for (const auto& s : series)
        result.report["integrate.drift." + s.name] = fmt(s.max_drift);
    result.report["integrate.steps"] = std::to_string(traj.times.size());
    {
        std::ostringstream os;
        os.precision(17);
        for (double v : traj.back()) os << v << " ";
        result.report["integrate.final_state"] = trim(os.str());
    }
    switch (traj.termination) {
    case Trajectory::Termination::completed:
        result.report["integrate.termination"] = "completed";
        break;
    case Trajectory::Termination::domain_error: {
        result.report["integrate.termination"] = "domain_error";
        std::ostringstream os;
        os.precision(17);
        for (double v : traj.terminal_point) os << v << " ";
        result.report["integrate.terminal_point"] = trim(os.str());
        result.exit_code = 1;
        break;
    }
    case Trajectory::Termination::step_underflow:
        result.report["integrate.termination"] = "step_underflow";
        result.exit_code = 1;
        break;
    }
    return result;
}

CommandResult cmd_rep(const Config& config, std::uint64_t seed) {
    (void)seed;
    CommandResult result;
    const SystemBundle bundle = build_system(config);
    const double tol = config.get_double("rep.tol", 1e-8);
    std::vector<double> grid = time_grid_from(config);
    if (grid.empty()) throw ParseError("rep: empty time grid");

    if (bundle.kind == "three_body") {
        const ThreeBodyParams p = *bundle.three_body;
        auto points = solve_collinear(p);
        for (auto& lp : solve_triangular(p)) points.push_back(lp);
        bool pass = true;
        const std::vector<double> times{grid.front(),
                                        0.5 * (grid.front() + grid.back()),
                                        grid.back()};
        for (auto& lp : points) {
            const auto res = gradient_rep_residual(p, lp, times);
            lp.residual_field = res.field_residual;
            pass = pass && res.field_residual <= tol;
            result.report["rep." + to_string(lp.label) + ".r"] = fmt(lp.r);
            result.report["rep." + to_string(lp.label) + ".residual"] =
                fmt(res.field_residual);
        }
        result.files.emplace_back("lagrange.csv", lagrange_csv(points));
        result.report["rep.count"] = std::to_string(points.size());
        result.exit_code = pass ? 0 : 1;
        return result;
    }

    if (bundle.kind == "two_level" || bundle.kind == "n_level") {
        const HermitianPath path = path_from(config, bundle.kind);
        const auto certify = rep_eigenvector_certify(path, grid, 1e-9);
        std::ostringstream os;
        os.precision(17);
        os << "rays " << certify.rays.size() << "\n";
        for (const auto& ray : certify.rays) {
            os << "psi";
            for (const auto& z : ray.psi)
                os << " " << z.real() << " " << z.imag();
            os << "\neigen_residual " << ray.eigen_residual
               << "\nrep_agreement " << ray.rep_agreement << "\n";
        }
        if (certify.degenerate_spectrum) os << "degenerate_spectrum 1\n";
        result.files.emplace_back("candidates.txt", os.str());
        result.report["rep.rays"] = std::to_string(certify.rays.size());
        result.report["rep.degenerate"] =
            certify.degenerate_spectrum ? "1" : "0";
        result.exit_code = certify.rays.empty() ? 1 : 0;
        return result;
    }

    // harmonic / custom: Lagrange-multiplier solve from the configured seed
    SymmetryAction action;
    action.algebra = LieAlgebraSpec::abelian(0);
    action.base_chart = bundle.chart;
    if (bundle.action) action = *bundle.action;
    Vec z0 = spatial_of(bundle.default_state);
    if (config.has("rep.seed_state")) z0 = config.get_vector("rep.seed_state");
    const REPCandidate cand = find_rep(bundle.h, action, z0, grid, tol);
    result.files.emplace_back("candidates.txt", cand.to_text());
    result.report["rep.certified"] = cand.certified ? "1" : "0";
    result.report["rep.residual"] = fmt(cand.max_residual());
    result.exit_code = cand.certified ? 0 : 1;
    return result;
}

CommandResult cmd_stability(const Config& config, std::uint64_t seed) {
    (void)seed;
    CommandResult result;
    const SystemBundle bundle = build_system(config);
    require_hamiltonian(bundle);
    if (bundle.kind == "three_body")
        throw ParseError("stability: classification of the three-body "
                         "Lagrange points is out of scope");

    const std::vector<double> grid = time_grid_from(config);
    if (grid.empty()) throw ParseError("stability: empty time grid");

    SymmetryAction action;
    action.algebra = LieAlgebraSpec::abelian(0);
    action.base_chart = bundle.chart;
    if (bundle.action) action = *bundle.action;

    Vec z0 = spatial_of(bundle.default_state);
    if (config.has("rep.seed_state")) z0 = config.get_vector("rep.seed_state");
    const double rep_tol = config.get_double("rep.tol", 1e-8);
    const REPCandidate cand = find_rep(bundle.h, action, z0, grid, rep_tol);
    if (!cand.certified) {
        result.report["stability.error"] = "candidate not certified";
        result.exit_code = 1;
        return result;
    }
    Vec state(bundle.chart.dim());
    state[0] = grid.front();
    std::copy(cand.z_e.begin(), cand.z_e.end(), state.begin() + 1);
    const Vec mu = action.momentum(state);

    const double radius = config.get_double("stability.radius", 0.3);
    const std::size_t samples = config.get_size("stability.samples", 200);
    SpectralScan scan;
    try {
        scan = spectral_scan(bundle.h, action, cand, mu, grid, radius, samples);
    } catch (const Error& e) {
        result.report["stability.error"] = e.what();
        result.exit_code = 1;
        return result;
    }
    const StabilityVerdict verdict = classify(scan);
    result.files.emplace_back("scan.csv", scan.to_csv());
    result.files.emplace_back("verdict.txt", verdict.to_text());
    result.report["stability.inf_lambda_min"] = fmt(scan.inf_lambda_min);
    result.report["stability.sup_lambda_max"] = fmt(scan.sup_lambda_max);
    result.report["stability.c"] = fmt(scan.c_estimate);
    switch (verdict.kind) {
    case StabilityKind::stable_from_t0:
        result.report["stability.verdict"] = "stable_from_t0";
        break;
    case StabilityKind::uniformly_stable_from_t0:
        result.report["stability.verdict"] = "uniformly_stable_from_t0";
        break;
    case StabilityKind::indeterminate:
        result.report["stability.verdict"] = "indeterminate";
        break;
    }
    result.exit_code = 0;
    return result;
}

void write_atomic(const std::string& dir, const std::string& name,
                  const std::string& content) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path target = fs::path(dir) / name;
    const fs::path tmp = fs::path(dir) / (name + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, target);
}

int run_cli(int argc, const char* const* argv) {
    const std::string usage =
        "usage: cosym <verify|integrate|rep|stability> --config <path> "
        "[--out <dir>] [--seed <u64>]\n";
    if (argc < 2) {
        std::fprintf(stderr, "%s", usage.c_str());
        return 2;
    }
    const std::string command = argv[1];
    std::string config_path, out_dir = ".";
    std::uint64_t seed = kDefaultSeed;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                throw ParseError("missing value after " + arg);
            }
            return argv[++i];
        };
        try {
            if (arg == "--config") config_path = next();
            else if (arg == "--out") out_dir = next();
            else if (arg == "--seed") seed = std::stoull(next());
            else throw ParseError("unknown argument '" + arg + "'");
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n%s", e.what(), usage.c_str());
            return 2;
        }
    }
    if (config_path.empty()) {
        std::fprintf(stderr, "--config is required\n%s", usage.c_str());
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    CommandResult result;
    Config config;
    try {
        config = Config::load(config_path);
        if (command == "verify") result = cmd_verify(config, seed);
        else if (command == "integrate") result = cmd_integrate(config, seed);
        else if (command == "rep") result = cmd_rep(config, seed);
        else if (command == "stability") result = cmd_stability(config, seed);
        else {
            std::fprintf(stderr, "unknown command '%s'\n%s", command.c_str(),
                         usage.c_str());
            return 2;
        }
    } catch (const ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    result.report["command"] = command;
    result.report["config"] = config_path;
    result.report["digest"] = hex64(fnv1a(config.raw_text()));
    result.report["exit"] = std::to_string(result.exit_code);
    result.report["seed"] = std::to_string(seed);
    result.report["wall_ms"] = std::to_string(elapsed);

    std::ostringstream report;
    for (const auto& [key, value] : result.report)
        report << key << " " << value << "\n";
    try {
        for (const auto& [name, content] : result.files)
            write_atomic(out_dir, name, content);
        write_atomic(out_dir, "report.txt", report.str());
    } catch (const Error& e) {
        std::fprintf(stderr, "output error: %s\n", e.what());
        return 1;
    }
    return result.exit_code;
}

} // namespace cosym::cli
