#include "osc/models.hpp"

#include "osc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace osc {

namespace {

constexpr double kPi = std::numbers::pi;

double param(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw Error(ErrorKind::Config, "missing model parameter '" + key + "'");
    return it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Kinetics

State Brusselator::operator()(const State& u, double, double) const noexcept {
    const double u1sq_u2 = u[0] * u[0] * u[1];
    return {B + u1sq_u2 - (A + 1.0) * u[0], A * u[0] - u1sq_u2};
}

State GrayScott::operator()(const State& u, double, double) const noexcept {
    const double u1sq_u2 = u[0] * u[0] * u[1];
    return {F * (1.0 - u[0]) - u1sq_u2, u1sq_u2 - (F + k) * u[1]};
}

State GiererMeinhardt::operator()(const State& u, double x, double y) const {
    if (!(std::abs(u[1]) >= kInhibitorFloor)) {
        std::ostringstream msg;
        msg << "Gierer-Meinhardt kinetics undefined: |u2| = " << std::abs(u[1]) << " < " << kInhibitorFloor
            << " at (" << x << ", " << y << ")";
        throw Error(ErrorKind::Kinetics, msg.str());
    }
    const double u1sq = u[0] * u[0];
    return {u1sq / u[1] - u[0], u1sq / (eps_kinetic * mu) - u[1] / mu};
}

State Schnakenberg::operator()(const State& u, double, double) const noexcept {
    const double u1sq_u2 = u[0] * u[0] * u[1];
    return {gamma * (a - u[0] + u1sq_u2), gamma * (b - u1sq_u2)};
}

State evaluate(const Kinetics& kinetics, const State& u, double x, double y) {
    return std::visit([&](const auto& f) { return f(u, x, y); }, kinetics);
}

// ---------------------------------------------------------------------------
// CosineModeSolution

double CosineModeSolution::temporal(double t) const noexcept { return std::cos(omega * t); }

double CosineModeSolution::temporal_rate(double t) const noexcept { return -omega * std::sin(omega * t); }

double CosineModeSolution::spatial(int c, double x, double y) const noexcept {
    return std::cos(kx[c] * kPi * x) * std::cos(ky[c] * kPi * y);
}

double CosineModeSolution::laplacian_factor(int c) const noexcept {
    return -kPi * kPi * (kx[c] * kx[c] + ky[c] * ky[c]);
}

State CosineModeSolution::value(double x, double y, double t) const noexcept {
    const double tt = temporal(t);
    return {tt * spatial(0, x, y), tt * spatial(1, x, y)};
}

State CosineModeSolution::time_derivative(double x, double y, double t) const noexcept {
    const double tt = temporal_rate(t);
    return {tt * spatial(0, x, y), tt * spatial(1, x, y)};
}

State CosineModeSolution::laplacian(double x, double y, double t) const noexcept {
    const double tt = temporal(t);
    return {tt * laplacian_factor(0) * spatial(0, x, y), tt * laplacian_factor(1) * spatial(1, x, y)};
}

State CosineModeSolution::grad_x(double x, double y, double t) const noexcept {
    const double tt = temporal(t);
    State g{};
    for (int c = 0; c < 2; ++c) {
        g[c] = -tt * kx[c] * kPi * std::sin(kx[c] * kPi * x) * std::cos(ky[c] * kPi * y);
    }
    return g;
}

State CosineModeSolution::grad_y(double x, double y, double t) const noexcept {
    const double tt = temporal(t);
    State g{};
    for (int c = 0; c < 2; ++c) {
        g[c] = -tt * ky[c] * kPi * std::cos(kx[c] * kPi * x) * std::sin(ky[c] * kPi * y);
    }
    return g;
}

// ---------------------------------------------------------------------------
// ReactionModel

State ReactionModel::forcing(double x, double y, double t) const {
    if (!exact) return {0.0, 0.0};
    const State u = exact->value(x, y, t);
    const State ut = exact->time_derivative(x, y, t);
    const State lap = exact->laplacian(x, y, t);
    const State fu = evaluate(kinetics, u, x, y);
    return {ut[0] - diffusion[0] * lap[0] - fu[0], ut[1] - diffusion[1] * lap[1] - fu[1]};
}

State ReactionModel::reaction(const State& u, double x, double y, double t) const {
    State f = evaluate(kinetics, u, x, y);
    if (exact) {
        const State g = forcing(x, y, t);
        f[0] += g[0];
        f[1] += g[1];
    }
    return f;
}

ReactionModel brusselator(double A, double B, double D1, double D2) {
    ReactionModel m;
    m.name = "brusselator";
    m.diffusion = {D1, D2};
    m.params = {{"A", A}, {"B", B}, {"D1", D1}, {"D2", D2}};
    m.kinetics = Brusselator{A, B};
    m.initial = brusselator_ramp_initial;
    return m;
}

ReactionModel gray_scott(double F, double k, double D1, double D2) {
    ReactionModel m;
    m.name = "gray_scott";
    m.diffusion = {D1, D2};
    m.params = {{"F", F}, {"k", k}, {"D1", D1}, {"D2", D2}};
    m.kinetics = GrayScott{F, k};
    const Rectangle unit{};
    m.initial = [unit](double x, double y) { return gray_scott_bump_initial(x, y, unit); };
    return m;
}

ReactionModel gierer_meinhardt(double eps, double mu, double kappa) {
    ReactionModel m;
    m.name = "gierer_meinhardt";
    m.diffusion = {eps * eps, kappa / mu};
    m.params = {{"eps", eps}, {"mu", mu}, {"kappa", kappa}};
    m.kinetics = GiererMeinhardt{eps, mu};
    m.initial = gierer_meinhardt_spike_initial(eps);
    return m;
}

ReactionModel gierer_meinhardt_eps2(double eps, double mu, double kappa) {
    ReactionModel m = gierer_meinhardt(eps, mu, kappa);
    m.name = "gierer_meinhardt_eps2";
    m.kinetics = GiererMeinhardt{eps * eps, mu};
    return m;
}

ReactionModel schnakenberg(double gamma, double a, double b, double D1, double D2) {
    ReactionModel m;
    m.name = "schnakenberg";
    m.diffusion = {D1, D2};
    m.params = {{"gamma", gamma}, {"a", a}, {"b", b}, {"D1", D1}, {"D2", D2}};
    m.kinetics = Schnakenberg{gamma, a, b};
    m.initial = schnakenberg_stripes_initial;
    return m;
}

ReactionModel manufactured(ReactionModel base, CosineModeSolution exact) {
    base.name += "_manufactured";
    base.exact = exact;
    base.initial = [exact](double x, double y) { return exact.value(x, y, 0.0); };
    base.params["omega"] = exact.omega;
    return base;
}

double brusselator_fixed_point_margin(double A, double B) noexcept { return 1.0 - A + B * B; }

// ---------------------------------------------------------------------------
// Initial data

State brusselator_ramp_initial(double x, double y) noexcept { return {2.0 + 0.25 * y, 1.0 + 0.8 * x}; }

State brusselator_cubic_initial(double x, double y) noexcept {
    return {0.5 * x * x - x * x * x / 3.0, 0.5 * y * y - y * y * y / 3.0};
}

InitialData gierer_meinhardt_spike_initial(double eps) {
    return [eps](double x, double y) -> State {
        double perturbation = 0.0;
        for (int k = 1; k <= 20; ++k) perturbation += std::cos(k * kPi * y / 2.0);
        const double rho = std::sqrt(x * x + y * y);
        const double sech = 1.0 / std::cosh(rho / (2.0 * eps));
        return {0.5 * (1.0 + 0.001 * perturbation) * sech * sech, std::cosh(1.0 - rho) / (3.0 * std::cosh(1.0))};
    };
}

State schnakenberg_stripes_initial(double x, double y) noexcept {
    double sum = 0.0;
    for (int j = 1; j <= 8; ++j) sum += std::cos(2.0 * kPi * j * x);
    const double common = 0.0016 * std::cos(2.0 * kPi * (x + y)) + 0.01 * sum;
    return {0.919145 + common, 0.937903 + common};
}

State schnakenberg_harmonics_initial(double x, double) noexcept {
    double sum = 0.0;
    for (int j = 1; j <= 37; ++j) sum += std::cos(2.0 * kPi * j * x) / j;
    return {1.886485 + 0.001 * sum, 0.779539 + 0.001 * sum};
}

State gray_scott_bump_initial(double x, double y, const Rectangle& domain) noexcept {
    const double cx = 0.5 * (domain.x0 + domain.x1);
    const double cy = 0.5 * (domain.y0 + domain.y1);
    const double w = 0.1 * std::min(domain.x1 - domain.x0, domain.y1 - domain.y0);
    const double bump = std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (w * w));
    return {1.0 - 0.5 * bump, 0.25 * bump};
}

// ---------------------------------------------------------------------------
// KineticsEvaluator

KineticsEvaluator::KineticsEvaluator(const ReactionModel& model, std::span<const double> xs,
                                     std::span<const double> ys)
    : kinetics_(model.kinetics),
      diffusion_(model.diffusion),
      exact_(model.exact),
      xs_(xs.begin(), xs.end()),
      ys_(ys.begin(), ys.end()) {
    if (exact_) {
        const std::size_t ny = ys_.size();
        for (int c = 0; c < 2; ++c) {
            auto& s = spatial_[c];
            s.resize(xs_.size() * ny);
            for (std::size_t i = 0; i < xs_.size(); ++i) {
                const double cx = std::cos(exact_->kx[c] * kPi * xs_[i]);
                for (std::size_t j = 0; j < ny; ++j) s[i * ny + j] = cx * std::cos(exact_->ky[c] * kPi * ys_[j]);
            }
        }
    }
}

void KineticsEvaluator::evaluate(double t, std::span<const double> u1, std::span<const double> u2,
                                 std::span<double> f1, std::span<double> f2, std::size_t row_begin,
                                 std::size_t row_end) const {
    const std::size_t ny = ys_.size();
    const std::size_t n = xs_.size() * ny;
    if (u1.size() != n || u2.size() != n || f1.size() != n || f2.size() != n) {
        throw Error(ErrorKind::Dimension, "kinetics evaluation: grid size mismatch");
    }
    std::visit(
        [&](const auto& f) {
            if (!exact_) {
                for (std::size_t i = row_begin; i < row_end; ++i) {
                    for (std::size_t j = 0; j < ny; ++j) {
                        const std::size_t p = i * ny + j;
                        const State r = f(State{u1[p], u2[p]}, xs_[i], ys_[j]);
                        f1[p] = r[0];
                        f2[p] = r[1];
                    }
                }
                return;
            }
            const double tt = exact_->temporal(t);
            const double rate = exact_->temporal_rate(t);
            const double lap0 = diffusion_[0] * exact_->laplacian_factor(0);
            const double lap1 = diffusion_[1] * exact_->laplacian_factor(1);
            for (std::size_t i = row_begin; i < row_end; ++i) {
                for (std::size_t j = 0; j < ny; ++j) {
                    const std::size_t p = i * ny + j;
                    const double s0 = spatial_[0][p];
                    const double s1 = spatial_[1][p];
                    const State fe = f(State{tt * s0, tt * s1}, xs_[i], ys_[j]);
                    const State r = f(State{u1[p], u2[p]}, xs_[i], ys_[j]);
                    f1[p] = r[0] + (rate * s0 - lap0 * tt * s0 - fe[0]);
                    f2[p] = r[1] + (rate * s1 - lap1 * tt * s1 - fe[1]);
                }
            }
        },
        kinetics_);
}

// ---------------------------------------------------------------------------
// Registry

const std::vector<ModelEntry>& model_registry() {
    static const std::vector<ModelEntry> registry = [] {
        std::vector<ModelEntry> r;
        const Rectangle unit{0.0, 1.0, 0.0, 1.0};
        const Rectangle sym{-1.0, 1.0, -1.0, 1.0};
        const CosineModeSolution cos_t{1.0, {2.0, 1.0}, {1.0, 2.0}};
        const CosineModeSolution cos_2t{2.0, {2.0, 1.0}, {1.0, 2.0}};

        auto brusselator_initial = [](ReactionModel m, const std::string& initial) {
            if (initial == "cubic") m.initial = brusselator_cubic_initial;
            return m;
        };

        r.push_back({"brusselator",
                     "Brusselator kinetics, ramp initial data [2+0.25y, 1+0.8x]",
                     {{"A", 1.0}, {"B", 2.0}, {"D1", 0.002}, {"D2", 0.002}},
                     unit,
                     5.0,
                     {"ramp", "cubic"},
                     [brusselator_initial](const auto& p, const std::string& initial, const Rectangle&) {
                         return brusselator_initial(
                             brusselator(param(p, "A"), param(p, "B"), param(p, "D1"), param(p, "D2")), initial);
                     }});
        r.push_back({"brusselator_manufactured",
                     "Brusselator with forcing for u = cos(t) cos(2 pi x) cos(pi y), cos(t) cos(pi x) cos(2 pi y)",
                     {{"A", 1.0}, {"B", 0.5}, {"D1", 1.0}, {"D2", 1.0}},
                     unit,
                     1.0,
                     {"exact"},
                     [cos_t](const auto& p, const std::string&, const Rectangle&) {
                         return manufactured(brusselator(param(p, "A"), param(p, "B"), param(p, "D1"), param(p, "D2")),
                                             cos_t);
                     }});
        r.push_back({"gray_scott",
                     "Gray-Scott kinetics, Gaussian bump initial data",
                     {{"F", 0.04}, {"k", 0.06}, {"D1", 2e-5}, {"D2", 1e-5}},
                     unit,
                     1000.0,
                     {"bump"},
                     [](const auto& p, const std::string&, const Rectangle& domain) {
                         ReactionModel m = gray_scott(param(p, "F"), param(p, "k"), param(p, "D1"), param(p, "D2"));
                         m.initial = [domain](double x, double y) { return gray_scott_bump_initial(x, y, domain); };
                         return m;
                     }});
        r.push_back({"gray_scott_manufactured",
                     "Gray-Scott with forcing for u = cos(2t) cos(2 pi x) cos(pi y), cos(2t) cos(pi x) cos(2 pi y)",
                     {{"F", 1.0}, {"k", 0.0}, {"D1", 0.001}, {"D2", 0.001}},
                     sym,
                     1.0,
                     {"exact"},
                     [cos_2t](const auto& p, const std::string&, const Rectangle&) {
                         return manufactured(gray_scott(param(p, "F"), param(p, "k"), param(p, "D1"), param(p, "D2")),
                                             cos_2t);
                     }});
        r.push_back({"gierer_meinhardt",
                     "Gierer-Meinhardt, inhibitor source u1^2/(eps mu), D1 = eps^2, D2 = kappa/mu",
                     {{"eps", 0.04}, {"mu", 0.1}, {"kappa", 0.0128}},
                     sym,
                     900.0,
                     {"spike"},
                     [](const auto& p, const std::string&, const Rectangle&) {
                         return gierer_meinhardt(param(p, "eps"), param(p, "mu"), param(p, "kappa"));
                     }});
        r.push_back({"gierer_meinhardt_eps2",
                     "Gierer-Meinhardt, inhibitor source u1^2/(eps^2 mu), D1 = eps^2, D2 = kappa/mu",
                     {{"eps", 0.04}, {"mu", 0.1}, {"kappa", 0.0128}},
                     sym,
                     500.0,
                     {"spike"},
                     [](const auto& p, const std::string&, const Rectangle&) {
                         return gierer_meinhardt_eps2(param(p, "eps"), param(p, "mu"), param(p, "kappa"));
                     }});
        r.push_back({"schnakenberg",
                     "Schnakenberg kinetics",
                     {{"gamma", 1000.0}, {"a", 0.126779}, {"b", 0.792366}, {"D1", 1.0}, {"D2", 10.0}},
                     unit,
                     2.0,
                     {"stripes", "harmonics"},
                     [](const auto& p, const std::string& initial, const Rectangle&) {
                         ReactionModel m = schnakenberg(param(p, "gamma"), param(p, "a"), param(p, "b"), param(p, "D1"),
                                                        param(p, "D2"));
                         if (initial == "harmonics") m.initial = schnakenberg_harmonics_initial;
                         return m;
                     }});
        r.push_back({"schnakenberg_manufactured",
                     "Schnakenberg with forcing for u = cos(t) cos(2 pi x) cos(pi y), cos(t) cos(pi x) cos(2 pi y)",
                     {{"gamma", 10.0}, {"a", 0.1}, {"b", 0.9}, {"D1", 1.0}, {"D2", 10.0}},
                     unit,
                     1.0,
                     {"exact"},
                     [cos_t](const auto& p, const std::string&, const Rectangle&) {
                         return manufactured(schnakenberg(param(p, "gamma"), param(p, "a"), param(p, "b"),
                                                          param(p, "D1"), param(p, "D2")),
                                             cos_t);
                     }});
        return r;
    }();
    return registry;
}

const ModelEntry& find_model(std::string_view name) {
    const auto& reg = model_registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const ModelEntry& e) { return e.name == name; });
    if (it == reg.end()) {
        std::ostringstream msg;
        msg << "unknown model '" << name << "'; known models:";
        for (const auto& e : reg) msg << ' ' << e.name;
        throw Error(ErrorKind::Config, msg.str());
    }
    return *it;
}

}  // namespace osc
