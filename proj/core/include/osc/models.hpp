#pragma once

/// @file models.hpp
/// @brief Two-component reaction kinetics, initial data and manufactured
/// solutions for u_t - D Laplace(u) = f(u) with homogeneous Neumann data.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace osc {

using State = std::array<double, 2>;

struct Rectangle {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;

    [[nodiscard]] double area() const noexcept { return (x1 - x0) * (y1 - y0); }
    friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

// Kinetics. The (x, y) arguments only label error messages.

/// f = [B + u1^2 u2 - (A+1) u1, A u1 - u1^2 u2]; fixed point (B, A/B).
struct Brusselator {
    double A = 1.0;
    double B = 0.5;
    [[nodiscard]] State operator()(const State& u, double x, double y) const noexcept;
};

/// f = [F (1 - u1) - u1^2 u2, u1^2 u2 - (F + k) u2].
struct GrayScott {
    double F = 1.0;
    double k = 0.0;
    [[nodiscard]] State operator()(const State& u, double x, double y) const noexcept;
};

/// f = [u1^2/u2 - u1, u1^2/(eps_kinetic mu) - u2/mu]. eps_kinetic is eps for
/// the activator-inhibitor form and eps^2 for the rescaled variant.
struct GiererMeinhardt {
    double eps_kinetic = 0.04;
    double mu = 0.1;
    static constexpr double kInhibitorFloor = 1e-12;
    /// @throws Error(Kinetics) when |u2| < kInhibitorFloor.
    [[nodiscard]] State operator()(const State& u, double x, double y) const;
};

/// f = [gamma (a - u1 + u1^2 u2), gamma (b - u1^2 u2)]; fixed point (a+b, b/(a+b)^2).
struct Schnakenberg {
    double gamma = 1.0;
    double a = 0.1;
    double b = 0.9;
    [[nodiscard]] State operator()(const State& u, double x, double y) const noexcept;
};

using Kinetics = std::variant<Brusselator, GrayScott, GiererMeinhardt, Schnakenberg>;

[[nodiscard]] State evaluate(const Kinetics& kinetics, const State& u, double x = 0.0, double y = 0.0);

/// u_c(x, y, t) = cos(omega t) cos(kx_c pi x) cos(ky_c pi y), c = 1, 2.
/// Satisfies homogeneous Neumann conditions on any box with integer corners.
struct CosineModeSolution {
    double omega = 1.0;
    std::array<double, 2> kx{2.0, 1.0};
    std::array<double, 2> ky{1.0, 2.0};

    [[nodiscard]] double temporal(double t) const noexcept;
    [[nodiscard]] double temporal_rate(double t) const noexcept;
    [[nodiscard]] double spatial(int c, double x, double y) const noexcept;
    /// Laplace(spatial_c) / spatial_c.
    [[nodiscard]] double laplacian_factor(int c) const noexcept;

    [[nodiscard]] State value(double x, double y, double t) const noexcept;
    [[nodiscard]] State time_derivative(double x, double y, double t) const noexcept;
    [[nodiscard]] State laplacian(double x, double y, double t) const noexcept;
    [[nodiscard]] State grad_x(double x, double y, double t) const noexcept;
    [[nodiscard]] State grad_y(double x, double y, double t) const noexcept;
};

using InitialData = std::function<State(double x, double y)>;

/// Diffusion pair, kinetics, initial data and an optional exact solution.
/// When `exact` is set the reaction term carries the forcing
/// u_t - D Laplace(u) - f(u) evaluated on the exact solution.
struct ReactionModel {
    std::string name;
    State diffusion{1.0, 1.0};
    std::map<std::string, double> params;
    Kinetics kinetics;
    InitialData initial;
    std::optional<CosineModeSolution> exact;

    /// Forcing term; zero without an exact solution.
    [[nodiscard]] State forcing(double x, double y, double t) const;
    /// Full reaction term f(u) + forcing(x, y, t).
    [[nodiscard]] State reaction(const State& u, double x, double y, double t) const;
    [[nodiscard]] State initial_value(double x, double y) const { return initial(x, y); }
};

[[nodiscard]] ReactionModel brusselator(double A, double B, double D1, double D2);
[[nodiscard]] ReactionModel gray_scott(double F, double k, double D1, double D2);
/// D1 = eps^2, D2 = kappa / mu, kinetics with eps in the inhibitor source.
[[nodiscard]] ReactionModel gierer_meinhardt(double eps, double mu, double kappa);
/// Same diffusion and initial data, kinetics with eps replaced by eps^2.
[[nodiscard]] ReactionModel gierer_meinhardt_eps2(double eps, double mu, double kappa);
[[nodiscard]] ReactionModel schnakenberg(double gamma, double a, double b, double D1, double D2);

/// Attaches an exact solution; the initial data becomes exact(., ., 0).
[[nodiscard]] ReactionModel manufactured(ReactionModel base, CosineModeSolution exact);

/// 1 - A + B^2; the Brusselator settles on (B, A/B) when this is >= 0.
[[nodiscard]] double brusselator_fixed_point_margin(double A, double B) noexcept;

// Named initial data.
[[nodiscard]] State brusselator_ramp_initial(double x, double y) noexcept;     // [2 + 0.25 y, 1 + 0.8 x]
[[nodiscard]] State brusselator_cubic_initial(double x, double y) noexcept;    // [x^2/2 - x^3/3, y^2/2 - y^3/3]
[[nodiscard]] InitialData gierer_meinhardt_spike_initial(double eps);
[[nodiscard]] State schnakenberg_stripes_initial(double x, double y) noexcept;   // gamma = 1000 scenario
[[nodiscard]] State schnakenberg_harmonics_initial(double x, double y) noexcept; // gamma = 10000 scenario
/// Unit background with a Gaussian bump of (0.5, 0.25) at the domain centre.
[[nodiscard]] State gray_scott_bump_initial(double x, double y, const Rectangle& domain) noexcept;

/// Evaluates the reaction term over a tensor grid of points, x-major
/// (index i * ys.size() + j). Spatial factors of a manufactured forcing are
/// tabulated once at construction.
class KineticsEvaluator {
public:
    KineticsEvaluator(const ReactionModel& model, std::span<const double> xs, std::span<const double> ys);

    /// Evaluates rows i in [row_begin, row_end) at time t.
    void evaluate(double t, std::span<const double> u1, std::span<const double> u2, std::span<double> f1,
                  std::span<double> f2, std::size_t row_begin, std::size_t row_end) const;

    void evaluate(double t, std::span<const double> u1, std::span<const double> u2, std::span<double> f1,
                  std::span<double> f2) const {
        evaluate(t, u1, u2, f1, f2, 0, xs_.size());
    }

private:
    Kinetics kinetics_;
    State diffusion_;
    std::optional<CosineModeSolution> exact_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::array<std::vector<double>, 2> spatial_;  // exact-solution spatial factors
};

/// Registry entry used by the command line tools.
struct ModelEntry {
    std::string name;
    std::string description;
    std::map<std::string, double> defaults;
    Rectangle domain;
    double final_time = 1.0;
    std::vector<std::string> initial_variants;  // first entry is the default
    std::function<ReactionModel(const std::map<std::string, double>&, const std::string& initial,
                                const Rectangle& domain)>
        build;
};

[[nodiscard]] const std::vector<ModelEntry>& model_registry();

/// @throws Error(Config) for unknown names.
[[nodiscard]] const ModelEntry& find_model(std::string_view name);

}  // namespace osc
