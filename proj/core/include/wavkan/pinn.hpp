#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavkan/artifacts.hpp"
#include "wavkan/diffengine.hpp"
#include "wavkan/network.hpp"
#include "wavkan/training.hpp"

namespace wavkan {

// Physics-informed fitting of the benchmark PDEs with a Wav-KAN.
//
// Coordinates are ordered (x) for Poisson, (x, t) for Heat and Wave and
// (x, y) for Helmholtz. Every domain and condition operator is linear, so each
// loss term is a LinearOperator applied to the net minus a closed-form right
// hand side.

enum class PdeKind { Poisson1D, Heat1D, Helmholtz2D, Wave1D };

[[nodiscard]] std::string_view to_string(PdeKind kind) noexcept;
/// Accepts "poisson", "heat", "helmholtz", "wave". Throws Errc::UnknownBenchmark.
[[nodiscard]] PdeKind pde_kind_from_string(std::string_view name);

enum class PinnTerm { Domain, Boundary, Initial, Neumann };
inline constexpr std::size_t kNumPinnTerms = 4;

[[nodiscard]] std::string_view to_string(PinnTerm term) noexcept;  // "L_D", "L_bc", ...

struct PdeProblem {
    PdeKind kind = PdeKind::Poisson1D;
    std::vector<Interval> domain;  // one per coordinate
    // Helmholtz
    double a1 = 1.0;
    double a2 = 20.0;
    double k = 1.0;
    // Wave
    double speed_sq = 4.0;
    // Heat
    double diffusivity = 0.0;

    std::size_t n_domain = 0;
    std::size_t n_bc = 0;
    std::size_t n_ic = 0;
    std::size_t n_nbc = 0;
    std::array<double, kNumPinnTerms> weights{1.0, 1.0, 1.0, 1.0};  // indexed by PinnTerm
    std::uint64_t seed = 0;

    /// Default benchmark settings. `weighted` puts weight 100 on every
    /// condition term and 1 on the domain term; otherwise all weights are 1.
    [[nodiscard]] static PdeProblem preset(PdeKind kind, bool weighted = false);

    [[nodiscard]] std::size_t dim() const noexcept { return domain.size(); }
    [[nodiscard]] bool has_term(PinnTerm term) const noexcept;
    [[nodiscard]] std::size_t count(PinnTerm term) const noexcept;
    [[nodiscard]] double weight(PinnTerm term) const noexcept { return weights[static_cast<std::size_t>(term)]; }

    /// Throws Errc::InvalidConfig on a bad domain, counts that do not fit the
    /// kind, or non-positive weights.
    void validate() const;
};

/// Points per term, each Matrix is count x dim.
struct CollocationSet {
    Matrix interior;
    Matrix boundary;
    Matrix initial;
    Matrix neumann;

    [[nodiscard]] const Matrix& points(PinnTerm term) const noexcept;
};

/// Poisson interior points are the equally spaced i/(N_D+1), i = 1..N_D, and
/// its boundary is {0, 1}. Other interiors are uniform random; boundary points
/// are split evenly over the spatial faces (earlier faces take any remainder).
[[nodiscard]] CollocationSet sample_collocation(const PdeProblem& problem);

/// Value and pure first/second partials of a field at one point.
struct FieldJet {
    double value = 0.0;
    std::array<double, 2> d1{0.0, 0.0};
    std::array<double, 2> d2{0.0, 0.0};
};

[[nodiscard]] double exact_solution(const PdeProblem& problem, std::span<const double> point);
/// Exact solution with closed-form derivatives.
[[nodiscard]] FieldJet exact_jet(const PdeProblem& problem, std::span<const double> point);
/// Right-hand side g of the domain equation (zero for Heat and Wave).
[[nodiscard]] double source_term(const PdeProblem& problem, std::span<const double> point);

/// Operator of a loss term and its right-hand side at a point.
[[nodiscard]] LinearOperator term_operator(const PdeProblem& problem, PinnTerm term);
[[nodiscard]] double term_target(const PdeProblem& problem, PinnTerm term, std::span<const double> point);

[[nodiscard]] double apply(const LinearOperator& op, const FieldJet& jet);

/// Pointwise residual of `term` for the net at each row of `points`.
/// Throws Errc::DimensionMismatch if the net input width differs from the problem.
[[nodiscard]] std::vector<double> residual(const PdeProblem& problem, const WavKanNet& net, const Matrix& points,
                                           PinnTerm term = PinnTerm::Domain);
/// Same residual for a closed-form field instead of a net.
[[nodiscard]] std::vector<double> residual(const PdeProblem& problem,
                                           const std::function<FieldJet(std::span<const double>)>& field,
                                           const Matrix& points, PinnTerm term = PinnTerm::Domain);

struct PinnLossBreakdown {
    double total = 0.0;
    double L_D = 0.0;
    double L_bc = 0.0;
    double L_ic = 0.0;
    double L_nbc = 0.0;

    [[nodiscard]] double term(PinnTerm t) const noexcept;
};

/// Called with each point at which the net is evaluated.
using PointObserver = std::function<void(PinnTerm, std::span<const double>)>;

/// Mean squared residual per term, combined with the problem weights.
/// Throws Errc::EmptyTerm if a term the problem requires has no points.
[[nodiscard]] PinnLossBreakdown pinn_loss(const PdeProblem& problem, const WavKanNet& net, const CollocationSet& set,
                                          const PointObserver& observer = {});

class PinnObjective final : public Objective {
public:
    PinnObjective(PdeProblem problem, CollocationSet set);
    [[nodiscard]] std::vector<std::string> component_names() const override;
    LossEval evaluate(const WavKanNet& net, std::span<double> grad) override;

    [[nodiscard]] const PdeProblem& problem() const noexcept { return problem_; }
    [[nodiscard]] const CollocationSet& collocation() const noexcept { return set_; }

private:
    PdeProblem problem_;
    CollocationSet set_;
    std::vector<PinnTerm> terms_;
};

/// 1001 points for one-dimensional problems, 101 x 101 otherwise, spanning the
/// full domain (first coordinate fastest).
[[nodiscard]] Matrix evaluation_grid(const PdeProblem& problem);

struct ErrorMetrics {
    double rel_l2 = 0.0;
    double max_abs = 0.0;
};

[[nodiscard]] ErrorMetrics error_metrics(std::span<const double> prediction, std::span<const double> exact);
[[nodiscard]] ErrorMetrics error_metrics(const WavKanNet& net, const PdeProblem& problem, const Matrix& grid);

struct NetSpec {
    std::vector<std::size_t> shape;
    MotherWavelet wavelet = MotherWavelet::morlet(1.0, 5.0);
    InitPolicy policy = InitPolicy::AllTrainable;
    std::uint64_t seed = 0;
    /// Range of the initial translations; the first coordinate's interval when unset.
    std::optional<Interval> translation_domain;
};

struct PinnResult {
    TrainReport report;
    ErrorMetrics metrics;
    PinnLossBreakdown final_loss;
    Matrix grid;
    std::vector<double> prediction;
    std::vector<double> exact;
};

/// Default architecture for a benchmark.
[[nodiscard]] NetSpec preset_net(PdeKind kind);
/// Default optimizer and budget for a benchmark.
[[nodiscard]] TrainConfig preset_training(PdeKind kind);

/// Builds the net, trains it on the PDE loss and scores it on evaluation_grid.
[[nodiscard]] PinnResult solve(const PdeProblem& problem, const NetSpec& net_spec, const TrainConfig& train_cfg,
                               WavKanNet* trained = nullptr);

[[nodiscard]] HeaderFields describe(const PdeProblem& problem);

/// Columns: one per coordinate, prediction, exact, abs_error.
void write_solution_csv(std::ostream& os, const PdeProblem& problem, const PinnResult& result,
                        const HeaderFields& header);

}  // namespace wavkan
