#include "nodal/weights.hpp"

#include <cmath>
#include <numbers>

namespace nodal {

namespace {
constexpr double kPi = std::numbers::pi;

double probe_x(int i) { return static_cast<double>(i) / (kProbePoints - 1); }
}  // namespace

Weight Weight::sine(int frequency) {
    if (frequency < 1) throw ConfigError("sine weight: frequency must be >= 1");
    return Weight(WeightKind::SineM, frequency, 0.0, {});
}

Weight Weight::paper_a() { return Weight(WeightKind::PaperA, 0, 0.0, {}); }

Weight Weight::constant(double value) {
    return Weight(WeightKind::Constant, 0, value, {});
}

Weight Weight::tabulated(std::vector<double> values) {
    if (values.size() < 2) throw ConfigError("tabulated weight: need >= 2 values");
    return Weight(WeightKind::Tabulated, 0, 0.0, std::move(values));
}

double Weight::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("weight evaluated outside [0,1]");
    switch (kind_) {
        case WeightKind::SineM:
            return std::sin(frequency_ * kPi * x);
        case WeightKind::PaperA:
            if (x <= 0.2) return -0.2 * std::sin(kPi / 0.2 * (0.2 - x));
            if (x <= 0.8) return std::sin(kPi / 0.6 * (x - 0.2));
            return -0.2 * std::sin(kPi / 0.2 * (x - 0.8));
        case WeightKind::Constant:
            return value_;
        case WeightKind::Tabulated: {
            const auto n = table_.size();
            double t = x * static_cast<double>(n - 1);
            auto i = static_cast<std::size_t>(t);
            if (i >= n - 1) return table_[n - 1];
            double frac = t - static_cast<double>(i);
            return table_[i] + frac * (table_[i + 1] - table_[i]);
        }
    }
    throw ConsistencyError("weight: unknown kind");
}

std::string Weight::describe() const {
    switch (kind_) {
        case WeightKind::SineM: return "sine:" + std::to_string(frequency_);
        case WeightKind::PaperA: return "paper-a";
        case WeightKind::Constant: return "constant:" + std::to_string(value_);
        case WeightKind::Tabulated: return "tabulated[" + std::to_string(table_.size()) + "]";
    }
    return "?";
}

bool Weight::is_odd_about_half(double tol) const {
    if (!(tol > 0.0)) throw PreconditionError("is_odd_about_half: tol must be > 0");
    double worst = 0.0;
    for (int i = 0; i < kProbePoints; ++i) {
        double x = probe_x(i);
        worst = std::max(worst, std::abs((*this)(1.0 - x) + (*this)(x)));
    }
    return worst <= tol;
}

std::optional<std::pair<double, double>> Weight::sign_change_witnesses() const {
    double vmin = 0.0, vmax = 0.0, xmin = 0.0, xmax = 0.0;
    for (int i = 1; i + 1 < kProbePoints; ++i) {
        double x = probe_x(i);
        double v = (*this)(x);
        if (v < vmin) { vmin = v; xmin = x; }
        if (v > vmax) { vmax = v; xmax = x; }
    }
    if (vmin < 0.0 && vmax > 0.0) return std::make_pair(xmin, xmax);
    return std::nullopt;
}

}  // namespace nodal
