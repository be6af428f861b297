#include "bellsim/distribution.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bellsim/error.hpp"
#include "bellsim/random.hpp"
#include "text_format.hpp"

namespace bellsim {
namespace {

constexpr double kWeightTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string format_axis(const UnitVector& v) {
    return detail::format_g17(v.x()) + "," + detail::format_g17(v.y()) + "," +
           detail::format_g17(v.z());
}

[[noreturn]] void bad_spec(std::string_view text, std::string_view why) {
    throw ConfigError("--dist: invalid distribution '" + std::string(text) + "': " + std::string(why));
}

UnitVector parse_axis(std::string_view whole, std::string_view text) {
    double c[3];
    for (int i = 0; i < 3; ++i) {
        const auto comma = text.find(',');
        const auto piece = i < 2 ? text.substr(0, comma) : text;
        if ((i < 2 && comma == std::string_view::npos) || !detail::parse_double(piece, c[i]))
            bad_spec(whole, "axis must be three comma-separated numbers");
        if (i < 2) text.remove_prefix(comma + 1);
    }
    const double n2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    try {
        // Already-unit axes are kept bit-for-bit so the text form round-trips.
        if (std::abs(n2 - 1.0) <= UnitVector::kNormTolerance)
            return UnitVector::from_components(c[0], c[1], c[2]);
        return UnitVector::normalized(c[0], c[1], c[2]);
    } catch (const ConfigError&) {
        bad_spec(whole, "axis must be finite and nonzero");
    }
}

DistributionSpec parse_simple(std::string_view whole, std::string_view text) {
    if (text == "uniform") return UniformSphere{};
    if (text.starts_with("fixed:")) return FixedAxis{parse_axis(whole, text.substr(6))};
    if (text.starts_with("cap:")) {
        text.remove_prefix(4);
        const auto colon = text.rfind(':');
        if (colon == std::string_view::npos) bad_spec(whole, "cap needs an axis and a half-angle");
        const UnitVector axis = parse_axis(whole, text.substr(0, colon));
        std::string_view angle_text = text.substr(colon + 1);
        bool radians = false;
        if (angle_text.ends_with("rad")) {
            radians = true;
            angle_text.remove_suffix(3);
        }
        double angle = 0.0;
        if (!detail::parse_double(angle_text, angle)) bad_spec(whole, "half-angle is not a number");
        if (!radians) angle = deg_to_rad(angle);
        try {
            return SphericalCap{axis, angle};
        } catch (const ConfigError& e) {
            bad_spec(whole, e.what());
        }
    }
    if (text.starts_with("mix:")) bad_spec(whole, "mixtures cannot be nested");
    bad_spec(whole, "expected uniform, fixed:X,Y,Z, cap:X,Y,Z:DEG or mix:W*SPEC+...");
}

// Splits on '+' that is not part of an exponent.
std::vector<std::string_view> split_terms(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '+' && i > 0 && text[i - 1] != 'e' && text[i - 1] != 'E') {
            out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(text.substr(start));
    return out;
}

}  // namespace

DistributionSpec::DistributionSpec(SphericalCap c) : kind_(c) {
    if (!(c.half_angle > 0.0 && c.half_angle <= std::numbers::pi))
        throw ConfigError("cap half-angle must lie in (0, pi]");
}

DistributionSpec DistributionSpec::mixture(std::vector<Component> components) {
    if (components.empty()) throw ConfigError("mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0) || !std::isfinite(c.weight))
            throw ConfigError("mixture weights must be positive");
        if (c.spec.is_mixture()) throw ConfigError("mixtures cannot be nested");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kWeightTolerance)
        throw ConfigError("mixture weights must sum to 1 (got " + detail::format_g17(total) + ")");
    DistributionSpec spec;
    spec.kind_ = std::move(components);
    return spec;
}

std::string_view DistributionSpec::tag() const noexcept {
    return std::visit(overloaded{[](const UniformSphere&) { return std::string_view("uniform"); },
                                 [](const FixedAxis&) { return std::string_view("fixed"); },
                                 [](const SphericalCap&) { return std::string_view("cap"); },
                                 [](const std::vector<Component>&) { return std::string_view("mixture"); }},
                      kind_);
}

std::string DistributionSpec::to_string() const {
    return std::visit(
        overloaded{
            [](const UniformSphere&) -> std::string { return "uniform"; },
            [](const FixedAxis& f) -> std::string { return "fixed:" + format_axis(f.axis); },
            [](const SphericalCap& c) -> std::string {
                return "cap:" + format_axis(c.axis) + ":" + detail::format_g17(c.half_angle) + "rad";
            },
            [](const std::vector<Component>& parts) -> std::string {
                std::string out = "mix:";
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    if (i) out += '+';
                    out += detail::format_g17(parts[i].weight) + "*" + parts[i].spec.to_string();
                }
                return out;
            }},
        kind_);
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
    if (!text.starts_with("mix:")) return parse_simple(text, text);
    std::vector<Component> parts;
    for (const auto term : split_terms(text.substr(4))) {
        const auto star = term.find('*');
        double weight = 0.0;
        if (star == std::string_view::npos || !detail::parse_double(term.substr(0, star), weight))
            bad_spec(text, "mixture terms look like W*SPEC");
        parts.push_back({weight, parse_simple(text, term.substr(star + 1))});
    }
    try {
        return mixture(std::move(parts));
    } catch (const ConfigError& e) {
        bad_spec(text, e.what());
    }
}

UnitVector DistributionSpec::sample(RandomStream& stream) const {
    return std::visit(
        overloaded{
            [&](const UniformSphere&) { return sample_uniform_direction(stream); },
            [&](const FixedAxis& f) { return f.axis; },
            [&](const SphericalCap& c) {
                const double u = stream.next_uniform();
                const double v = stream.next_uniform();
                const double cos_t = 1.0 - u * (1.0 - std::cos(c.half_angle));
                const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
                const double phi = 2.0 * std::numbers::pi * v;
                const UnitVector e1 = any_orthogonal(c.axis);
                const UnitVector& w = c.axis;
                // e2 = axis x e1
                const double e2x = w.y() * e1.z() - w.z() * e1.y();
                const double e2y = w.z() * e1.x() - w.x() * e1.z();
                const double e2z = w.x() * e1.y() - w.y() * e1.x();
                const double px = sin_t * std::cos(phi), py = sin_t * std::sin(phi);
                return UnitVector::normalized(px * e1.x() + py * e2x + cos_t * w.x(),
                                              px * e1.y() + py * e2y + cos_t * w.y(),
                                              px * e1.z() + py * e2z + cos_t * w.z());
            },
            [&](const std::vector<Component>& parts) {
                const double u = stream.next_uniform();
                double acc = 0.0;
                for (const auto& part : parts) {
                    acc += part.weight;
                    if (u < acc) return part.spec.sample(stream);
                }
                return parts.back().spec.sample(stream);
            }},
        kind_);
}

bool operator==(const DistributionSpec& a, const DistributionSpec& b) { return a.kind_ == b.kind_; }

}  // namespace bellsim
