#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "csdnet/errors.hpp"
#include "csdnet/form_finding.hpp"
#include "csdnet/model.hpp"

namespace csdnet {

inline constexpr double kSteelModulus = 200e9;    // Pa
inline constexpr double kCableArea = 3.14e-6;     // m^2
inline constexpr double kSteelDensity = 7850.0;   // kg/m^3

/// Planar net: two free nodes held by seven fixed nodes through nine
/// steel cables, at its published equilibrium configuration.
///
/// The tie-down connectivity (members 6-9) is the pairing under which the
/// published tensions are in equilibrium; see equilibrium_residual.
inline CableNetModel bench_planar() {
    const std::array<std::array<double, 2>, 9> xy = {{
        {-0.1228, -0.1964},
        {0.1228, -0.1964},
        {-1.5000, 1.0000},
        {0.0, 0.5000},
        {1.5000, 1.0000},
        {-1.1228, -1.1964},
        {0.8772, -1.1964},
        {1.1228, -1.1964},
        {-0.8772, -1.1964},
    }};
    struct Link {
        int a, b;
        double tension;
    };
    const std::array<Link, 9> links = {{
        {1, 3, 626.15},
        {1, 2, 368.80},
        {2, 5, 626.15},
        {1, 4, 598.45},
        {2, 4, 598.45},
        {1, 6, 707.10},
        {1, 7, 707.10},
        {2, 8, 707.10},
        {2, 9, 707.10},
    }};
    std::vector<NodeSpec> nodes;
    for (std::size_t i = 0; i < xy.size(); ++i)
        nodes.push_back({static_cast<int>(i) + 1, Eigen::Vector2d(xy[i][0], xy[i][1]), i >= 2});
    std::vector<MemberSpec> members;
    for (std::size_t j = 0; j < links.size(); ++j)
        members.push_back({static_cast<int>(j) + 1, links[j].a, links[j].b, kSteelModulus, kCableArea, kSteelDensity,
                           links[j].tension});
    return CableNetModel(std::move(nodes), std::move(members));
}

struct ParaboloidDemoOptions {
    double focal_length = 12.0;  // m
    double aperture = 12.0;      // rim diameter, m
    int rings = 3;               // ring `rings` is the fixed rim
    int spokes = 6;
    double rear_offset = 0.5;    // rear net apex sits this far below the front apex, m
    double net_tension = 100.0;  // desired tension of front/rear net cables, N
    double tie_tension = 20.0;   // desired tension of the vertical ties, N
    double sigma_min = 1.0;      // N
};

/// Synthetic two-net reflector: ring-and-spoke front net on
/// z = r^2 / (4 F), its mirror image as the rear net, and vertical ties
/// between matching interior nodes. Rim nodes of both nets are fixed and the
/// tensions come from find_tensions.
///
/// Node ids: front apex 1, then front ring k spoke s at 2 + (k-1) S + s;
/// the rear net repeats the pattern after the last front node.
inline CableNetModel bench_paraboloid_demo(const ParaboloidDemoOptions& opt = {}) {
    if (opt.rings < 2 || opt.spokes < 3) throw ValidationError("paraboloid demo needs >= 2 rings and >= 3 spokes");
    const int S = opt.spokes;
    const int per_net = 1 + opt.rings * S;
    const double radius = 0.5 * opt.aperture;
    auto front_z = [&](double r) { return r * r / (4.0 * opt.focal_length); };

    auto id = [&](int net, int ring, int spoke) {
        // ring 0 is the apex
        return net * per_net + (ring == 0 ? 1 : 2 + (ring - 1) * S + (spoke % S));
    };

    std::vector<NodeSpec> nodes(static_cast<std::size_t>(2 * per_net));
    for (int net = 0; net < 2; ++net) {
        const double sign = net == 0 ? 1.0 : -1.0;
        const double shift = net == 0 ? 0.0 : -opt.rear_offset;
        nodes[static_cast<std::size_t>(id(net, 0, 0) - 1)] = {id(net, 0, 0), Eigen::Vector3d(0, 0, shift), false};
        for (int k = 1; k <= opt.rings; ++k) {
            const double r = radius * k / opt.rings;
            for (int s = 0; s < S; ++s) {
                const double theta = 2.0 * std::numbers::pi * s / S;
                const int n = id(net, k, s);
                nodes[static_cast<std::size_t>(n - 1)] = {
                    n, Eigen::Vector3d(r * std::cos(theta), r * std::sin(theta), sign * front_z(r) + shift),
                    k == opt.rings};
            }
        }
    }

    std::vector<MemberSpec> members;
    auto add = [&](int a, int b, double tension) {
        members.push_back({static_cast<int>(members.size()) + 1, a, b, kSteelModulus, kCableArea, kSteelDensity,
                           tension});
    };
    for (int net = 0; net < 2; ++net) {
        for (int s = 0; s < S; ++s) {
            add(id(net, 0, 0), id(net, 1, s), opt.net_tension);
            for (int k = 1; k < opt.rings; ++k) add(id(net, k, s), id(net, k + 1, s), opt.net_tension);
        }
        for (int k = 1; k < opt.rings; ++k)
            for (int s = 0; s < S; ++s) add(id(net, k, s), id(net, k, s + 1), opt.net_tension);
    }
    add(id(0, 0, 0), id(1, 0, 0), opt.tie_tension);
    for (int k = 1; k < opt.rings; ++k)
        for (int s = 0; s < S; ++s) add(id(0, k, s), id(1, k, s), opt.tie_tension);

    CableNetModel draft(std::move(nodes), std::move(members));
    const TensionDesign design = find_tensions(draft, draft.tensions(), opt.sigma_min);
    return draft.with_tensions(std::span<const double>(design.sigma.data(), static_cast<std::size_t>(design.sigma.size())));
}

inline const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = {"bench_planar", "bench_paraboloid_demo"};
    return names;
}

inline CableNetModel emit_benchmark(std::string_view name) {
    if (name == "bench_planar") return bench_planar();
    if (name == "bench_paraboloid_demo") return bench_paraboloid_demo();
    throw ValidationError("unknown benchmark \"" + std::string(name) + "\"");
}

}  // namespace csdnet
