#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pdp/core.hpp"

namespace pdp {

/// Two of the demo scenarios come in a plain and a featured flavour:
///   PD12, PD15      A = delivery only, B = mixed pickup/delivery
///   PD10_TW, PD17_TW A = no time windows, B = time windows
/// `canonical` is A for the pickup demos and B for the time-window demos.
/// Other fixtures ignore the variant.
enum class Variant { canonical, a, b };

/// Names accepted by generate_fixture, in a fixed order.
const std::vector<std::string>& fixture_names();

/// Deterministic synthetic instance for one of the demo scenarios
/// (docs/fixtures.md). Throws InputError for an unknown name.
Instance generate_fixture(std::string_view name, Variant variant = Variant::canonical);

}  // namespace pdp
