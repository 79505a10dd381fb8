#pragma once

#include <array>
#include <string>
#include <string_view>

namespace lfholo {

/// Display configurations compared in the evaluation. Vstar is V with
/// per-source amplitude control.
enum class BaselineId { I, II, III, IV, V, Vstar, VI, VII };

inline constexpr std::array<BaselineId, 8> kAllBaselines{BaselineId::I,  BaselineId::II,    BaselineId::III,
                                                         BaselineId::IV, BaselineId::V,     BaselineId::Vstar,
                                                         BaselineId::VI, BaselineId::VII};

std::string to_string(BaselineId id);
/// Accepts "I".."VII", "V*" and "Vstar". Throws ConfigError otherwise.
BaselineId parse_baseline(std::string_view text);

} // namespace lfholo
