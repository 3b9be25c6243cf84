#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace brokersim {

template <class Tag>
struct Id {
    std::int32_t value = -1;

    constexpr Id() = default;
    constexpr explicit Id(std::int32_t v) : value(v) {}
    constexpr bool valid() const { return value >= 0; }
    constexpr auto operator<=>(const Id&) const = default;
};

using NapId = Id<struct NapTag>;
using TechnologyId = Id<struct TechnologyTag>;
using TerminalId = Id<struct TerminalTag>;
using FlowId = Id<struct FlowTag>;

}  // namespace brokersim

template <class Tag>
struct std::hash<brokersim::Id<Tag>> {
    std::size_t operator()(const brokersim::Id<Tag>& id) const noexcept {
        return std::hash<std::int32_t>{}(id.value);
    }
};
