#include "brokersim/mobility.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "brokersim/random.hpp"

namespace brokersim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

Position lerp(Position a, Position b, double f) { return {a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f}; }

}  // namespace

void validate(const MobilityPlan& plan) {
    std::visit(Overloaded{
                   [](const Static&) {},
                   [](const LinearTo& p) {
                       if (!(p.speed > 0.0)) throw std::invalid_argument("LinearTo speed must be > 0");
                   },
                   [](const WaypointTrace& p) {
                       if (p.points.empty()) throw std::invalid_argument("waypoint trace is empty");
                       for (std::size_t i = 1; i < p.points.size(); ++i)
                           if (!(p.points[i].t > p.points[i - 1].t))
                               throw std::invalid_argument("waypoint timestamps must strictly increase");
                   },
               },
               plan);
}

Position position_at(const MobilityPlan& plan, Position origin, double t) {
    return std::visit(
        Overloaded{
            [&](const Static&) { return origin; },
            [&](const LinearTo& p) {
                if (t <= p.start_time) return origin;
                const double total = distance(origin, p.dest);
                const double travelled = p.speed * (t - p.start_time);
                if (total <= 0.0 || travelled >= total) return p.dest;
                return lerp(origin, p.dest, travelled / total);
            },
            [&](const WaypointTrace& p) {
                const auto& pts = p.points;
                if (t <= pts.front().t) return pts.front().pos;
                if (t >= pts.back().t) return pts.back().pos;
                auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                           [](double v, const Waypoint& w) { return v < w.t; });
                auto lo = hi - 1;
                return lerp(lo->pos, hi->pos, (t - lo->t) / (hi->t - lo->t));
            },
        },
        plan);
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

std::vector<MobilityPlan> parse_bonnmotion(std::string_view text) {
    std::vector<MobilityPlan> plans;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        struct Token {
            double value;
            std::size_t column;
        };
        std::vector<Token> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            const std::string_view tok = line.substr(i, j - i);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
                throw ParseError(line_no, i + 1, "non-numeric token '" + std::string(tok) + "'");
            tokens.push_back({v, i + 1});
            i = j;
        }
        if (tokens.empty()) continue;
        if (tokens.size() % 3 != 0)
            throw ParseError(line_no, tokens.back().column,
                             "expected t x y triples, got " + std::to_string(tokens.size()) + " tokens");
        WaypointTrace trace;
        for (std::size_t k = 0; k < tokens.size(); k += 3) {
            const double t = tokens[k].value;
            if (!trace.points.empty() && !(t > trace.points.back().t))
                throw ParseError(line_no, tokens[k].column, "timestamps must strictly increase");
            trace.points.push_back({t, {tokens[k + 1].value, tokens[k + 2].value}});
        }
        plans.emplace_back(std::move(trace));
    }
    return plans;
}

std::string to_bonnmotion(const std::vector<WaypointTrace>& traces) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& trace : traces) {
        bool first = true;
        for (const auto& w : trace.points) {
            if (!first) os << ' ';
            os << w.t << ' ' << w.pos.x << ' ' << w.pos.y;
            first = false;
        }
        os << '\n';
    }
    return os.str();
}

std::vector<WaypointTrace> random_waypoint(const RandomWaypointParams& p, std::uint64_t seed) {
    if (p.nodes < 0 || !(p.duration > 0.0) || !(p.width > 0.0) || !(p.height > 0.0) || !(p.min_speed > 0.0) ||
        p.max_speed < p.min_speed || p.max_pause < 0.0)
        throw std::invalid_argument("invalid random waypoint parameters");
    Rng rng(seed);
    std::vector<WaypointTrace> traces(static_cast<std::size_t>(p.nodes));
    for (auto& trace : traces) {
        double t = 0.0;
        Position here{uniform(rng, 0.0, p.width), uniform(rng, 0.0, p.height)};
        trace.points.push_back({t, here});
        while (t < p.duration) {
            const Position next{uniform(rng, 0.0, p.width), uniform(rng, 0.0, p.height)};
            const double speed = uniform(rng, p.min_speed, p.max_speed);
            const double travel = std::max(distance(here, next) / speed, 1e-3);
            t += travel;
            trace.points.push_back({t, next});
            here = next;
            const double pause = uniform(rng, 0.0, p.max_pause);
            if (pause > 0.0) {
                t += pause;
                trace.points.push_back({t, here});
            }
        }
    }
    return traces;
}

}  // namespace brokersim
