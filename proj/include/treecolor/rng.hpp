#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace treecolor {

/// What a random draw is used for. Part of the counter key, so draws for
/// different purposes never collide.
enum class Purpose : std::uint64_t {
    activation = 1,
    color_choice = 2,
    trace_color = 3,
    buffer_color = 4,
    completion_color = 5,
    tidy_color = 6,
    sampling = 7,
};

/// Counter-based random source: every draw is a hash of
/// (seed, purpose, vertex, step, extra), so results do not depend on the
/// order in which vertices are visited.
///
/// Color draws go through color_key(). A palette relabelling can be attached
/// so that the key of color c is the base key of perm^-1(c); running the
/// process on a relabelled state with the relabelled source then yields the
/// relabelled output.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(Purpose purpose, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        std::uint64_t h = mix(seed_ ^ 0x9e3779b97f4a7c15ULL);
        h = mix(h ^ static_cast<std::uint64_t>(purpose));
        h = mix(h ^ a);
        h = mix(h ^ (b * 0xd1342543de82ef95ULL));
        h = mix(h ^ (c * 0xa0761d6478bd642fULL));
        return h;
    }

    /// Uniform double in [0, 1).
    double uniform(Purpose purpose, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        return static_cast<double>(bits(purpose, a, b, c) >> 11) * 0x1.0p-53;
    }

    /// Random priority of `color` for this draw; the color with the smallest
    /// key among the candidates is chosen.
    std::uint64_t color_key(Purpose purpose, std::uint64_t vertex, std::uint64_t step, int color) const {
        const int base = relabel_inverse_.empty() ? color : relabel_inverse_[static_cast<std::size_t>(color)];
        return bits(purpose, vertex, step, static_cast<std::uint64_t>(base) + 1);
    }

    /// Copy whose color keys follow the palette permutation perm (color c
    /// relabelled to perm[c]). Colors beyond perm.size() are left fixed.
    CounterRng relabeled(const std::vector<int>& perm) const {
        CounterRng out(seed_);
        out.relabel_inverse_.assign(64, 0);
        for (int c = 0; c < 64; ++c) {
            out.relabel_inverse_[static_cast<std::size_t>(c)] = c;
        }
        for (std::size_t c = 0; c < perm.size(); ++c) {
            out.relabel_inverse_[static_cast<std::size_t>(perm[c])] = static_cast<int>(c);
        }
        return out;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::vector<int> relabel_inverse_;
};

} // namespace treecolor
