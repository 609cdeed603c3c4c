#pragma once

// Bit-string value types shared by every module.
//
// Index convention: position 0 of a string is qubit 0, which is the most
// significant bit of the basis index. "0110" is index 6.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "quam/error.hpp"

namespace quam {

using BasisIndex = std::uint64_t;

/// Largest register width representable by a bit-string type.
inline constexpr std::size_t kMaxPatternWidth = 63;

/// A fully specified n-bit basis label.
class BasisPattern {
  public:
    BasisPattern() = default;

    explicit BasisPattern(std::string_view bits) : width_{bits.size()} {
        if (bits.empty() || bits.size() > kMaxPatternWidth) {
            throw InputError("basis pattern must have 1.." +
                             std::to_string(kMaxPatternWidth) + " bits");
        }
        for (char ch : bits) {
            if (ch != '0' && ch != '1') {
                throw InputError("basis pattern '" + std::string(bits) +
                                 "' contains a character other than 0/1");
            }
            value_ = (value_ << 1) | static_cast<BasisIndex>(ch == '1');
        }
    }

    static BasisPattern from_index(BasisIndex index, std::size_t width) {
        if (width == 0 || width > kMaxPatternWidth) {
            throw InputError("pattern width out of range");
        }
        if (index >> width) {
            throw InputError("index " + std::to_string(index) +
                             " does not fit in " + std::to_string(width) +
                             " bits");
        }
        BasisPattern p;
        p.width_ = width;
        p.value_ = index;
        return p;
    }

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] BasisIndex index() const noexcept { return value_; }

    /// Bit of qubit q (0 = most significant).
    [[nodiscard]] bool bit(std::size_t q) const noexcept {
        return (value_ >> (width_ - 1 - q)) & 1U;
    }

    [[nodiscard]] std::string str() const {
        std::string out(width_, '0');
        for (std::size_t q = 0; q < width_; ++q) {
            if (bit(q)) {
                out[q] = '1';
            }
        }
        return out;
    }

    friend bool operator==(const BasisPattern &, const BasisPattern &) = default;
    friend auto operator<=>(const BasisPattern &a, const BasisPattern &b) {
        // Same width: numeric order equals lexicographic order of the string.
        if (auto c = a.width_ <=> b.width_; c != 0) {
            return c;
        }
        return a.value_ <=> b.value_;
    }

  private:
    std::size_t width_ = 0;
    BasisIndex value_ = 0;
};

/// A partial pattern over {0,1,?}. Wildcards match either bit value.
class Query {
  public:
    Query() = default;

    explicit Query(std::string_view symbols) : symbols_{symbols} {
        if (symbols.empty() || symbols.size() > kMaxPatternWidth) {
            throw InputError("query must have 1.." +
                             std::to_string(kMaxPatternWidth) + " symbols");
        }
        for (char ch : symbols) {
            care_ <<= 1;
            value_ <<= 1;
            switch (ch) {
            case '0':
                care_ |= 1U;
                break;
            case '1':
                care_ |= 1U;
                value_ |= 1U;
                break;
            case '?':
                ++wildcards_;
                break;
            default:
                throw InputError("query '" + std::string(symbols) +
                                 "' may only contain 0, 1 and ?");
            }
        }
    }

    /// Promote a basis pattern to an exact query.
    static Query exact(const BasisPattern &p) { return Query(p.str()); }

    [[nodiscard]] std::size_t width() const noexcept { return symbols_.size(); }
    [[nodiscard]] const std::string &str() const noexcept { return symbols_; }
    [[nodiscard]] std::size_t wildcard_count() const noexcept {
        return wildcards_;
    }
    [[nodiscard]] bool all_wildcards() const noexcept {
        return wildcards_ == symbols_.size();
    }
    /// Bits that are fixed by the query.
    [[nodiscard]] BasisIndex care_mask() const noexcept { return care_; }
    /// Required values of the fixed bits.
    [[nodiscard]] BasisIndex care_value() const noexcept { return value_; }

    [[nodiscard]] bool matches(BasisIndex index) const noexcept {
        return (index & care_) == value_;
    }

    /// Number of basis states of the full register that match.
    [[nodiscard]] BasisIndex match_count() const noexcept {
        return BasisIndex{1} << wildcards_;
    }

    /// Every matching basis index, in ascending order.
    [[nodiscard]] std::vector<BasisIndex> matching_indices() const {
        const std::size_t n = width();
        std::vector<std::size_t> free_bits;
        for (std::size_t b = n; b-- > 0;) {
            if (!((care_ >> b) & 1U)) {
                free_bits.push_back(b);
            }
        }
        // free_bits is ordered most significant first, so counting k upward
        // produces ascending indices.
        std::vector<BasisIndex> out;
        out.reserve(static_cast<std::size_t>(match_count()));
        for (BasisIndex k = 0; k < match_count(); ++k) {
            BasisIndex idx = value_;
            for (std::size_t j = 0; j < free_bits.size(); ++j) {
                if ((k >> (free_bits.size() - 1 - j)) & 1U) {
                    idx |= BasisIndex{1} << free_bits[j];
                }
            }
            out.push_back(idx);
        }
        return out;
    }

  private:
    std::string symbols_;
    BasisIndex care_ = 0;
    BasisIndex value_ = 0;
    std::size_t wildcards_ = 0;
};

/// m distinct patterns of a common width n, in storage order.
class PatternSet {
  public:
    PatternSet() = default;

    explicit PatternSet(std::vector<BasisPattern> patterns)
        : patterns_{std::move(patterns)} {
        if (patterns_.empty()) {
            throw DataError("pattern set is empty");
        }
        width_ = patterns_.front().width();
        std::unordered_set<BasisIndex> seen;
        seen.reserve(patterns_.size());
        for (std::size_t i = 0; i < patterns_.size(); ++i) {
            if (patterns_[i].width() != width_) {
                throw DataError("pattern " + std::to_string(i + 1) + " has " +
                                std::to_string(patterns_[i].width()) +
                                " bits, expected " + std::to_string(width_));
            }
            if (!seen.insert(patterns_[i].index()).second) {
                throw DataError("duplicate pattern " + patterns_[i].str());
            }
        }
    }

    explicit PatternSet(const std::vector<std::string> &bits)
        : PatternSet(to_patterns(bits)) {}

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return patterns_.size(); }
    [[nodiscard]] const BasisPattern &operator[](std::size_t i) const {
        return patterns_[i];
    }
    [[nodiscard]] auto begin() const noexcept { return patterns_.begin(); }
    [[nodiscard]] auto end() const noexcept { return patterns_.end(); }
    [[nodiscard]] const std::vector<BasisPattern> &patterns() const noexcept {
        return patterns_;
    }

    /// Stored indices in ascending order.
    [[nodiscard]] std::vector<BasisIndex> sorted_indices() const {
        std::vector<BasisIndex> out;
        out.reserve(patterns_.size());
        for (const auto &p : patterns_) {
            out.push_back(p.index());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    static std::vector<BasisPattern>
    to_patterns(const std::vector<std::string> &bits) {
        std::vector<BasisPattern> out;
        out.reserve(bits.size());
        for (const auto &b : bits) {
            out.emplace_back(b);
        }
        return out;
    }

    std::vector<BasisPattern> patterns_;
    std::size_t width_ = 0;
};

} // namespace quam
