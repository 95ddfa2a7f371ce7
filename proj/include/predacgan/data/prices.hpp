#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace predacgan::data {

using TimeIndex = std::int64_t;

// One asset's close-price history on the shared trading-day index. Days with
// no usable observation are simply absent, so any window that needs them is
// detected as non-contiguous.
struct PriceSeries {
    std::string asset_id;
    std::vector<TimeIndex> dates;  // strictly increasing
    std::vector<double> closes;    // > 0, aligned with dates

    std::size_t size() const noexcept { return dates.size(); }
    std::optional<std::size_t> position(TimeIndex t) const;
    std::optional<double> close_at(TimeIndex t) const;
    // True when every index in [from, to] has an observation.
    bool covers(TimeIndex from, TimeIndex to) const;
    // Last observation at or before t.
    std::optional<double> last_close_at_or_before(TimeIndex t) const;

    // Throws DataError when an invariant is violated.
    void validate() const;
};

using Universe = std::vector<PriceSeries>;

struct PriceTable {
    Universe series;  // ordered by first appearance in the file
    // ISO date for each trading-day index when the file used ISO dates;
    // empty for integer-indexed files.
    std::vector<std::string> calendar;
    std::size_t missing_rows = 0;
};

// Reads the `date,asset_id,close` schema. Dates are either all integer
// indices or all ISO-8601 (YYYY-MM-DD); ISO dates are mapped onto the sorted
// union of dates in the file. Empty, NA or NaN closes mark a missing
// observation. Rows may appear in any order.
PriceTable load_prices(const std::filesystem::path& path);
PriceTable parse_prices(const std::vector<std::string>& lines);

// Writes integer-indexed rows sorted by (date, asset order).
void write_prices(const Universe& universe, const std::filesystem::path& path);

// Smallest and largest trading-day index present in any series.
std::pair<TimeIndex, TimeIndex> date_range(const Universe& universe);

}  // namespace predacgan::data
