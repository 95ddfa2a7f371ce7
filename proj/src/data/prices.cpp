#include "predacgan/data/prices.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace predacgan::data {

std::optional<std::size_t> PriceSeries::position(TimeIndex t) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), t);
    if (it == dates.end() || *it != t) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - dates.begin());
}

std::optional<double> PriceSeries::close_at(TimeIndex t) const {
    const auto p = position(t);
    if (!p) {
        return std::nullopt;
    }
    return closes[*p];
}

bool PriceSeries::covers(TimeIndex from, TimeIndex to) const {
    if (from > to) {
        return false;
    }
    const auto a = position(from);
    const auto b = position(to);
    return a && b && static_cast<TimeIndex>(*b - *a) == to - from;
}

std::optional<double> PriceSeries::last_close_at_or_before(TimeIndex t) const {
    const auto it = std::upper_bound(dates.begin(), dates.end(), t);
    if (it == dates.begin()) {
        return std::nullopt;
    }
    return closes[static_cast<std::size_t>(it - dates.begin()) - 1];
}

void PriceSeries::validate() const {
    if (dates.size() != closes.size()) {
        throw DataError(asset_id + ": dates and closes differ in length");
    }
    for (std::size_t i = 0; i < dates.size(); ++i) {
        if (i > 0 && dates[i] <= dates[i - 1]) {
            throw DataError(asset_id + ": dates not strictly increasing at position " + std::to_string(i));
        }
        if (!(closes[i] > 0.0) || !std::isfinite(closes[i])) {
            throw DataError(asset_id + ": non-positive close at date " + std::to_string(dates[i]));
        }
    }
}

namespace {

bool is_missing(const std::string& s) {
    if (s.empty()) {
        return true;
    }
    std::string lower;
    for (char c : s) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return lower == "na" || lower == "nan" || lower == "null";
}

std::optional<TimeIndex> parse_integer(const std::string& s) {
    TimeIndex v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

bool is_iso_date(const std::string& s) {
    if (s.size() < 10) {
        return false;
    }
    for (std::size_t i = 0; i < 10; ++i) {
        const bool dash = i == 4 || i == 7;
        if (dash ? s[i] != '-' : !std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    // Allow a trailing time component (YYYY-MM-DDTHH:MM...), ignored.
    if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') {
        return false;
    }
    const int month = std::stoi(s.substr(5, 2));
    const int day = std::stoi(s.substr(8, 2));
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::optional<double> parse_real(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

struct Row {
    std::size_t line;
    std::string date;
    std::string asset;
    std::optional<double> close;
};

}  // namespace

PriceTable parse_prices(const std::vector<std::string>& lines) {
    std::size_t header_line = 0;
    while (header_line < lines.size() && lines[header_line].find_first_not_of(" \t") == std::string::npos) {
        ++header_line;
    }
    if (header_line == lines.size()) {
        throw ParseError(1, "empty price file");
    }
    const auto header = csv::split_line(lines[header_line]);
    if (header != std::vector<std::string>{"date", "asset_id", "close"}) {
        throw ParseError(header_line + 1, "expected header 'date,asset_id,close'");
    }

    std::vector<Row> rows;
    bool any_iso = false;
    bool any_integer = false;
    for (std::size_t i = header_line + 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 3 fields, found " + std::to_string(fields.size()));
        }
        Row row{line_no, fields[0], fields[1], std::nullopt};
        if (row.asset.empty()) {
            throw ParseError(line_no, "empty asset_id");
        }
        if (parse_integer(row.date)) {
            any_integer = true;
        } else if (is_iso_date(row.date)) {
            any_iso = true;
            row.date = row.date.substr(0, 10);
        } else {
            throw ParseError(line_no, "unparseable date '" + row.date + "'");
        }
        if (!is_missing(fields[2])) {
            const auto v = parse_real(fields[2]);
            if (!v) {
                throw ParseError(line_no, "unparseable close '" + fields[2] + "'");
            }
            if (std::isnan(*v)) {
                row.close = std::nullopt;
            } else if (!(*v > 0.0) || !std::isfinite(*v)) {
                throw DataError("line " + std::to_string(line_no) + ": asset " + row.asset +
                                " has non-positive close " + fields[2]);
            } else {
                row.close = *v;
            }
        }
        rows.push_back(std::move(row));
    }
    if (any_iso && any_integer) {
        throw ParseError(header_line + 2, "file mixes ISO dates and integer indices");
    }

    PriceTable table;
    std::map<std::string, TimeIndex> iso_index;
    if (any_iso) {
        std::set<std::string> distinct;
        for (const auto& r : rows) {
            distinct.insert(r.date);
        }
        TimeIndex k = 0;
        for (const auto& d : distinct) {
            iso_index.emplace(d, k++);
            table.calendar.push_back(d);
        }
    }

    struct Obs {
        TimeIndex t;
        std::size_t line;
        std::optional<double> close;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<Obs>> by_asset;
    for (const auto& r : rows) {
        const TimeIndex t = any_iso ? iso_index.at(r.date) : *parse_integer(r.date);
        auto [it, inserted] = by_asset.try_emplace(r.asset);
        if (inserted) {
            order.push_back(r.asset);
        }
        it->second.push_back(Obs{t, r.line, r.close});
    }

    for (const auto& asset : order) {
        auto& obs = by_asset.at(asset);
        std::stable_sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) { return a.t < b.t; });
        PriceSeries s;
        s.asset_id = asset;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            if (i > 0 && obs[i].t == obs[i - 1].t) {
                throw ParseError(obs[i].line, "duplicate row for asset " + asset);
            }
            if (!obs[i].close) {
                ++table.missing_rows;
                continue;
            }
            s.dates.push_back(obs[i].t);
            s.closes.push_back(*obs[i].close);
        }
        table.series.push_back(std::move(s));
    }
    return table;
}

PriceTable load_prices(const std::filesystem::path& path) {
    return parse_prices(csv::read_lines(path));
}

void write_prices(const Universe& universe, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << "date,asset_id,close\n";
    struct Entry {
        TimeIndex t;
        std::size_t asset;
        double close;
    };
    std::vector<Entry> entries;
    for (std::size_t a = 0; a < universe.size(); ++a) {
        for (std::size_t i = 0; i < universe[a].size(); ++i) {
            entries.push_back({universe[a].dates[i], a, universe[a].closes[i]});
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        return x.t != y.t ? x.t < y.t : x.asset < y.asset;
    });
    for (const auto& e : entries) {
        out << e.t << ',' << universe[e.asset].asset_id << ',' << csv::format_real(e.close) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::pair<TimeIndex, TimeIndex> date_range(const Universe& universe) {
    TimeIndex lo = 0;
    TimeIndex hi = -1;
    bool first = true;
    for (const auto& s : universe) {
        if (s.dates.empty()) {
            continue;
        }
        if (first) {
            lo = s.dates.front();
            hi = s.dates.back();
            first = false;
        } else {
            lo = std::min(lo, s.dates.front());
            hi = std::max(hi, s.dates.back());
        }
    }
    return {lo, hi};
}

}  // namespace predacgan::data
