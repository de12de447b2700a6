#include "linkscan/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "linkscan/error.hpp"
#include "linkscan/stats.hpp"

namespace linkscan::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool is_missing(std::string_view cell) {
    static const std::array<std::string_view, 8> tokens{"", "NA", "N/A", "#N/A", "NaN", "nan", "null", "."};
    return std::find(tokens.begin(), tokens.end(), cell) != tokens.end();
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct Row {
    Date date;
    std::size_t line = 0;
    std::vector<std::optional<double>> values;  // one per requested column
};

}  // namespace

IngestResult ingest(std::istream& in, DatasetManifest& manifest) {
    std::vector<std::string> requested{manifest.oil_column, manifest.world_column};
    requested.insert(requested.end(), manifest.country_columns.begin(), manifest.country_columns.end());
    {
        std::set<std::string> seen;
        for (const auto& c : requested) {
            if (c.empty()) throw std::invalid_argument("empty column name in manifest");
            if (!seen.insert(c).second) {
                throw std::invalid_argument("column '" + c + "' is requested more than once");
            }
        }
    }

    std::string line;
    std::size_t line_no = 0;
    std::optional<std::vector<std::size_t>> positions;
    std::size_t header_width = 0;
    std::vector<Row> rows;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        const auto cells = split(view);

        if (!positions) {
            if (lower(cells.front()) != "date") {
                throw DataError("line " + std::to_string(line_no) + ": first header column must be 'date'");
            }
            header_width = cells.size();
            std::map<std::string, std::size_t, std::less<>> index;
            for (std::size_t i = 1; i < cells.size(); ++i) index.emplace(std::string(cells[i]), i);
            positions.emplace();
            for (const auto& c : requested) {
                const auto it = index.find(c);
                if (it == index.end()) throw DataError("unknown column '" + c + "'");
                positions->push_back(it->second);
            }
            continue;
        }

        if (cells.size() > header_width) {
            throw DataError("line " + std::to_string(line_no) + ": " + std::to_string(cells.size()) +
                            " cells but the header has " + std::to_string(header_width));
        }
        const auto date = parse_iso_date(cells.front());
        if (!date) {
            throw DataError("line " + std::to_string(line_no) + ": unparseable date '" +
                            std::string(cells.front()) + "'");
        }
        Row row{*date, line_no, {}};
        for (std::size_t j = 0; j < positions->size(); ++j) {
            const auto pos = (*positions)[j];
            const std::string_view cell = pos < cells.size() ? cells[pos] : std::string_view{};
            if (is_missing(cell)) {
                row.values.emplace_back();
                continue;
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw DataError("line " + std::to_string(line_no) + ": unparseable price '" +
                                std::string(cell) + "' in column '" + requested[j] + "'");
            }
            if (!(v > 0.0)) {
                throw DataError("line " + std::to_string(line_no) + ": non-positive price in column '" +
                                requested[j] + "'");
            }
            row.values.emplace_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (!positions) throw DataError("input has no header row");

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) {
            throw DataError("line " + std::to_string(rows[i].line) + ": duplicate date " +
                            to_iso_string(rows[i].date));
        }
    }

    IngestResult out;
    std::vector<PriceSeries> prices(requested.size());
    for (std::size_t j = 0; j < requested.size(); ++j) prices[j].name = requested[j];
    for (const auto& row : rows) {
        const bool complete = std::all_of(row.values.begin(), row.values.end(),
                                          [](const auto& v) { return v.has_value(); });
        if (!complete) {
            ++out.dropped_rows;
            continue;
        }
        for (std::size_t j = 0; j < requested.size(); ++j) {
            prices[j].dates.push_back(row.date);
            prices[j].values.push_back(*row.values[j]);
        }
    }
    manifest.dropped_rows = out.dropped_rows;

    const std::size_t aligned = prices.front().values.size();
    if (aligned == 0) {
        std::string spans;
        for (std::size_t j = 0; j < requested.size(); ++j) {
            std::optional<Date> first;
            std::optional<Date> last;
            for (const auto& row : rows) {
                if (!row.values[j]) continue;
                if (!first) first = row.date;
                last = row.date;
            }
            spans += "\n  " + requested[j] + ": " +
                     (first ? to_iso_string(*first) + " .. " + to_iso_string(*last) : "no values");
        }
        throw AlignmentError("no date has values for every requested column; column spans:" + spans);
    }
    if (aligned < kMinAlignedRows) {
        throw InsufficientDataError("only " + std::to_string(aligned) + " aligned rows, need at least " +
                                    std::to_string(kMinAlignedRows));
    }

    auto& b = out.bundle;
    b.oil = stats::compute_returns(prices[0], manifest.returns_mode);
    b.world = stats::compute_returns(prices[1], manifest.returns_mode);
    for (std::size_t j = 2; j < prices.size(); ++j) {
        b.countries.push_back(stats::compute_returns(prices[j], manifest.returns_mode));
    }
    b.dates = b.oil.dates;
    out.prices = std::move(prices);
    return out;
}

IngestResult ingest(const std::filesystem::path& path, DatasetManifest& manifest) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file '" + path.string() + "'");
    return ingest(in, manifest);
}

void write_prices_csv(std::ostream& out, const std::vector<PriceSeries>& prices) {
    if (prices.empty()) throw std::invalid_argument("no series to write");
    out << "date";
    for (const auto& p : prices) {
        if (p.dates != prices.front().dates) throw std::invalid_argument("series do not share dates");
        out << ',' << p.name;
    }
    out << '\n';
    char buf[32];
    for (std::size_t t = 0; t < prices.front().dates.size(); ++t) {
        out << to_iso_string(prices.front().dates[t]);
        for (const auto& p : prices) {
            std::snprintf(buf, sizeof buf, "%.17g", p.values[t]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file '" + path.string() + "'");

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

}  // namespace linkscan::io
