#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "linkscan/pipeline.hpp"
#include "linkscan/series.hpp"

namespace linkscan::io {

/// Minimum number of aligned price rows accepted by `ingest`.
inline constexpr std::size_t kMinAlignedRows = 10;

struct DatasetManifest {
    std::string oil_column;
    std::string world_column;
    std::vector<std::string> country_columns;
    ReturnMode returns_mode = ReturnMode::log;
    std::size_t dropped_rows = 0;  // filled by ingest
};

struct IngestResult {
    pipeline::AlignedBundle bundle;
    std::vector<PriceSeries> prices;  // aligned prices: oil, world, countries
    std::size_t dropped_rows = 0;
};

/// Reads a wide CSV (`date` column first, one price column per series) and
/// inner-joins the requested columns on date.
///
/// Rows missing any requested value are dropped and counted. Throws DataError
/// with a line number for unparseable or non-positive cells and for unknown
/// columns; AlignmentError listing each column's date span when no row survives;
/// InsufficientDataError when fewer than kMinAlignedRows rows survive;
/// std::invalid_argument when the manifest names a column twice.
[[nodiscard]] IngestResult ingest(std::istream& in, DatasetManifest& manifest);
[[nodiscard]] IngestResult ingest(const std::filesystem::path& path, DatasetManifest& manifest);

/// Writes prices as a wide CSV with `%.17g` precision. All series must share dates.
void write_prices_csv(std::ostream& out, const std::vector<PriceSeries>& prices);

/// Lower-case hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

}  // namespace linkscan::io
