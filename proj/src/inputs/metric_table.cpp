#include <charconv>
#include <cmath>
#include <set>
#include <unordered_set>

#include "smellhunter/dsl/lexer.hpp"
#include "smellhunter/inputs/parse.hpp"

namespace smellhunter::inputs {

namespace {

struct Cell {
    std::string text;
    bool quoted = false;
    std::size_t line = 1;
    std::size_t column = 1;
};

struct Record {
    std::vector<Cell> cells;
    std::size_t line = 1;
};

// Splits RFC-4180 text into records. Fully blank lines are skipped.
class CsvReader {
public:
    explicit CsvReader(std::string_view text) : s_(text) {
        if (s_.substr(0, 3) == "\xEF\xBB\xBF") s_.remove_prefix(3);
    }

    std::vector<Record> read(InputErrors& errors) {
        std::vector<Record> out;
        while (pos_ < s_.size()) {
            Record rec;
            rec.line = line_;
            bool end_of_record = false;
            while (!end_of_record) {
                Cell cell;
                cell.line = line_;
                cell.column = col_;
                if (peek() == '"') {
                    cell.quoted = true;
                    advance();
                    bool closed = false;
                    while (pos_ < s_.size()) {
                        if (peek() == '"') {
                            if (peek(1) == '"') {
                                cell.text += '"';
                                advance();
                                advance();
                                continue;
                            }
                            advance();
                            closed = true;
                            break;
                        }
                        cell.text += peek();
                        advance();
                    }
                    if (!closed) {
                        errors.push_back({InputErrorKind::malformed, std::nullopt, std::nullopt, cell.line,
                                          cell.column, "unterminated quoted field"});
                        return out;
                    }
                    if (pos_ < s_.size() && peek() != ',' && peek() != '\n' && peek() != '\r') {
                        errors.push_back({InputErrorKind::malformed, std::nullopt, std::nullopt, line_, col_,
                                          "unexpected character after closing quote"});
                        while (pos_ < s_.size() && peek() != ',' && peek() != '\n' && peek() != '\r') advance();
                    }
                } else {
                    bool reported = false;
                    while (pos_ < s_.size() && peek() != ',' && peek() != '\n' && peek() != '\r') {
                        if (peek() == '"' && !reported) {
                            errors.push_back({InputErrorKind::malformed, std::nullopt, std::nullopt, line_, col_,
                                              "quote inside an unquoted field"});
                            reported = true;
                        }
                        cell.text += peek();
                        advance();
                    }
                }
                rec.cells.push_back(std::move(cell));

                if (pos_ >= s_.size()) {
                    end_of_record = true;
                } else if (peek() == ',') {
                    advance();
                } else {
                    if (peek() == '\r') advance();
                    if (peek() == '\n') advance();
                    end_of_record = true;
                }
            }
            const bool blank = rec.cells.size() == 1 && rec.cells[0].text.empty() && !rec.cells[0].quoted;
            if (!blank) out.push_back(std::move(rec));
        }
        return out;
    }

private:
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

std::string_view trim(std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
}

enum class NumberStatus { ok, non_numeric, non_finite };

NumberStatus parse_number(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return NumberStatus::non_numeric;
    auto r = std::from_chars(text.data(), text.data() + text.size(), out);
    if (r.ec == std::errc::result_out_of_range && r.ptr == text.data() + text.size()) return NumberStatus::non_finite;
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) return NumberStatus::non_numeric;
    if (!std::isfinite(out)) return NumberStatus::non_finite;
    return NumberStatus::ok;
}

std::string quote_csv(std::string_view v) {
    if (v.find_first_of(",\"\r\n") == std::string_view::npos && !v.empty()) return std::string(v);
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string shortest(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

Expected<MetricTable, InputErrors> parse_metric_table(std::string_view bytes) {
    InputErrors errors;
    auto records = CsvReader(bytes).read(errors);
    if (!errors.empty()) return unexpected(std::move(errors));
    if (records.empty()) {
        errors.push_back({InputErrorKind::missing_header, 1, std::nullopt, 1, 1, "missing header row"});
        return unexpected(std::move(errors));
    }

    MetricTable table;
    const auto& header = records.front().cells;
    if (header.front().text != "entity_id") {
        errors.push_back({InputErrorKind::missing_entity_id, 1, header.front().text, header.front().line,
                          header.front().column, "first header cell must be 'entity_id'"});
    }
    std::set<std::string> seen_cols;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const auto& c = header[i];
        if (!dsl::is_identifier(c.text)) {
            errors.push_back({InputErrorKind::invalid_identifier, 1, c.text, c.line, c.column,
                              "metric column '" + c.text + "' is not a valid identifier"});
        } else if (c.text == "entity_id" || !seen_cols.insert(c.text).second) {
            errors.push_back({InputErrorKind::duplicate_column, 1, c.text, c.line, c.column,
                              "duplicate column '" + c.text + "'"});
        }
        table.columns.push_back(c.text);
    }

    std::unordered_set<std::string> seen_ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row_no = r + 1;
        if (rec.cells.size() != header.size()) {
            errors.push_back({InputErrorKind::ragged_row, row_no, std::nullopt, rec.line, 1,
                              "expected " + std::to_string(header.size()) + " cells, found " +
                                  std::to_string(rec.cells.size())});
            continue;
        }
        MetricRow row;
        row.entity_id = rec.cells.front().text;
        if (row.entity_id.empty()) {
            errors.push_back({InputErrorKind::empty_entity_id, row_no, std::string("entity_id"), rec.line, 1,
                              "empty entity_id"});
        } else if (!seen_ids.insert(row.entity_id).second) {
            errors.push_back({InputErrorKind::duplicate_entity, row_no, std::string("entity_id"), rec.line, 1,
                              "duplicate entity_id '" + row.entity_id + "'"});
        }
        row.values.reserve(table.columns.size());
        for (std::size_t c = 1; c < rec.cells.size(); ++c) {
            const auto& cell = rec.cells[c];
            double v = 0;
            switch (parse_number(cell.text, v)) {
                case NumberStatus::ok: break;
                case NumberStatus::non_numeric:
                    errors.push_back({InputErrorKind::non_numeric, row_no, table.columns[c - 1], cell.line,
                                      cell.column, "non-numeric value '" + cell.text + "'"});
                    break;
                case NumberStatus::non_finite:
                    errors.push_back({InputErrorKind::non_finite, row_no, table.columns[c - 1], cell.line,
                                      cell.column, "value '" + cell.text + "' is not finite"});
                    break;
            }
            row.values.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }

    if (!errors.empty()) return unexpected(std::move(errors));
    return table;
}

std::string emit_metric_table(const MetricTable& table) {
    std::string out = "entity_id";
    for (const auto& c : table.columns) out += "," + quote_csv(c);
    out += "\n";
    for (const auto& row : table.rows) {
        out += quote_csv(row.entity_id);
        for (double v : row.values) out += "," + shortest(v);
        out += "\n";
    }
    return out;
}

InputErrors check_metric_table(const MetricTable& table) {
    InputErrors errors;
    std::set<std::string> seen_cols;
    for (const auto& c : table.columns) {
        if (!dsl::is_identifier(c))
            errors.push_back({InputErrorKind::invalid_identifier, 1, c, {}, {}, "invalid metric column name"});
        else if (c == "entity_id" || !seen_cols.insert(c).second)
            errors.push_back({InputErrorKind::duplicate_column, 1, c, {}, {}, "duplicate column"});
    }
    std::unordered_set<std::string> ids;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t row_no = r + 2;
        if (row.entity_id.empty())
            errors.push_back({InputErrorKind::empty_entity_id, row_no, std::string("entity_id"), {}, {}, "empty entity_id"});
        else if (!ids.insert(row.entity_id).second)
            errors.push_back({InputErrorKind::duplicate_entity, row_no, std::string("entity_id"), {}, {},
                              "duplicate entity_id '" + row.entity_id + "'"});
        if (row.values.size() != table.columns.size()) {
            errors.push_back({InputErrorKind::ragged_row, row_no, std::nullopt, {}, {}, "row is not rectangular"});
            continue;
        }
        for (std::size_t c = 0; c < row.values.size(); ++c)
            if (!std::isfinite(row.values[c]))
                errors.push_back({InputErrorKind::non_finite, row_no, table.columns[c], {}, {}, "value is not finite"});
    }
    return errors;
}

}  // namespace smellhunter::inputs
