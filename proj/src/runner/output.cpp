#include <charconv>
#include <cmath>
#include <ostream>

#include "fflab/error.hpp"
#include "fflab/runner.hpp"

namespace fflab::runner {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

nlohmann::ordered_json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return format_double(x);
        }
        return x;
      },
      v);
}

}  // namespace

std::string format_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return x;
        }
      },
      v);
}

void CsvSink::header(const std::vector<std::string>& columns) { write_record(out_, columns); }

void CsvSink::row(const std::vector<Value>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (const auto& v : values) fields.push_back(format_value(v));
  write_record(out_, fields);
}

void JsonlSink::header(const std::vector<std::string>& columns) { columns_ = columns; }

void JsonlSink::row(const std::vector<Value>& values) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < values.size(); ++i) obj[columns_.at(i)] = to_json(values[i]);
  out_ << obj.dump() << '\n';
}

void TeeSink::header(const std::vector<std::string>& columns) {
  a_.header(columns);
  b_.header(columns);
}

void TeeSink::row(const std::vector<Value>& values) {
  a_.row(values);
  b_.row(values);
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw Error(ErrorCode::PreconditionViolated, "no column named " + std::string(name));
}

double Table::number(std::size_t row, std::string_view name) const {
  const auto& v = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw Error(ErrorCode::PreconditionViolated, "column " + std::string(name) + " is not numeric");
}

std::string Table::text(std::size_t row, std::string_view name) const {
  return format_value(rows.at(row).at(column(name)));
}

bool Table::flag(std::size_t row, std::string_view name) const {
  const auto& v = rows.at(row).at(column(name));
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw Error(ErrorCode::PreconditionViolated, "column " + std::string(name) + " is not a flag");
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      rec.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any || !field.empty() || !rec.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace fflab::runner
