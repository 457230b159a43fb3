#include "stochlp/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stochlp {

using nlohmann::json;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void fail(std::string_view source, const std::string& msg) {
  throw Error(Errc::parse_error, std::string(source) + ": " + msg);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<double> real_array(const json& node, std::string_view source, const std::string& what) {
  if (!node.is_array()) fail(source, "\"" + what + "\" must be an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number())
      fail(source, "\"" + what + "\" entry " + std::to_string(i) + " is not a number");
    out.push_back(node[i].get<double>());
  }
  return out;
}

double real_field(const json& doc, const char* key, std::string_view source) {
  const auto& node = doc.at(key);
  if (!node.is_number()) fail(source, std::string("\"") + key + "\" must be a number");
  return node.get<double>();
}

}  // namespace

LinearProgram parse_instance(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    fail(source, "syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) fail(source, "top level must be an object");
  for (const char* key : {"A", "b", "c"})
    if (!doc.contains(key)) fail(source, std::string("missing key \"") + key + "\"");

  const json& rows = doc.at("A");
  if (!rows.is_array() || rows.empty()) fail(source, "\"A\" must be a non-empty array of rows");
  std::vector<std::vector<double>> a_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a_rows.push_back(real_array(rows[i], source, "A[" + std::to_string(i) + "]"));
    if (a_rows.back().size() != a_rows.front().size())
      fail(source, "row " + std::to_string(i) + " of \"A\" has " +
                       std::to_string(a_rows.back().size()) + " entries, expected " +
                       std::to_string(a_rows.front().size()));
  }
  Vector b = real_array(doc.at("b"), source, "b");
  Vector c = real_array(doc.at("c"), source, "c");
  if (b.size() != a_rows.size())
    fail(source, "\"b\" has " + std::to_string(b.size()) + " entries but \"A\" has " +
                     std::to_string(a_rows.size()) + " rows");
  if (c.size() != a_rows.front().size())
    fail(source, "\"c\" has " + std::to_string(c.size()) + " entries but \"A\" has " +
                     std::to_string(a_rows.front().size()) + " columns");

  const double r = doc.contains("R") ? real_field(doc, "R", source) : 1.0;
  std::optional<double> l;
  if (doc.contains("L")) l = real_field(doc, "L", source);
  std::string name;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) fail(source, "\"name\" must be a string");
    name = doc.at("name").get<std::string>();
  }
  try {
    return LinearProgram::make(Matrix::from_rows(a_rows), std::move(b), std::move(c), r, l,
                               std::move(name));
  } catch (const Error& e) {
    if (e.code() == Errc::rank_deficient) throw;
    fail(source, e.what());
  }
}

LinearProgram load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), path);
}

std::string write_instance(const LinearProgram& lp, bool write_lipschitz) {
  std::ostringstream out;
  auto array = [&](std::span<const double> v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << format_real(v[i]);
    out << ']';
  };
  out << "{\n";
  if (!lp.name.empty()) out << "  \"name\": " << json(lp.name).dump() << ",\n";
  out << "  \"A\": [\n";
  for (std::size_t i = 0; i < lp.A.rows(); ++i) {
    out << "    ";
    array(lp.A.row(i));
    out << (i + 1 < lp.A.rows() ? ",\n" : "\n");
  }
  out << "  ],\n  \"b\": ";
  array(lp.b);
  out << ",\n  \"c\": ";
  array(lp.c);
  out << ",\n  \"R\": " << format_real(lp.diameter);
  if (write_lipschitz) out << ",\n  \"L\": " << format_real(lp.lipschitz);
  out << "\n}\n";
  return out.str();
}

void save_instance(const LinearProgram& lp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << write_instance(lp);
}

}  // namespace stochlp
